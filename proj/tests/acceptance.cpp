// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "qlab/beltrami.hpp"
#include "qlab/carleson.hpp"
#include "qlab/cauchy.hpp"
#include "qlab/experiments.hpp"
#include "qlab/extension.hpp"
#include "qlab/regularity.hpp"
#include "qlab/transforms.hpp"

using namespace qlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void expect(bool ok, const char* fmt, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) detail += " (!)";
    pass = pass && ok;
  }
};

Outcome beltrami_radial_stretch() {
  Outcome o;
  const auto t0 = Clock::now();
  const Grid g = Grid::centered_square(4.0, 512);
  const double K = 1.5;
  const auto mu = BeltramiField::make(GridField::sample(g, [&](Complex z) { return oracle::radial_stretch_mu(z, K); }));
  const PlanarMap m = solve_principal(mu);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Complex z = g.node(k);
    const Complex exact = oracle::radial_stretch(z, K) - z;
    num += std::norm(m.displacement()[k] - exact);
    den += std::norm(exact);
  }
  const double t = seconds(t0);
  o.expect(std::sqrt(num / den) <= 1e-2, "rel L2 error %.3e <= %.0e", std::sqrt(num / den), 1e-2);
  o.expect(t <= 60.0, "runtime %.1f s <= %.0f s", t, 60.0);
  return o;
}

Outcome transform_identities() {
  Outcome o;
  {
    const Grid g = Grid::centered_square(4.0, 512);
    const auto ind = GridField::sample(g, [](Complex z) { return std::abs(z) <= 1.0 ? Complex{1.0} : Complex{}; });
    const GridField c = cauchy_transform(ind);
    double e = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Complex z = g.node(k);
      if (std::abs(std::abs(z) - 1.0) < 3.0 * g.h()) continue;
      e = std::max(e, std::abs(c[k] - oracle::disk_cauchy(z)));
    }
    o.expect(e <= 5e-3, "disk Cauchy max error %.2e <= %.0e", e, 5e-3);
  }
  const Grid g = Grid::centered_square(2.0, 256);
  const TransformPlan plan(g);
  const oracle::Bump bump;
  const auto h = GridField::sample(g, [&](Complex z) { return bump.dbar(z); });
  const auto dphi = GridField::sample(g, [&](Complex z) { return bump.dz(z); });

  std::vector<Complex> pad = plan.pad(h);
  Complex mean{};
  for (const Complex& v : pad) mean += v;
  mean /= static_cast<double>(pad.size());
  for (Complex& v : pad) v -= mean;
  const auto sp = plan.beurling_periodic(pad);
  double n1 = 0.0, n2 = 0.0;
  for (std::size_t k = 0; k < pad.size(); ++k) {
    n1 += std::norm(pad[k]);
    n2 += std::norm(sp[k]);
  }
  const double iso = std::abs(std::sqrt(n2) - std::sqrt(n1)) / std::sqrt(n1);
  o.expect(iso <= 1e-10, "Plancherel rel %.1e <= %.0e", iso, 1e-10);
  const double es = (plan.beurling(h) - dphi).max_abs();
  o.expect(es <= 1e-4, "S dbar phi - dz phi %.2e <= %.0e", es, 1e-4);
  return o;
}

Outcome plemelj_jump() {
  Outcome o;
  const auto c = ParametricCurve::circle(0.0, 1.0, 256);
  double worst = 0.0;
  for (const char* name : {"one", "identity", "pole:2", "step"}) {
    const auto g = BoundaryFunction::builtin(name, c);
    for (std::size_t j = 0; j < c.size(); ++j) {
      const auto [gp, gm] = plemelj_values(c, g, j);
      worst = std::max(worst, std::abs(gp - gm - g.samples[j]) / (1.0 + g.sup_norm));
    }
  }
  o.expect(worst <= 1e-3, "jump error / (1+sup) %.1e <= %.0e", worst, 1e-3);
  const auto one = BoundaryFunction::builtin("one", c);
  double e = 0.0;
  for (double r : {0.0, 0.3, 0.8, 1.25, 2.0, 5.0})
    for (int k = 0; k < 7; ++k) {
      const Complex z = std::polar(r, 0.37 + k);
      e = std::max(e, std::abs(cauchy_integral(c, one, z) - (r < 1.0 ? 1.0 : 0.0)));
    }
  o.expect(e <= 1e-10, "C(1) in/out error %.1e <= %.0e", e, 1e-10);
  return o;
}

Outcome carleson_estimator() {
  Outcome o;
  auto abs_y = [](Complex z) { return std::abs(z.imag()); };
  const auto line = ParametricCurve::real_line(4096, 2.0);
  {
    const Grid g(Box{-4.0, 4.0, -4.0, 4.0}, 1025, 1025);
    const auto strip = CarlesonDensity::custom(
        g, [](Complex z) { return (z.imag() > 0.0 && z.imag() < 1.0) ? 1.0 : 0.0; }, abs_y);
    CarlesonOptions opt;
    opt.r_max = 2.0;
    const auto rep = carleson_norm(strip, line, opt);
    double worst = 0.0;
    for (std::size_t j = 0; j < rep.radii.size(); ++j) {
      const double exact = oracle::strip_mass_over_r(rep.radii[j]);
      worst = std::max(worst, std::abs(rep.profile[j] - exact) / exact);
    }
    o.expect(worst <= 0.10, "strip mass/R rel error %.3f <= %.2f", worst, 0.10);
  }
  const Grid g(Box{-2.0, 2.0, -2.0, 2.0}, 513, 513);
  const auto tau = CarlesonDensity::custom(
      g, [&](Complex z) { return std::abs(z.imag()) < 1.5 ? 0.09 / std::max(abs_y(z), g.h() / 2) : 0.0; }, abs_y);
  const auto rt = carleson_norm(tau, line);
  o.expect(rt.divergent, "constant-|mu| tau divergent=%.0f (want %.0f)", rt.divergent ? 1.0 : 0.0, 1.0);
  const auto pw = CarlesonDensity::custom(
      g,
      [&](Complex z) {
        const double y = abs_y(z);
        return y < 1.5 ? std::pow(std::max(y, g.h() / 2), 0.8 - 1.0) : 0.0;
      },
      abs_y);
  const double ex = profile_exponent(carleson_norm(pw, line));
  o.expect(std::abs(ex - 0.8) <= 0.15, "profile exponent %.3f = 0.8 +- %.2f", ex, 0.15);
  return o;
}

Outcome extension_exactness() {
  Outcome o;
  const auto id = ConformalBoundaryMap::identity();
  double e_id = 0.0;
  for (Complex z : {Complex{1.0, 0.0}, Complex{1.3, -0.7}, Complex{-2.9, 1.1}})
    e_id = std::max(e_id, std::abs(reflect_extend(id, z) - z));
  o.expect(e_id <= 1e-15, "identity extension error %.1e <= %.0e", e_id, 1e-15);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> rad(1.0, 3.9), ang(0.0, 2.0 * kPi);
  double e_mod = 0.0, e_fd = 0.0;
  for (const char* spec : {"quad:0.2", "quad:-0.4", "moebius:0.3", "moebius:-0.7"}) {
    const auto f = ConformalBoundaryMap::parse(spec);
    auto f1 = [&](Complex u) { return f.d1(u); };
    auto f2 = [&](Complex u) { return f.d2(u); };
    for (int i = 0; i < 100; ++i) {
      const Complex z = std::polar(rad(rng), ang(rng));
      const double r = std::abs(z);
      const double beta = beta_log_derivative(f1, f2, 1.0 / std::conj(z));
      const double lhs = std::abs(extension_dilatation(f, z)) * r * r / (r + 1.0);
      e_mod = std::max(e_mod, std::abs(lhs - beta) / std::max(beta, 1e-300));
    }
    const double h = 1e-5;
    for (int k = 0; k < 8; ++k) {
      const Complex z = std::polar(1.5, 0.8 * k);
      auto F = [&](Complex u) { return reflect_extend(f, u); };
      const Complex fx = (F(z + h) - F(z - h)) / (2.0 * h);
      const Complex fy = (F(z + Complex{0.0, h}) - F(z - Complex{0.0, h})) / (2.0 * h);
      const Complex mu = 0.5 * (fx + kI * fy) / (0.5 * (fx - kI * fy));
      const Complex exact = extension_dilatation(f, z);
      e_fd = std::max(e_fd, std::abs(mu - exact) / std::max(1.0, std::abs(exact)));
    }
  }
  o.expect(e_mod <= 1e-10, "modulus identity rel %.1e <= %.0e", e_mod, 1e-10);
  o.expect(e_fd <= 1e-6, "finite differences rel %.1e <= %.0e", e_fd, 1e-6);
  return o;
}

Outcome scenario(const std::string& name, double limit) {
  Outcome o;
  const auto t0 = Clock::now();
  const VerdictReport r = run_scenario(ScenarioConfig::defaults(name));
  const double t = seconds(t0);
  int failed = 0;
  for (const Check& c : r.checks)
    if (!c.pass) {
      ++failed;
      std::printf("    failed check %s: value %.4g threshold %.4g\n", c.name.c_str(), c.value, c.threshold);
    }
  o.expect(r.overall, "%.0f/%.0f checks pass", static_cast<double>(r.checks.size() - failed),
           static_cast<double>(r.checks.size()));
  o.expect(t <= limit, "runtime %.1f s <= %.0f s", t, limit);
  return o;
}

Outcome regularity_oracles() {
  Outcome o;
  const double ca = chord_arc_metrics(ParametricCurve::circle(0.0, 1.0, 512)).constant;
  o.expect(std::abs(ca / (kPi / 2.0) - 1.0) <= 0.01, "circle chord-arc %.5f vs pi/2 = %.5f", ca, kPi / 2.0);
  const double alpha = holder_exponent(oracle::weierstrass(1 << 14), true).alpha;
  o.expect(std::abs(alpha - 0.5) <= 0.1, "Weierstrass alpha %.3f = 0.5 +- %.1f", alpha, 0.1);
  const double b1 = bmo_dyadic_norm(oracle::log_abs_samples(1 << 12));
  const double b2 = bmo_dyadic_norm(oracle::log_abs_samples(1 << 13));
  o.expect(std::abs(b2 - b1) <= 0.15 * b1, "log|x| BMO %.4f -> %.4f", b1, b2);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Beltrami solver vs radial stretch", beltrami_radial_stretch},
      {"transform identities", transform_identities},
      {"Plemelj jump", plemelj_jump},
      {"Carleson estimator", carleson_estimator},
      {"extension exactness", extension_exactness},
      {"Theorem A scenario", [] { return scenario("theorem-a", 300.0); }},
      {"Theorem B scenario", [] { return scenario("theorem-b", 600.0); }},
      {"regularity oracles", regularity_oracles},
  };
  int failures = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%d criteria pass\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
