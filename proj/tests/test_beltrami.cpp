#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qlab/beltrami.hpp"
#include "qlab/error.hpp"
#include "qlab/regularity.hpp"
#include "qlab/transforms.hpp"

using namespace qlab;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a qlab::Error");
  return ErrorKind::Io;
}

// smooth bump of height `amp` at `c` with radius `r`
GridField bump_mu(const Grid& g, Complex c, double r, Complex amp) {
  return GridField::sample(g, [=](Complex z) -> Complex {
    const double u = std::norm(z - c) / (r * r);
    return u < 1.0 ? amp * std::pow(1.0 - u, 3) : Complex{};
  });
}

// sqrt(J) averaged over B_c(R) with x = R sin(theta) and Gauss-free midpoint
// sums, J from closed-form derivatives
double ball_mean_sqrt_jacobian(const std::function<double(Complex)>& sqrt_j, Complex c, double R) {
  const int n = 400;
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    const double th = -0.5 * kPi + (a + 0.5) * kPi / n;
    const double x = R * std::sin(th), w = R * std::cos(th);
    double inner = 0.0;
    for (int b = 0; b < n; ++b) {
      const double y = -w + (b + 0.5) * 2.0 * w / n;
      inner += sqrt_j(c + Complex{x, y});
    }
    s += inner * (2.0 * w / n) * R * std::cos(th) * (kPi / n);
  }
  return s / (kPi * R * R);
}

}  // namespace

TEST_CASE("zero dilatation gives the identity") {
  const Grid g = Grid::centered_square(2.0, 64);
  const auto mu = BeltramiField::make(GridField(g), Box::square(0.0, 0.5));
  const PlanarMap m = solve_principal(mu);
  CHECK(m.iterations() == 0);
  CHECK(m.residual() == 0.0);
  CHECK(m.displacement().max_abs() == 0.0);
  CHECK(m(Complex{0.3, -0.2}) == Complex{0.3, -0.2});
  CHECK(m.normalization() == "principal");

  const auto line = ParametricCurve::real_line(256, 1.0);
  const ParametricCurve gamma = trace_image(m, line);
  for (std::size_t j = 0; j < line.size(); ++j) CHECK(gamma.point(j) == line.point(j));
}

TEST_CASE("radial stretch") {
  const Grid g = Grid::centered_square(4.0, 256);
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
  CHECK(std::sqrt(num / den) <= 1e-2);
  CHECK(m.residual() <= 10.0 * SolveOptions{}.tol);

  // contraction of the Neumann increments
  const auto& inc = m.increments();
  for (std::size_t n = 2; n < inc.size(); ++n)
    if (inc[n - 1] > 1e-10 * inc[0]) CHECK(inc[n] / inc[n - 1] <= mu.k + 0.05);

  const Complex w = m(Complex{0.5, 0.2});
  CHECK(std::abs(m.invert(w) - Complex{0.5, 0.2}) < 1e-10);
  CHECK(std::abs(m(Complex{10.0, 3.0}) - Complex{10.0, 3.0}) < 1e-3);
}

TEST_CASE("first-order Neumann truncation for small dilatation") {
  const Grid g = Grid::centered_square(2.0, 128);
  const GridField mu = bump_mu(g, Complex{0.1, 0.2}, 0.6, 0.05);
  const PlanarMap m = solve_principal(BeltramiField::make(mu));
  const GridField first = cauchy_transform(mu);
  const double bound = 2.0 * mu.max_abs() * mu.max_abs() * mu.l2_norm();
  CHECK((m.displacement() - first).l2_norm() <= bound);
}

TEST_CASE("conjugation-symmetric dilatation keeps the real line") {
  const Grid g = Grid::centered_square(2.0, 128);
  const GridField mu = GridField::sample(g, [](Complex z) -> Complex {
    const double u = std::norm(z) / 0.36;
    return u < 1.0 ? 0.3 * std::pow(1.0 - u, 3) * (1.0 + 0.5 * z) : Complex{};
  });
  const PlanarMap m = solve_principal(BeltramiField::make(mu));
  const double span = 2.0;
  const ParametricCurve gamma = trace_quasicircle(m, 1024, span);
  double dev = 0.0;
  for (std::size_t j = 0; j < gamma.size(); ++j) dev = std::max(dev, std::abs(gamma.point(j).imag()));
  CHECK(dev <= 1e-6 * span);
}

TEST_CASE("bump at i traces a valid quasicircle") {
  const Grid g = Grid::centered_square(4.0, 256);
  const GridField mu = bump_mu(g, Complex{0.0, 1.0}, 0.8, 0.3);
  const PlanarMap m = solve_principal(BeltramiField::make(mu));
  const ParametricCurve gamma = trace_quasicircle(m, 2048, 2.0);
  for (std::size_t j = 1; j < gamma.size(); ++j) CHECK(gamma.point(j).real() > gamma.point(j - 1).real());
  const double ca = chord_arc_metrics(gamma).constant;
  CHECK(std::isfinite(ca));
  CHECK(ca < 10.0);
  double dev = 0.0;
  for (std::size_t j = 0; j < gamma.size(); ++j) dev = std::max(dev, std::abs(gamma.point(j).imag()));
  CHECK(dev <= g.box().width() * std::sqrt(2.0));

  // consecutive segments of the traced curve do not cross
  auto cross = [](Complex a, Complex b, Complex c, Complex d) {
    auto orient = [](Complex p, Complex q, Complex r) { return std::imag(std::conj(q - p) * (r - p)); };
    return orient(a, b, c) * orient(a, b, d) < 0.0 && orient(c, d, a) * orient(c, d, b) < 0.0;
  };
  int crossings = 0;
  for (std::size_t j = 0; j + 3 < gamma.size(); j += 3)
    if (cross(gamma.point(j), gamma.point(j + 1), gamma.point(j + 2), gamma.point(j + 3))) ++crossings;
  CHECK(crossings == 0);

  // Im F(z) comparable to a_F(z) y
  const MapEvaluator ev = m.evaluator();
  for (Complex z : {Complex{0.0, 0.3}, Complex{0.5, 1.0}, Complex{-0.4, 0.8}, Complex{0.2, 1.6}}) {
    const double ratio = ev.value(z).imag() / (af_coefficient(ev, z) * z.imag());
    CHECK(ratio >= 0.1);
    CHECK(ratio <= 10.0);
  }
}

TEST_CASE("a_F coefficient") {
  CHECK(af_coefficient(MapEvaluator::identity(), Complex{0.3, 0.7}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(af_coefficient(MapEvaluator::affine(2.0, 0.0), Complex{-1.0, 0.5}) == doctest::Approx(2.0).epsilon(1e-12));

  const double K = 1.5;
  MapEvaluator stretch;
  stretch.value = [&](Complex z) { return oracle::radial_stretch(z, K); };
  stretch.dz = [&](Complex z) { return Complex{0.5 * (K + 1.0) * std::pow(std::abs(z), K - 1.0)}; };
  stretch.dbar = [&](Complex z) {
    return 0.5 * (K - 1.0) * std::pow(std::abs(z), K - 1.0) * z / std::conj(z);
  };
  const Complex z{0.0, 0.5};
  const double direct = ball_mean_sqrt_jacobian(
      [&](Complex w) { return std::sqrt(K) * std::pow(std::abs(w), K - 1.0); }, z, 0.25);
  CHECK(af_coefficient(stretch, z) == doctest::Approx(direct).epsilon(1e-3));

  CHECK(kind_of([] { af_coefficient(MapEvaluator::identity(), Complex{0.3, -0.1}); }) == ErrorKind::OutOfDomain);
  const Box small = Box::square(0.0, 0.5);
  CHECK(kind_of([&] { af_coefficient(MapEvaluator::identity(), Complex{0.0, 0.45}, &small); }) ==
        ErrorKind::OutOfDomain);
}

TEST_CASE("Beltrami field validation") {
  const Grid g = Grid::centered_square(2.0, 64);
  CHECK(kind_of([&] { BeltramiField::make(bump_mu(g, 0.0, 0.5, 1.2)); }) == ErrorKind::InvalidDilatation);
  CHECK(kind_of([&] { BeltramiField::make(bump_mu(g, 1.4, 0.3, 0.2)); }) == ErrorKind::SupportViolation);
  CHECK(kind_of([&] { BeltramiField::make(bump_mu(g, 0.0, 0.5, 0.2), Box::square(0.0, 0.2)); }) ==
        ErrorKind::SupportViolation);

  const auto strong = BeltramiField::make(bump_mu(g, 0.0, 0.7, 0.9));
  SolveOptions o;
  o.max_iter = 2;
  try {
    solve_principal(strong, o);
    FAIL("expected NoConvergence");
  } catch (const NoConvergenceError& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}
