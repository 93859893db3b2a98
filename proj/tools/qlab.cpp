// qlab command line front end. Every subcommand prints or writes a verdict
// report {scenario, checks, overall, runtime_seconds, ...} and exits 0 iff
// the verdict passes; 2 signals a library error, CLI11 codes signal usage errors.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qlab/beltrami.hpp"
#include "qlab/carleson.hpp"
#include "qlab/cauchy.hpp"
#include "qlab/error.hpp"
#include "qlab/experiments.hpp"
#include "qlab/extension.hpp"
#include "qlab/io.hpp"
#include "qlab/regularity.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qlab;

namespace {

json json_number(double v) { return std::isfinite(v) ? json(v) : json(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::InvalidArgument, "cannot read " + what + " from '" + s + "'");
}

/// "half,n" -> n x n nodes on [-half, half]^2.
Grid parse_grid(const std::string& spec) {
  const auto parts = split(spec, ',');
  if (parts.size() != 2) fail(ErrorKind::InvalidArgument, "grid must be 'half,n'");
  return Grid::centered_square(to_double(parts[0], "grid half width"),
                               static_cast<int>(to_double(parts[1], "grid size")));
}

/// A curve file, or circle[:n] / line[:n[,span]].
ParametricCurve parse_curve(const std::string& spec) {
  if (fs::exists(spec)) return io::read_curve(spec);
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const auto args = colon == std::string::npos ? std::vector<std::string>{} : split(spec.substr(colon + 1), ',');
  auto arg = [&](std::size_t i, double fallback) { return i < args.size() ? to_double(args[i], spec) : fallback; };
  if (head == "circle") return ParametricCurve::circle(0.0, 1.0, static_cast<int>(arg(0, 1024)));
  if (head == "line") return ParametricCurve::real_line(static_cast<int>(arg(0, 4096)), arg(1, 2.0));
  fail(ErrorKind::InvalidArgument, "curve must be a file, circle[:n] or line[:n[,span]]: " + spec);
}

/// f(T) for a closed-form map, sampled at n points.
ParametricCurve map_curve(const ConformalBoundaryMap& f, int n) {
  std::vector<double> tau(n);
  std::vector<Complex> pts(n), der(n);
  for (int j = 0; j < n; ++j) {
    tau[j] = 2.0 * kPi * j / n;
    const Complex u = std::polar(1.0, tau[j]);
    pts[j] = f.f(u);
    der[j] = f.d1(u) * kI * u;
  }
  return ParametricCurve(std::move(tau), std::move(pts), std::move(der), true);
}

/// CSV with `re` and `im` columns (others ignored).
BoundaryFunction read_samples(const fs::path& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  const auto header = split(line, ',');
  int re = -1, im = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "re") re = static_cast<int>(i);
    if (header[i] == "im") im = static_cast<int>(i);
  }
  if (re < 0 || im < 0) fail(ErrorKind::Io, path.string() + ": header needs re and im columns");
  std::vector<Complex> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) fail(ErrorKind::Io, path.string() + ": ragged row");
    values.emplace_back(to_double(cells[re], "re"), to_double(cells[im], "im"));
  }
  if (values.size() != expected)
    fail(ErrorKind::InvalidArgument, "g has " + std::to_string(values.size()) + " samples, curve has " +
                                         std::to_string(expected));
  return BoundaryFunction::from_samples(std::move(values));
}

Region parse_region(const std::string& name, const ParametricCurve& curve) {
  if (name.empty()) return Region(curve.closed() ? RegionTag::InsideCurve : RegionTag::UpperHalf, curve);
  if (name == "upper") return Region(RegionTag::UpperHalf, curve);
  if (name == "lower") return Region(RegionTag::LowerHalf, curve);
  if (name == "inside") return Region(RegionTag::InsideCurve, curve);
  if (name == "outside") return Region(RegionTag::OutsideCurve, curve);
  fail(ErrorKind::InvalidArgument, "region must be upper, lower, inside or outside");
}

BeltramiField load_mu(const std::string& file, const std::string& grid) {
  GridField mu = io::read_field(file);
  if (!grid.empty()) {
    const Grid g = parse_grid(grid);
    mu = GridField::sample(g, [&](Complex z) { return mu.grid().contains(z) ? interpolate(mu, z) : Complex{}; });
  }
  return BeltramiField::make(std::move(mu));
}

void emit(const json& report, const std::string& out) {
  if (out.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) fail(ErrorKind::Io, "cannot write " + out);
  f << report.dump(2) << "\n";
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

json finish(VerdictReport& rep, const Timer& t) {
  rep.runtime_seconds = t.seconds();
  return rep.to_json();
}

// Flags shared by solve and trace.
struct SolveFlags {
  std::string mu_file, grid;
  double tol = 1e-8;
  int max_iter = 200;

  void add(CLI::App* app) {
    app->add_option("--mu-file", mu_file, "Beltrami coefficient grid CSV")->required();
    app->add_option("--grid", grid, "resample onto 'half,n' before solving");
    app->add_option("--tol", tol, "Neumann residual tolerance");
    app->add_option("--max-iter", max_iter, "iteration budget");
  }
  PlanarMap solve(VerdictReport& rep) const {
    const BeltramiField mu = load_mu(mu_file, grid);
    const PlanarMap rho = solve_principal(mu, SolveOptions{tol, max_iter});
    rep.add("solve.residual", rho.residual(), tol, rho.residual() <= tol);
    rep.details["k"] = mu.k;
    rep.details["iterations"] = rho.iterations();
    rep.details["residual"] = rho.residual();
    const Grid& g = rho.grid();
    rep.details["grid"] = {{"box", {g.box().x0, g.box().x1, g.box().y0, g.box().y1}}, {"nx", g.nx()}, {"ny", g.ny()}};
    return rho;
  }
};

/// Prepends `--key value` tokens from a JSON object so that explicit flags,
/// which come later, win.
std::vector<std::string> with_config_tokens(const std::vector<std::string>& args, const std::string& sub,
                                            const std::string& config) {
  std::ifstream in(config);
  if (!in) fail(ErrorKind::Io, "cannot open " + config);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, config + ": " + e.what());
  }
  if (!cfg.is_object()) fail(ErrorKind::InvalidArgument, config + ": expected an object");
  std::vector<std::string> out{args.front(), sub};
  for (const auto& [key, value] : cfg.items()) {
    out.push_back("--" + key);
    out.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

constexpr const char* kScenarios[] = {"theorem-a", "theorem-b", "corollary"};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Quasiconformal maps, Carleson measures and Cauchy integrals on quasicircles"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string config, out;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON file with flag values or scenario parameters");
    sub->add_option("--out", out, "output path");
  };

  SolveFlags sf;
  auto* solve = app.add_subcommand("solve", "principal solution of the Beltrami equation");
  common(solve);
  sf.add(solve);
  std::string map_out;
  solve->add_option("--map-out", map_out, "also write rho(z) - z as a grid CSV");

  auto* trace = app.add_subcommand("trace", "trace the quasicircle rho(R) to a curve CSV");
  common(trace);
  sf.add(trace);
  int trace_points = 2048;
  double trace_span = 2.0;
  trace->add_option("--points", trace_points, "curve samples");
  trace->add_option("--span", trace_span, "compactification scale of R");

  auto* carleson = app.add_subcommand("carleson", "Carleson norm and mass table of a density");
  common(carleson);
  std::string density = "mu2_over_y", mu_file, curve_spec, grid_spec = "4,513";
  double epsilon = 0.0, r_max = 0.0;
  int centers = 64, jmax = -1;
  carleson->add_option("--density", density, "mu2_over_y, mu2_over_y_plain, mu2_over_dist_circle or strip");
  carleson->add_option("--mu-file", mu_file, "mu grid CSV for the mu-based densities");
  carleson->add_option("--epsilon", epsilon, "exponent excess");
  carleson->add_option("--curve", curve_spec, "reference curve (file, circle[:n], line[:n[,span]])");
  carleson->add_option("--centers", centers, "number of ball centres");
  carleson->add_option("--jmax", jmax, "finest dyadic level (-1: down to 8 cells)");
  carleson->add_option("--rmax", r_max, "largest radius (0: automatic)");
  carleson->add_option("--grid", grid_spec, "grid 'half,n' for the strip density");

  auto* cauchy = app.add_subcommand("cauchy", "H-infinity profile of a Cauchy integral");
  common(cauchy);
  std::string g_spec = "one", region_name;
  int depth = 7;
  cauchy->add_option("--curve", curve_spec, "curve (file, circle[:n], line[:n[,span]])");
  cauchy->add_option("--g", g_spec, "one, identity, pole:p, step or a CSV with re,im columns");
  cauchy->add_option("--region", region_name, "upper, lower, inside or outside");
  cauchy->add_option("--profile-depth", depth, "finest level m (distance 2^-m)");

  auto* regularity = app.add_subcommand("regularity", "regularity metrics of a curve or boundary map");
  common(regularity);
  std::string map_spec, metric = "holder";
  int samples = 2048, points = 100;
  regularity->add_option("--curve", curve_spec, "curve (file, circle[:n], line[:n[,span]])");
  regularity->add_option("--map", map_spec, "identity, quad:a or moebius:b (curve is f(T))");
  regularity->add_option("--metric", metric, "holder, chordarc, bmo, dynkin or omega")
      ->check(CLI::IsMember({"holder", "chordarc", "bmo", "dynkin", "omega"}));
  regularity->add_option("--samples", samples, "samples of f(T) with --map");
  regularity->add_option("--points", points, "random test points for dynkin");

  auto* extend = app.add_subcommand("extend", "cut-off reflection extension dilatation to a grid CSV");
  common(extend);
  double r0 = 1.5, taper = 0.3;
  std::string extend_grid = "4,512", extend_map = "identity";
  extend->add_option("--map", extend_map, "identity, quad:a or moebius:b");
  extend->add_option("--r0", r0, "outer radius where the taper starts");
  extend->add_option("--taper", taper, "taper width");
  extend->add_option("--grid", extend_grid, "grid 'half,n'");

  for (const char* name : kScenarios) common(app.add_subcommand(name, std::string("run the ") + name + " scenario"));

  try {
    // A --config on a primitive subcommand supplies flag values.
    if (args.size() >= 2) {
      const std::string sub = args[1];
      const bool scenario = std::find(std::begin(kScenarios), std::end(kScenarios), sub) != std::end(kScenarios);
      for (std::size_t i = 2; !scenario && i + 1 < args.size(); ++i)
        if (args[i] == "--config") {
          args = with_config_tokens(args, sub, args[i + 1]);
          break;
        }
    }
    std::reverse(args.begin(), args.end());
    args.pop_back();
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Timer timer;
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    VerdictReport rep;
    rep.scenario = name;

    if (std::find(std::begin(kScenarios), std::end(kScenarios), name) != std::end(kScenarios)) {
      const ScenarioConfig cfg = config.empty() ? ScenarioConfig::defaults(name) : ScenarioConfig::load(config, name);
      rep = run_scenario(cfg);
      emit(rep.to_json(), out);
    } else if (name == "solve") {
      const PlanarMap rho = sf.solve(rep);
      if (!map_out.empty()) io::write_field(map_out, rho.displacement());
      emit(finish(rep, timer), out);
    } else if (name == "trace") {
      const PlanarMap rho = sf.solve(rep);
      const ParametricCurve gamma = trace_quasicircle(rho, trace_points, trace_span);
      if (out.empty()) fail(ErrorKind::InvalidArgument, "trace needs --out for the curve CSV");
      io::write_curve(out, gamma);
      const double ca = chord_arc_metrics(gamma).constant;
      rep.add("curve.chord_arc_finite", ca, 0.0, std::isfinite(ca));
      rep.details["samples"] = gamma.size();
      emit(finish(rep, timer), "");
    } else if (name == "carleson") {
      CarlesonDensity d;
      const bool circle = density == "mu2_over_dist_circle";
      if (density == "strip") {
        d = CarlesonDensity::custom(
            parse_grid(grid_spec), [](Complex z) { return (z.imag() > 0.0 && z.imag() < 1.0) ? 1.0 : 0.0; },
            [](Complex z) { return std::abs(z.imag()); });
      } else {
        if (mu_file.empty()) fail(ErrorKind::InvalidArgument, "--density " + density + " needs --mu-file");
        const GridField mu = io::read_field(mu_file);
        if (density == "mu2_over_y") d = CarlesonDensity::mu2_over_y(mu, epsilon);
        else if (density == "mu2_over_y_plain") d = CarlesonDensity::mu2_over_y_plain(mu);
        else if (circle) d = CarlesonDensity::mu2_over_dist_circle(mu, epsilon);
        else fail(ErrorKind::InvalidArgument, "unknown density " + density);
      }
      const ParametricCurve curve = curve_spec.empty() ? parse_curve(circle ? "circle:2048" : "line:4096,2")
                                                       : parse_curve(curve_spec);
      const CarlesonReport cr = carleson_norm(d, curve, CarlesonOptions{centers, jmax, r_max});
      rep.add("carleson.norm_finite", cr.norm, 0.0, !cr.divergent && std::isfinite(cr.norm));
      json masses = json::array();
      for (const auto& row : cr.masses) {
        json r = json::array();
        for (double m : row) r.push_back(json_number(m));
        masses.push_back(r);
      }
      json cs = json::array();
      for (Complex c : cr.centers) cs.push_back({c.real(), c.imag()});
      json profile = json::array();
      for (double v : cr.profile) profile.push_back(json_number(v));
      rep.details = json{{"density", to_string(d.kind)}, {"epsilon", epsilon},     {"norm", json_number(cr.norm)},
                     {"divergent", cr.divergent},   {"truncated", cr.truncated}, {"clamped", cr.clamped},
                     {"radii", cr.radii},           {"centers", cs},            {"masses", masses},
                     {"profile", profile},          {"layer_ratios", cr.layer_ratios}};
      emit(finish(rep, timer), out);
    } else if (name == "cauchy") {
      const ParametricCurve curve = parse_curve(curve_spec.empty() ? "circle:1024" : curve_spec);
      const BoundaryFunction g = fs::exists(g_spec) ? read_samples(g_spec, curve.size())
                                                    : BoundaryFunction::builtin(g_spec, curve);
      const Region region = parse_region(region_name, curve);
      const HinfProfile p = hinf_profile(curve, g, region, ProfileOptions{depth, 512, 4});
      rep.add("profile.conclusive", p.slope, 0.0, p.classification != Boundedness::Inconclusive);
      json sups = json::array();
      for (double v : p.sup_values) sups.push_back(json_number(v));
      rep.details = {{"g", g_spec},
                     {"sup_norm", g.sup_norm},
                     {"levels", p.levels},
                     {"sup_values", sups},
                     {"slope", p.slope},
                     {"classification", to_string(p.classification)},
                     {"discarded", p.discarded}};
      emit(finish(rep, timer), out);
    } else if (name == "regularity") {
      if (curve_spec.empty() == map_spec.empty()) fail(ErrorKind::InvalidArgument, "give exactly one of --curve, --map");
      const bool needs_map = metric == "dynkin" || metric == "omega";
      if (needs_map && map_spec.empty()) fail(ErrorKind::InvalidArgument, metric + " needs --map");
      const auto f = map_spec.empty() ? ConformalBoundaryMap::identity() : ConformalBoundaryMap::parse(map_spec);
      const ParametricCurve curve = map_spec.empty() ? parse_curve(curve_spec) : map_curve(f, samples);
      rep.details["metric"] = metric;
      std::vector<Complex> d(curve.size());
      for (std::size_t j = 0; j < d.size(); ++j) d[j] = curve.deriv(j);
      if (metric == "holder") {
        const HolderFit h = holder_exponent(d, curve.closed());
        rep.add("holder.alpha_finite", h.alpha, 0.0, std::isfinite(h.alpha));
        rep.details.update(json{{"alpha", h.alpha}, {"raw_slope", h.raw_slope}, {"r2", h.r2}, {"lags", h.lags},
                            {"maxima", h.maxima}});
      } else if (metric == "chordarc") {
        const ChordArcMetrics m = chord_arc_metrics(curve);
        rep.add("chordarc.finite", m.constant, 0.0, std::isfinite(m.constant));
        rep.details.update(json{{"constant", json_number(m.constant)}, {"profile", m.profile}});
      } else if (metric == "bmo") {
        std::vector<double> logs(d.size());
        for (std::size_t j = 0; j < d.size(); ++j) logs[j] = std::log(std::abs(d[j]));
        const double b = bmo_dyadic_norm(logs);
        rep.add("bmo.finite", b, 0.0, std::isfinite(b));
        rep.details["bmo_log_derivative"] = b;
      } else {
        const Grid grid = Grid::centered_square(4.0, 513);
        const BeltramiField mu = cutoff_global(f, grid, 1.5, 0.3);
        auto f1 = [&](Complex z) { return f.d1(z); };
        auto f2 = [&](Complex z) { return f.d2(z); };
        if (metric == "dynkin") {
          std::mt19937 rng(1);
          std::uniform_real_distribution<double> rad(0.0, 0.98), ang(0.0, 2.0 * kPi);
          int passed = 0;
          double worst = 0.0;
          for (int i = 0; i < points; ++i) {
            const DynkinResult r = dynkin_check(f1, f2, mu.mu, mu.k, std::polar(rad(rng), ang(rng)));
            passed += r.pass ? 1 : 0;
            worst = std::max(worst, r.rhs > 0.0 ? r.lhs / r.rhs : 0.0);
          }
          rep.add("dynkin.all_points", passed, points, passed == points);
          rep.details.update(json{{"k", mu.k}, {"worst_lhs_over_rhs", worst}});
        } else {
          std::vector<double> ts, omegas;
          for (int i = 0; i <= 8; ++i) {
            const double t = 0.025 * std::pow(10.0, i / 4.0);
            ts.push_back(t);
            omegas.push_back(omega_ms(mu.mu, 1.0, t));
          }
          // slope of log omega^2 against log t over the positive values
          double sx = 0, sy = 0, sxx = 0, sxy = 0;
          int n = 0;
          for (std::size_t i = 0; i < ts.size(); ++i)
            if (omegas[i] > 0.0) {
              const double x = std::log(ts[i]), y = 2.0 * std::log(omegas[i]);
              sx += x, sy += y, sxx += x * x, sxy += x * y, ++n;
            }
          const double slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
          rep.add("omega.finite", slope, 0.0, std::isfinite(slope));
          rep.details.update(json{{"t", ts}, {"omega", omegas}, {"log_slope_omega2", slope}});
        }
      }
      emit(finish(rep, timer), out);
    } else if (name == "extend") {
      if (out.empty()) fail(ErrorKind::InvalidArgument, "extend needs --out for the mu field CSV");
      const auto f = ConformalBoundaryMap::parse(extend_map);
      const BeltramiField mu = cutoff_global(f, parse_grid(extend_grid), r0, taper);
      io::write_field(out, mu.mu);
      rep.add("extend.k_below_one", mu.k, 1.0, mu.k < 1.0);
      rep.details = {{"map", f.name()}, {"k", mu.k}, {"r0", r0}, {"taper", taper}};
      emit(finish(rep, timer), "");
    }
    return rep.overall ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
