#include "qlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "qlab/carleson.hpp"
#include "qlab/cauchy.hpp"
#include "qlab/error.hpp"
#include "qlab/extension.hpp"
#include "qlab/regularity.hpp"

namespace qlab {

using nlohmann::json;

namespace {

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

const json& at(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::InvalidArgument, "config is missing '" + key + "'");
  return j.at(key);
}

double num(const json& j, const std::string& key) {
  const json& v = at(j, key);
  if (!v.is_number()) fail(ErrorKind::InvalidArgument, "config field '" + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& key) {
  const json& v = at(j, key);
  if (!v.is_number_integer()) fail(ErrorKind::InvalidArgument, "config field '" + key + "' must be an integer");
  return v.get<int>();
}

std::string str(const json& j, const std::string& key) {
  const json& v = at(j, key);
  if (!v.is_string()) fail(ErrorKind::InvalidArgument, "config field '" + key + "' must be a string");
  return v.get<std::string>();
}

json profile_json(const HinfProfile& p) {
  return {{"levels", p.levels},
          {"sup_values", p.sup_values},
          {"slope", p.slope},
          {"classification", to_string(p.classification)},
          {"discarded", p.discarded}};
}

json carleson_json(const CarlesonReport& r) {
  return {{"norm", finite_or_string(r.norm)},
          {"divergent", r.divergent},
          {"radii", r.radii},
          {"profile", r.profile},
          {"layer_ratios", r.layer_ratios},
          {"truncated", r.truncated},
          {"clamped", r.clamped}};
}

ProfileOptions profile_options(const json& p) {
  ProfileOptions o;
  o.m_max = integer(p, "m_max");
  o.coarse_points = integer(p, "coarse_points");
  o.refine_top = integer(p, "refine_top");
  return o;
}

CarlesonOptions carleson_options(const json& p) {
  CarlesonOptions o;
  o.n_centers = integer(p, "n_centers");
  o.j_max = integer(p, "j_max");
  o.r_max = num(p, "r_max");
  return o;
}

// worst ratio profile[finer] / profile[coarser] over the `levels` finest radii;
// 0 when the profile vanishes identically there
double worst_profile_ratio(const CarlesonReport& r, int levels) {
  const int n = static_cast<int>(r.profile.size());
  if (n < levels) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (int j = n - levels + 1; j < n; ++j) {
    const double coarse = r.profile[j - 1], fine = r.profile[j];
    if (coarse == 0.0 && fine == 0.0) continue;
    worst = std::max(worst, coarse > 0.0 ? fine / coarse : std::numeric_limits<double>::infinity());
  }
  return worst;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveOptions solve_options(const json& p) {
  SolveOptions o;
  o.tol = num(p, "tol");
  o.max_iter = integer(p, "max_iter");
  return o;
}

const json kDefaults = R"({
  "theorem-a": {
    "direction": "both",
    "map": "quad:0.2",
    "epsilon": 0.5,
    "R0": 1.5,
    "taper": 0.3,
    "r0": 0.25,
    "grid": {"half": 4.0, "n": 512},
    "carleson": {"n_centers": 64, "j_max": -1, "r_max": 2.0},
    "circle_samples": 2048,
    "hardy_littlewood_radii": [0.9, 0.95, 0.975, 0.9875, 0.99375],
    "reverse": {
      "mu_cap": 0.5,
      "mu_exponent": 0.4,
      "frequency": 3,
      "R0": 1.5,
      "taper": 0.3,
      "n_curve": 1024,
      "grid": {"half": 4.0, "n": 512}
    },
    "solver": {"tol": 1e-8, "max_iter": 200},
    "thresholds": {
      "nu_norm_max": 1e6,
      "profile_levels": 3,
      "profile_ratio_max": 1.0,
      "k_max": 1.0,
      "residual_max": 1e-7,
      "alpha_slack": 0.1,
      "fit_r2_min": 0.9
    }
  },
  "theorem-b": {
    "epsilon": 0.5,
    "grid": {"half": 4.0, "n": 513},
    "mu": {"k": 0.3, "y_scale": 0.5, "exponent": 0.4, "y_min": 0.0,
           "x_flat": 1.0, "x_edge": 1.5, "y_flat": 1.2, "y_edge": 1.5, "side": 1},
    "curve": {"n": 8192, "span": 3.0},
    "g": ["pole:0,-1", "step", "one"],
    "profile": {"m_max": 7, "coarse_points": 512, "refine_top": 4},
    "carleson": {"n_centers": 64, "j_max": -1, "r_max": 2.0},
    "h_g": "pole:0,-1",
    "h_points": [-0.875, -0.625, -0.375, -0.125, 0.125, 0.375, 0.625, 0.875],
    "h_j_max": 5,
    "a_infinity": {"half_width": 2.0, "samples": 1024},
    "solver": {"tol": 1e-8, "max_iter": 200},
    "thresholds": {
      "nu_norm_max": 1e6,
      "tau_vanishing_ratio_max": 0.5,
      "chord_arc_max": 10.0,
      "a_infinity_ratio_max": 0.75,
      "decay_ratio_factor": 1.5,
      "h_factor": 5.0,
      "residual_max": 1e-7
    }
  },
  "corollary": {
    "grid": {"half": 4.0, "n": 512},
    "mu": {"k": 0.3, "y_scale": 0.5, "exponent": 0.4, "y_min": 0.3,
           "x_flat": 1.0, "x_edge": 1.5, "y_flat": 1.2, "y_edge": 1.5, "side": -1},
    "curve": {"n": 8192, "span": 3.0},
    "g": ["pole:0,2", "step", "one"],
    "profile": {"m_max": 7, "coarse_points": 512, "refine_top": 4},
    "solver": {"tol": 1e-8, "max_iter": 200},
    "thresholds": {"residual_max": 1e-7, "chord_arc_max": 10.0}
  }
})"_json;

}  // namespace

void VerdictReport::add(const std::string& name, double value, double threshold, bool pass) {
  checks.push_back({name, value, threshold, pass});
  overall = overall && pass;
}

json VerdictReport::to_json() const {
  json cs = json::array();
  for (const Check& c : checks)
    cs.push_back({{"name", c.name},
                  {"value", finite_or_string(c.value)},
                  {"threshold", finite_or_string(c.threshold)},
                  {"pass", c.pass}});
  return {{"scenario", scenario},     {"checks", cs},         {"overall", overall},
          {"runtime_seconds", runtime_seconds}, {"provenance", provenance}, {"details", details}};
}

ScenarioConfig ScenarioConfig::defaults(const std::string& scenario) {
  if (!kDefaults.contains(scenario)) fail(ErrorKind::InvalidArgument, "unknown scenario '" + scenario + "'");
  return {scenario, kDefaults.at(scenario)};
}

ScenarioConfig ScenarioConfig::with_overrides(const std::string& scenario, const json& overrides) {
  ScenarioConfig c = defaults(scenario);
  json patch = overrides;
  if (patch.is_object()) patch.erase("scenario");
  c.params.merge_patch(patch);
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path, const std::string& fallback) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, "bad config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::Io, "config must be a JSON object");
  const std::string scenario = j.value("scenario", fallback);
  if (!fallback.empty() && scenario != fallback)
    fail(ErrorKind::InvalidArgument, "config is for '" + scenario + "', not '" + fallback + "'");
  return with_overrides(scenario, j);
}

std::string ScenarioConfig::hash() const {
  std::ostringstream s;
  s << std::hex << std::hash<std::string>{}(scenario + params.dump());
  return s.str();
}

Grid grid_from_json(const json& spec) {
  const double half = num(spec, "half");
  const int n = integer(spec, "n");
  if (!(half > 0.0) || n < 8) fail(ErrorKind::InvalidArgument, "grid needs half > 0 and n >= 8");
  return Grid::centered_square(half, n);
}

GridField band_bump_mu(const Grid& grid, const json& spec) {
  const double k = num(spec, "k"), ys = num(spec, "y_scale"), ex = num(spec, "exponent");
  const double y_min = num(spec, "y_min");
  const double x_flat = num(spec, "x_flat"), x_edge = num(spec, "x_edge");
  const double y_flat = num(spec, "y_flat"), y_edge = num(spec, "y_edge");
  const int side = integer(spec, "side");
  if (!(k >= 0.0 && k < 1.0)) fail(ErrorKind::InvalidDilatation, "bump amplitude must lie in [0, 1)");
  if (!(x_edge > x_flat) || !(y_edge > y_flat) || !(y_flat > y_min) || !(ys > 0.0))
    fail(ErrorKind::InvalidArgument, "inconsistent bump geometry");
  return GridField::sample(grid, [&](Complex z) -> Complex {
    const double y = side * z.imag() - y_min;
    if (y <= 0.0 || k == 0.0) return 0.0;
    return k * std::min(1.0, std::pow(y / ys, ex)) * quintic_taper(std::abs(z.real()), x_flat, x_edge - x_flat) *
           quintic_taper(side * z.imag(), y_flat, y_edge - y_flat);
  });
}

// ---------------------------------------------------------------------------

VerdictReport run_theorem_a(const ScenarioConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const json& p = config.params;
  const json& th = at(p, "thresholds");
  VerdictReport rep;
  rep.scenario = "theorem-a";
  rep.provenance = {{"config_hash", config.hash()}};
  const std::string direction = str(p, "direction");
  if (direction != "forward" && direction != "reverse" && direction != "both")
    fail(ErrorKind::InvalidArgument, "direction must be forward, reverse or both");
  const double eps = num(p, "epsilon");
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be > 0");
  const int levels = integer(th, "profile_levels");

  if (direction != "reverse") {
    const auto ts = std::chrono::steady_clock::now();
    const ConformalBoundaryMap map = ConformalBoundaryMap::parse(str(p, "map"));
    const Grid grid = grid_from_json(at(p, "grid"));
    rep.provenance["forward_grid"] = at(p, "grid");

    const auto radii = at(p, "hardy_littlewood_radii").get<std::vector<double>>();
    const HardyLittlewoodFit hl = hardy_littlewood_fit([&](Complex z) { return map.d2(z); }, radii);
    const double alpha_map = std::min(1.0, hl.alpha);
    rep.add("forward.epsilon_below_2alpha", eps, 2.0 * alpha_map, eps < 2.0 * alpha_map);

    const BeltramiField mu = cutoff_global(map, grid, num(p, "R0"), num(p, "taper"), num(p, "r0"));
    rep.add("forward.k_below_one", mu.k, num(th, "k_max"), mu.k < num(th, "k_max"));

    const int nc = integer(p, "circle_samples");
    const ParametricCurve circle = ParametricCurve::circle(0.0, 1.0, nc);
    const CarlesonDensity nu = CarlesonDensity::mu2_over_dist_circle(mu.mu, eps);
    const CarlesonReport cr = carleson_norm(nu, circle, carleson_options(at(p, "carleson")));
    const double nu_max = num(th, "nu_norm_max");
    rep.add("forward.nu_norm_finite", cr.norm, nu_max, !cr.divergent && cr.norm <= nu_max);
    const double worst = worst_profile_ratio(cr, levels);
    const double ratio_max = num(th, "profile_ratio_max");
    rep.add("forward.profile_decreasing", worst, ratio_max, worst < ratio_max);

    std::vector<Complex> boundary(nc);
    for (int j = 0; j < nc; ++j) {
      const Complex w = circle.point(j);
      boundary[j] = map.d1(w) * Complex{0.0, 1.0} * w;
    }
    const HolderFit hf = holder_exponent(boundary, true);
    rep.details["forward"] = {{"map", map.name()},
                              {"k", mu.k},
                              {"alpha_hardy_littlewood", hl.alpha},
                              {"alpha_boundary", hf.alpha},
                              {"nu", carleson_json(cr)},
                              {"seconds", seconds_since(ts)}};
  }

  if (direction != "forward") {
    const auto ts = std::chrono::steady_clock::now();
    const json& rv = at(p, "reverse");
    const Grid grid = grid_from_json(at(rv, "grid"));
    rep.provenance["reverse_grid"] = at(rv, "grid");
    const double cap = num(rv, "mu_cap"), ex = num(rv, "mu_exponent"), R0 = num(rv, "R0"),
                 w = num(rv, "taper");
    const int freq = integer(rv, "frequency");
    GridField field = GridField::sample(grid, [&](Complex z) -> Complex {
      const double r = std::abs(z);
      if (r <= 1.0) return 0.0;
      return std::min(cap, std::pow(r - 1.0, ex)) * quintic_taper(r, R0, w) *
             std::polar(1.0, freq * std::arg(z));
    });
    const BeltramiField mu = BeltramiField::make(std::move(field), Box::square(0.0, R0 + w));

    const CarlesonReport cr = carleson_norm(CarlesonDensity::mu2_over_dist_circle(mu.mu, eps),
                                            ParametricCurve::circle(0.0, 1.0, integer(p, "circle_samples")),
                                            carleson_options(at(p, "carleson")));
    const double nu_max = num(th, "nu_norm_max");
    rep.add("reverse.nu_norm_finite", cr.norm, nu_max, !cr.divergent && cr.norm <= nu_max);

    const PlanarMap rho = solve_principal(mu, solve_options(at(p, "solver")));
    rep.add("reverse.residual", rho.residual(), num(th, "residual_max"), rho.residual() <= num(th, "residual_max"));
    const ParametricCurve gamma = trace_image(rho, ParametricCurve::circle(0.0, 1.0, integer(rv, "n_curve")));
    const HolderFit hf = holder_exponent(gamma.derivs(), true);
    const double bound = std::min(eps / 4.0, 1.0 - mu.k) - num(th, "alpha_slack");
    rep.add("reverse.alpha_est", hf.alpha, bound, hf.alpha >= bound);
    rep.add("reverse.fit_r2", hf.r2, num(th, "fit_r2_min"), hf.r2 >= num(th, "fit_r2_min"));
    rep.details["reverse"] = {{"k", mu.k},
                              {"iterations", rho.iterations()},
                              {"alpha_raw_slope", hf.raw_slope},
                              {"lags", hf.lags},
                              {"maxima", hf.maxima},
                              {"chord_arc", chord_arc_metrics(gamma).constant},
                              {"nu", carleson_json(cr)},
                              {"seconds", seconds_since(ts)}};
  }
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

namespace {

struct SidedProfiles {
  HinfProfile upper, lower;
};

SidedProfiles two_sided(const ParametricCurve& curve, const BoundaryFunction& g, const ProfileOptions& o) {
  const Region up(RegionTag::UpperHalf, curve), down(RegionTag::LowerHalf, curve);
  return {hinf_profile(curve, g, up, o), hinf_profile(curve, g, down, o)};
}

bool bounded(const HinfProfile& p) { return p.classification == Boundedness::Bounded; }

// Solve, trace Gamma = rho(R) and build the boundary functions on Gamma; the
// same sample arrays are f = g o rho on the line.
struct PlanarSetup {
  BeltramiField mu;
  PlanarMap rho;
  ParametricCurve line;
  ParametricCurve gamma;
};

PlanarSetup planar_setup(const json& p) {
  const Grid grid = grid_from_json(at(p, "grid"));
  GridField field = band_bump_mu(grid, at(p, "mu"));
  BeltramiField mu = BeltramiField::make(std::move(field));
  PlanarMap rho = solve_principal(mu, solve_options(at(p, "solver")));
  const json& c = at(p, "curve");
  ParametricCurve line = ParametricCurve::real_line(integer(c, "n"), num(c, "span"));
  ParametricCurve gamma = trace_image(rho, line);
  return {std::move(mu), std::move(rho), std::move(line), std::move(gamma)};
}

}  // namespace

VerdictReport run_theorem_b(const ScenarioConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const json& p = config.params;
  const json& th = at(p, "thresholds");
  VerdictReport rep;
  rep.scenario = "theorem-b";
  rep.provenance = {{"config_hash", config.hash()}, {"grid", at(p, "grid")}};
  const double eps = num(p, "epsilon");
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be > 0");

  const PlanarSetup s = planar_setup(p);
  rep.add("solve.residual", s.rho.residual(), num(th, "residual_max"), s.rho.residual() <= num(th, "residual_max"));

  // preconditions
  const CarlesonOptions co = carleson_options(at(p, "carleson"));
  const CarlesonReport nu = carleson_norm(CarlesonDensity::mu2_over_y(s.mu.mu, eps), s.line, co);
  const double nu_max = num(th, "nu_norm_max");
  rep.add("precondition.nu_norm_finite", nu.norm, nu_max, !nu.divergent && nu.norm <= nu_max);
  const CarlesonReport tau = carleson_norm(CarlesonDensity::mu2_over_y_plain(s.mu.mu), s.line, co);
  const double tau_ratio = tau.divergent ? std::numeric_limits<double>::infinity()
                           : tau.norm > 0.0 ? tau.profile.back() / tau.norm
                                            : 0.0;
  rep.add("precondition.tau_vanishing", tau_ratio, num(th, "tau_vanishing_ratio_max"),
          tau_ratio <= num(th, "tau_vanishing_ratio_max"));
  const ChordArcMetrics ca = chord_arc_metrics(s.gamma);
  rep.add("precondition.chord_arc", ca.constant, num(th, "chord_arc_max"), ca.constant <= num(th, "chord_arc_max"));
  const json& ai = at(p, "a_infinity");
  const double L = num(ai, "half_width");
  const int na = integer(ai, "samples");
  std::vector<double> speed(na);
  for (int j = 0; j < na; ++j) {
    const Complex x{-L + (j + 0.5) * 2.0 * L / na, 0.0};
    speed[j] = std::abs(s.rho.dz(x) + s.rho.dbar(x));
  }
  const AInfinityResult air = a_infinity_indicator(speed);
  rep.add("precondition.a_infinity", air.max_ratio, num(th, "a_infinity_ratio_max"), air.flag == Indicator::Pass);
  rep.details["nu"] = carleson_json(nu);
  rep.details["tau"] = carleson_json(tau);
  rep.details["k"] = s.mu.k;
  rep.details["iterations"] = s.rho.iterations();
  if (!rep.overall) {
    rep.runtime_seconds = seconds_since(t0);
    return rep;
  }

  // H-infinity equivalence per side
  const ProfileOptions po = profile_options(at(p, "profile"));
  for (const std::string& name : at(p, "g").get<std::vector<std::string>>()) {
    const BoundaryFunction g = BoundaryFunction::builtin(name, s.gamma);
    const SidedProfiles on_gamma = two_sided(s.gamma, g, po);
    const SidedProfiles on_line = two_sided(s.line, g, po);
    const bool up = on_gamma.upper.classification == on_line.upper.classification &&
                    on_gamma.upper.classification != Boundedness::Inconclusive;
    const bool down = on_gamma.lower.classification == on_line.lower.classification &&
                      on_gamma.lower.classification != Boundedness::Inconclusive;
    rep.add("equivalence." + name + ".upper", up ? 1.0 : 0.0, 1.0, up);
    rep.add("equivalence." + name + ".lower", down ? 1.0 : 0.0, 1.0, down);
    rep.details["profiles"][name] = {{"gamma_upper", profile_json(on_gamma.upper)},
                                     {"gamma_lower", profile_json(on_gamma.lower)},
                                     {"line_upper", profile_json(on_line.upper)},
                                     {"line_lower", profile_json(on_line.lower)}};
  }

  // correction term H at sample points
  const BoundaryFunction hg = BoundaryFunction::builtin(str(p, "h_g"), s.gamma);
  const GridField dgt = gtilde_derivative(s.mu, s.rho, s.gamma, hg);
  const int j_max = integer(p, "h_j_max");
  const double ratio_max = num(th, "decay_ratio_factor") * std::exp2(-eps / 2.0);
  const double h_factor = num(th, "h_factor");
  json hs = json::array();
  for (double a : at(p, "h_points").get<std::vector<double>>()) {
    const HCorrection hc = h_correction(s.mu, dgt, a, j_max);
    std::ostringstream tag;
    tag << a;
    rep.add("h_correction.decay@" + tag.str(), hc.ratio, ratio_max, hc.ratio <= ratio_max);
    rep.add("h_correction.bound@" + tag.str(), std::abs(hc.value), h_factor * hc.bound,
            std::abs(hc.value) <= h_factor * hc.bound);
    hs.push_back({{"a", a}, {"H", {hc.value.real(), hc.value.imag()}}, {"k", hc.k}, {"terms", hc.terms},
                  {"ratio", hc.ratio}});
  }
  rep.details["h_correction"] = hs;
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

VerdictReport run_corollary(const ScenarioConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const json& p = config.params;
  const json& th = at(p, "thresholds");
  VerdictReport rep;
  rep.scenario = "corollary";
  rep.provenance = {{"config_hash", config.hash()}, {"grid", at(p, "grid")}};

  const PlanarSetup s = planar_setup(p);
  rep.add("solve.residual", s.rho.residual(), num(th, "residual_max"), s.rho.residual() <= num(th, "residual_max"));
  const ChordArcMetrics ca = chord_arc_metrics(s.gamma);
  rep.add("curve.chord_arc", ca.constant, num(th, "chord_arc_max"), ca.constant <= num(th, "chord_arc_max"));
  double deviation = 0.0;
  for (std::size_t j = 0; j < s.gamma.size(); ++j)
    deviation = std::max(deviation, std::abs(s.gamma.point(j).imag()));
  rep.details["max_deviation_from_line"] = deviation;

  const ProfileOptions po = profile_options(at(p, "profile"));
  for (const std::string& name : at(p, "g").get<std::vector<std::string>>()) {
    const BoundaryFunction g = BoundaryFunction::builtin(name, s.gamma);
    const SidedProfiles on_gamma = two_sided(s.gamma, g, po);
    const SidedProfiles on_line = two_sided(s.line, g, po);
    const bool gamma_bounded = bounded(on_gamma.upper) && bounded(on_gamma.lower);
    const bool line_bounded = bounded(on_line.upper) && bounded(on_line.lower);
    const bool agree = gamma_bounded == line_bounded;
    rep.add("equivalence." + name, agree ? 1.0 : 0.0, 1.0, agree);
    rep.details["profiles"][name] = {{"gamma_bounded", gamma_bounded},
                                     {"line_bounded", line_bounded},
                                     {"gamma_upper", profile_json(on_gamma.upper)},
                                     {"gamma_lower", profile_json(on_gamma.lower)},
                                     {"line_upper", profile_json(on_line.upper)},
                                     {"line_lower", profile_json(on_line.lower)}};
  }
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

VerdictReport run_scenario(const ScenarioConfig& config) {
  if (config.scenario == "theorem-a") return run_theorem_a(config);
  if (config.scenario == "theorem-b") return run_theorem_b(config);
  if (config.scenario == "corollary") return run_corollary(config);
  fail(ErrorKind::InvalidArgument, "unknown scenario '" + config.scenario + "'");
}

}  // namespace qlab
