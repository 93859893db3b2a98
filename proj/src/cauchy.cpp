#include "qlab/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qlab/carleson.hpp"
#include "qlab/error.hpp"

namespace qlab {

namespace {

constexpr Complex kTwoPiI{0.0, 2.0 * kPi};

double orientation(const ParametricCurve& c) {
  if (!c.closed()) return 1.0;
  double area = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) area += std::imag(std::conj(c.point(j)) * c.deriv(j));
  return area >= 0.0 ? 1.0 : -1.0;
}

std::size_t nearest_sample(const ParametricCurve& c, Complex z) {
  std::size_t best = 0;
  double dmin = std::abs(c.point(0) - z);
  for (std::size_t j = 1; j < c.size(); ++j) {
    const double d = std::abs(c.point(j) - z);
    if (d < dmin) {
      dmin = d;
      best = j;
    }
  }
  return best;
}

// +1 when z lies to the left of the curve near its projection
int side_of(const ParametricCurve& c, Complex z) {
  const CurveProjection p = project_to_curve(c, z);
  const Complex base = c.arc_point(p.arc, p.s);
  const Complex tangent = c.arc_deriv(p.arc, p.s);
  return std::imag(std::conj(tangent) * (z - base)) >= 0.0 ? 1 : -1;
}

double index_for_side(const ParametricCurve& c, int side) {
  if (!c.closed()) return side > 0 ? 0.5 : -0.5;
  return (side > 0) == (orientation(c) > 0) ? 1.0 : 0.0;
}

Complex subtracted_sum(const ParametricCurve& c, const BoundaryFunction& g, Complex z, Complex g0) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += (g.samples[i] - g0) * c.deriv(i) / (c.point(i) - z);
  return s * c.step() / kTwoPiI;
}

void check_sizes(const ParametricCurve& c, const BoundaryFunction& g) {
  if (g.samples.size() != c.size())
    fail(ErrorKind::InvalidArgument, "boundary function and curve sample counts differ");
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidArgument, "bad number in " + what + ": '" + s + "'");
  }
}

}  // namespace

BoundaryFunction BoundaryFunction::from_samples(std::vector<Complex> samples) {
  double sup = 0.0;
  for (Complex v : samples) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorKind::InvalidArgument, "boundary samples must be finite");
    sup = std::max(sup, std::abs(v));
  }
  return BoundaryFunction{std::move(samples), sup};
}

BoundaryFunction BoundaryFunction::builtin(const std::string& name, const ParametricCurve& curve) {
  std::vector<Complex> v(curve.size());
  if (name == "one") {
    std::fill(v.begin(), v.end(), Complex{1.0});
  } else if (name == "identity") {
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = curve.point(j);
  } else if (name.rfind("pole:", 0) == 0) {
    const std::string arg = name.substr(5);
    const auto comma = arg.find(',');
    const Complex p = comma == std::string::npos
                          ? Complex{parse_double(arg, name), 0.0}
                          : Complex{parse_double(arg.substr(0, comma), name),
                                    parse_double(arg.substr(comma + 1), name)};
    for (std::size_t j = 0; j < v.size(); ++j) {
      const Complex d = curve.point(j) - p;
      if (std::abs(d) == 0.0) fail(ErrorKind::InvalidArgument, "pole lies on the curve");
      v[j] = 1.0 / d;
    }
  } else if (name == "step") {
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double t = curve.param(j);
      const bool on = curve.closed() ? (t > 0.0 && t < kPi) : std::abs(t) <= 0.5 * kPi;
      v[j] = on ? 1.0 : 0.0;
    }
  } else {
    fail(ErrorKind::InvalidArgument, "unknown boundary function '" + name + "'");
  }
  return from_samples(std::move(v));
}

Complex cauchy_integral(const ParametricCurve& curve, const BoundaryFunction& g, Complex z) {
  check_sizes(curve, g);
  const std::size_t j = nearest_sample(curve, z);
  const double spacing = std::abs(curve.deriv(j)) * curve.step();
  if (std::abs(curve.point(j) - z) < 3.0 * spacing)
    fail(ErrorKind::NearCurve, "evaluation point within 3 sample spacings of the curve");
  Complex s = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) s += g.samples[i] * curve.deriv(i) / (curve.point(i) - z);
  if (!curve.closed()) {
    const std::size_t last = curve.size() - 1;
    const Complex t0 = g.samples[0] * curve.deriv(0) / (curve.point(0) - z);
    const Complex t1 = g.samples[last] * curve.deriv(last) / (curve.point(last) - z);
    if (std::abs(t0 + t1) * curve.step() > 1e-3 * (1.0 + g.sup_norm))
      fail(ErrorKind::TailDivergence, "tail terms of the unbounded curve do not cancel");
  }
  return s * curve.step() / kTwoPiI;
}

Complex cauchy_integral_near(const ParametricCurve& curve, const BoundaryFunction& g, Complex z) {
  check_sizes(curve, g);
  const std::size_t j = nearest_sample(curve, z);
  const Complex g0 = g.samples[j];
  const double index = index_for_side(curve, side_of(curve, z));
  if (!curve.closed()) return g0 * index + subtracted_sum(curve, g, z, g0);

  // closed curves also remove g'(w*)(w - w*), whose integral is
  // g'(w*)(z - w*) times the index since the contour integral of dw vanishes
  const std::size_t n = curve.size();
  const Complex w0 = curve.point(j);
  // skipped where forward and backward differences disagree (jumps)
  const Complex fwd = g.samples[(j + 1) % n] - g0, bwd = g0 - g.samples[(j + n - 1) % n];
  const bool smooth = std::abs(fwd - bwd) <= 0.5 * std::max(std::abs(fwd), std::abs(bwd));
  const Complex g1 = smooth ? (fwd + bwd) / (2.0 * curve.step()) / curve.deriv(j) : Complex{};
  Complex s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex w = curve.point(i);
    s += (g.samples[i] - g0 - g1 * (w - w0)) * curve.deriv(i) / (w - z);
  }
  return (g0 + g1 * (z - w0)) * index + s * curve.step() / kTwoPiI;
}

Complex cauchy_derivative(const ParametricCurve& curve, const BoundaryFunction& g, Complex z) {
  check_sizes(curve, g);
  const Complex g0 = g.samples[nearest_sample(curve, z)];
  Complex s = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Complex d = curve.point(i) - z;
    s += (g.samples[i] - g0) * curve.deriv(i) / (d * d);
  }
  return s * curve.step() / kTwoPiI;
}

std::pair<Complex, Complex> plemelj_values(const ParametricCurve& curve, const BoundaryFunction& g,
                                           std::size_t j) {
  check_sizes(curve, g);
  const std::size_t n = curve.size();
  if (j >= n) fail(ErrorKind::InvalidArgument, "sample index out of range");
  const Complex gj = g.samples[j];
  const Complex zj = curve.point(j);
  const double dt = curve.step();

  Complex dg;
  if (curve.closed()) {
    dg = (g.samples[(j + 1) % n] - g.samples[(j + n - 1) % n]) / (2.0 * dt);
  } else if (j == 0) {
    dg = (g.samples[1] - g.samples[0]) / dt;
  } else if (j == n - 1) {
    dg = (g.samples[n - 1] - g.samples[n - 2]) / dt;
  } else {
    dg = (g.samples[j + 1] - g.samples[j - 1]) / (2.0 * dt);
  }
  Complex pv = dg * dt;
  for (std::size_t i = 0; i < n; ++i)
    if (i != j) pv += (g.samples[i] - gj) * curve.deriv(i) / (curve.point(i) - zj) * dt;
  const Complex p_sub = pv / kTwoPiI;

  // indices of the two sides, measured a few spacings off the curve
  const Complex normal = Complex{0.0, 1.0} * curve.deriv(j) / std::abs(curve.deriv(j));
  const double delta = 5.0 * std::abs(curve.deriv(j)) * dt;
  auto winding = [&](Complex z) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += curve.deriv(i) / (curve.point(i) - z);
    return s * dt / kTwoPiI;
  };
  const Complex i_left = winding(zj + delta * normal);
  const Complex i_right = winding(zj - delta * normal);

  const Complex left = gj * i_left + p_sub;
  const Complex right = gj * i_right + p_sub;
  if (std::abs(left - right - gj) > 1e-3 * (1.0 + g.sup_norm))
    fail(ErrorKind::JumpMismatch, "g+ - g- differs from g at sample " + std::to_string(j));
  return {left, right};
}

std::string to_string(Boundedness b) {
  switch (b) {
    case Boundedness::Bounded: return "Bounded";
    case Boundedness::Unbounded: return "Unbounded";
    case Boundedness::Inconclusive: return "Inconclusive";
  }
  return "?";
}

HinfProfile hinf_profile(const ParametricCurve& curve, const BoundaryFunction& g, const Region& region,
                         const ProfileOptions& options) {
  check_sizes(curve, g);
  if (&region.curve() != &curve) fail(ErrorKind::InvalidArgument, "region belongs to another curve");
  if (options.m_max < 3) fail(ErrorKind::InvalidArgument, "need at least three levels");
  const int side = region.side();
  const std::size_t n = curve.size();

  std::vector<std::size_t> window;
  for (std::size_t j = 0; j < n; ++j)
    if (curve.closed() || std::abs(curve.param(j)) <= 2.0 * kPi / 3.0) window.push_back(j);
  const std::size_t stride =
      std::max<std::size_t>(1, window.size() / std::max(1, options.coarse_points));

  HinfProfile prof;
  // position t in [0, n) (closed) or [0, n-1] (open) along the samples
  auto offset_point = [&](double t, double d) {
    const double tmax = curve.closed() ? static_cast<double>(n) : static_cast<double>(n - 1);
    t = curve.closed() ? std::fmod(std::fmod(t, tmax) + tmax, tmax) : std::clamp(t, 0.0, tmax - 1e-12);
    std::size_t arc = static_cast<std::size_t>(std::floor(t));
    if (arc >= curve.arc_count()) arc = curve.arc_count() - 1;
    const double s = t - static_cast<double>(arc);
    const Complex tangent = curve.arc_deriv(arc, s);
    return curve.arc_point(arc, s) + d * side * Complex{0.0, 1.0} * tangent / std::abs(tangent);
  };
  auto value_at = [&](double t, double d, bool& ok) {
    const Complex z = offset_point(t, d);
    ok = distance_to_curve(curve, z) >= 0.5 * d;
    return ok ? std::abs(cauchy_integral_near(curve, g, z)) : 0.0;
  };

  for (int m = 1; m <= options.m_max; ++m) {
    const double d = std::ldexp(1.0, -m);
    std::vector<std::pair<double, std::size_t>> coarse;
    for (std::size_t w = 0; w < window.size(); w += stride) {
      bool ok = false;
      const double v = value_at(static_cast<double>(window[w]), d, ok);
      if (ok) coarse.emplace_back(v, w);
      else ++prof.discarded;
    }
    std::sort(coarse.begin(), coarse.end(), std::greater<>());
    double sup = coarse.empty() ? 0.0 : coarse.front().first;
    std::vector<std::size_t> picked;
    for (const auto& [v, w] : coarse) {
      if (picked.size() >= static_cast<std::size_t>(options.refine_top)) break;
      bool near = false;
      for (std::size_t p : picked) near = near || (w > p ? w - p : p - w) <= 2 * stride;
      if (near) continue;
      picked.push_back(w);
      // golden-section maximisation over the neighbouring stride
      const double centre = static_cast<double>(window[w]);
      double lo = centre - static_cast<double>(stride), hi = centre + static_cast<double>(stride);
      if (!curve.closed()) {
        lo = std::max(lo, static_cast<double>(window.front()));
        hi = std::min(hi, static_cast<double>(window.back()));
      }
      constexpr double r = 0.6180339887498949;
      double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
      bool ok1 = false, ok2 = false;
      double f1 = value_at(x1, d, ok1), f2 = value_at(x2, d, ok2);
      for (int it = 0; it < 40 && hi - lo > 1e-3; ++it) {
        if (f1 >= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - r * (hi - lo);
          f1 = value_at(x1, d, ok1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + r * (hi - lo);
          f2 = value_at(x2, d, ok2);
        }
        sup = std::max({sup, f1, f2});
      }
    }
    prof.levels.push_back(d);
    prof.sup_values.push_back(sup);
  }

  // least squares of sup / ||g|| against log10 d over the finest three levels
  const std::size_t L = prof.levels.size();
  const double scale = g.sup_norm > 0.0 ? g.sup_norm : 1.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t l = L - 3; l < L; ++l) {
    const double x = std::log10(prof.levels[l]), y = prof.sup_values[l] / scale;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  prof.slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
  const bool growing =
      prof.sup_values[L - 1] > prof.sup_values[L - 2] && prof.sup_values[L - 2] > prof.sup_values[L - 3];
  if (prof.slope >= -0.05) prof.classification = Boundedness::Bounded;
  else if (prof.slope <= -0.3 && growing) prof.classification = Boundedness::Unbounded;
  else prof.classification = Boundedness::Inconclusive;
  return prof;
}

GridField gtilde_derivative(const BeltramiField& mu, const PlanarMap& rho, const ParametricCurve& gamma,
                            const BoundaryFunction& g) {
  const Grid& grid = mu.mu.grid();
  if (!(rho.grid() == grid)) fail(ErrorKind::InvalidArgument, "map and dilatation grids differ");
  std::vector<Complex> out(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) {
    if (mu.mu[q] == Complex{}) continue;
    const Complex zeta = grid.node(q) + rho.displacement()[q];
    out[q] = cauchy_derivative(gamma, g, zeta) * rho.dz_field()[q];
  }
  return GridField(grid, std::move(out));
}

HCorrection h_correction(const BeltramiField& mu, const GridField& dgtilde, double a, int j_max) {
  const Grid& grid = mu.mu.grid();
  if (!(dgtilde.grid() == grid)) fail(ErrorKind::InvalidArgument, "dG~ and mu grids differ");
  if (!grid.box().encloses(Box::square({a, 0.0}, 1.0)))
    fail(ErrorKind::OutOfDomain, "ball B_a(1) leaves the grid box");
  if (std::ldexp(1.0, -j_max) < 2.0 * grid.h())
    fail(ErrorKind::InvalidArgument, "finest dyadic ball is below two cells");

  HCorrection out;
  out.a = a;
  const CarlesonDensity tau = CarlesonDensity::mu2_over_y_plain(mu.mu);
  CarlesonDensity lambda = tau;
  lambda.kind = DensityKind::Custom;
  Complex direct = 0.0;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const Complex z = grid.node(q);
    const bool on = mu.mu[q] != Complex{};
    lambda.values[q] = on ? std::norm(dgtilde[q]) * std::abs(z.imag()) : 0.0;
    const Complex d = z - Complex{a, 0.0};
    if (on && std::abs(d) > 1e-14) direct += mu.mu[q] * dgtilde[q] / d;
  }
  out.value = direct * grid.cell_area() / Complex{0.0, kPi};

  const Box& s = mu.support_box;
  double far = 0.0;
  for (Complex c : {Complex{s.x0, s.y0}, Complex{s.x1, s.y0}, Complex{s.x0, s.y1}, Complex{s.x1, s.y1}})
    far = std::max(far, std::abs(c - Complex{a, 0.0}));
  const int k0 = std::min(0, -static_cast<int>(std::ceil(std::log2(std::max(far, 1e-300)))));
  std::vector<double> fit_x, fit_y;
  for (int k = k0; k <= j_max; ++k) {
    const double r = std::ldexp(1.0, -k);
    const double t = std::ldexp(2.0, k) * std::sqrt(tau.mass({a, 0.0}, r)) *
                     std::sqrt(lambda.mass({a, 0.0}, r));
    out.k.push_back(k);
    out.terms.push_back(t);
    out.bound += t;
    if (k >= 0 && t > 0.0) {
      fit_x.push_back(k);
      fit_y.push_back(std::log2(t));
    }
  }
  if (fit_x.size() >= 2) {
    const double m = static_cast<double>(fit_x.size());
    const double sx = std::accumulate(fit_x.begin(), fit_x.end(), 0.0);
    const double sy = std::accumulate(fit_y.begin(), fit_y.end(), 0.0);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < fit_x.size(); ++i) {
      sxx += fit_x[i] * fit_x[i];
      sxy += fit_x[i] * fit_y[i];
    }
    out.ratio = std::exp2((m * sxy - sx * sy) / (m * sxx - sx * sx));
  }
  return out;
}

}  // namespace qlab
