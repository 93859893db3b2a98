#include "qlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qlab/error.hpp"

namespace qlab {

namespace {

struct LineFit {
  double slope = 0.0;
  double r2 = 1.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace

HolderFit holder_exponent(std::span<const Complex> samples, bool periodic, std::vector<int> lags) {
  const int n = static_cast<int>(samples.size());
  auto pairs = [&](int lag) { return periodic ? n : n - lag; };
  if (lags.empty())
    for (int lag = 1; lag <= n / 64 && pairs(lag) >= 32; lag *= 2) lags.push_back(lag);
  HolderFit fit;
  std::vector<double> x, y;
  for (int lag : lags) {
    if (lag < 1 || pairs(lag) < 32) fail(ErrorKind::InsufficientSamples, "fewer than 32 pairs at a lag");
    double m = 0.0;
    for (int i = 0; i < pairs(lag); ++i) m = std::max(m, std::abs(samples[(i + lag) % n] - samples[i]));
    fit.lags.push_back(lag);
    fit.maxima.push_back(m);
  }
  if (fit.lags.size() < 4) fail(ErrorKind::InsufficientSamples, "need at least 4 scales");
  const double floor = 1e-300;
  for (std::size_t i = 0; i < fit.lags.size(); ++i) {
    x.push_back(std::log(static_cast<double>(fit.lags[i])));
    y.push_back(std::log(std::max(fit.maxima[i], floor)));
  }
  if (*std::max_element(fit.maxima.begin(), fit.maxima.end()) == 0.0) {
    fit.alpha = 1.0;
    fit.raw_slope = 0.0;
    fit.r2 = 1.0;
    return fit;
  }
  const LineFit lf = least_squares(x, y);
  fit.raw_slope = lf.slope;
  fit.r2 = lf.r2;
  fit.alpha = std::clamp(lf.slope, 0.0, 1.0);
  return fit;
}

HardyLittlewoodFit hardy_littlewood_fit(const ComplexFunction& f2, const std::vector<double>& radii,
                                        int n_angles) {
  if (radii.size() < 2) fail(ErrorKind::InsufficientSamples, "need at least two radii");
  HardyLittlewoodFit out;
  std::vector<double> x, y;
  for (double r : radii) {
    if (!(r >= 0.0 && r < 1.0)) fail(ErrorKind::OutOfDomain, "radii must lie in [0, 1)");
    double m = 0.0;
    for (int a = 0; a < n_angles; ++a) m = std::max(m, std::abs(f2(std::polar(r, 2.0 * kPi * a / n_angles))));
    out.maxima.push_back(m);
  }
  if (*std::max_element(out.maxima.begin(), out.maxima.end()) == 0.0) {
    out.zero_derivative = true;
    return out;
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    x.push_back(std::log(1.0 - radii[i]));
    y.push_back(std::log(std::max(out.maxima[i], 1e-300)));
  }
  const LineFit lf = least_squares(x, y);
  out.alpha = 1.0 + lf.slope;
  out.r2 = lf.r2;
  return out;
}

double beta_log_derivative(const ComplexFunction& f1, const ComplexFunction& f2, Complex z) {
  if (!(std::abs(z) < 1.0)) fail(ErrorKind::OutOfDomain, "beta needs |z| < 1");
  const Complex d1 = f1(z);
  if (std::abs(d1) == 0.0) fail(ErrorKind::DegenerateDerivative, "f'(z) = 0");
  return (1.0 - std::abs(z)) * std::abs(f2(z) / d1);
}

double omega_ms(const GridField& mu, Complex z, double t) {
  if (!(t > 0.0)) fail(ErrorKind::InvalidArgument, "t must be positive");
  const Grid& g = mu.grid();
  if (!g.box().encloses(Box::square(z, t))) fail(ErrorKind::OutOfDomain, "disk leaves the grid box");
  const double h = g.h();
  const int i0 = std::max(0, static_cast<int>(std::ceil(g.fx(z) - t / h)));
  const int i1 = std::min(g.nx() - 1, static_cast<int>(std::floor(g.fx(z) + t / h)));
  const int j0 = std::max(0, static_cast<int>(std::ceil(g.fy(z) - t / h)));
  const int j1 = std::min(g.ny() - 1, static_cast<int>(std::floor(g.fy(z) + t / h)));
  double s = 0.0;
  int count = 0;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      if (std::norm(g.node(i, j) - z) < t * t) {
        s += std::norm(mu(i, j));
        ++count;
      }
  if (count == 0) return std::abs(interpolate(mu, z));
  return std::sqrt(s / count);
}

DynkinResult dynkin_check(const ComplexFunction& f1, const ComplexFunction& f2, const GridField& mu,
                          double k, Complex z, double constant) {
  DynkinResult out;
  out.lhs = beta_log_derivative(f1, f2, z);
  const double d = 1.0 - std::abs(z);
  auto integrate = [&](int n) {
    // trapezoid in log t over [d, 1]
    const double l0 = std::log(d), step = -l0 / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = std::exp(l0 + i * step);
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      s += w * omega_ms(mu, z, t) / std::pow(t, 2.0 - k) * t;
    }
    return s * step;
  };
  double prev = integrate(32);
  for (int n = 64; n <= 1024; n *= 2) {
    const double cur = integrate(n);
    const bool done = std::abs(cur - prev) <= 1e-3 * std::max(std::abs(cur), 1e-12);
    prev = cur;
    if (done) break;
  }
  out.integral = prev;
  out.rhs = constant * std::pow(d, 1.0 - k) * (1.0 + out.integral);
  out.pass = out.lhs <= out.rhs;
  return out;
}

ChordArcMetrics chord_arc_metrics(const ParametricCurve& curve) {
  const std::size_t n = curve.size();
  const std::vector<double> cum = curve.cumulative_length();
  const double total = curve.closed() ? cum[n] : cum[n - 1];
  double diam = 0.0, min_chord = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double chord = std::abs(curve.point(j) - curve.point(i));
      diam = std::max(diam, chord);
      min_chord = std::min(min_chord, chord);
    }
  // bin m holds pairs with chord in (diam 2^-(m+1), diam 2^-m]
  const int bins = std::max(1, static_cast<int>(std::floor(std::log2(diam / min_chord))) + 1);
  std::vector<double> bin_max(static_cast<std::size_t>(bins), 1.0);
  ChordArcMetrics out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double chord = std::abs(curve.point(j) - curve.point(i));
      double arc = cum[j] - cum[i];
      if (curve.closed()) arc = std::min(arc, total - arc);
      const double ratio = std::max(1.0, arc / chord);
      out.constant = std::max(out.constant, ratio);
      const int m = std::clamp(static_cast<int>(std::floor(std::log2(diam / chord))), 0, bins - 1);
      bin_max[static_cast<std::size_t>(m)] = std::max(bin_max[static_cast<std::size_t>(m)], ratio);
    }
  std::vector<double> running(static_cast<std::size_t>(bins));
  double r = 1.0;
  for (int m = bins - 1; m >= 0; --m) running[static_cast<std::size_t>(m)] = r = std::max(r, bin_max[static_cast<std::size_t>(m)]);
  for (int m = 0; m < bins; ++m) out.profile.emplace_back(std::ldexp(diam, -m), running[static_cast<std::size_t>(m)]);
  return out;
}

namespace {

template <typename F>
void for_dyadic_intervals(std::size_t n, F&& visit) {
  for (std::size_t len = n; len >= 8; len /= 2) {
    const std::size_t count = n / len;
    for (std::size_t c = 0; c < count; ++c) visit(c * len, len);
  }
}

}  // namespace

double bmo_dyadic_norm(std::span<const double> samples) {
  if (samples.size() < 64) fail(ErrorKind::InsufficientSamples, "BMO needs at least 64 samples");
  double best = 0.0;
  for_dyadic_intervals(samples.size(), [&](std::size_t a, std::size_t len) {
    double mean = 0.0;
    for (std::size_t i = a; i < a + len; ++i) mean += samples[i];
    mean /= static_cast<double>(len);
    double osc = 0.0;
    for (std::size_t i = a; i < a + len; ++i) osc += std::abs(samples[i] - mean);
    best = std::max(best, osc / static_cast<double>(len));
  });
  return best;
}

std::string to_string(Indicator v) {
  switch (v) {
    case Indicator::Pass: return "Pass";
    case Indicator::Fail: return "Fail";
    case Indicator::Inconclusive: return "Inconclusive";
  }
  return "?";
}

AInfinityResult a_infinity_indicator(std::span<const double> weights) {
  if (weights.size() < 64) fail(ErrorKind::InsufficientSamples, "A-infinity test needs at least 64 samples");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w)) fail(ErrorKind::InvalidArgument, "weights must be finite and >= 0");
  AInfinityResult out;
  std::vector<double> buf;
  for_dyadic_intervals(weights.size(), [&](std::size_t a, std::size_t len) {
    buf.assign(weights.begin() + static_cast<std::ptrdiff_t>(a),
               weights.begin() + static_cast<std::ptrdiff_t>(a + len));
    const double total = std::accumulate(buf.begin(), buf.end(), 0.0);
    if (total <= 0.0) return;
    const std::size_t quarter = len / 4;
    std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(quarter), buf.end(), std::greater<>());
    const double heavy = std::accumulate(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(quarter), 0.0);
    out.max_ratio = std::max(out.max_ratio, heavy / total);
  });
  if (out.max_ratio > 0.9) out.flag = Indicator::Fail;
  else if (out.max_ratio > 0.75) out.flag = Indicator::Inconclusive;
  else out.flag = Indicator::Pass;
  return out;
}

RegularityReport regularity_report(const ParametricCurve& curve) {
  RegularityReport rep;
  const HolderFit hf = holder_exponent(curve.derivs(), curve.closed());
  rep.alpha_est = hf.alpha;
  rep.fit_r2 = hf.r2;
  const ChordArcMetrics ca = chord_arc_metrics(curve);
  rep.chord_arc_constant = ca.constant;
  rep.asymptotic_ratio_profile = ca.profile;
  std::vector<double> speed(curve.size()), log_speed(curve.size());
  for (std::size_t j = 0; j < curve.size(); ++j) {
    speed[j] = std::abs(curve.deriv(j));
    log_speed[j] = std::log(speed[j]);
  }
  if (curve.size() >= 64) {
    rep.bmo_norm = bmo_dyadic_norm(log_speed);
    rep.a_infinity_flag = a_infinity_indicator(speed).flag;
  }
  return rep;
}

}  // namespace qlab
