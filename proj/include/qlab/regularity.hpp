#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qlab/core.hpp"

namespace qlab {

using ComplexFunction = std::function<Complex(Complex)>;

struct HolderFit {
  double alpha = 0.0;  // clamped to [0, 1]
  double raw_slope = 0.0;
  double r2 = 0.0;
  std::vector<int> lags;
  std::vector<double> maxima;
};

/// M(s) = max |f(tau + s) - f(tau)| at lag s = lag * step; alpha is the
/// log-log slope of M. Default lags are 1, 2, 4, ... up to n / 64, so the
/// fit stays well below the period of the slowest component.
HolderFit holder_exponent(std::span<const Complex> samples, bool periodic, std::vector<int> lags = {});

struct HardyLittlewoodFit {
  double alpha = 1.0;
  double r2 = 1.0;
  bool zero_derivative = false;
  std::vector<double> maxima;
};

/// alpha = 1 + slope of log max_{|z|=r} |f''| against log(1 - r).
HardyLittlewoodFit hardy_littlewood_fit(const ComplexFunction& f2, const std::vector<double>& radii,
                                        int n_angles = 2048);

/// (1 - |z|) |f''(z) / f'(z)|.
double beta_log_derivative(const ComplexFunction& f1, const ComplexFunction& f2, Complex z);

/// ((1 / pi t^2) \iint_{B_z(t)} |mu|^2)^{1/2} by cell quadrature.
double omega_ms(const GridField& mu, Complex z, double t);

struct DynkinResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double integral = 0.0;
  bool pass = false;
};

/// lhs = beta(z), rhs = C (1-|z|)^{1-k} [1 + \int_{1-|z|}^1 omega(z,t) / t^{2-k} dt].
DynkinResult dynkin_check(const ComplexFunction& f1, const ComplexFunction& f2, const GridField& mu,
                          double k, Complex z, double constant = 10.0);

struct ChordArcMetrics {
  double constant = 1.0;
  /// (s, max arc/chord over pairs with chord <= s), s decreasing.
  std::vector<std::pair<double, double>> profile;
};

ChordArcMetrics chord_arc_metrics(const ParametricCurve& curve);

/// max over dyadic intervals (>= 8 samples) of the mean |f - mean_I f|.
double bmo_dyadic_norm(std::span<const double> samples);

enum class Indicator { Pass, Fail, Inconclusive };
std::string to_string(Indicator v);

struct AInfinityResult {
  Indicator flag = Indicator::Pass;
  /// max over dyadic intervals of w(E)/w(I), E the heaviest quarter of I.
  double max_ratio = 0.0;
};

AInfinityResult a_infinity_indicator(std::span<const double> weights);

struct RegularityReport {
  double alpha_est = 0.0;
  double fit_r2 = 0.0;
  double chord_arc_constant = 1.0;
  std::vector<std::pair<double, double>> asymptotic_ratio_profile;
  double bmo_norm = 0.0;       // of log |phi'|
  Indicator a_infinity_flag = Indicator::Pass;  // of |phi'|
};

RegularityReport regularity_report(const ParametricCurve& curve);

}  // namespace qlab
