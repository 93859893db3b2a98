#pragma once

// Closed-form reference values shared by the unit and acceptance tests.

#include <cmath>
#include <complex>
#include <vector>

#include "qlab/core.hpp"

namespace oracle {

using qlab::Complex;

// Radial stretch with dilatation c z / conj z on the unit disk, c = (K-1)/(K+1).
inline Complex radial_stretch(Complex z, double K) {
  const double r = std::abs(z);
  return r < 1.0 ? z * std::pow(r, K - 1.0) : z;
}

inline Complex radial_stretch_mu(Complex z, double K) {
  const double r = std::abs(z);
  if (r == 0.0 || r >= 1.0) return 0.0;
  return (K - 1.0) / (K + 1.0) * z / std::conj(z);
}

// Cauchy transform (1/pi) \iint_D dA / (z - zeta) of the unit disk indicator.
inline Complex disk_cauchy(Complex z) { return std::abs(z) <= 1.0 ? std::conj(z) : 1.0 / z; }
inline Complex disk_beurling(Complex z) { return std::abs(z) <= 1.0 ? Complex{} : -1.0 / (z * z); }

// Mass / R of the strip 0 < y < 1 inside B_x(R), x on the real axis.
inline double strip_mass_over_r(double R) {
  if (R <= 1.0) return std::acos(-1.0) * R / 2.0;
  return (std::sqrt(R * R - 1.0) + R * R * std::asin(1.0 / R)) / R;
}

// Polynomial bump (1 - |z|^2/a^2)^m (1 + 0.3 z) with its Wirtinger derivatives.
struct Bump {
  double a = 0.9;
  int m = 8;
  Complex value(Complex z) const {
    const double u = std::norm(z) / (a * a);
    return u < 1.0 ? std::pow(1.0 - u, m) * (1.0 + 0.3 * z) : Complex{};
  }
  Complex dbar(Complex z) const {
    const double u = std::norm(z) / (a * a);
    return u < 1.0 ? -double(m) * std::pow(1.0 - u, m - 1) * (z / (a * a)) * (1.0 + 0.3 * z) : Complex{};
  }
  Complex dz(Complex z) const {
    const double u = std::norm(z) / (a * a);
    if (u >= 1.0) return {};
    return -double(m) * std::pow(1.0 - u, m - 1) * (std::conj(z) / (a * a)) * (1.0 + 0.3 * z) +
           0.3 * std::pow(1.0 - u, m);
  }
};

// Lacunary Weierstrass sum W(tau) = sum_{n=1..12} 2^{-n/2} cos(2^n tau).
inline std::vector<Complex> weierstrass(int n_samples) {
  std::vector<Complex> w(n_samples);
  for (int j = 0; j < n_samples; ++j) {
    const double t = 2.0 * std::acos(-1.0) * j / n_samples;
    double v = 0.0;
    for (int n = 1; n <= 12; ++n) v += std::pow(2.0, -0.5 * n) * std::cos(std::ldexp(1.0, n) * t);
    w[j] = v;
  }
  return w;
}

inline std::vector<double> log_abs_samples(int n) {
  std::vector<double> f(n);
  for (int j = 0; j < n; ++j) f[j] = std::log(std::abs(-1.0 + (j + 0.5) * 2.0 / n));
  return f;
}

}  // namespace oracle
