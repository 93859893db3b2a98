#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qlab/beltrami.hpp"
#include "qlab/core.hpp"

namespace qlab {

/// Samples g(phi(tau_j)) of a bounded function on a sampled curve.
struct BoundaryFunction {
  std::vector<Complex> samples;
  double sup_norm = 0.0;

  static BoundaryFunction from_samples(std::vector<Complex> samples);
  /// Named builtins: "one", "identity", "pole:<re>[,<im>]" (g = 1/(w - p))
  /// and "step". On closed curves step is the indicator of tau in (0, pi);
  /// on open curves it is the indicator of the middle half of the parameter
  /// range, |theta| <= pi/2, which is |x| <= span on a compactified line.
  static BoundaryFunction builtin(const std::string& name, const ParametricCurve& curve);
};

/// (1/2 pi i) \int g(w) / (w - z) dw by the trapezoid rule in the parameter.
Complex cauchy_integral(const ParametricCurve& curve, const BoundaryFunction& g, Complex z);

/// Same integral with the nearest sample value subtracted, usable arbitrarily
/// close to the curve: g(w*) I(z) + (1/2 pi i) \int (g(w) - g(w*)) / (w - z) dw,
/// where I is 1/0 inside/outside a closed curve and +-1/2 left/right of an
/// open one.
Complex cauchy_integral_near(const ParametricCurve& curve, const BoundaryFunction& g, Complex z);

/// G'(z) from the differentiated kernel, with the same subtraction.
Complex cauchy_derivative(const ParametricCurve& curve, const BoundaryFunction& g, Complex z);

/// One-sided boundary values (left, right) at sample j.
std::pair<Complex, Complex> plemelj_values(const ParametricCurve& curve, const BoundaryFunction& g,
                                           std::size_t j);

enum class Boundedness { Bounded, Unbounded, Inconclusive };
std::string to_string(Boundedness b);

struct HinfProfile {
  std::vector<double> levels;      // d_m = 2^-m
  std::vector<double> sup_values;  // sup |G| at distance d_m
  Boundedness classification = Boundedness::Inconclusive;
  double slope = 0.0;
  /// Offset points dropped because they came closer than d_m / 2 to the curve.
  std::size_t discarded = 0;
};

struct ProfileOptions {
  int m_max = 7;
  int coarse_points = 512;
  int refine_top = 4;
};

/// sup |C_Gamma g| along offset curves at distances 2^-m inside `region`.
/// The slope is the least-squares slope of sup / sup_norm against log10 d
/// over the finest three levels.
HinfProfile hinf_profile(const ParametricCurve& curve, const BoundaryFunction& g, const Region& region,
                         const ProfileOptions& options = {});

/// Samples of d(G o rho) = G'(rho(z)) dz rho(z) on the nodes where mu != 0.
GridField gtilde_derivative(const BeltramiField& mu, const PlanarMap& rho, const ParametricCurve& gamma,
                            const BoundaryFunction& g);

struct HCorrection {
  double a = 0.0;
  /// (1/pi i) \iint mu dG~ / (z - a) dx dy.
  Complex value;
  /// Dyadic ball indices k (B_k = B_a(2^-k)), from the first ball covering
  /// supp mu down to j_max.
  std::vector<int> k;
  /// 2^(k+1) tau(B_k)^(1/2) lambda(B_k)^(1/2), lambda = |dG~|^2 |y| on supp mu.
  std::vector<double> terms;
  double bound = 0.0;  // sum of terms
  /// 2^slope of log2 terms over k = 0..j_max.
  double ratio = 0.0;
};

HCorrection h_correction(const BeltramiField& mu, const GridField& dgtilde, double a, int j_max);

}  // namespace qlab
