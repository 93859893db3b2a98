#pragma once

#include <string>

#include "qlab/beltrami.hpp"
#include "qlab/core.hpp"

namespace qlab {

/// Closed-form conformal map of the disk: f(z) = z, z + a z^2 (|a| < 1/2)
/// or z / (1 - b z) (|b| < 1).
class ConformalBoundaryMap {
 public:
  enum class Kind { Identity, Quadratic, Moebius };

  static ConformalBoundaryMap identity();
  static ConformalBoundaryMap quadratic(Complex a);
  static ConformalBoundaryMap moebius(Complex b);
  /// "identity", "quad:<a>" or "moebius:<b>" (real parameters).
  static ConformalBoundaryMap parse(const std::string& spec);

  Kind kind() const { return kind_; }
  Complex parameter() const { return p_; }
  std::string name() const;

  Complex f(Complex z) const;
  Complex d1(Complex z) const;
  Complex d2(Complex z) const;

 private:
  ConformalBoundaryMap(Kind kind, Complex p) : kind_(kind), p_(p) {}
  Kind kind_;
  Complex p_;
};

/// f(w) + f'(w)(z - w) with w = 1/conj(z), for 1 <= |z| < 1/r0.
Complex reflect_extend(const ConformalBoundaryMap& map, Complex z, double r0 = 0.25);

/// dbar F / dz F of the reflection extension:
/// -(f''(w)/f'(w)) (z - w) / conj(z)^2.
Complex extension_dilatation(const ConformalBoundaryMap& map, Complex z, double r0 = 0.25);

/// 1 on [0, r0], quintic smoothstep down to 0 on [r0, r0 + width].
double quintic_taper(double r, double r0, double width);

/// Grid samples of the extension dilatation on 1 < |z|, tapered across
/// [R0, R0 + width] and zero elsewhere.
BeltramiField cutoff_global(const ConformalBoundaryMap& map, const Grid& grid, double R0, double width,
                            double r0 = 0.25);

}  // namespace qlab
