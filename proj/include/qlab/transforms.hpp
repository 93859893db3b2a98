#pragma once

#include <memory>
#include <span>
#include <vector>

#include "qlab/core.hpp"

namespace qlab {

/// FFT plan and multiplier cache for one grid.
///
/// Transforms act on the zero-padded periodic lattice of size
/// pad_factor * (nx, ny). The Cauchy transform uses the convention
/// (C h)(z) = (1/pi) \iint h(zeta) / (z - zeta), so that dbar(C h) = h, and the
/// Beurling transform is S h = dz(C h), with Fourier multiplier conj(xi)/xi.
///
/// The planar transforms are not periodic: C h decays like M0 / (pi z). Before
/// the periodic solve the first four complex moments of h are removed with
/// smooth radial basis densities whose Cauchy transforms are known in closed
/// form; the moment-free remainder decays like |z|^-5 and its periodic
/// images are negligible once h is supported in the inner half of the box.
class TransformPlan {
 public:
  explicit TransformPlan(const Grid& grid, int pad_factor = 2);

  const Grid& grid() const;
  int pad_factor() const;
  int padded_nx() const;
  int padded_ny() const;

  /// Spectral Wirtinger derivatives of the zero-padded field.
  GridField dbar(const GridField& field) const;
  GridField dz(const GridField& field) const;

  GridField cauchy(const GridField& h) const;
  GridField beurling(const GridField& h) const;

  /// Raw periodic Beurling multiplier applied on the padded lattice
  /// (row-major, padded_nx * padded_ny values). Unitary on mean-free data.
  std::vector<Complex> beurling_periodic(std::span<const Complex> padded) const;
  /// Zero-pads a grid field onto the padded lattice (grid in the lower-left
  /// corner).
  std::vector<Complex> pad(const GridField& field) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

GridField dbar(const GridField& field);
GridField dz(const GridField& field);
GridField cauchy_transform(const GridField& h);
GridField beurling_transform(const GridField& h);

/// \iint_cell dA(zeta) / (z - zeta) in closed form, valid for z anywhere
/// (including inside the cell).
Complex cell_cauchy_integral(Complex z, const Box& cell);

/// Pointwise (slow path) Cauchy transform of a grid density: a Riemann sum
/// over the nonzero cells, with the exact cell integral for the cells
/// within two cells of the evaluation point.
class PointwiseCauchy {
 public:
  explicit PointwiseCauchy(const GridField& h);

  /// (C h)(z) for arbitrary z.
  Complex value(Complex z) const;
  /// dz of (C h) at z; only meaningful away from the support of h.
  Complex derivative(Complex z) const;
  std::size_t support_size() const { return nodes_.size(); }

 private:
  double h_;
  std::vector<Complex> nodes_;
  std::vector<Complex> weights_;
};

}  // namespace qlab
