#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qlab/core.hpp"
#include "qlab/transforms.hpp"

namespace qlab {

/// Compactly supported Beltrami coefficient with sup norm k < 1.
struct BeltramiField {
  GridField mu;
  double k = 0.0;
  Box support_box;

  /// Validates the invariants: k < 1, mu negligible outside `support_box`,
  /// and `support_box` inside the inner half of the grid box.
  static BeltramiField make(GridField mu, const Box& support_box);
  /// Same, with the support box taken as the bounding box of the nonzero
  /// samples (padded by one cell).
  static BeltramiField make(GridField mu);
};

/// Principal solution rho(z) = z + C h(z) of dbar rho = mu dz rho.
class PlanarMap {
 public:
  PlanarMap(GridField displacement, GridField density, GridField dz_field, double residual,
            int iterations, std::vector<double> increments);

  const Grid& grid() const { return displacement_.grid(); }
  /// Samples of rho(z) - z.
  const GridField& displacement() const { return displacement_; }
  /// The density h with rho = z + C h (equal to dbar rho).
  const GridField& density() const { return density_; }
  /// Samples of dz rho = 1 + S h.
  const GridField& dz_field() const { return dz_field_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }
  /// ||h_{n+1} - h_n||_{L2} for each Neumann step.
  const std::vector<double>& increments() const { return increments_; }
  std::string normalization() const { return "principal"; }

  /// rho(z); outside the grid box the exact far field z + (C h)(z) is used.
  Complex operator()(Complex z) const;
  Complex dz(Complex z) const;
  Complex dbar(Complex z) const;
  /// rho^{-1}(w) by Newton iteration from the displacement-corrected guess.
  Complex invert(Complex w) const;
  MapEvaluator evaluator() const;

 private:
  GridField displacement_;
  GridField density_;
  GridField dz_field_;
  double residual_;
  int iterations_;
  std::vector<double> increments_;
  std::shared_ptr<const PointwiseCauchy> far_;
};

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 200;
  int pad_factor = 2;
};

/// Neumann iteration h <- mu S h + mu, then rho = z + C h.
PlanarMap solve_principal(const BeltramiField& mu, const SolveOptions& options = {});

/// Image of a sampled curve under the map, with pushed-forward derivatives.
ParametricCurve trace_image(const PlanarMap& map, const ParametricCurve& curve);

/// Gamma = rho(R) sampled at x_j = span tan(theta_j / 2).
ParametricCurve trace_quasicircle(const PlanarMap& map, int n_points, double span);

/// a_F(z): mean of J_F^{1/2} over the ball B_z(Im z / 2). When `domain` is
/// given the ball must lie inside it.
double af_coefficient(const MapEvaluator& map, Complex z, const Box* domain = nullptr);

/// Mean of J^{1/2} over B_z(radius) by a polar midpoint rule with
/// n_radial x 2 n_radial cells.
double mean_sqrt_jacobian(const MapEvaluator& map, Complex z, double radius, int n_radial = 24);

}  // namespace qlab
