#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qlab/core.hpp"

namespace qlab {

enum class DensityKind { Mu2OverY, Mu2OverDistCircle, Mu2OverYPlain, GPrime2Delta, Custom };

std::string to_string(DensityKind kind);

/// Nonnegative area density sampled on a grid, with the distance to its
/// reference set (R or the unit circle) kept for the divergence test.
struct CarlesonDensity {
  DensityKind kind = DensityKind::Custom;
  double epsilon = 0.0;
  Grid grid = Grid::centered_square(1.0, 2);
  std::vector<double> values;
  /// Unclamped distance to the reference set; empty when unknown.
  std::vector<double> distance;
  /// Distances below `clamp` (h/2) were replaced by it in the denominator.
  bool clamped = false;
  double clamp = 0.0;

  /// |mu|^2 / |y|^(1+eps).
  static CarlesonDensity mu2_over_y(const GridField& mu, double epsilon);
  /// |mu|^2 / |y|.
  static CarlesonDensity mu2_over_y_plain(const GridField& mu);
  /// |mu|^2 / (|z|-1)^(1+eps); mu must vanish on the closed unit disk.
  static CarlesonDensity mu2_over_dist_circle(const GridField& mu, double epsilon);
  /// |G'|^2 * delta with delta the distance to the reference curve.
  static CarlesonDensity gprime2_delta(const GridField& gprime, std::vector<double> distance);
  static CarlesonDensity custom(const Grid& grid, const std::function<double(Complex)>& density,
                                const std::function<double(Complex)>& distance = {});

  /// Cell-centre Riemann sum over the nodes inside B_center(radius).
  double mass(Complex center, double radius) const;
  double total_mass() const;
};

/// Distances from every grid node to the polyline through the curve samples:
/// exact near the curve, then nearest-segment labels propagated by raster
/// sweeps.
std::vector<double> curve_distance_field(const Grid& grid, const ParametricCurve& curve);

struct CarlesonReport {
  std::vector<Complex> centers;
  std::vector<double> radii;
  /// masses[c][j] = mass(B_{centers[c]}(radii[j])) / radii[j]; NaN when the
  /// ball leaves the grid box.
  std::vector<std::vector<double>> masses;
  double norm = 0.0;  // +inf when divergent
  /// profile[j] = sup over radii[i] <= radii[j] of the column maxima.
  std::vector<double> profile;
  bool divergent = false;
  /// Ratios of consecutive innermost distance-layer masses (finest first).
  std::vector<double> layer_ratios;
  /// The requested j_max would have gone below 8 cells.
  bool truncated = false;
  bool clamped = false;
};

struct CarlesonOptions {
  int n_centers = 64;
  int j_max = -1;        // -1: down to 8 cells
  double r_max = 0.0;    // 0: diameter of the centre set, capped at half the box
};

CarlesonReport carleson_norm(const CarlesonDensity& density, const ParametricCurve& curve,
                             const CarlesonOptions& options = {});

/// sup of mass/R over tabulated R <= r.
double vanishing_profile(const CarlesonReport& report, double r);

/// Least-squares slope of log profile against log R over the tabulated
/// radii with positive profile.
double profile_exponent(const CarlesonReport& report);

struct Ball {
  Complex center;
  double radius = 0.0;
};

/// nu(E) = sum a_F(z) density(z) h^2 over cells with F(z) in E, with a_F the
/// mean of J_F^{1/2} over B_z(delta(z)/2).
std::vector<double> pushforward_measure(const MapEvaluator& map, const CarlesonDensity& density,
                                        const std::vector<Ball>& targets);

}  // namespace qlab
