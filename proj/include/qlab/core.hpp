#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace qlab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

struct Box {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  Complex center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool contains(Complex z) const {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
  /// True when `other` lies inside this box.
  bool encloses(const Box& other) const {
    return other.x0 >= x0 && other.x1 <= x1 && other.y0 >= y0 && other.y1 <= y1;
  }
  /// Concentric box with half the width and height.
  Box inner_half() const;
  static Box square(Complex center, double half_width);
};

/// Uniform node-centred grid with square cells. Node (i, j) sits at
/// x0 + i h + i (y0 + j h); values are stored row-major in j.
class Grid {
 public:
  Grid(Box box, int nx, int ny);

  /// [-half, half]^2 with n nodes per side.
  static Grid centered_square(double half_width, int n);

  const Box& box() const { return box_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  double cell_area() const { return h_ * h_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

  Complex node(int i, int j) const { return {box_.x0 + i * h_, box_.y0 + j * h_}; }
  Complex node(std::size_t k) const { return node(static_cast<int>(k % nx_), static_cast<int>(k / nx_)); }
  bool contains(Complex z) const { return box_.contains(z); }

  /// Fractional node coordinates of z.
  double fx(Complex z) const { return (z.real() - box_.x0) / h_; }
  double fy(Complex z) const { return (z.imag() - box_.y0) / h_; }

  bool operator==(const Grid& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && box_.x0 == o.box_.x0 && box_.x1 == o.box_.x1 &&
           box_.y0 == o.box_.y0 && box_.y1 == o.box_.y1;
  }

 private:
  Box box_;
  int nx_;
  int ny_;
  double h_;
};

/// Complex samples on a Grid. Values must be finite.
class GridField {
 public:
  GridField(Grid grid, std::vector<Complex> values);
  explicit GridField(Grid grid);  // zeros

  static GridField sample(const Grid& grid, const std::function<Complex(Complex)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  Complex operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  Complex operator[](std::size_t k) const { return values_[k]; }

  /// Sqrt of the cell-area-weighted sum of |v|^2.
  double l2_norm() const;
  double max_abs() const;
  /// Max |v| over nodes outside `box`.
  double max_abs_outside(const Box& box) const;

  GridField operator+(const GridField& o) const;
  GridField operator-(const GridField& o) const;
  GridField operator*(Complex s) const;
  /// Pointwise product.
  GridField times(const GridField& o) const;
  GridField map(const std::function<Complex(Complex value, Complex z)>& f) const;

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

/// Bicubic (tensor 4-point Lagrange) interpolation. Exact on polynomials of
/// degree <= 3 in x and y separately. Throws OutOfDomain outside the box.
Complex interpolate(const GridField& field, Complex z);

/// Sampled Jordan C^1 curve phi(tau) with derivative samples.
class ParametricCurve {
 public:
  ParametricCurve(std::vector<double> params, std::vector<Complex> points,
                  std::vector<Complex> derivs, bool closed);

  /// Counter-clockwise circle, tau_j = 2 pi j / n.
  static ParametricCurve circle(Complex center, double radius, int n);
  /// The real axis compactified as x = span tan(theta/2) with theta_j the
  /// midpoints of n uniform cells of (-pi, pi).
  static ParametricCurve real_line(int n, double span);
  /// Open straight segment with n >= 2 samples, parameter in [0, 1].
  static ParametricCurve segment(Complex a, Complex b, int n);

  std::size_t size() const { return points_.size(); }
  bool closed() const { return closed_; }
  std::span<const double> params() const { return params_; }
  std::span<const Complex> points() const { return points_; }
  std::span<const Complex> derivs() const { return derivs_; }
  double param(std::size_t j) const { return params_[j]; }
  Complex point(std::size_t j) const { return points_[j]; }
  Complex deriv(std::size_t j) const { return derivs_[j]; }
  /// Parameter step between consecutive samples (uniform).
  double step() const { return step_; }

  /// Cubic Hermite evaluation on the arc starting at sample j, s in [0, 1].
  Complex arc_point(std::size_t j, double s) const;
  Complex arc_deriv(std::size_t j, double s) const;
  /// Number of arcs (n for closed curves, n - 1 for open ones).
  std::size_t arc_count() const { return closed_ ? size() : size() - 1; }
  /// Arc length of the visible curve, per arc by Gauss-Legendre on the cubic
  /// Hermite interpolant.
  std::vector<double> cumulative_length() const;

 private:
  std::vector<double> params_;
  std::vector<Complex> points_;
  std::vector<Complex> derivs_;
  bool closed_;
  double step_;
};

/// Minimum distance from z to the curve, refined by golden-section search on
/// the arcs adjacent to the nearest sample.
double distance_to_curve(const ParametricCurve& curve, Complex z);

/// Closest point parameter location (arc index and fraction) plus distance.
struct CurveProjection {
  std::size_t arc = 0;
  double s = 0.0;
  double distance = 0.0;
};
CurveProjection project_to_curve(const ParametricCurve& curve, Complex z);

enum class RegionTag { UpperHalf, LowerHalf, InsideCurve, OutsideCurve };

/// One of the two complementary regions of a curve. UpperHalf/InsideCurve is
/// the region to the left of the curve orientation.
class Region {
 public:
  Region(RegionTag tag, const ParametricCurve& curve);

  RegionTag tag() const { return tag_; }
  const ParametricCurve& curve() const { return *curve_; }
  /// +1 for the left side of the orientation, -1 for the right side.
  int side() const { return (tag_ == RegionTag::UpperHalf || tag_ == RegionTag::InsideCurve) ? 1 : -1; }

 private:
  RegionTag tag_;
  const ParametricCurve* curve_;
};

/// Derivative-carrying map evaluator, used for closed-form maps and for
/// solved maps alike.
struct MapEvaluator {
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> dz;
  std::function<Complex(Complex)> dbar;

  double jacobian(Complex z) const {
    return std::norm(dz(z)) - std::norm(dbar(z));
  }

  static MapEvaluator identity();
  static MapEvaluator affine(Complex a, Complex b);  // a z + b
};

}  // namespace qlab
