#include "qlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlab/error.hpp"

namespace qlab {

Box Box::inner_half() const {
  const double qx = 0.25 * width();
  const double qy = 0.25 * height();
  return {x0 + qx, x1 - qx, y0 + qy, y1 - qy};
}

Box Box::square(Complex center, double half_width) {
  return {center.real() - half_width, center.real() + half_width, center.imag() - half_width,
          center.imag() + half_width};
}

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(Box box, int nx, int ny) : box_(box), nx_(nx), ny_(ny) {
  if (nx < 2 || ny < 2) fail(ErrorKind::InvalidArgument, "grid needs at least 2 nodes per side");
  if (!(box.width() > 0.0) || !(box.height() > 0.0))
    fail(ErrorKind::InvalidArgument, "grid box must have positive extent");
  const double hx = box.width() / (nx - 1);
  const double hy = box.height() / (ny - 1);
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy))
    fail(ErrorKind::InvalidArgument, "grid cells must be square");
  h_ = hx;
}

Grid Grid::centered_square(double half_width, int n) {
  return Grid(Box{-half_width, half_width, -half_width, half_width}, n, n);
}

// ---------------------------------------------------------------------------
// GridField

GridField::GridField(Grid grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    fail(ErrorKind::InvalidArgument, "field size does not match grid");
  for (const Complex& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorKind::InvalidArgument, "field values must be finite");
}

GridField::GridField(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), Complex{}) {}

GridField GridField::sample(const Grid& grid, const std::function<Complex(Complex)>& f) {
  std::vector<Complex> v(grid.size());
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) v[grid.index(i, j)] = f(grid.node(i, j));
  return GridField(grid, std::move(v));
}

double GridField::l2_norm() const {
  double s = 0.0;
  for (const Complex& v : values_) s += std::norm(v);
  return std::sqrt(s * grid_.cell_area());
}

double GridField::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridField::max_abs_outside(const Box& box) const {
  double m = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (!box.contains(grid_.node(k))) m = std::max(m, std::abs(values_[k]));
  return m;
}

GridField GridField::operator+(const GridField& o) const {
  if (!(grid_ == o.grid_)) fail(ErrorKind::InvalidArgument, "grid mismatch");
  std::vector<Complex> v(values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = values_[k] + o.values_[k];
  return GridField(grid_, std::move(v));
}

GridField GridField::operator-(const GridField& o) const {
  if (!(grid_ == o.grid_)) fail(ErrorKind::InvalidArgument, "grid mismatch");
  std::vector<Complex> v(values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = values_[k] - o.values_[k];
  return GridField(grid_, std::move(v));
}

GridField GridField::operator*(Complex s) const {
  std::vector<Complex> v(values_);
  for (Complex& x : v) x *= s;
  return GridField(grid_, std::move(v));
}

GridField GridField::times(const GridField& o) const {
  if (!(grid_ == o.grid_)) fail(ErrorKind::InvalidArgument, "grid mismatch");
  std::vector<Complex> v(values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = values_[k] * o.values_[k];
  return GridField(grid_, std::move(v));
}

GridField GridField::map(const std::function<Complex(Complex, Complex)>& f) const {
  std::vector<Complex> v(values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(values_[k], grid_.node(k));
  return GridField(grid_, std::move(v));
}

// ---------------------------------------------------------------------------
// Interpolation

namespace {

// Lagrange weights for nodes first..first+count-1 evaluated at t.
void lagrange_weights(int first, int count, double t, double* w) {
  for (int a = 0; a < count; ++a) {
    double num = 1.0, den = 1.0;
    for (int b = 0; b < count; ++b) {
      if (b == a) continue;
      num *= t - (first + b);
      den *= static_cast<double>(a - b);
    }
    w[a] = num / den;
  }
}

}  // namespace

Complex interpolate(const GridField& field, Complex z) {
  const Grid& g = field.grid();
  const double slack = 1e-9 * g.h();
  const Box& b = g.box();
  if (z.real() < b.x0 - slack || z.real() > b.x1 + slack || z.imag() < b.y0 - slack ||
      z.imag() > b.y1 + slack)
    fail(ErrorKind::OutOfDomain, "interpolation point outside the grid box");

  const double tx = std::clamp(g.fx(z), 0.0, g.nx() - 1.0);
  const double ty = std::clamp(g.fy(z), 0.0, g.ny() - 1.0);
  const int cx = std::min(4, g.nx());
  const int cy = std::min(4, g.ny());
  const int ix = std::clamp(static_cast<int>(std::floor(tx)) - 1, 0, g.nx() - cx);
  const int iy = std::clamp(static_cast<int>(std::floor(ty)) - 1, 0, g.ny() - cy);

  double wx[4], wy[4];
  lagrange_weights(ix, cx, tx, wx);
  lagrange_weights(iy, cy, ty, wy);

  Complex acc{};
  for (int b2 = 0; b2 < cy; ++b2) {
    Complex row{};
    for (int a = 0; a < cx; ++a) row += wx[a] * field(ix + a, iy + b2);
    acc += wy[b2] * row;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// ParametricCurve

ParametricCurve::ParametricCurve(std::vector<double> params, std::vector<Complex> points,
                                 std::vector<Complex> derivs, bool closed)
    : params_(std::move(params)),
      points_(std::move(points)),
      derivs_(std::move(derivs)),
      closed_(closed) {
  const std::size_t n = points_.size();
  if (n < 2 || params_.size() != n || derivs_.size() != n)
    fail(ErrorKind::InvalidArgument, "curve needs matching params, points and derivatives (n >= 2)");
  step_ = params_[1] - params_[0];
  if (!(step_ > 0.0)) fail(ErrorKind::InvalidArgument, "curve parameters must increase");
  for (std::size_t j = 1; j < n; ++j)
    if (std::abs((params_[j] - params_[j - 1]) - step_) > 1e-9 * std::max(1.0, std::abs(params_[j])))
      fail(ErrorKind::InvalidArgument, "curve parameters must be uniform");
  if (closed_) {
    const double span = step_ * static_cast<double>(n);
    if (std::abs(span - 2.0 * kPi) > 1e-9 || params_[0] < -1e-12 || params_[0] >= step_)
      fail(ErrorKind::InvalidArgument, "closed curves must be parametrised over [0, 2pi)");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(points_[j].real()) || !std::isfinite(points_[j].imag()) ||
        !std::isfinite(derivs_[j].real()) || !std::isfinite(derivs_[j].imag()))
      fail(ErrorKind::InvalidArgument, "curve samples must be finite");
    if (derivs_[j] == Complex{}) fail(ErrorKind::InvalidArgument, "curve derivative vanishes");
  }
  std::vector<Complex> sorted(points_);
  std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(ErrorKind::InvalidArgument, "curve samples must be pairwise distinct");
}

ParametricCurve ParametricCurve::circle(Complex center, double radius, int n) {
  std::vector<double> t(n);
  std::vector<Complex> p(n), d(n);
  for (int j = 0; j < n; ++j) {
    t[j] = 2.0 * kPi * j / n;
    const Complex e = std::polar(1.0, t[j]);
    p[j] = center + radius * e;
    d[j] = kI * radius * e;
  }
  return ParametricCurve(std::move(t), std::move(p), std::move(d), true);
}

ParametricCurve ParametricCurve::real_line(int n, double span) {
  if (n < 2 || !(span > 0.0)) fail(ErrorKind::InvalidArgument, "real_line needs n >= 2, span > 0");
  std::vector<double> t(n);
  std::vector<Complex> p(n), d(n);
  const double dt = 2.0 * kPi / n;
  for (int j = 0; j < n; ++j) {
    t[j] = -kPi + (j + 0.5) * dt;
    const double c = std::cos(0.5 * t[j]);
    p[j] = span * std::tan(0.5 * t[j]);
    d[j] = span / (2.0 * c * c);
  }
  return ParametricCurve(std::move(t), std::move(p), std::move(d), false);
}

ParametricCurve ParametricCurve::segment(Complex a, Complex b, int n) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "segment needs n >= 2");
  std::vector<double> t(n);
  std::vector<Complex> p(n), d(n, b - a);
  for (int j = 0; j < n; ++j) {
    t[j] = static_cast<double>(j) / (n - 1);
    p[j] = a + t[j] * (b - a);
  }
  return ParametricCurve(std::move(t), std::move(p), std::move(d), false);
}

Complex ParametricCurve::arc_point(std::size_t j, double s) const {
  const std::size_t k = (j + 1) % size();
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * points_[j] + h10 * step_ * derivs_[j] + h01 * points_[k] + h11 * step_ * derivs_[k];
}

Complex ParametricCurve::arc_deriv(std::size_t j, double s) const {
  const std::size_t k = (j + 1) % size();
  const double s2 = s * s;
  const double d00 = 6 * s2 - 6 * s, d10 = 3 * s2 - 4 * s + 1;
  const double d01 = -6 * s2 + 6 * s, d11 = 3 * s2 - 2 * s;
  return (d00 * points_[j] + d01 * points_[k]) / step_ + d10 * derivs_[j] + d11 * derivs_[k];
}

std::vector<double> ParametricCurve::cumulative_length() const {
  const std::size_t n = size();
  std::vector<double> len(closed_ ? n + 1 : n, 0.0);
  for (std::size_t j = 1; j < len.size(); ++j) {
    const std::size_t a = j - 1, b = j % n;
    // 3-point Gauss-Legendre on the cubic Hermite segment, never below the chord
    const Complex p0 = points_[a], p1 = points_[b];
    const Complex m0 = step_ * derivs_[a], m1 = step_ * derivs_[b];
    double seg = 0.0;
    for (const auto& [x, w] : {std::pair{0.1127016653792583, 5.0 / 18.0}, std::pair{0.5, 8.0 / 18.0},
                              std::pair{0.8872983346207417, 5.0 / 18.0}}) {
      const double u = x * x;
      const Complex d = (6.0 * u - 6.0 * x) * (p0 - p1) + (3.0 * u - 4.0 * x + 1.0) * m0 + (3.0 * u - 2.0 * x) * m1;
      seg += w * std::abs(d);
    }
    len[j] = len[j - 1] + std::max(seg, std::abs(p1 - p0));
  }
  return len;
}

// ---------------------------------------------------------------------------
// Distance to a curve

namespace {

// Golden-section minimisation of |arc(s) - z| over s in [0, 1].
std::pair<double, double> refine_arc(const ParametricCurve& c, std::size_t arc, Complex z) {
  constexpr double g = 0.6180339887498949;
  auto f = [&](double s) { return std::abs(c.arc_point(arc, s) - z); };
  double a = 0.0, b = 1.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-9) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - g * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + g * (b - a); f2 = f(x2);
    }
  }
  // Endpoints are samples; keep whichever candidate is best.
  double best_s = 0.5 * (a + b), best = f(best_s);
  for (double s : {0.0, 1.0}) {
    const double v = f(s);
    if (v < best) { best = v; best_s = s; }
  }
  return {best_s, best};
}

}  // namespace

CurveProjection project_to_curve(const ParametricCurve& curve, Complex z) {
  const std::size_t n = curve.size();
  std::size_t jmin = 0;
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double d = std::abs(curve.point(j) - z);
    if (d < dmin) { dmin = d; jmin = j; }  // strict: ties keep the smaller tau
  }
  CurveProjection best{jmin, 0.0, dmin};
  if (jmin == n - 1 && !curve.closed()) best = {n - 2, 1.0, dmin};
  if (dmin == 0.0) return best;

  std::size_t arcs[2];
  int count = 0;
  if (curve.closed()) {
    arcs[count++] = (jmin + n - 1) % n;
    arcs[count++] = jmin;
  } else {
    if (jmin > 0) arcs[count++] = jmin - 1;
    if (jmin + 1 < n) arcs[count++] = jmin;
  }
  for (int a = 0; a < count; ++a) {
    auto [s, d] = refine_arc(curve, arcs[a], z);
    if (d < best.distance) best = {arcs[a], s, d};
  }
  return best;
}

double distance_to_curve(const ParametricCurve& curve, Complex z) {
  return project_to_curve(curve, z).distance;
}

Region::Region(RegionTag tag, const ParametricCurve& curve) : tag_(tag), curve_(&curve) {
  if ((tag == RegionTag::InsideCurve || tag == RegionTag::OutsideCurve) && !curve.closed())
    fail(ErrorKind::InvalidArgument, "inside/outside regions need a closed curve");
}

MapEvaluator MapEvaluator::identity() { return affine(1.0, 0.0); }

MapEvaluator MapEvaluator::affine(Complex a, Complex b) {
  return {[a, b](Complex z) { return a * z + b; }, [a](Complex) { return a; },
          [](Complex) { return Complex{}; }};
}

}  // namespace qlab
