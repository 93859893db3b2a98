#include "qlab/beltrami.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/error.hpp"

namespace qlab {

BeltramiField BeltramiField::make(GridField mu, const Box& support_box) {
  const double k = mu.max_abs();
  if (!(k < 1.0)) fail(ErrorKind::InvalidDilatation, "sup |mu| must be < 1, got " + std::to_string(k));
  const Box inner = mu.grid().box().inner_half();
  const double slack = 1e-9 * mu.grid().h();
  const Box padded_inner{inner.x0 - slack, inner.x1 + slack, inner.y0 - slack, inner.y1 + slack};
  if (!padded_inner.encloses(support_box))
    fail(ErrorKind::SupportViolation, "support box must lie in the inner half of the grid box");
  if (mu.max_abs_outside(support_box) > 1e-12)
    fail(ErrorKind::SupportViolation, "mu does not vanish outside its support box");
  return BeltramiField{std::move(mu), k, support_box};
}

BeltramiField BeltramiField::make(GridField mu) {
  const Grid& g = mu.grid();
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (std::size_t q = 0; q < g.size(); ++q) {
    if (std::abs(mu[q]) <= 1e-12) continue;
    const Complex z = g.node(q);
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  if (x0 > x1) {  // mu == 0
    const Complex c = g.box().center();
    return make(std::move(mu), Box{c.real(), c.real(), c.imag(), c.imag()});
  }
  const Box inner = g.box().inner_half();
  const double h = g.h();
  Box b{std::max(x0 - h, inner.x0), std::min(x1 + h, inner.x1), std::max(y0 - h, inner.y0),
        std::min(y1 + h, inner.y1)};
  if (x0 < inner.x0 || x1 > inner.x1 || y0 < inner.y0 || y1 > inner.y1)
    b = Box{x0, x1, y0, y1};
  return make(std::move(mu), b);
}

// ---------------------------------------------------------------------------

PlanarMap::PlanarMap(GridField displacement, GridField density, GridField dz_field, double residual,
                     int iterations, std::vector<double> increments)
    : displacement_(std::move(displacement)),
      density_(std::move(density)),
      dz_field_(std::move(dz_field)),
      residual_(residual),
      iterations_(iterations),
      increments_(std::move(increments)),
      far_(std::make_shared<const PointwiseCauchy>(density_)) {}

Complex PlanarMap::operator()(Complex z) const {
  if (grid().contains(z)) return z + interpolate(displacement_, z);
  return z + far_->value(z);
}

Complex PlanarMap::dz(Complex z) const {
  if (grid().contains(z)) return interpolate(dz_field_, z);
  return 1.0 + far_->derivative(z);
}

Complex PlanarMap::dbar(Complex z) const {
  if (grid().contains(z)) return interpolate(density_, z);
  return 0.0;
}

Complex PlanarMap::invert(Complex w) const {
  Complex z = grid().contains(w) ? w - interpolate(displacement_, w) : w - far_->value(w);
  for (int it = 0; it < 50; ++it) {
    const Complex r = w - (*this)(z);
    if (std::abs(r) <= 1e-13 * std::max(1.0, std::abs(w))) break;
    const Complex a = dz(z), b = dbar(z);
    const double det = std::norm(a) - std::norm(b);
    if (!(det > 0.0)) fail(ErrorKind::DegenerateDerivative, "map Jacobian vanishes during inversion");
    z += (std::conj(a) * r - b * std::conj(r)) / det;
  }
  return z;
}

MapEvaluator PlanarMap::evaluator() const {
  auto self = std::make_shared<const PlanarMap>(*this);
  return {[self](Complex z) { return (*self)(z); }, [self](Complex z) { return self->dz(z); },
          [self](Complex z) { return self->dbar(z); }};
}

// ---------------------------------------------------------------------------

namespace {

double l2_on(const GridField& f, const Box& box) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q)
    if (box.contains(g.node(q))) s += std::norm(f[q]);
  return std::sqrt(s * g.cell_area());
}

}  // namespace

PlanarMap solve_principal(const BeltramiField& beltrami, const SolveOptions& options) {
  if (!(options.tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (!(beltrami.k < 1.0)) fail(ErrorKind::InvalidDilatation, "sup |mu| must be < 1");
  const GridField& mu = beltrami.mu;
  const Grid& grid = mu.grid();

  if (beltrami.k == 0.0) {
    GridField zero(grid);
    return PlanarMap(zero, zero, GridField::sample(grid, [](Complex) { return Complex{1.0}; }), 0.0,
                     0, {});
  }

  const TransformPlan plan(grid, options.pad_factor);
  GridField h = mu;
  std::vector<double> increments;
  bool converged = false;
  double last = 0.0;
  int iterations = 0;
  for (int n = 1; n <= options.max_iter; ++n) {
    GridField next = mu.times(plan.beurling(h)) + mu;
    last = (next - h).l2_norm();
    const double ref = h.l2_norm();
    increments.push_back(last);
    h = std::move(next);
    iterations = n;
    if (last <= options.tol * ref) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NoConvergenceError(options.max_iter, last / std::max(h.l2_norm(), 1e-300));

  const GridField sh = plan.beurling(h);
  const GridField dz_rho = sh.map([](Complex v, Complex) { return 1.0 + v; });
  const GridField defect = h - mu.times(dz_rho);
  const double residual = l2_on(defect, beltrami.support_box) /
                          std::max(l2_on(mu, beltrami.support_box), 1e-300);
  return PlanarMap(plan.cauchy(h), h, dz_rho, residual, iterations, std::move(increments));
}

ParametricCurve trace_image(const PlanarMap& map, const ParametricCurve& curve) {
  std::vector<double> t(curve.params().begin(), curve.params().end());
  std::vector<Complex> p(curve.size()), d(curve.size());
  for (std::size_t j = 0; j < curve.size(); ++j) {
    const Complex z = curve.point(j), v = curve.deriv(j);
    p[j] = map(z);
    d[j] = map.dz(z) * v + map.dbar(z) * std::conj(v);
  }
  return ParametricCurve(std::move(t), std::move(p), std::move(d), curve.closed());
}

ParametricCurve trace_quasicircle(const PlanarMap& map, int n_points, double span) {
  return trace_image(map, ParametricCurve::real_line(n_points, span));
}

double mean_sqrt_jacobian(const MapEvaluator& map, Complex z, double radius, int n_radial) {
  if (!(radius > 0.0) || n_radial < 1) fail(ErrorKind::InvalidArgument, "bad averaging ball");
  const int nr = n_radial, nt = 2 * n_radial;
  const double dr = radius / nr, dt = 2.0 * kPi / nt;
  double sum = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * dr;
    for (int j = 0; j < nt; ++j) {
      const Complex zeta = z + std::polar(r, (j + 0.5) * dt);
      sum += std::sqrt(std::max(0.0, map.jacobian(zeta))) * r * dr * dt;
    }
  }
  return sum / (kPi * radius * radius);
}

double af_coefficient(const MapEvaluator& map, Complex z, const Box* domain) {
  const double y = z.imag();
  if (!(y > 0.0)) fail(ErrorKind::OutOfDomain, "a_F needs Im z > 0");
  const double radius = 0.5 * y;
  if (domain && !domain->encloses(Box::square(z, radius)))
    fail(ErrorKind::OutOfDomain, "ball B_z(y/2) leaves the evaluable domain");
  return mean_sqrt_jacobian(map, z, radius);
}

}  // namespace qlab
