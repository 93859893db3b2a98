#include "qlab/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlab/beltrami.hpp"
#include "qlab/error.hpp"

namespace qlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

CarlesonDensity from_distance(DensityKind kind, double epsilon, const GridField& mu,
                              const std::function<double(Complex)>& dist) {
  if (!(epsilon >= 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be >= 0");
  const Grid& g = mu.grid();
  CarlesonDensity d;
  d.kind = kind;
  d.epsilon = epsilon;
  d.grid = g;
  d.clamp = 0.5 * g.h();
  d.values.resize(g.size());
  d.distance.resize(g.size());
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double r = dist(g.node(q));
    d.distance[q] = r;
    const double m2 = std::norm(mu[q]);
    if (m2 == 0.0) continue;
    if (r < d.clamp) d.clamped = true;
    d.values[q] = m2 / std::pow(std::max(r, d.clamp), 1.0 + epsilon);
  }
  return d;
}

}  // namespace

std::string to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::Mu2OverY: return "MU2_OVER_Y";
    case DensityKind::Mu2OverDistCircle: return "MU2_OVER_DIST_CIRCLE";
    case DensityKind::Mu2OverYPlain: return "MU2_OVER_Y_PLAIN";
    case DensityKind::GPrime2Delta: return "GPRIME2_DELTA";
    case DensityKind::Custom: return "CUSTOM";
  }
  return "?";
}

CarlesonDensity CarlesonDensity::mu2_over_y(const GridField& mu, double epsilon) {
  return from_distance(DensityKind::Mu2OverY, epsilon, mu,
                       [](Complex z) { return std::abs(z.imag()); });
}

CarlesonDensity CarlesonDensity::mu2_over_y_plain(const GridField& mu) {
  return from_distance(DensityKind::Mu2OverYPlain, 0.0, mu,
                       [](Complex z) { return std::abs(z.imag()); });
}

CarlesonDensity CarlesonDensity::mu2_over_dist_circle(const GridField& mu, double epsilon) {
  const Grid& g = mu.grid();
  for (std::size_t q = 0; q < g.size(); ++q)
    if (std::abs(g.node(q)) <= 1.0 && std::abs(mu[q]) > 1e-12)
      fail(ErrorKind::InvalidArgument, "circle-relative density needs mu = 0 on the closed disk");
  CarlesonDensity d = from_distance(DensityKind::Mu2OverDistCircle, epsilon, mu,
                                    [](Complex z) { return std::abs(std::abs(z) - 1.0); });
  return d;
}

CarlesonDensity CarlesonDensity::gprime2_delta(const GridField& gprime, std::vector<double> distance) {
  const Grid& g = gprime.grid();
  if (distance.size() != g.size()) fail(ErrorKind::InvalidArgument, "distance field size mismatch");
  CarlesonDensity d;
  d.kind = DensityKind::GPrime2Delta;
  d.grid = g;
  d.clamp = 0.5 * g.h();
  d.values.resize(g.size());
  for (std::size_t q = 0; q < g.size(); ++q) {
    if (!(distance[q] >= 0.0)) fail(ErrorKind::InvalidArgument, "distances must be >= 0");
    d.values[q] = std::norm(gprime[q]) * distance[q];
  }
  d.distance = std::move(distance);
  return d;
}

CarlesonDensity CarlesonDensity::custom(const Grid& grid, const std::function<double(Complex)>& density,
                                        const std::function<double(Complex)>& distance) {
  CarlesonDensity d;
  d.grid = grid;
  d.clamp = 0.5 * grid.h();
  d.values.resize(grid.size());
  if (distance) d.distance.resize(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const Complex z = grid.node(q);
    const double v = density(z);
    if (!(v >= 0.0) || !std::isfinite(v))
      fail(ErrorKind::InvalidArgument, "density must be finite and nonnegative");
    d.values[q] = v;
    if (distance) d.distance[q] = distance(z);
  }
  return d;
}

double CarlesonDensity::mass(Complex center, double radius) const {
  const double h = grid.h();
  const int i0 = std::max(0, static_cast<int>(std::ceil(grid.fx(center) - radius / h)));
  const int i1 = std::min(grid.nx() - 1, static_cast<int>(std::floor(grid.fx(center) + radius / h)));
  const int j0 = std::max(0, static_cast<int>(std::ceil(grid.fy(center) - radius / h)));
  const int j1 = std::min(grid.ny() - 1, static_cast<int>(std::floor(grid.fy(center) + radius / h)));
  const double r2 = radius * radius;
  double s = 0.0;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      if (std::norm(grid.node(i, j) - center) <= r2) s += values[grid.index(i, j)];
  return s * grid.cell_area();
}

double CarlesonDensity::total_mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_area();
}

// ---------------------------------------------------------------------------

namespace {

double segment_distance(Complex z, Complex a, Complex b) {
  const Complex e = b - a;
  const double len2 = std::norm(e);
  double t = len2 > 0.0 ? std::real((z - a) * std::conj(e)) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * e));
}

}  // namespace

std::vector<double> curve_distance_field(const Grid& grid, const ParametricCurve& curve) {
  const std::size_t n = curve.size();
  const std::size_t nseg = curve.arc_count();
  auto seg = [&](Complex z, std::size_t s) {
    return segment_distance(z, curve.point(s), curve.point((s + 1) % n));
  };
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(grid.size(), kNone);
  std::vector<double> best(grid.size(), kInf);
  auto consider = [&](std::size_t q, std::size_t s) {
    if (s == kNone) return;
    const Complex z = grid.node(q);
    std::size_t cand[3] = {s, kNone, kNone};
    if (s > 0 || curve.closed()) cand[1] = (s + nseg - 1) % nseg;
    if (s + 1 < nseg || curve.closed()) cand[2] = (s + 1) % nseg;
    for (std::size_t t : cand) {
      if (t == kNone) continue;
      const double d = seg(z, t);
      if (d < best[q]) {
        best[q] = d;
        label[q] = t;
      }
    }
  };

  // seed: every node within two cells of a segment
  const double h = grid.h();
  for (std::size_t s = 0; s < nseg; ++s) {
    const Complex a = curve.point(s), b = curve.point((s + 1) % n);
    const double lo_x = std::min(a.real(), b.real()) - 2 * h, hi_x = std::max(a.real(), b.real()) + 2 * h;
    const double lo_y = std::min(a.imag(), b.imag()) - 2 * h, hi_y = std::max(a.imag(), b.imag()) + 2 * h;
    const int i0 = std::max(0, static_cast<int>(std::ceil(grid.fx({lo_x, 0.0}))));
    const int i1 = std::min(grid.nx() - 1, static_cast<int>(std::floor(grid.fx({hi_x, 0.0}))));
    const int j0 = std::max(0, static_cast<int>(std::ceil(grid.fy({0.0, lo_y}))));
    const int j1 = std::min(grid.ny() - 1, static_cast<int>(std::floor(grid.fy({0.0, hi_y}))));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        const std::size_t q = grid.index(i, j);
        const double d = seg(grid.node(q), s);
        if (d <= 2 * h && d < best[q]) {
          best[q] = d;
          label[q] = s;
        }
      }
  }
  bool seeded = false;
  for (std::size_t l : label) seeded = seeded || l != kNone;
  if (!seeded) {
    // curve misses the grid
    for (std::size_t q = 0; q < grid.size(); ++q)
      for (std::size_t s = 0; s < nseg; ++s) consider(q, s);
    return best;
  }

  // nearest-segment label propagation, four raster sweeps, repeated until stable
  const int nx = grid.nx(), ny = grid.ny();
  for (int round = 0; round < 4; ++round) {
    bool changed = false;
    for (int dir = 0; dir < 4; ++dir) {
      const int di = (dir & 1) ? -1 : 1, dj = (dir & 2) ? -1 : 1;
      for (int jj = 0; jj < ny; ++jj) {
        const int j = dj > 0 ? jj : ny - 1 - jj;
        for (int ii = 0; ii < nx; ++ii) {
          const int i = di > 0 ? ii : nx - 1 - ii;
          const std::size_t q = grid.index(i, j);
          const std::size_t before = label[q];
          for (auto [oi, oj] : {std::pair{-di, 0}, std::pair{0, -dj}, std::pair{-di, -dj}, std::pair{di, -dj}}) {
            const int pi = i + oi, pj = j + oj;
            if (pi < 0 || pj < 0 || pi >= nx || pj >= ny) continue;
            const std::size_t l = label[grid.index(pi, pj)];
            if (l != kNone && l != label[q]) consider(q, l);
          }
          changed = changed || label[q] != before;
        }
      }
    }
    if (!changed) break;
  }
  return best;
}

// ---------------------------------------------------------------------------

CarlesonReport carleson_norm(const CarlesonDensity& density, const ParametricCurve& curve,
                             const CarlesonOptions& options) {
  if (options.n_centers < 1) fail(ErrorKind::InvalidArgument, "need at least one centre");
  const Grid& g = density.grid;
  const Box& box = g.box();
  CarlesonReport rep;
  rep.clamped = density.clamped;

  // centres: uniform in the curve parameter, restricted to the inner half box
  const Box inner = box.inner_half();
  std::vector<std::size_t> inside;
  for (std::size_t j = 0; j < curve.size(); ++j)
    if (inner.contains(curve.point(j))) inside.push_back(j);
  if (inside.empty()) fail(ErrorKind::OutOfDomain, "curve does not meet the inner half of the grid");
  const std::size_t nc = std::min<std::size_t>(options.n_centers, inside.size());
  for (std::size_t c = 0; c < nc; ++c)
    rep.centers.push_back(curve.point(inside[(2 * c + 1) * inside.size() / (2 * nc)]));

  double r_max = options.r_max;
  if (r_max <= 0.0) {
    double diam = 0.0;
    for (Complex a : rep.centers)
      for (Complex b : rep.centers) diam = std::max(diam, std::abs(a - b));
    r_max = std::min(diam, 0.5 * std::min(box.width(), box.height()));
    if (r_max <= 0.0) r_max = 0.5 * std::min(box.width(), box.height());
  }
  const double r_min = 8.0 * g.h();
  if (r_max < r_min) fail(ErrorKind::GridTooSmall, "largest ball is below 8 cells");
  for (int j = 0;; ++j) {
    const double r = r_max * std::ldexp(1.0, -j);
    if (r < r_min * (1.0 - 1e-12)) {
      if (options.j_max >= j) rep.truncated = true;
      break;
    }
    if (options.j_max >= 0 && j > options.j_max) break;
    rep.radii.push_back(r);
  }

  const std::size_t nr = rep.radii.size();
  rep.masses.assign(nc, std::vector<double>(nr, kNaN));
  std::vector<double> column_max(nr, 0.0);
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t j = 0; j < nr; ++j) {
      const Complex z = rep.centers[c];
      const double r = rep.radii[j];
      if (!box.encloses(Box::square(z, r))) continue;
      const double v = density.mass(z, r) / r;
      rep.masses[c][j] = v;
      column_max[j] = std::max(column_max[j], v);
    }
  rep.profile.assign(nr, 0.0);
  double running = 0.0;
  for (std::size_t j = nr; j-- > 0;) {
    running = std::max(running, column_max[j]);
    rep.profile[j] = running;
  }
  rep.norm = nr ? rep.profile[0] : 0.0;

  // divergence: distance layers [2^l h, 2^{l+1} h) summed over every valid
  // (centre, largest radius) ball; a density with exponent >= 1 at the
  // reference set has non-decaying innermost layers
  if (!density.distance.empty() && nr > 0) {
    const double h = g.h();
    std::vector<double> layers(3, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
      std::size_t j = 0;
      while (j < nr && std::isnan(rep.masses[c][j])) ++j;
      if (j == nr) continue;
      const Complex z = rep.centers[c];
      const double r = rep.radii[j];
      const double r2 = r * r;
      const int i0 = std::max(0, static_cast<int>(std::ceil(g.fx(z) - r / h)));
      const int i1 = std::min(g.nx() - 1, static_cast<int>(std::floor(g.fx(z) + r / h)));
      const int j0 = std::max(0, static_cast<int>(std::ceil(g.fy(z) - r / h)));
      const int j1 = std::min(g.ny() - 1, static_cast<int>(std::floor(g.fy(z) + r / h)));
      for (int jj = j0; jj <= j1; ++jj)
        for (int ii = i0; ii <= i1; ++ii) {
          if (std::norm(g.node(ii, jj) - z) > r2) continue;
          const std::size_t q = g.index(ii, jj);
          const double d = density.distance[q] / (2.0 * h);
          if (d < 1.0 || d >= 8.0) continue;
          layers[static_cast<std::size_t>(std::floor(std::log2(d)))] += density.values[q];
        }
    }
    bool flat = true;
    for (int l = 0; l < 2; ++l) {
      const double ratio = layers[l + 1] > 0.0 ? layers[l] / layers[l + 1] : 0.0;
      rep.layer_ratios.push_back(ratio);
      if (!(ratio >= 0.9)) flat = false;
    }
    if (flat) {
      rep.divergent = true;
      rep.norm = kInf;
    }
  }
  return rep;
}

double vanishing_profile(const CarlesonReport& report, double r) {
  if (report.radii.empty()) fail(ErrorKind::RangeError, "empty radius table");
  const double lo = report.radii.back(), hi = report.radii.front();
  if (!(r >= lo * (1.0 - 1e-9)) || !(r <= hi * (1.0 + 1e-9)))
    fail(ErrorKind::RangeError, "r outside the tabulated radius range");
  for (std::size_t j = 0; j < report.radii.size(); ++j)
    if (report.radii[j] <= r * (1.0 + 1e-9)) return report.profile[j];
  return report.profile.back();
}

double profile_exponent(const CarlesonReport& report) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t j = 0; j < report.radii.size(); ++j) {
    if (!(report.profile[j] > 0.0)) continue;
    const double x = std::log(report.radii[j]), y = std::log(report.profile[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) fail(ErrorKind::InsufficientSamples, "need two positive profile values");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> pushforward_measure(const MapEvaluator& map, const CarlesonDensity& density,
                                        const std::vector<Ball>& targets) {
  const Grid& g = density.grid;
  if (density.distance.empty())
    fail(ErrorKind::InvalidArgument, "push-forward needs the density's distance field");
  auto hit = [&](Complex w, const Ball& b) { return std::abs(w - b.center) < b.radius; };

  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      if (i != 0 && j != 0 && i != g.nx() - 1 && j != g.ny() - 1) continue;
      const Complex w = map.value(g.node(i, j));
      for (const Ball& b : targets)
        if (hit(w, b)) fail(ErrorKind::OutOfDomain, "target ball preimage escapes the grid");
    }

  std::vector<double> out(targets.size(), 0.0);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double v = density.values[q];
    if (v == 0.0) continue;
    const Complex z = g.node(q);
    const Complex w = map.value(z);
    double a = -1.0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (!hit(w, targets[t])) continue;
      if (a < 0.0) {
        const double radius = 0.5 * std::max(density.distance[q], density.clamp);
        a = mean_sqrt_jacobian(map, z, radius, 6);
      }
      out[t] += a * v;
    }
  }
  for (double& m : out) m *= g.cell_area();
  return out;
}

}  // namespace qlab
