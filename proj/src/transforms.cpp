#include "qlab/transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include "qlab/error.hpp"

namespace qlab {

namespace {

// FFTW planning is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr int kMoments = 4;
constexpr int kBumpPower = 6;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Radial basis psi(r) = (1 - r^2/a^2)^m. For g_k = psi(r) conj(z)^k the
// decaying solution of dbar Phi = g_k is Phi_k = conj(z)^(k+1) J_k(u),
// u = r^2/a^2, with J_k(u) = u^-(k+1) \int_0^u v^k (1-v)^m dv (constant
// B_k(1)/u^(k+1) beyond u = 1).
struct MomentBasis {
  double a = 1.0;

  static double j_inner(int k, double u) {
    double s = 0.0;
    for (int i = 0; i <= kBumpPower; ++i)
      s += binomial(kBumpPower, i) * ((i % 2) ? -1.0 : 1.0) * std::pow(u, i) / (k + i + 1);
    return s;
  }
  static double dj_inner(int k, double u) {
    double s = 0.0;
    for (int i = 1; i <= kBumpPower; ++i)
      s += binomial(kBumpPower, i) * ((i % 2) ? -1.0 : 1.0) * i * std::pow(u, i - 1) / (k + i + 1);
    return s;
  }
  double psi(Complex w) const {
    const double u = std::norm(w) / (a * a);
    return u < 1.0 ? std::pow(1.0 - u, kBumpPower) : 0.0;
  }
  Complex density(int k, Complex w) const { return psi(w) * std::pow(std::conj(w), k); }
  Complex cauchy(int k, Complex w) const {
    const double u = std::norm(w) / (a * a);
    const double j = u < 1.0 ? j_inner(k, u) : j_inner(k, 1.0) / std::pow(u, k + 1);
    return std::pow(std::conj(w), k + 1) * j;
  }
  Complex cauchy_dz(int k, Complex w) const {
    const double u = std::norm(w) / (a * a);
    const double dj =
        u < 1.0 ? dj_inner(k, u) : -(k + 1) * j_inner(k, 1.0) / std::pow(u, k + 2);
    return std::pow(std::conj(w), k + 2) * dj / (a * a);
  }
};

// Small dense complex solve with partial pivoting.
std::array<Complex, kMoments> solve4(std::array<std::array<Complex, kMoments>, kMoments> m,
                                     std::array<Complex, kMoments> rhs) {
  for (int c = 0; c < kMoments; ++c) {
    int p = c;
    for (int r = c + 1; r < kMoments; ++r)
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    std::swap(m[c], m[p]);
    std::swap(rhs[c], rhs[p]);
    for (int r = c + 1; r < kMoments; ++r) {
      const Complex f = m[r][c] / m[c][c];
      for (int k = c; k < kMoments; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  std::array<Complex, kMoments> x{};
  for (int r = kMoments - 1; r >= 0; --r) {
    Complex s = rhs[r];
    for (int k = r + 1; k < kMoments; ++k) s -= m[r][k] * x[k];
    x[r] = s / m[r][r];
  }
  return x;
}

}  // namespace

struct TransformPlan::Impl {
  Grid grid;
  int pad = 2;
  int px = 0, py = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  std::vector<Complex> xi;         // kx + i ky per padded index
  std::vector<Complex> dbar_mult;  // (i/2) xi, Nyquist removed
  std::vector<Complex> dz_mult;    // (i/2) conj(xi), Nyquist removed
  std::vector<Complex> inv_dbar;   // 2 / (i xi), 0 at xi = 0
  std::vector<Complex> beurling;   // conj(xi) / xi, 0 at xi = 0

  Complex center;
  MomentBasis basis;
  std::array<std::vector<Complex>, kMoments> g_samples, phi_samples, dphi_samples;
  std::array<std::array<Complex, kMoments>, kMoments> gram{};  // gram[l][k] = <g_k, w^l>

  Impl(const Grid& g, int pad_factor) : grid(g), pad(pad_factor) {
    if (pad < 2) fail(ErrorKind::InvalidArgument, "pad_factor must be >= 2");
    px = pad * grid.nx();
    py = pad * grid.ny();
    const std::size_t n = static_cast<std::size_t>(px) * py;
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_complex* tmp = fftw_alloc_complex(n);
      forward = fftw_plan_dft_2d(py, px, tmp, tmp, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
      backward = fftw_plan_dft_2d(py, px, tmp, tmp, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
      fftw_free(tmp);
    }
    const double h = grid.h();
    auto freq = [h](int m, int size) {
      const int mm = m < (size + 1) / 2 ? m : m - size;
      return 2.0 * kPi * mm / (size * h);
    };
    xi.resize(n);
    dbar_mult.resize(n);
    dz_mult.resize(n);
    inv_dbar.resize(n);
    beurling.resize(n);
    for (int j = 0; j < py; ++j) {
      const bool nyq_y = (py % 2 == 0) && j == py / 2;
      for (int i = 0; i < px; ++i) {
        const bool nyq_x = (px % 2 == 0) && i == px / 2;
        const std::size_t k = static_cast<std::size_t>(j) * px + i;
        const Complex x{freq(i, px), freq(j, py)};
        xi[k] = x;
        const bool nyq = nyq_x || nyq_y;
        dbar_mult[k] = nyq ? Complex{} : 0.5 * kI * x;
        dz_mult[k] = nyq ? Complex{} : 0.5 * kI * std::conj(x);
        if (k == 0) {
          inv_dbar[k] = 0.0;
          beurling[k] = 0.0;
        } else {
          inv_dbar[k] = 2.0 / (kI * x);
          beurling[k] = std::conj(x) / x;
        }
      }
    }

    center = grid.box().center();
    basis.a = 0.25 * std::min(grid.box().width(), grid.box().height());
    const std::size_t m = grid.size();
    for (int k = 0; k < kMoments; ++k) {
      g_samples[k].resize(m);
      phi_samples[k].resize(m);
      dphi_samples[k].resize(m);
      for (std::size_t q = 0; q < m; ++q) {
        const Complex w = grid.node(q) - center;
        g_samples[k][q] = basis.density(k, w);
        phi_samples[k][q] = basis.cauchy(k, w);
        dphi_samples[k][q] = basis.cauchy_dz(k, w);
      }
    }
    for (int l = 0; l < kMoments; ++l)
      for (int k = 0; k < kMoments; ++k) {
        Complex s{};
        for (std::size_t q = 0; q < m; ++q) s += g_samples[k][q] * std::pow(grid.node(q) - center, l);
        gram[l][k] = s * grid.cell_area();
      }
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;

  std::vector<Complex> pad_values(std::span<const Complex> v) const {
    std::vector<Complex> out(static_cast<std::size_t>(px) * py, Complex{});
    for (int j = 0; j < grid.ny(); ++j)
      std::copy_n(v.begin() + grid.index(0, j), grid.nx(), out.begin() + static_cast<std::size_t>(j) * px);
    return out;
  }

  std::vector<Complex> restrict_values(const std::vector<Complex>& padded) const {
    std::vector<Complex> out(grid.size());
    for (int j = 0; j < grid.ny(); ++j)
      std::copy_n(padded.begin() + static_cast<std::size_t>(j) * px, grid.nx(),
                  out.begin() + grid.index(0, j));
    return out;
  }

  void apply(std::vector<Complex>& data, const std::vector<Complex>& mult) const {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(forward, p, p);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (std::size_t k = 0; k < data.size(); ++k) data[k] *= mult[k] * scale;
    fftw_execute_dft(backward, p, p);
  }

  void check_support(const GridField& h) const {
    if (!(h.grid() == grid)) fail(ErrorKind::InvalidArgument, "field grid does not match plan");
    const double tol = 1e-12 * std::max(1.0, h.max_abs());
    if (h.max_abs_outside(grid.box().inner_half()) > tol)
      fail(ErrorKind::SupportViolation, "density is not supported in the inner half of the grid box");
  }

  // Moment-matching coefficients and the moment-free remainder.
  std::pair<std::array<Complex, kMoments>, std::vector<Complex>> split(const GridField& h) const {
    std::array<Complex, kMoments> moments{};
    const auto v = h.values();
    for (std::size_t q = 0; q < v.size(); ++q) {
      if (v[q] == Complex{}) continue;
      const Complex w = grid.node(q) - center;
      Complex p = 1.0;
      for (int l = 0; l < kMoments; ++l, p *= w) moments[l] += v[q] * p;
    }
    for (auto& m : moments) m *= grid.cell_area();
    const auto c = solve4(gram, moments);
    std::vector<Complex> rest(v.begin(), v.end());
    for (int k = 0; k < kMoments; ++k)
      if (c[k] != Complex{})
        for (std::size_t q = 0; q < rest.size(); ++q) rest[q] -= c[k] * g_samples[k][q];
    return {c, std::move(rest)};
  }
};

TransformPlan::TransformPlan(const Grid& grid, int pad_factor)
    : impl_(std::make_shared<const Impl>(grid, pad_factor)) {}

const Grid& TransformPlan::grid() const { return impl_->grid; }
int TransformPlan::pad_factor() const { return impl_->pad; }
int TransformPlan::padded_nx() const { return impl_->px; }
int TransformPlan::padded_ny() const { return impl_->py; }

std::vector<Complex> TransformPlan::pad(const GridField& field) const {
  if (!(field.grid() == impl_->grid)) fail(ErrorKind::InvalidArgument, "field grid does not match plan");
  return impl_->pad_values(field.values());
}

GridField TransformPlan::dbar(const GridField& field) const {
  const Grid& g = impl_->grid;
  if (g.nx() < 8 || g.ny() < 8) fail(ErrorKind::GridTooSmall, "spectral derivatives need nx, ny >= 8");
  auto data = pad(field);
  impl_->apply(data, impl_->dbar_mult);
  return GridField(g, impl_->restrict_values(data));
}

GridField TransformPlan::dz(const GridField& field) const {
  const Grid& g = impl_->grid;
  if (g.nx() < 8 || g.ny() < 8) fail(ErrorKind::GridTooSmall, "spectral derivatives need nx, ny >= 8");
  auto data = pad(field);
  impl_->apply(data, impl_->dz_mult);
  return GridField(g, impl_->restrict_values(data));
}

GridField TransformPlan::cauchy(const GridField& h) const {
  const Impl& im = *impl_;
  im.check_support(h);
  auto [c, rest] = im.split(h);
  auto data = im.pad_values(rest);
  im.apply(data, im.inv_dbar);

  // The periodic solution is defined up to a constant; the true transform of
  // the moment-free remainder vanishes to high order on the outer frame.
  Complex frame{};
  std::size_t count = 0;
  for (int i = 0; i < im.px; ++i) {
    frame += data[static_cast<std::size_t>(im.py / 2 + im.grid.ny() / 2) * im.px + i];
    ++count;
  }
  for (int j = 0; j < im.py; ++j) {
    frame += data[static_cast<std::size_t>(j) * im.px + (im.px / 2 + im.grid.nx() / 2)];
    ++count;
  }
  frame /= static_cast<double>(count);

  auto out = im.restrict_values(data);
  for (std::size_t q = 0; q < out.size(); ++q) {
    out[q] -= frame;
    for (int k = 0; k < kMoments; ++k) out[q] += c[k] * im.phi_samples[k][q];
  }
  return GridField(im.grid, std::move(out));
}

GridField TransformPlan::beurling(const GridField& h) const {
  const Impl& im = *impl_;
  im.check_support(h);
  auto [c, rest] = im.split(h);
  auto data = im.pad_values(rest);
  im.apply(data, im.beurling);
  auto out = im.restrict_values(data);
  for (std::size_t q = 0; q < out.size(); ++q)
    for (int k = 0; k < kMoments; ++k) out[q] += c[k] * im.dphi_samples[k][q];
  return GridField(im.grid, std::move(out));
}

std::vector<Complex> TransformPlan::beurling_periodic(std::span<const Complex> padded) const {
  const Impl& im = *impl_;
  if (padded.size() != static_cast<std::size_t>(im.px) * im.py)
    fail(ErrorKind::InvalidArgument, "padded data has the wrong size");
  std::vector<Complex> data(padded.begin(), padded.end());
  im.apply(data, im.beurling);
  return data;
}

GridField dbar(const GridField& field) { return TransformPlan(field.grid()).dbar(field); }
GridField dz(const GridField& field) { return TransformPlan(field.grid()).dz(field); }
GridField cauchy_transform(const GridField& h) { return TransformPlan(h.grid()).cauchy(h); }
GridField beurling_transform(const GridField& h) { return TransformPlan(h.grid()).beurling(h); }

// ---------------------------------------------------------------------------
// Pointwise path

Complex cell_cauchy_integral(Complex z, const Box& cell) {
  // \iint dA/(z - zeta) = -(1/2i) \oint conj(w)/w dw, w = zeta - z, and along
  // an edge w = e (u + i d): \int conj(w)/w dw = conj(e) [u - 2 i d log(u + i d)].
  const std::array<Complex, 5> corners = {Complex{cell.x0, cell.y0}, Complex{cell.x1, cell.y0},
                                          Complex{cell.x1, cell.y1}, Complex{cell.x0, cell.y1},
                                          Complex{cell.x0, cell.y0}};
  Complex loop{};
  for (int s = 0; s < 4; ++s) {
    const Complex wa = corners[s] - z, wb = corners[s + 1] - z;
    const double len = std::abs(wb - wa);
    const Complex e = (wb - wa) / len;
    const Complex local = std::conj(e) * wa;
    const double ua = local.real(), d = local.imag(), ub = ua + len;
    Complex term = ub - ua;
    if (d != 0.0) term -= 2.0 * kI * d * (std::log(Complex{ub, d}) - std::log(Complex{ua, d}));
    loop += std::conj(e) * term;
  }
  return -loop / (2.0 * kI);
}

PointwiseCauchy::PointwiseCauchy(const GridField& h) : h_(h.grid().h()) {
  const Grid& g = h.grid();
  for (std::size_t q = 0; q < g.size(); ++q)
    if (h[q] != Complex{}) {
      nodes_.push_back(g.node(q));
      weights_.push_back(h[q]);
    }
}

Complex PointwiseCauchy::value(Complex z) const {
  const double area = h_ * h_;
  const double near = 2.0 * h_;
  Complex s{};
  for (std::size_t q = 0; q < nodes_.size(); ++q) {
    const Complex d = z - nodes_[q];
    if (std::abs(d.real()) <= near && std::abs(d.imag()) <= near) {
      const Box cell = Box::square(nodes_[q], 0.5 * h_);
      s += weights_[q] * cell_cauchy_integral(z, cell);
    } else {
      s += weights_[q] * area / d;
    }
  }
  return s / kPi;
}

Complex PointwiseCauchy::derivative(Complex z) const {
  const double area = h_ * h_;
  Complex s{};
  for (std::size_t q = 0; q < nodes_.size(); ++q) {
    const Complex d = z - nodes_[q];
    s -= weights_[q] * area / (d * d);
  }
  return s / kPi;
}

}  // namespace qlab
