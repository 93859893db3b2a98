#include <cmath>
#include <random>

#include "doctest.h"
#include "qlab/error.hpp"
#include "qlab/extension.hpp"
#include "qlab/regularity.hpp"

using namespace qlab;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a qlab::Error");
  return ErrorKind::Io;
}

std::vector<ConformalBoundaryMap> builtin_maps() {
  return {ConformalBoundaryMap::quadratic(0.2), ConformalBoundaryMap::quadratic(-0.35),
          ConformalBoundaryMap::moebius(0.3), ConformalBoundaryMap::moebius(-0.6)};
}

double beta_of(const ConformalBoundaryMap& f, Complex w) {
  return beta_log_derivative([&](Complex u) { return f.d1(u); }, [&](Complex u) { return f.d2(u); }, w);
}

}  // namespace

TEST_CASE("reflection extension values") {
  const auto id = ConformalBoundaryMap::identity();
  for (Complex z : {Complex{1.0, 0.0}, Complex{1.2, -0.7}, Complex{-2.5, 1.0}}) CHECK(reflect_extend(id, z) == z);
  const auto q = ConformalBoundaryMap::quadratic(0.2);
  CHECK(std::abs(reflect_extend(q, 2.0) - 2.35) < 1e-14);

  for (const auto& f : builtin_maps())
    for (int k = 0; k < 16; ++k) {
      const Complex w = std::polar(1.0, 0.4 * k);
      CHECK(std::abs(reflect_extend(f, w) - f.f(w)) < 1e-14);
    }

  // continuity across the circle at rate O(|z| - 1)
  const Complex dir = std::polar(1.0, 0.9);
  double prev = 0.0;
  for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double gap = std::abs(reflect_extend(q, (1.0 + e) * dir) - q.f(dir));
    if (prev > 0.0) CHECK(gap / prev == doctest::Approx(0.1).epsilon(0.2));
    prev = gap;
  }
}

TEST_CASE("extension dilatation") {
  CHECK(extension_dilatation(ConformalBoundaryMap::identity(), Complex{1.3, 0.4}) == Complex{});

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> rad(1.0, 3.9), ang(0.0, 2.0 * kPi);
  for (const auto& f : builtin_maps())
    for (int i = 0; i < 100; ++i) {
      const Complex z = std::polar(rad(rng), ang(rng));
      const double r = std::abs(z);
      const double lhs = std::abs(extension_dilatation(f, z)) * r * r / (r + 1.0);
      const double rhs = beta_of(f, 1.0 / std::conj(z));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(rhs, 1e-300));
    }

  // centred differences of the extension
  const double h = 1e-5;
  for (const auto& f : builtin_maps())
    for (double t : {0.3, 2.0, 4.4}) {
      const Complex z = std::polar(1.5, t);
      auto F = [&](Complex u) { return reflect_extend(f, u); };
      const Complex fx = (F(z + h) - F(z - h)) / (2.0 * h);
      const Complex fy = (F(z + Complex{0.0, h}) - F(z - Complex{0.0, h})) / (2.0 * h);
      const Complex dz = 0.5 * (fx - Complex{0.0, 1.0} * fy), dbar = 0.5 * (fx + Complex{0.0, 1.0} * fy);
      const Complex mu = extension_dilatation(f, z);
      CHECK(std::abs(dbar / dz - mu) <= 1e-6 * std::max(1.0, std::abs(mu)));
    }

  CHECK(kind_of([] { extension_dilatation(ConformalBoundaryMap::quadratic(0.2), 0.5); }) == ErrorKind::OutOfAnnulus);
  CHECK(kind_of([] { reflect_extend(ConformalBoundaryMap::quadratic(0.2), 4.5); }) == ErrorKind::OutOfAnnulus);
}

TEST_CASE("global cutoff") {
  const Grid g = Grid::centered_square(4.0, 257);
  CHECK(cutoff_global(ConformalBoundaryMap::identity(), g, 1.5, 0.3).mu.max_abs() == 0.0);

  const auto q = ConformalBoundaryMap::quadratic(0.2);
  const BeltramiField mu = cutoff_global(q, g, 1.5, 0.3);
  // analytic maximum of beta(1/conj z)(|z|+1)/|z|^2 times the taper
  double analytic = 0.0;
  for (int a = 0; a < 400; ++a)
    for (int b = 0; b < 400; ++b) {
      const double r = 1.0 + 0.8 * (a + 0.5) / 400.0;
      const Complex z = std::polar(r, 2.0 * kPi * b / 400.0);
      analytic = std::max(analytic, beta_of(q, 1.0 / std::conj(z)) * (r + 1.0) / (r * r) * quintic_taper(r, 1.5, 0.3));
    }
  CHECK(analytic < 1.0);
  CHECK(mu.k <= analytic * (1.0 + 1e-12));
  CHECK(mu.k == doctest::Approx(analytic).epsilon(0.02));

  // real coefficients: mu(conj z) = conj mu(z)
  for (int j = 0; j < g.ny(); j += 5)
    for (int i = 0; i < g.nx(); i += 3) {
      const Complex top = mu.mu(i, j), bottom = mu.mu(i, g.ny() - 1 - j);
      CHECK(std::abs(top - std::conj(bottom)) <= 1e-12);
    }

  // decay |mu| <= C (|z| - 1)^alpha near the circle, alpha from Hardy-Littlewood
  const double alpha =
      hardy_littlewood_fit([&](Complex z) { return q.d2(z); }, {0.9, 0.95, 0.975, 0.9875, 0.99375}).alpha;
  // the ratio must stay bounded over four decades
  double first = 0.0;
  for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) {
    double m = 0.0;
    for (int k = 0; k < 256; ++k) m = std::max(m, std::abs(extension_dilatation(q, std::polar(1.0 + e, 2.0 * kPi * k / 256))));
    const double c = m / std::pow(e, alpha - 0.1);
    if (first == 0.0) first = c;
    CHECK(c <= 2.0 * first);
  }

  CHECK(kind_of([&] { cutoff_global(q, g, 0.9, 0.3); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { cutoff_global(q, g, 3.8, 0.3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("map parsing and taper") {
  CHECK(ConformalBoundaryMap::parse("identity").kind() == ConformalBoundaryMap::Kind::Identity);
  CHECK(ConformalBoundaryMap::parse("quad:0.2").parameter() == Complex{0.2});
  CHECK(ConformalBoundaryMap::parse("moebius:-0.5").name() == "moebius:-0.5");
  CHECK(kind_of([] { ConformalBoundaryMap::parse("quad:0.7"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ConformalBoundaryMap::parse("quad:abc"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ConformalBoundaryMap::parse("cubic:0.1"); }) == ErrorKind::InvalidArgument);
  CHECK(quintic_taper(1.0, 1.5, 0.3) == 1.0);
  CHECK(quintic_taper(1.65, 1.5, 0.3) == doctest::Approx(0.5));
  CHECK(quintic_taper(1.9, 1.5, 0.3) == 0.0);
}
