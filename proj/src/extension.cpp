#include "qlab/extension.hpp"

#include <cmath>
#include <sstream>

#include "qlab/error.hpp"

namespace qlab {

ConformalBoundaryMap ConformalBoundaryMap::identity() { return {Kind::Identity, 0.0}; }

ConformalBoundaryMap ConformalBoundaryMap::quadratic(Complex a) {
  if (!(std::abs(a) < 0.5)) fail(ErrorKind::InvalidArgument, "quad:a needs |a| < 1/2");
  return {Kind::Quadratic, a};
}

ConformalBoundaryMap ConformalBoundaryMap::moebius(Complex b) {
  if (!(std::abs(b) < 1.0)) fail(ErrorKind::InvalidArgument, "moebius:b needs |b| < 1");
  return {Kind::Moebius, b};
}

ConformalBoundaryMap ConformalBoundaryMap::parse(const std::string& spec) {
  if (spec == "identity") return identity();
  auto number = [&](std::size_t pos) {
    try {
      std::size_t used = 0;
      const double v = std::stod(spec.substr(pos), &used);
      if (pos + used != spec.size()) throw std::invalid_argument(spec);
      return v;
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, "bad map parameter in '" + spec + "'");
    }
  };
  if (spec.rfind("quad:", 0) == 0) return quadratic(number(5));
  if (spec.rfind("moebius:", 0) == 0) return moebius(number(8));
  fail(ErrorKind::InvalidArgument, "unknown map '" + spec + "'");
}

std::string ConformalBoundaryMap::name() const {
  std::ostringstream s;
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Quadratic: s << "quad:" << p_.real(); break;
    case Kind::Moebius: s << "moebius:" << p_.real(); break;
  }
  return s.str();
}

Complex ConformalBoundaryMap::f(Complex z) const {
  switch (kind_) {
    case Kind::Identity: return z;
    case Kind::Quadratic: return z + p_ * z * z;
    case Kind::Moebius: return z / (1.0 - p_ * z);
  }
  return z;
}

Complex ConformalBoundaryMap::d1(Complex z) const {
  switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::Quadratic: return 1.0 + 2.0 * p_ * z;
    case Kind::Moebius: {
      const Complex q = 1.0 - p_ * z;
      return 1.0 / (q * q);
    }
  }
  return 1.0;
}

Complex ConformalBoundaryMap::d2(Complex z) const {
  switch (kind_) {
    case Kind::Identity: return 0.0;
    case Kind::Quadratic: return 2.0 * p_;
    case Kind::Moebius: {
      const Complex q = 1.0 - p_ * z;
      return 2.0 * p_ / (q * q * q);
    }
  }
  return 0.0;
}

namespace {

Complex reflected(Complex z, double r0) {
  const double r = std::abs(z);
  if (!(r >= 1.0) || !(r < 1.0 / r0)) fail(ErrorKind::OutOfAnnulus, "need 1 <= |z| < 1/r0");
  return 1.0 / std::conj(z);
}

}  // namespace

Complex reflect_extend(const ConformalBoundaryMap& map, Complex z, double r0) {
  const Complex w = reflected(z, r0);
  return map.f(w) + map.d1(w) * (z - w);
}

Complex extension_dilatation(const ConformalBoundaryMap& map, Complex z, double r0) {
  const Complex w = reflected(z, r0);
  const Complex d1 = map.d1(w);
  if (std::abs(d1) == 0.0) fail(ErrorKind::DegenerateDerivative, "f'(1/conj z) = 0");
  const Complex zb = std::conj(z);
  return -(map.d2(w) / d1) * (z - w) / (zb * zb);
}

double quintic_taper(double r, double r0, double width) {
  if (r <= r0) return 1.0;
  if (r >= r0 + width) return 0.0;
  const double t = (r - r0) / width;
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

BeltramiField cutoff_global(const ConformalBoundaryMap& map, const Grid& grid, double R0, double width,
                            double r0) {
  if (!(R0 > 1.0) || !(width > 0.0)) fail(ErrorKind::InvalidArgument, "need R0 > 1 and width > 0");
  if (!(R0 + width < 1.0 / r0)) fail(ErrorKind::InvalidArgument, "R0 + width must stay below 1/r0");
  GridField mu = GridField::sample(grid, [&](Complex z) -> Complex {
    const double r = std::abs(z);
    if (r <= 1.0 || r >= R0 + width) return 0.0;
    return extension_dilatation(map, z, r0) * quintic_taper(r, R0, width);
  });
  if (!(mu.max_abs() < 1.0))
    fail(ErrorKind::InvalidDilatation, "extension dilatation reaches |mu| >= 1");
  return BeltramiField::make(std::move(mu), Box::square(0.0, R0 + width));
}

}  // namespace qlab
