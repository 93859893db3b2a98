#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qlab/error.hpp"
#include "qlab/io.hpp"

using namespace qlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qlab_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("field round trip") {
  const Grid g(Box{-1.0, 1.0, -0.5, 0.5}, 21, 11);
  const auto f = GridField::sample(g, [](Complex z) { return z * z + Complex{0.1, -0.2}; });
  const fs::path p = scratch("field.csv");
  io::write_field(p, f);
  CHECK(fs::exists(io::metadata_path(p)));
  const GridField back = io::read_field(p);
  CHECK(back.grid() == g);
  CHECK((back - f).max_abs() < 1e-14);
}

TEST_CASE("curve round trip keeps the closed flag") {
  for (const auto& c : {ParametricCurve::circle(0.0, 1.0, 64), ParametricCurve::real_line(128, 2.0)}) {
    const fs::path p = scratch(c.closed() ? "closed.csv" : "open.csv");
    io::write_curve(p, c);
    const ParametricCurve back = io::read_curve(p);
    CHECK(back.closed() == c.closed());
    REQUIRE(back.size() == c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      CHECK(std::abs(back.point(j) - c.point(j)) < 1e-13 * (1.0 + std::abs(c.point(j))));
      CHECK(std::abs(back.deriv(j) - c.deriv(j)) < 1e-13 * (1.0 + std::abs(c.deriv(j))));
    }
  }
}

TEST_CASE("curve without sidecar") {
  const auto c = ParametricCurve::circle(0.0, 1.0, 32);
  const fs::path p = scratch("bare.csv");
  io::write_curve(p, c);
  fs::remove(io::metadata_path(p));
  CHECK(io::read_curve(p).closed());
}

TEST_CASE("io errors") {
  auto kind = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind([] { io::read_field(scratch("missing.csv")); }) == ErrorKind::Io);
  const fs::path bad = scratch("bad.csv");
  {
    std::ofstream out(bad);
    out << "x,y,re,im\n0,0,1\n";
  }
  CHECK(kind([&] { io::read_field(bad); }) == ErrorKind::Io);
}
