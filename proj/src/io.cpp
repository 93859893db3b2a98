#include "qlab/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qlab/error.hpp"

namespace qlab::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) fail(ErrorKind::Io, "cannot write " + p.string());
  out << std::setprecision(17);
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p);
  if (!in) fail(ErrorKind::Io, "cannot read " + p.string());
  return in;
}

std::vector<std::vector<double>> read_rows(const fs::path& p, const std::string& header,
                                           std::size_t width) {
  std::ifstream in = open_in(p);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Io, p.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) fail(ErrorKind::Io, p.string() + ": expected header '" + header + "'");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorKind::Io, p.string() + ": bad number '" + cell + "'");
      }
    }
    if (row.size() != width) fail(ErrorKind::Io, p.string() + ": wrong column count");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

fs::path metadata_path(const fs::path& csv) {
  fs::path p = csv;
  p += ".meta.json";
  return p;
}

void write_field(const fs::path& csv, const GridField& field) {
  const Grid& g = field.grid();
  {
    std::ofstream out = open_out(csv);
    out << "x,y,re,im\n";
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const Complex z = g.node(i, j);
        const Complex v = field(i, j);
        out << z.real() << ',' << z.imag() << ',' << v.real() << ',' << v.imag() << '\n';
      }
  }
  const Box& b = g.box();
  json meta = {{"box", {b.x0, b.x1, b.y0, b.y1}}, {"nx", g.nx()}, {"ny", g.ny()}};
  std::ofstream out = open_out(metadata_path(csv));
  out << meta.dump(2) << '\n';
}

GridField read_field(const fs::path& csv) {
  json meta;
  {
    std::ifstream in = open_in(metadata_path(csv));
    try {
      in >> meta;
    } catch (const json::exception& e) {
      fail(ErrorKind::Io, "bad metadata for " + csv.string() + ": " + e.what());
    }
  }
  const auto box = meta.at("box").get<std::vector<double>>();
  if (box.size() != 4) fail(ErrorKind::Io, "metadata box needs 4 numbers");
  Grid grid(Box{box[0], box[1], box[2], box[3]}, meta.at("nx").get<int>(), meta.at("ny").get<int>());

  const auto rows = read_rows(csv, "x,y,re,im", 4);
  if (rows.size() != grid.size()) fail(ErrorKind::Io, csv.string() + ": row count mismatch");
  std::vector<Complex> values(grid.size());
  for (const auto& r : rows) {
    const int i = static_cast<int>(std::lround(grid.fx({r[0], r[1]})));
    const int j = static_cast<int>(std::lround(grid.fy({r[0], r[1]})));
    if (i < 0 || j < 0 || i >= grid.nx() || j >= grid.ny())
      fail(ErrorKind::Io, csv.string() + ": node outside the grid");
    values[grid.index(i, j)] = {r[2], r[3]};
  }
  return GridField(grid, std::move(values));
}

void write_curve(const fs::path& csv, const ParametricCurve& curve) {
  {
    std::ofstream out = open_out(csv);
    out << "tau,re,im,dre,dim\n";
    for (std::size_t j = 0; j < curve.size(); ++j) {
      const Complex p = curve.point(j), d = curve.deriv(j);
      out << curve.param(j) << ',' << p.real() << ',' << p.imag() << ',' << d.real() << ','
          << d.imag() << '\n';
    }
  }
  std::ofstream out = open_out(metadata_path(csv));
  out << json{{"closed", curve.closed()}, {"samples", curve.size()}}.dump(2) << '\n';
}

ParametricCurve read_curve(const fs::path& csv) {
  const auto rows = read_rows(csv, "tau,re,im,dre,dim", 5);
  std::vector<double> t;
  std::vector<Complex> p, d;
  for (const auto& r : rows) {
    t.push_back(r[0]);
    p.emplace_back(r[1], r[2]);
    d.emplace_back(r[3], r[4]);
  }
  bool closed = false;
  if (fs::exists(metadata_path(csv))) {
    std::ifstream in = open_in(metadata_path(csv));
    json meta;
    try {
      in >> meta;
    } catch (const json::exception& e) {
      fail(ErrorKind::Io, "bad metadata for " + csv.string() + ": " + e.what());
    }
    closed = meta.value("closed", false);
  } else if (t.size() >= 2) {
    const double step = t[1] - t[0];
    closed = std::abs(t.front()) < 1e-12 && std::abs(step * t.size() - 2.0 * kPi) < 1e-9;
  }
  return ParametricCurve(std::move(t), std::move(p), std::move(d), closed);
}

}  // namespace qlab::io
