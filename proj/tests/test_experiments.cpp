#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qlab/error.hpp"
#include "qlab/experiments.hpp"

using namespace qlab;
using nlohmann::json;

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

bool has_check(const VerdictReport& r, const std::string& prefix) {
  for (const Check& c : r.checks)
    if (c.name.rfind(prefix, 0) == 0) return true;
  return false;
}

// small planar scenario: 257^2 grid, short curves
json small_planar() {
  return json{{"grid", {{"half", 4.0}, {"n", 257}}},
              {"curve", {{"n", 2048}, {"span", 3.0}}},
              {"profile", {{"m_max", 7}, {"coarse_points", 256}, {"refine_top", 3}}}};
}

}  // namespace

TEST_CASE("verdict report") {
  VerdictReport r;
  r.scenario = "x";
  r.add("a", 1.0, 2.0, true);
  CHECK(r.overall);
  r.add("b", std::numeric_limits<double>::infinity(), 1.0, false);
  CHECK_FALSE(r.overall);
  const json j = r.to_json();
  for (const char* key : {"scenario", "checks", "overall", "runtime_seconds"}) CHECK(j.contains(key));
  CHECK(j["checks"].size() == 2);
  CHECK(j["checks"][1]["value"] == "inf");
  CHECK(j["checks"][0]["pass"] == true);
}

TEST_CASE("scenario configuration") {
  const auto a = ScenarioConfig::defaults("theorem-a");
  CHECK(a.params["map"] == "quad:0.2");
  const auto b = ScenarioConfig::with_overrides("theorem-a", json{{"epsilon", 0.25}, {"grid", {{"n", 256}}}});
  CHECK(b.params["epsilon"] == 0.25);
  CHECK(b.params["grid"]["half"] == 4.0);
  CHECK(b.params["grid"]["n"] == 256);
  CHECK(a.hash() != b.hash());
  CHECK(a.hash() == ScenarioConfig::defaults("theorem-a").hash());
  CHECK(kind_of([] { ScenarioConfig::defaults("theorem-z"); }) == ErrorKind::InvalidArgument);

  const auto path = std::filesystem::temp_directory_path() / "qlab_cfg.json";
  {
    std::ofstream out(path);
    out << R"({"scenario": "corollary", "g": ["one"]})";
  }
  const auto c = ScenarioConfig::load(path);
  CHECK(c.scenario == "corollary");
  CHECK(c.params["g"].size() == 1);
  CHECK(kind_of([&] { ScenarioConfig::load(path, "theorem-b"); }) == ErrorKind::InvalidArgument);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK(kind_of([&] { ScenarioConfig::load(path, "corollary"); }) == ErrorKind::Io);

  auto broken = ScenarioConfig::defaults("theorem-a");
  broken.params.erase("epsilon");
  CHECK(kind_of([&] { run_theorem_a(broken); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("band bump dilatation") {
  const Grid g = Grid::centered_square(4.0, 129);
  const json spec = ScenarioConfig::defaults("theorem-b").params["mu"];
  const GridField mu = band_bump_mu(g, spec);
  CHECK(mu.max_abs() == doctest::Approx(0.3).epsilon(1e-12));
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Complex z = g.node(k);
    if (z.imag() <= 0.0 || std::abs(z.real()) >= 1.5 || z.imag() >= 1.5) CHECK(mu[k] == Complex{});
  }
  json bad = spec;
  bad["k"] = 1.0;
  CHECK(kind_of([&] { band_bump_mu(g, bad); }) == ErrorKind::InvalidDilatation);
}

TEST_CASE("theorem A with the identity map") {
  const auto cfg = ScenarioConfig::with_overrides(
      "theorem-a", json{{"map", "identity"}, {"direction", "forward"}, {"grid", {{"n", 257}}}});
  const VerdictReport r = run_theorem_a(cfg);
  CHECK(r.overall);
  CHECK(r.details["forward"]["k"] == 0.0);
  CHECK(r.details["forward"]["nu"]["norm"] == 0.0);
  CHECK(r.details["forward"]["alpha_boundary"] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_FALSE(has_check(r, "reverse."));
  CHECK(run_theorem_a(cfg).to_json()["checks"] == r.to_json()["checks"]);
}

TEST_CASE("theorem A thresholds come from the config") {
  const auto cfg = ScenarioConfig::with_overrides(
      "theorem-a", json{{"direction", "forward"}, {"grid", {{"n", 257}}}, {"thresholds", {{"k_max", 0.1}}}});
  const VerdictReport r = run_theorem_a(cfg);
  CHECK_FALSE(r.overall);
  for (const Check& c : r.checks)
    if (c.name == "forward.k_below_one") {
      CHECK_FALSE(c.pass);
      CHECK(c.threshold == 0.1);
    }
}

TEST_CASE("theorem B without dilatation") {
  json o = small_planar();
  o["mu"] = {{"k", 0.0}};
  o["g"] = {"pole:0,2", "one"};
  o["h_g"] = "pole:0,2";
  o["h_j_max"] = 3;
  const VerdictReport r = run_theorem_b(ScenarioConfig::with_overrides("theorem-b", o));
  CHECK(r.overall);
  for (const auto& h : r.details["h_correction"]) {
    CHECK(h["H"][0] == 0.0);
    CHECK(h["H"][1] == 0.0);
  }
}

TEST_CASE("theorem B stops at a failed precondition") {
  json o = small_planar();
  // |mu| = k right up to the axis: tau = k^2/|y| is not a vanishing Carleson measure
  o["mu"] = {{"exponent", 0.0}};
  o["h_j_max"] = 3;
  const VerdictReport r = run_theorem_b(ScenarioConfig::with_overrides("theorem-b", o));
  CHECK_FALSE(r.overall);
  CHECK(has_check(r, "precondition."));
  CHECK_FALSE(has_check(r, "equivalence."));
  CHECK_FALSE(has_check(r, "h_correction."));
}

TEST_CASE("corollary on the flat curve") {
  json o = small_planar();
  o["mu"] = {{"k", 0.0}};
  const VerdictReport r = run_corollary(ScenarioConfig::with_overrides("corollary", o));
  CHECK(r.overall);
  CHECK(r.details["max_deviation_from_line"] == 0.0);
  CHECK(r.details["profiles"]["step"]["gamma_bounded"] == false);
  CHECK(r.details["profiles"]["one"]["line_bounded"] == true);
}
