#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rsfutures/cli.hpp"
#include "rsfutures/config.hpp"
#include "rsfutures/errors.hpp"

using namespace rsf;
namespace fs = std::filesystem;

namespace {

const char* kBase = R"({
  "model": {"kind": "gbm", "mu_1": -0.2, "mu_2": 0.2,
            "sigma_1": 0.2, "sigma_2": 0.3, "zeta_1": 0.1, "zeta_2": 0.3},
  "measures": {"q": [[-2, 2], [4, -4]], "qt": [[-2, 2], [4, -4]]},
  "portfolio": {"T1": 0.6, "T2": 0.8, "gamma": 1.0, "w0": 1.0, "Ttilde": 0.6},
  "numerics": {"curve_points": 5},
  "simulation": {"paths": 2, "seed": 7, "dt": 0.1}
})";

fs::path scratch_dir() {
  fs::path p = fs::temp_directory_path() / "rsf_cfg_tests";
  fs::create_directories(p);
  return p;
}

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::path p = scratch_dir() / name;
  std::ofstream out(p);
  out << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// kBase with simulation.out_dir pointing at `dir`
std::string with_out_dir(const fs::path& dir) {
  auto j = nlohmann::json::parse(kBase);
  j["simulation"]["out_dir"] = dir.string();
  return j.dump();
}

}  // namespace

TEST_CASE("round trip through the canonical dump is stable") {
  RunConfig cfg = parse_config_text(kBase);
  const std::string dump = canonical_config_dump(cfg);
  RunConfig again = parse_config_text(dump);
  CHECK(canonical_config_dump(again) == dump);
  CHECK(fnv1a64(dump) == fnv1a64(canonical_config_dump(again)));
}

TEST_CASE("defaults are materialized on parse") {
  RunConfig cfg = parse_config_text(kBase);
  CHECK(cfg.n_x == 1024);
  CHECK(cfg.n_t == 400);
  CHECK(cfg.curve_points == 5);
  CHECK(cfg.sim.initial_regime == 1);
  CHECK(cfg.sim.threads == 1);
  CHECK(cfg.sim.horizon == 0.6);
  CHECK(cfg.sim.gamma == 1.0);
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.ce_horizon == 0.6);
  REQUIRE(cfg.maturities.size() == 2);
  CHECK(cfg.maturities[0] == 0.6);
  // defaults appear in the dump explicitly
  auto j = nlohmann::json::parse(canonical_config_dump(cfg));
  CHECK(j["numerics"]["n_x"] == 1024);
  CHECK(j["simulation"]["threads"] == 1);
}

TEST_CASE("unknown keys and sections are rejected by name") {
  auto j = nlohmann::json::parse(kBase);
  j["numerics"]["n_y"] = 3;
  try {
    parse_config_text(j.dump());
    FAIL("expected ConfigInvalid");
  } catch (const ConfigInvalid& e) {
    CHECK(std::string(e.what()).find("numerics.n_y") != std::string::npos);
  }
  auto k = nlohmann::json::parse(kBase);
  k["extras"] = nlohmann::json::object();
  CHECK_THROWS_AS(parse_config_text(k.dump()), ConfigInvalid);
}

TEST_CASE("incomplete portfolios are rejected") {
  auto j = nlohmann::json::parse(kBase);
  j["portfolio"].erase("T2");
  CHECK_THROWS_AS(parse_config_text(j.dump()), ConfigInvalid);
  auto k = nlohmann::json::parse(kBase);
  k["portfolio"]["Ttilde"] = 0.7;  // beyond T1
  CHECK_THROWS_AS(parse_config_text(k.dump()), ConfigInvalid);
}

TEST_CASE("forced switch times build a regime path") {
  auto j = nlohmann::json::parse(kBase);
  j["simulation"]["initial_regime"] = 2;
  j["simulation"]["switch_times"] = {{0.2, 1}, {0.45, 2}};
  RunConfig cfg = parse_config_text(j.dump());
  REQUIRE(cfg.forced.has_value());
  CHECK(cfg.forced->initial_state == 2);
  REQUIRE(cfg.forced->jumps.size() == 2);
  CHECK(cfg.forced->jumps[1].time == 0.45);
  CHECK(cfg.forced->state_at(0.3) == 1);
}

TEST_CASE("command driver maps failures to exit codes") {
  fs::remove_all(scratch_dir());
  // success
  fs::path out1 = scratch_dir() / "run1";
  fs::path good = write_temp("good.json", with_out_dir(out1));
  CHECK(run_command("phi", good.string(), "", {}, false) == 0);
  CHECK(fs::exists(out1 / "phi.csv"));
  CHECK(fs::exists(out1 / "manifest.json"));
  CHECK(fs::exists(out1 / "config_used.json"));

  // malformed json
  fs::path bad = write_temp("bad.json", "{ not json");
  CHECK(run_command("phi", bad.string(), "", {}, false) == 2);
  // missing file
  CHECK(run_command("phi", (scratch_dir() / "absent.json").string(), "", {},
                    false) == 2);
  // unknown command
  CHECK(run_command("frobnicate", good.string(), "", {}, false) != 0);

  // degenerate model: equal growth rates in both regimes
  auto j = nlohmann::json::parse(kBase);
  j["model"]["mu_1"] = 0.25;
  j["model"]["sigma_1"] = 0.5;
  j["model"]["mu_2"] = 0.34375;
  j["model"]["sigma_2"] = 0.25;
  j["simulation"]["out_dir"] = (scratch_dir() / "run_degenerate").string();
  fs::path degen = write_temp("degen.json", j.dump());
  CHECK(run_command("price", degen.string(), "", {}, false) == 3);
}

TEST_CASE("repeated runs write identical csv bytes") {
  fs::path out_a = scratch_dir() / "rep_a";
  fs::path out_b = scratch_dir() / "rep_b";
  fs::path cfg = write_temp("rep.json", with_out_dir(out_a));
  REQUIRE(run_command("simulate", cfg.string(), "", {}, false) == 0);
  REQUIRE(run_command("simulate", cfg.string(), out_b.string(), {}, false) ==
          0);
  for (const char* name : {"path_0000.csv", "path_0001.csv", "summary.csv"}) {
    const std::string a = slurp(out_a / name);
    REQUIRE(!a.empty());
    CHECK(a == slurp(out_b / name));
  }
  // config_used differs only in the out_dir override
  auto ja = nlohmann::json::parse(slurp(out_a / "config_used.json"));
  auto jb = nlohmann::json::parse(slurp(out_b / "config_used.json"));
  ja["simulation"].erase("out_dir");
  jb["simulation"].erase("out_dir");
  CHECK(ja == jb);
}

TEST_CASE("seed override changes the draws") {
  fs::path out_a = scratch_dir() / "seed_a";
  fs::path out_b = scratch_dir() / "seed_b";
  fs::path cfg = write_temp("seed.json", with_out_dir(out_a));
  REQUIRE(run_command("simulate", cfg.string(), "", {}, false) == 0);
  REQUIRE(run_command("simulate", cfg.string(), out_b.string(),
                      std::uint64_t{12345}, false) == 0);
  CHECK(slurp(out_a / "path_0000.csv") != slurp(out_b / "path_0000.csv"));
}
