#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "ssti/scenario.hpp"

using namespace ssti;

namespace {

std::string bundled() { return std::string(SSTI_SCENARIO_DIR) + "/aramon.scn"; }

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

/// Message check helper: parse must fail and mention the given needle.
void expect_parse_error(const std::string& text, const std::string& needle) {
  try {
    (void)parse_scenario(text, "doc");
    FAIL_CHECK("expected parse error mentioning '" << needle << "'");
  } catch (const std::exception& e) {
    INFO("message: " << e.what());
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

std::string minimal_standin() {
  return R"(name = "standin"
[shaft]
inertia_kgm2 = [1.0, 1.0]
stiffness_nm_per_rad = [1.0]
damping_nms_per_rad = [0.0]
generator_index = 2
base_power_mva = 100.0
[standin]
enabled = true
de = 2.0
ke = 0.5
)";
}

}  // namespace

TEST_CASE("bundled study case loads and is valid") {
  const Scenario s = load_scenario(bundled());
  CHECK(s.name == "aramon");
  CHECK(s.base_frequency_hz == 50.0);
  CHECK(s.shaft.mass_count() == 6);
  CHECK(s.shaft.inertia_kgm2[0] == 1293.0);
  CHECK(s.shaft.stiffness_nm_per_rad[4] == 7.1e6);
  CHECK(s.shaft.generator_index == 5);
  CHECK(s.machine.rated_mva == 778.0);
  CHECK(s.grid.s_sc_mva == 1550.0);
  REQUIRE(s.grid.events.size() == 1);
  CHECK(s.grid.events[0].t_s == 2.0);
  CHECK(s.grid.events[0].delta_mva == -200.0);
  CHECK(s.grid.s_sc_at(1.999) == 1550.0);
  CHECK(s.grid.s_sc_at(2.0) == 1350.0);
  CHECK(s.hvdc.enabled);
  CHECK(s.hvdc.p_setpoint_pu == -0.9);
  CHECK_FALSE(s.ssdc.enabled);
  CHECK_FALSE(s.filter.enabled);
  CHECK(s.sim.dt_s == 2e-05);
}

TEST_CASE("load -> save -> load yields an identical model") {
  const Scenario s1 = load_scenario(bundled());
  const std::string tmp = temp_path("ssti_roundtrip.scn");
  save_scenario(s1, tmp);
  const Scenario s2 = load_scenario(tmp);
  CHECK(identical(s1, s2));
  // Spot-check exact doubles through the round trip.
  CHECK(s1.shaft.stiffness_nm_per_rad[0] == s2.shaft.stiffness_nm_per_rad[0]);
  CHECK(s1.machine.xd_pp == s2.machine.xd_pp);
  CHECK(s1.hvdc.pll_ki == s2.hvdc.pll_ki);
  CHECK(s1.scan.refine_step_hz == s2.scan.refine_step_hz);
  CHECK(s1.grid.events[0].delta_mva == s2.grid.events[0].delta_mva);
  // Serialization is canonical: serializing again is byte-identical.
  CHECK(serialize_scenario(s1) == serialize_scenario(s2));
  std::filesystem::remove(tmp);
}

TEST_CASE("unknown key is rejected with its line number") {
  std::string text = minimal_standin();
  text += "\n[sim]\nddt_s = 1e-5\n";
  // The bad key sits on the last line of the document.
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  expect_parse_error(text, "doc:" + std::to_string(lines - 0));
  expect_parse_error(text, "unknown key 'ddt_s'");
}

TEST_CASE("unknown section is rejected") {
  expect_parse_error(minimal_standin() + "\n[shafts]\nfoo = 1\n", "unknown");
}

TEST_CASE("duplicate key is rejected") {
  expect_parse_error("name = \"a\"\nname = \"b\"\n", "duplicate key 'name'");
}

TEST_CASE("type mismatches carry line and column") {
  expect_parse_error(R"(name = "x"
[shaft]
inertia_kgm2 = 5.0
stiffness_nm_per_rad = []
damping_nms_per_rad = []
generator_index = 1
base_power_mva = 100.0
[standin]
enabled = true
de = 1.0
)",
                     "'inertia_kgm2' must be a list of numbers");
  expect_parse_error("name = 42\n", "'name' must be a quoted string");
}

TEST_CASE("non-integer where an integer is required") {
  std::string text = minimal_standin();
  const auto pos = text.find("generator_index = 2");
  text.replace(pos, 19, "generator_index = 2.5");
  expect_parse_error(text, "'generator_index' must be an integer");
}

TEST_CASE("malformed numbers and values are rejected") {
  std::string text = minimal_standin();
  const auto pos = text.find("de = 2.0");
  text.replace(pos, 8, "de = fast");
  expect_parse_error(text, "expected number");
}

TEST_CASE("validation failures name the offending field") {
  const Scenario good = load_scenario(bundled());

  Scenario bad = good;
  bad.machine.xd = 0.1;  // below xd_p
  try {
    bad.validate();
    FAIL_CHECK("expected validation error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("machine.xd") != std::string::npos);
  }

  bad = good;
  bad.grid.events = {{3.0, -100.0}, {1.0, -100.0}};
  try {
    bad.validate();
    FAIL_CHECK("expected validation error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("grid.events") != std::string::npos);
  }

  bad = good;
  bad.grid.events = {{1.0, -1600.0}};  // drives S_sc negative
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.sim.dt_s = 100e-6;  // above the 50 us cap
  try {
    bad.validate();
    FAIL_CHECK("expected validation error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("sim.dt_s") != std::string::npos);
  }

  bad = good;
  bad.scan.coarse_stop_hz = 80.0;  // beyond 1.2x base frequency
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("stand-in scenario needs no electrical sections") {
  const Scenario s = parse_scenario(minimal_standin(), "standin");
  CHECK(s.standin.enabled);
  CHECK(s.standin.de == 2.0);
  CHECK(s.standin.ke == 0.5);
  CHECK_FALSE(s.hvdc.enabled);
  // Round trip includes the zero-valued electrical sections without complaint.
  const Scenario s2 = parse_scenario(serialize_scenario(s), "rt");
  CHECK(identical(s, s2));
}

TEST_CASE("comments and blank lines are ignored, including '#' in strings") {
  const std::string text =
      "description = \"tuned for # testing\"  # trailing comment\n\n" + minimal_standin();
  const Scenario s = parse_scenario(text, "doc");
  CHECK(s.description == "tuned for # testing");
}
