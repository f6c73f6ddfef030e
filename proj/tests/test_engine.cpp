#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ssti/csv.hpp"
#include "ssti/engine.hpp"
#include "ssti/network.hpp"
#include "ssti/scenario.hpp"
#include "ssti/trace.hpp"

using namespace ssti;

namespace {

Scenario study() { return load_scenario(SSTI_SCENARIO_DIR "/aramon.scn"); }

double rms(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace

TEST_CASE("initialization reaches a quiescent scheduled operating point") {
  SimEngine eng(study());

  CHECK(eng.quiescence_pu_per_s() < 1e-6);
  const PowerFlow& pf = eng.operating_point();
  CHECK(pf.max_mismatch_pu < 1e-8);
  // 700 MW on the 1000 MVA system base, delivered at the machine bus.
  CHECK(pf.s_machine.real() == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(std::abs(pf.v_bus(kBusMachine)) == doctest::Approx(1.0).epsilon(1e-9));
  // Converter draws 900 MW at unity reactive setpoint.
  CHECK(pf.s_hvdc.real() == doctest::Approx(-0.9).epsilon(1e-9));
  CHECK(pf.s_hvdc.imag() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("no-load shunt-free scenario flat-starts with vanishing currents") {
  Scenario sc = study();
  sc.machine.p_mw = 0.0;
  sc.hvdc.p_setpoint_pu = 0.0;
  sc.hvdc.q_setpoint_pu = 0.0;
  // Shunt-free so the trivial solution carries no charging current either.
  sc.machine.terminal_b_pu = 0.0;
  sc.line_machine.b_us_per_km = 0.0;
  sc.line_hvdc.b_us_per_km = 0.0;

  SimEngine eng(sc);
  const PowerFlow& pf = eng.operating_point();
  CHECK(std::abs(pf.i_machine) < 1e-9);
  CHECK(std::abs(pf.i_hvdc) < 1e-9);
  CHECK(std::abs(pf.v_bus(kBusMachine) - cplx(1.0, 0.0)) < 1e-9);

  sc.sim.duration_s = 0.2;
  SimTrace tr = SimEngine(sc).run();
  CHECK_FALSE(tr.aborted);
  for (double v : tr.signal("delta_omega")) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("scheduled transfer beyond network capability is an initialization error") {
  Scenario sc = study();
  // 100 MVA behind the source cannot carry a 700 MW dispatch plus the link
  // draw; the power flow has no solution and must say so.
  sc.grid.s_sc_mva = 100.0;
  sc.grid.events.clear();
  CHECK_THROWS_WITH_AS(SimEngine{sc}, doctest::Contains("power flow"),
                       std::runtime_error);
}

TEST_CASE("a stable operating point holds every channel constant over the run") {
  Scenario sc = study();
  sc.grid.events.clear();
  sc.sim.duration_s = 2.0;

  SimTrace tr = SimEngine(sc).run();
  CHECK_FALSE(tr.aborted);
  CHECK(tr.dt_s == doctest::Approx(sc.sim.dt_s * sc.sim.decimation));
  CHECK(tr.sample_count() == 10001);  // 2 s at 20 us, every tenth step
  for (size_t c = 0; c < tr.names.size(); ++c) {
    const auto& ch = tr.data[c];
    double worst = 0.0;
    for (double v : ch) worst = std::max(worst, std::abs(v - ch.front()));
    INFO("channel ", tr.names[c]);
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("repeated runs are bit-identical") {
  Scenario sc = study();
  sc.sim.duration_s = 1.0;
  sc.grid.events = {{0.4, -200.0}};

  const TmTone tone{14.07, 1e-3, 0.1, 0.9};
  SimEngine a(sc);
  a.add_tm_tone(tone);
  SimEngine b(sc);
  b.add_tm_tone(tone);
  SimTrace ta = a.run();
  SimTrace tb = b.run();
  SimTrace tc = a.run();  // same engine again

  REQUIRE(ta.sample_count() == tb.sample_count());
  REQUIRE(ta.sample_count() == tc.sample_count());
  for (size_t c = 0; c < ta.data.size(); ++c)
    for (int k = 0; k < ta.sample_count(); ++k) {
      REQUIRE(ta.data[c][k] == tb.data[c][k]);
      REQUIRE(ta.data[c][k] == tc.data[c][k]);
    }
}

TEST_CASE("halving the step changes the speed trace by less than one percent rms") {
  Scenario sc = study();
  sc.grid.events.clear();
  sc.sim.duration_s = 2.0;

  const TmTone tone{14.07, 1e-2, 0.1,
                    std::numeric_limits<double>::infinity()};
  SimEngine coarse(sc);
  coarse.add_tm_tone(tone);
  SimTrace tr1 = coarse.run();

  sc.sim.dt_s /= 2.0;
  sc.sim.decimation *= 2;  // identical logging grid
  SimEngine fine(sc);
  fine.add_tm_tone(tone);
  SimTrace tr2 = fine.run();

  REQUIRE(tr1.sample_count() == tr2.sample_count());
  const auto& w1 = tr1.signal("delta_omega");
  const auto& w2 = tr2.signal("delta_omega");
  std::vector<double> diff(w1.size());
  for (size_t k = 0; k < w1.size(); ++k) diff[k] = w1[k] - w2[k];
  CHECK(rms(w2) > 1e-6);  // the probe actually moved the shaft
  CHECK(rms(diff) / rms(w2) < 0.01);
}

TEST_CASE("growth_rate recovers constructed exponential envelopes") {
  const double dt = 2e-4;
  const int n = static_cast<int>(std::lround(6.0 / dt));

  std::vector<double> grow(n), decay(n);
  for (int k = 0; k < n; ++k) {
    const double t = k * dt;
    grow[k] = 1e-4 * std::exp(0.5 * t) *
              std::sin(2.0 * std::numbers::pi * 14.0 * t);
    decay[k] = 0.1 * std::exp(-1.0 * t) *
               std::sin(2.0 * std::numbers::pi * 22.0 * t);
  }
  CHECK(growth_rate(grow, dt, 14.0, 2.0) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(growth_rate(decay, dt, 22.0, 2.0) == doctest::Approx(-1.0).epsilon(0.02));

  std::vector<double> silent(n, 0.0);
  CHECK_THROWS_WITH_AS(growth_rate(silent, dt, 14.0, 2.0),
                       doctest::Contains("no detectable component"),
                       std::runtime_error);
  // A window under ten cycles of the target is rejected up front.
  CHECK_THROWS_AS(growth_rate(grow, dt, 14.0, 0.5), std::invalid_argument);
}

TEST_CASE("negative electrical damping diverges and is reported, not thrown") {
  Scenario sc = study();
  sc.grid.events.clear();
  sc.standin.enabled = true;
  sc.standin.de = -20.0;
  sc.standin.ke = 0.0;
  sc.sim.duration_s = 6.0;

  SimEngine eng(sc);
  eng.add_tm_tone({14.07, 1e-3, 0.0, 0.5});
  SimTrace tr = eng.run();

  CHECK(tr.aborted);
  CHECK(tr.abort_time_s > 0.5);
  CHECK(tr.abort_time_s < 6.0);
  CHECK(tr.abort_reason.find("reached") != std::string::npos);
  // The logged prefix still ends at the abort instant.
  CHECK(tr.time_at(tr.sample_count() - 1) == doctest::Approx(tr.abort_time_s));

  // The 14 Hz component of the prefix grows.
  const auto& dw = tr.signal("delta_omega");
  std::vector<double> prefix(dw.begin(),
                             dw.begin() + tr.sample_count() * 3 / 4);
  CHECK(growth_rate(prefix, tr.dt_s, 14.07, 1.0) > 0.5);
}

TEST_CASE("stand-in equilibrium is exactly torque-free") {
  Scenario sc = study();
  sc.grid.events.clear();
  sc.standin.enabled = true;
  sc.standin.de = 2.0;
  sc.standin.ke = 0.5;
  sc.sim.duration_s = 0.2;

  SimTrace tr = SimEngine(sc).run();
  CHECK_FALSE(tr.aborted);
  for (double v : tr.signal("delta_omega")) CHECK(v == 0.0);
  for (double v : tr.signal("te")) CHECK(v == 0.0);
  for (double v : tr.signal("omega_mass_3")) CHECK(v == 1.0);
  for (double v : tr.signal("p_pcc")) CHECK(v == 0.0);
}

TEST_CASE("energy bookkeeping closes over a perturbed run") {
  Scenario sc = study();
  sc.grid.events.clear();
  sc.sim.duration_s = 1.5;

  SimEngine eng(sc);
  eng.add_tm_tone({14.07, 1e-2, 0.2, 1.2});
  SimTrace tr = eng.run();
  CHECK_FALSE(tr.aborted);

  const EnergyAudit& audit = eng.energy_audit();
  CHECK(audit.turnover() > 0.1);
  CHECK(std::abs(audit.residual()) / audit.turnover() < 1e-3);
}

TEST_CASE("trace round-trips through csv") {
  Scenario sc = study();
  sc.grid.events.clear();
  sc.sim.duration_s = 0.05;

  SimTrace tr = SimEngine(sc).run();
  const std::string path =
      (std::filesystem::temp_directory_path() / "trace_roundtrip.csv")
          .string();
  save_trace_csv(tr, path);
  const CsvTable table = read_csv(path);
  std::filesystem::remove(path);

  REQUIRE(table.header.size() == tr.names.size() + 1);
  CHECK(table.header.front() == "t");
  for (size_t c = 0; c < tr.names.size(); ++c)
    CHECK(table.header[c + 1] == tr.names[c]);
  REQUIRE(table.row_count() == static_cast<size_t>(tr.sample_count()));
  for (int k = 0; k < tr.sample_count(); ++k) {
    CHECK(table.columns[0][k] == tr.time_at(k));
    for (size_t c = 0; c < tr.names.size(); ++c)
      CHECK(table.columns[c + 1][k] == tr.data[c][k]);
  }
}
