#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <vector>

#include "ssti/network.hpp"
#include "ssti/power_flow.hpp"
#include "ssti/scenario.hpp"
#include "test_util.hpp"

using namespace ssti;

namespace {

Scenario study() {
  return load_scenario(std::string(SSTI_SCENARIO_DIR) + "/aramon.scn");
}

// Phasor solution of the network at the base frequency with the source node
// eliminated; a frequency-domain route independent of the companion stepping.
Eigen::VectorXcd phasor_solve(const DqNetwork& net, cplx i_mach, cplx i_hvdc) {
  const int n = net.bus_count();
  const Eigen::MatrixXcd y = net.fundamental_admittance();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(kBusMachine) += i_mach;
  rhs(kBusHvdc) += i_hvdc;
  rhs -= y.block(0, n, n, 1) * net.source_emf();
  return y.topLeftCorner(n, n).partialPivLu().solve(rhs);
}

}  // namespace

TEST_CASE("power flow satisfies hand-written KCL on the study case") {
  const Scenario sc = study();
  const PowerFlow pf = solve_power_flow(sc, 1550.0);
  CHECK(pf.max_mismatch_pu < 1e-8);

  // Impedances rebuilt here from the raw scenario numbers with plain complex
  // arithmetic, not through the network class.
  const double z_base = 400.0 * 400.0 / 1000.0;
  const cplx z_xfmr = cplx(0.003, 0.11) * (1000.0 / 778.0);
  const cplx z_line_m = cplx(0.027, 0.27) * 10.0 / z_base;
  const cplx z_line_h = cplx(0.027, 0.27) * 30.0 / z_base;
  const double z_th_mag = 1000.0 / 1550.0;
  const cplx z_th =
      z_th_mag / std::sqrt(101.0) * cplx(1.0, 10.0);  // X/R = 10

  // Shunts: machine terminal equipment plus line charging halves, each with
  // the 1e-3 loss tangent (z = (tan_d - j)/B).
  const auto y_shunt = [](double b) { return b / cplx(1e-3, -1.0); };
  const cplx y_g = y_shunt(0.004 * 778.0 / 1000.0);
  const double b_line_m = 2.8e-6 * 10.0 * z_base;
  const double b_line_h = 2.8e-6 * 30.0 * z_base;
  const cplx y_a = y_shunt(b_line_m / 2.0);
  const cplx y_n = y_shunt(b_line_m / 2.0) + y_shunt(b_line_h / 2.0);
  const cplx y_h = y_shunt(b_line_h / 2.0);

  const cplx v_g = pf.v_bus(kBusMachine);
  const cplx v_a = pf.v_bus(kBusPlantHv);
  const cplx v_n = pf.v_bus(kBusNetwork);
  const cplx v_h = pf.v_bus(kBusHvdc);

  const cplx i_xfmr = (v_g - v_a) / z_xfmr;       // machine bus -> plant HV
  const cplx i_line_m = (v_a - v_n) / z_line_m;   // plant HV -> network
  const cplx i_line_h = (v_h - v_n) / z_line_h;   // converter -> network
  const cplx i_src = (pf.emf - v_n) / z_th;       // source -> network

  // KCL at each bus against the scheduled injections.
  CHECK(std::abs(pf.i_machine - i_xfmr - v_g * y_g) < 1e-8);
  CHECK(std::abs(i_xfmr - i_line_m - v_a * y_a) < 1e-8);
  CHECK(std::abs(pf.i_hvdc - i_line_h - v_h * y_h) < 1e-8);
  CHECK(std::abs(i_line_m + i_line_h + i_src - v_n * y_n) < 1e-8);

  // Scheduled powers on the system base.
  const cplx s_mach = v_g * std::conj(pf.i_machine);
  const cplx s_hvdc = v_h * std::conj(pf.i_hvdc);
  CHECK(s_mach.real() == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(s_hvdc.real() == doctest::Approx(-0.9).epsilon(1e-8));
  CHECK(s_hvdc.imag() == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(std::abs(v_g) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("power flow reports an infeasible operating point") {
  const Scenario sc = study();
  CHECK_THROWS_AS(solve_power_flow(sc, 100.0), std::runtime_error);
}

TEST_CASE("steady-state initialization holds the operating point") {
  const Scenario sc = study();
  const PowerFlow pf = solve_power_flow(sc, 1550.0);
  DqNetwork net(sc, 1550.0, sc.sim.dt_s);
  net.set_source_emf(pf.emf);
  net.init_steady(pf.v_bus, pf.i_machine, pf.i_hvdc);
  const Eigen::VectorXcd v0 = pf.v_bus;
  double worst = 0.0;
  for (int k = 0; k < 2000; ++k) {
    net.step(pf.i_machine, pf.i_hvdc);
    for (int b = 0; b < net.bus_count(); ++b) {
      worst = std::max(worst, std::abs(net.voltage(b) - v0(b)));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("stepping from rest converges to the phasor solution") {
  const Scenario sc = study();
  const PowerFlow pf = solve_power_flow(sc, 1550.0);
  DqNetwork net(sc, 1550.0, sc.sim.dt_s);
  net.set_source_emf(pf.emf);
  // The slowest network mode sits near -7 1/s; three seconds buries the
  // start-up transient well below the tolerance.
  const int steps = static_cast<int>(3.0 / sc.sim.dt_s);
  for (int k = 0; k < steps; ++k) net.step(pf.i_machine, pf.i_hvdc);
  const Eigen::VectorXcd v_ref = phasor_solve(net, pf.i_machine, pf.i_hvdc);
  for (int b = 0; b < net.bus_count(); ++b) {
    CHECK(std::abs(net.voltage(b) - v_ref(b)) < 1e-7);
    CHECK(std::abs(net.voltage(b) - pf.v_bus(b)) < 1e-7);
  }
}

TEST_CASE("short-circuit power change settles onto the new phasor solution") {
  const Scenario sc = study();
  const PowerFlow pf = solve_power_flow(sc, 1550.0);
  DqNetwork net(sc, 1550.0, sc.sim.dt_s);
  net.set_source_emf(pf.emf);
  net.init_steady(pf.v_bus, pf.i_machine, pf.i_hvdc);
  net.set_s_sc(1350.0);
  const int steps = static_cast<int>(3.0 / sc.sim.dt_s);
  for (int k = 0; k < steps; ++k) net.step(pf.i_machine, pf.i_hvdc);
  const Eigen::VectorXcd v_ref = phasor_solve(net, pf.i_machine, pf.i_hvdc);
  for (int b = 0; b < net.bus_count(); ++b) {
    CHECK(std::abs(net.voltage(b) - v_ref(b)) < 1e-7);
  }
  // The weaker grid sags the network bus under the same import.
  CHECK(std::abs(v_ref(kBusNetwork)) < std::abs(pf.v_bus(kBusNetwork)));
}

TEST_CASE("transient energy balance closes on a lossless network") {
  Scenario sc = study();
  sc.transformer.r_pu = 0.0;
  sc.line_machine.r_ohm_per_km = 0.0;
  sc.line_hvdc.r_ohm_per_km = 0.0;
  sc.grid.x_over_r = 1e7;

  const PowerFlow pf = solve_power_flow(sc, 1550.0);
  DqNetwork net(sc, 1550.0, sc.sim.dt_s);
  net.set_source_emf(pf.emf);
  net.init_steady(pf.v_bus, pf.i_machine, pf.i_hvdc);

  // Ramp the machine injection up 10% over 2 ms (a step would make the
  // energy delivered during the straddling interval ambiguous at O(dt)) and
  // audit input vs stored energy.
  const double t_ramp = 2e-3;
  const auto factor = [&](double t) {
    if (t >= t_ramp) return 1.1;
    return 1.0 +
           0.05 * (1.0 - std::cos(std::numbers::pi * t / t_ramp));
  };
  cplx i_mach = pf.i_machine;
  const cplx i_hvdc = pf.i_hvdc;
  const auto power_in = [&] {
    return net.source_power() +
           std::real(net.voltage(kBusMachine) * std::conj(i_mach)) +
           std::real(net.voltage(kBusHvdc) * std::conj(i_hvdc)) -
           net.dissipated_power();
  };
  const double w0 = net.stored_energy();
  double e_in = 0.0;
  double gross = 0.0;
  double p_prev = power_in();
  const int steps = static_cast<int>(0.2 / sc.sim.dt_s);
  for (int k = 0; k < steps; ++k) {
    i_mach = pf.i_machine * factor((k + 1) * sc.sim.dt_s);
    net.step(i_mach, i_hvdc);
    const double p_now = power_in();
    e_in += 0.5 * (p_prev + p_now) * sc.sim.dt_s;
    gross += 0.5 * (std::abs(p_prev) + std::abs(p_now)) * sc.sim.dt_s;
    p_prev = p_now;
  }
  const double dw = net.stored_energy() - w0;
  // A factor or sign error would show at O(1) of the throughput; the
  // observed closure is O(dt^2), a few 1e-9 relative.
  CHECK(std::abs(dw - e_in) < 1e-7 * std::max(gross, 1e-6));
}

TEST_CASE("blocking filter adds an internal node and still initializes") {
  Scenario sc = study();
  sc.filter.enabled = true;
  const PowerFlow pf = solve_power_flow(sc, 1550.0);
  DqNetwork net(sc, 1550.0, sc.sim.dt_s);
  CHECK(net.bus_count() == 5);
  net.set_source_emf(pf.emf);
  net.init_steady(pf.v_bus, pf.i_machine, pf.i_hvdc);
  const Eigen::VectorXcd v0 = pf.v_bus;
  double worst = 0.0;
  for (int k = 0; k < 2000; ++k) {
    net.step(pf.i_machine, pf.i_hvdc);
    for (int b = 0; b < net.bus_count(); ++b) {
      worst = std::max(worst, std::abs(net.voltage(b) - v0(b)));
    }
  }
  CHECK(worst < 1e-9);
  // At the base frequency the tuned-band filter is nearly transparent: the
  // machine terminal voltage barely moves relative to the no-filter case.
  const Scenario plain = study();
  const PowerFlow pf0 = solve_power_flow(plain, 1550.0);
  CHECK(std::abs(pf.v_bus(kBusPlantHv) - pf0.v_bus(kBusPlantHv)) < 0.02);
}

TEST_CASE("machine-side per-unit conversions scale with the rating bases") {
  // Halving the system-side line length must not change anything expressed
  // on the machine base; this guards the base-conversion factors.
  const Scenario sc = study();
  const PowerFlow pf = solve_power_flow(sc, 1550.0);
  // Machine current on its own base: same voltage base, current scales by
  // the MVA ratio.
  const cplx i_mach_machine_base = pf.i_machine * (1000.0 / 778.0);
  const cplx v_g = pf.v_bus(kBusMachine);
  const cplx s_machine_base = v_g * std::conj(i_mach_machine_base);
  CHECK(s_machine_base.real() ==
        doctest::Approx(700.0 / 778.0).epsilon(1e-8));
}
