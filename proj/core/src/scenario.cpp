#include "ssti/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace ssti {

namespace {

void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument(field + ": " + why);
}

void positive(double v, const std::string& field) {
  if (!(v > 0.0)) fail(field, "must be positive");
}

void non_negative(double v, const std::string& field) {
  if (!(v >= 0.0)) fail(field, "must be non-negative");
}

}  // namespace

void MachineParams::validate() const {
  positive(rated_mva, "machine.rated_mva");
  positive(rated_kv, "machine.rated_kv");
  positive(xd_pp, "machine.xd_pp");
  positive(xq_pp, "machine.xq_pp");
  if (!(xd > xd_p)) fail("machine.xd", "must exceed xd_p");
  if (!(xd_p > xd_pp)) fail("machine.xd_p", "must exceed xd_pp");
  if (!(xq > xq_pp)) fail("machine.xq", "must exceed xq_pp");
  positive(td0_p, "machine.td0_p");
  positive(td0_pp, "machine.td0_pp");
  positive(tq0_pp, "machine.tq0_pp");
  if (!(td0_p > td0_pp)) fail("machine.td0_p", "must exceed td0_pp");
  non_negative(ra, "machine.ra");
  non_negative(terminal_b_pu, "machine.terminal_b_pu");
  non_negative(p_mw, "machine.p_mw");
  if (p_mw > rated_mva) fail("machine.p_mw", "exceeds the machine rating");
  positive(v_setpoint_pu, "machine.v_setpoint_pu");
}

void TransformerParams::validate() const {
  positive(rated_mva, "transformer.rated_mva");
  non_negative(r_pu, "transformer.r_pu");
  positive(x_pu, "transformer.x_pu");
}

void LineParams::validate(const std::string& which) const {
  non_negative(r_ohm_per_km, which + ".r_ohm_per_km");
  positive(x_ohm_per_km, which + ".x_ohm_per_km");
  non_negative(b_us_per_km, which + ".b_us_per_km");
  positive(length_km, which + ".length_km");
}

double GridParams::s_sc_at(double t_s) const {
  double s = s_sc_mva;
  for (const auto& e : events)
    if (e.t_s <= t_s) s += e.delta_mva;
  return s;
}

void GridParams::validate() const {
  positive(nominal_kv, "grid.nominal_kv");
  positive(s_sc_mva, "grid.s_sc_mva");
  positive(x_over_r, "grid.x_over_r");
  double prev = -1.0;
  double s = s_sc_mva;
  for (const auto& e : events) {
    if (e.t_s < 0.0) fail("grid.events", "event times must be non-negative");
    if (e.t_s < prev) fail("grid.events", "event times must be non-decreasing");
    prev = e.t_s;
    s += e.delta_mva;
    if (!(s > 0.0)) fail("grid.events", "short-circuit power must stay positive after every event");
  }
}

void HvdcParams::validate() const {
  if (!enabled) return;
  positive(rated_mva, "hvdc.rated_mva");
  if (std::abs(p_setpoint_pu) > 1.0) fail("hvdc.p_setpoint_pu", "magnitude above 1 pu of the converter rating");
  if (std::abs(q_setpoint_pu) > 1.0) fail("hvdc.q_setpoint_pu", "magnitude above 1 pu of the converter rating");
  positive(pll_kp, "hvdc.pll_kp");
  positive(pll_ki, "hvdc.pll_ki");
  positive(current_loop_bw_rad, "hvdc.current_loop_bw_rad");
  non_negative(power_loop_kp, "hvdc.power_loop_kp");
  positive(power_loop_ki, "hvdc.power_loop_ki");
  if (!(current_limit_pu >= 1.0)) fail("hvdc.current_limit_pu", "must be at least 1 pu");
  if (!(blocking_voltage_pu > 0.0 && blocking_voltage_pu < 1.0))
    fail("hvdc.blocking_voltage_pu", "must lie in (0, 1)");
  // The PLL natural frequency sqrt(ki) must sit below the inner current
  // loop bandwidth or the cascade separation assumption collapses.
  if (!(std::sqrt(pll_ki) < current_loop_bw_rad))
    fail("hvdc.pll_ki", "PLL natural frequency must lie below the current loop bandwidth");
}

void SsdcParams::validate(double base_frequency_hz) const {
  if (!enabled) return;
  if (!(center_frequency_hz > 0.0 && center_frequency_hz < base_frequency_hz))
    fail("ssdc.center_frequency_hz", "must lie inside (0, base frequency)");
  positive(quality_factor, "ssdc.quality_factor");
  non_negative(t1_s, "ssdc.t1_s");
  positive(t2_s, "ssdc.t2_s");
  non_negative(gain, "ssdc.gain");
  positive(output_limit_pu, "ssdc.output_limit_pu");
}

void BlockingFilter::validate(double base_frequency_hz) const {
  if (!enabled) return;
  if (!(tuned_frequency_hz > 0.0 && tuned_frequency_hz < base_frequency_hz))
    fail("filter.tuned_frequency_hz", "must lie inside (0, base frequency)");
  positive(quality_factor, "filter.quality_factor");
  positive(peak_impedance_pu, "filter.peak_impedance_pu");
}

void StandinParams::validate() const {
  if (!enabled) return;
  if (rational && !(a0 != 0.0 || a1 != 0.0 || a2 != 0.0))
    fail("standin.a0", "rational transfer function needs a nonzero denominator");
}

void SimParams::validate() const {
  positive(dt_s, "sim.dt_s");
  if (dt_s > 50e-6) fail("sim.dt_s", "must not exceed 50 microseconds");
  positive(duration_s, "sim.duration_s");
  if (decimation < 1) fail("sim.decimation", "must be at least 1");
  positive(divergence_limit_pu, "sim.divergence_limit_pu");
}

void ScanParams::validate(double base_frequency_hz) const {
  positive(amplitude_pu, "scan.amplitude_pu");
  if (settle_periods < 1) fail("scan.settle_periods", "must be at least 1");
  if (measure_periods < 1) fail("scan.measure_periods", "must be at least 1");
  const double fmax = 1.2 * base_frequency_hz;
  if (!(coarse_start_hz > 0.0)) fail("scan.coarse_start_hz", "must be positive");
  if (!(coarse_stop_hz > coarse_start_hz)) fail("scan.coarse_stop_hz", "must exceed coarse_start_hz");
  if (coarse_stop_hz > fmax) fail("scan.coarse_stop_hz", "beyond 1.2x the base frequency");
  positive(coarse_step_hz, "scan.coarse_step_hz");
  non_negative(refine_span_hz, "scan.refine_span_hz");
  positive(refine_step_hz, "scan.refine_step_hz");
  if (max_tones < 1 || max_tones > 3) fail("scan.max_tones", "must lie in [1, 3]");
}

void ProtectionParams::validate() const {
  positive(pickup_pu, "protection.pickup_pu");
  positive(reset_pu, "protection.reset_pu");
  if (!(reset_pu < pickup_pu)) fail("protection.reset_pu", "must be below pickup_pu");
  if (!(headroom > 1.0)) fail("protection.headroom", "must exceed 1");
  positive(response_damping_pu, "protection.response_damping_pu");
}

void Scenario::validate() const {
  if (name.empty()) fail("name", "must not be empty");
  positive(base_frequency_hz, "base_frequency_hz");
  positive(system_base_mva, "system_base_mva");
  shaft.validate();
  if (shaft.base_frequency_hz != base_frequency_hz)
    fail("shaft.base_frequency_hz", "must equal the scenario base frequency");
  machine.validate();
  transformer.validate();
  grid.validate();
  line_machine.validate("line.machine");
  line_hvdc.validate("line.hvdc");
  hvdc.validate();
  ssdc.validate(base_frequency_hz);
  if (ssdc.enabled && !hvdc.enabled) fail("ssdc.enabled", "needs the HVDC converter enabled");
  filter.validate(base_frequency_hz);
  standin.validate();
  sim.validate();
  scan.validate(base_frequency_hz);
  protection.validate();
}

bool identical(const Scenario& a, const Scenario& b) {
  return serialize_scenario(a) == serialize_scenario(b);
}

}  // namespace ssti
