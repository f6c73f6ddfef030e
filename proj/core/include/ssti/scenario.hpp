#pragma once

#include <string>
#include <vector>

#include "ssti/shaft.hpp"

namespace ssti {

/// Synchronous machine, standard per-unit data on its own MVA base. The model
/// built from this is the 5-winding flux-linkage one (stator dq, field, one
/// d-axis damper, one q-axis damper), which is exactly what this parameter
/// set determines.
struct MachineParams {
  double rated_mva = 0.0;
  double rated_kv = 0.0;
  double xd = 0.0;      ///< d-axis synchronous reactance
  double xq = 0.0;      ///< q-axis synchronous reactance
  double xd_p = 0.0;    ///< d-axis transient reactance
  double xd_pp = 0.0;   ///< d-axis subtransient reactance
  double xq_pp = 0.0;   ///< q-axis subtransient reactance
  double td0_p = 0.0;   ///< d-axis transient open-circuit time constant, s
  double td0_pp = 0.0;  ///< d-axis subtransient open-circuit time constant, s
  double tq0_pp = 0.0;  ///< q-axis subtransient open-circuit time constant, s
  double ra = 0.0;      ///< stator resistance
  double terminal_b_pu = 0.0;   ///< terminal equipment shunt susceptance
  double p_mw = 0.0;            ///< dispatched active power
  double v_setpoint_pu = 1.0;   ///< terminal voltage held at initialization

  void validate() const;
};

struct TransformerParams {
  double rated_mva = 0.0;
  double r_pu = 0.0;  ///< on rated_mva
  double x_pu = 0.0;

  void validate() const;
};

struct LineParams {
  double r_ohm_per_km = 0.0;
  double x_ohm_per_km = 0.0;
  double b_us_per_km = 0.0;  ///< charging susceptance, microsiemens per km
  double length_km = 0.0;

  void validate(const std::string& which) const;
};

/// Scheduled step change of the network short-circuit power.
struct ScEvent {
  double t_s = 0.0;
  double delta_mva = 0.0;
};

struct GridParams {
  double nominal_kv = 400.0;
  double s_sc_mva = 0.0;  ///< initial short-circuit power at the network bus
  double x_over_r = 10.0;
  std::vector<ScEvent> events;

  double s_sc_at(double t_s) const;  ///< with all events at or before t applied
  void validate() const;
};

struct HvdcParams {
  bool enabled = true;
  double rated_mva = 0.0;
  double p_setpoint_pu = 0.0;  ///< injection into the AC network, converter base
  double q_setpoint_pu = 0.0;
  double pll_kp = 0.0;
  double pll_ki = 0.0;
  double current_loop_bw_rad = 0.0;  ///< closed inner current loop bandwidth
  double power_loop_kp = 0.0;
  double power_loop_ki = 0.0;
  double current_limit_pu = 1.0;
  double blocking_voltage_pu = 0.2;  ///< converter blocks below this PCC voltage

  void validate() const;
};

enum class LeadLagCentering {
  kAsPrinted,  ///< T1 = 1/(2*pi*f1*a); realized lead is slightly below the request
  kGeometric,  ///< T1 = 1/(2*pi*f1*sqrt(a)); realized lead equals the request at f1
};

/// Supplementary subsynchronous damping controller on the HVDC active-power
/// reference: band-pass -> lead-lag -> gain -> saturation, fed by the PLL
/// frequency estimate.
struct SsdcParams {
  bool enabled = false;
  double center_frequency_hz = 0.0;
  double quality_factor = 50.0;
  double t1_s = 0.0;
  double t2_s = 0.0;
  double gain = 0.0;
  double output_limit_pu = 0.05;

  void validate(double base_frequency_hz) const;
};

/// Series-inserted parallel RLC on the secondary of the generator step-up
/// transformer. tuned_frequency_hz is the physical (network-side) resonance.
struct BlockingFilter {
  bool enabled = false;
  double tuned_frequency_hz = 0.0;
  double quality_factor = 100.0;
  double peak_impedance_pu = 1.0;  ///< on the machine MVA base

  void validate(double base_frequency_hz) const;
};

/// Analytic LTI stand-in for the whole electrical system: Te responds to the
/// generator speed deviation through a known transfer function, so a scan can
/// be checked against closed-form values. The constant imaginary part ke is
/// realized per injected tone (quadrature via scaled derivative), which is
/// exact for single-tone injection.
struct StandinParams {
  bool enabled = false;
  double de = 0.0;  ///< constant real part, pu torque per pu speed
  double ke = 0.0;  ///< constant imaginary part at every frequency
  bool rational = false;  ///< add H(s) = (b0+b1*s+b2*s^2)/(a0+a1*s+a2*s^2)
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  double a0 = 1.0, a1 = 0.0, a2 = 0.0;

  void validate() const;
};

struct SimParams {
  double dt_s = 20e-6;
  double duration_s = 10.0;
  int decimation = 10;  ///< channel samples every this many steps
  double divergence_limit_pu = 100.0;

  void validate() const;
};

enum class ScanVariant { kRestart, kProgressive, kMultitone };

/// Default frequency plan and measurement windows for electrical-damping scans.
struct ScanParams {
  double amplitude_pu = 1e-3;
  int settle_periods = 10;
  int measure_periods = 20;
  ScanVariant variant = ScanVariant::kRestart;
  double coarse_start_hz = 1.0;
  double coarse_stop_hz = 59.0;
  double coarse_step_hz = 1.0;
  double refine_span_hz = 1.0;  ///< half-width of the refined band around each mode
  double refine_step_hz = 0.1;
  int max_tones = 3;  ///< per batch, multi-tone variant only

  void validate(double base_frequency_hz) const;
};

struct ProtectionParams {
  double pickup_pu = 0.01;
  double reset_pu = 0.005;
  double headroom = 20.0;  ///< allowance starts at headroom * pickup
  double response_damping_pu = 0.1;  ///< modal damping the allowance decay mirrors

  void validate() const;
};

struct Scenario {
  std::string name;
  std::string description;
  double base_frequency_hz = 50.0;
  double system_base_mva = 1000.0;
  LeadLagCentering leadlag_centering = LeadLagCentering::kAsPrinted;

  ShaftModel shaft;
  bool lumped = false;  ///< collapse the shaft to one mass for the run

  MachineParams machine;
  TransformerParams transformer;
  GridParams grid;
  LineParams line_machine;  ///< plant HV bus to network bus
  LineParams line_hvdc;     ///< converter bus to network bus
  HvdcParams hvdc;
  SsdcParams ssdc;
  BlockingFilter filter;
  StandinParams standin;
  SimParams sim;
  ScanParams scan;
  ProtectionParams protection;

  void validate() const;
};

/// Strict reader: unknown sections or keys, duplicate keys, type mismatches
/// and missing required keys are errors carrying "<origin>:line:col".
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
Scenario load_scenario(const std::string& path);

/// Canonical serialization; loading it back yields an identical model.
std::string serialize_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

/// Exact field-wise equality via the canonical serialization.
bool identical(const Scenario& a, const Scenario& b);

}  // namespace ssti
