#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ssti/power_flow.hpp"
#include "ssti/scenario.hpp"
#include "ssti/shaft.hpp"
#include "ssti/trace.hpp"

namespace ssti {

/// Sinusoidal mechanical-torque perturbation at the generator mass,
/// amplitude in pu of the machine torque base, zero phase at switch-on.
/// A nonzero ramp applies a raised-cosine envelope over the first ramp_s
/// after switch-on and the last ramp_s before switch-off, so the injection
/// carries no step-like onset energy into lightly damped torsional modes
/// (their free ring would otherwise outlive any practical settle window).
struct TmTone {
  double frequency_hz = 0.0;
  double amplitude_pu = 0.0;
  double t_on_s = 0.0;
  double t_off_s = std::numeric_limits<double>::infinity();
  double ramp_s = 0.0;
};

/// Accumulated power bookkeeping of one run, pu*s on the system base. The
/// residual of a faithful run is small against the turnover; a blow-up of
/// the residual is the classic symptom of a sign or base error somewhere in
/// the coupling.
struct EnergyAudit {
  double airgap = 0.0;      ///< machine air-gap power te*omega, integrated
  double field = 0.0;       ///< excitation source input
  double converter = 0.0;   ///< VSC injection at its PCC
  double source = 0.0;      ///< Thevenin source delivery
  double dissipated = 0.0;  ///< machine + network resistive losses
  double storage_delta = 0.0;  ///< change of magnetic/electric stored energy

  double residual() const {
    return airgap + field + converter + source - dissipated - storage_delta;
  }
  double turnover() const;
};

/// Fixed-step orchestrator of one scenario run: torsional shaft chain,
/// synchronous machine, dq network, converter with its damping controller,
/// and the scheduled grid events.
///
/// Coupling uses one-step-delay exchange: each step the shaft advances on
/// the previous air-gap torque, the machine and converter advance on the
/// previous bus voltages, then the network solves the new voltages from the
/// fresh injections. The mechanical chain is integrated with the trapezoidal
/// rule; the electrical torque enters at the generator mass, as does the
/// scheduled mechanical torque (turbine-stage distribution is not modeled,
/// which keeps the torsional equilibrium twist-free).
///
/// With scenario.standin.enabled the whole electrical side is replaced by
/// the analytic torque law of StandinParams, acting on the shaft-base
/// quantities; the quadrature term uses the frequency of the tone active at
/// each instant.
class SimEngine {
 public:
  /// Validates the scenario and solves the initial operating point; throws
  /// std::runtime_error with the mismatch report when the scheduled transfer
  /// is electrically infeasible.
  explicit SimEngine(const Scenario& sc);

  void add_tm_tone(const TmTone& tone);
  void clear_tm_tones() { tones_.clear(); }

  /// Runs the full scenario from the initialized operating point. Numeric
  /// divergence (any logged channel beyond sim.divergence_limit_pu, or a
  /// non-finite value) stops the run and is reported on the trace, not
  /// thrown. Channels:
  ///   omega_mass_<i>  absolute speed of mass i, pu
  ///   delta_omega     generator speed deviation, pu
  ///   te, tm          air-gap and mechanical torque, machine-base pu
  ///   p_pcc, q_pcc    converter injection at its PCC, converter-base pu
  ///   omega_net       PLL frequency estimate, pu
  ///   p_ssdc          damping-controller power addition, converter-base pu
  ///   limiter_active  1 while the current limit or SSDC saturation binds
  ///   blocked         1 while the converter is undervoltage-blocked
  SimTrace run();

  /// Operating point from initialization (undefined in stand-in mode).
  const PowerFlow& operating_point() const { return pf_; }

  /// Largest machine flux derivative at the initialized state, pu/s.
  double quiescence_pu_per_s() const { return quiescence_; }

  /// Power bookkeeping of the last run (zeros in stand-in mode).
  const EnergyAudit& energy_audit() const { return audit_; }

  const ShaftModel& shaft() const { return shaft_; }

 private:
  double tones_at(double t_s) const;
  double active_tone_hz(double t_s) const;

  Scenario sc_;
  ShaftModel shaft_;  ///< lumped when the scenario asks for it
  int n_mass_ = 0;
  int gen_ = 0;  ///< zero-based generator mass index

  // Trapezoidal update of x = (speed deviations pu, angle deviations rad):
  // lhs_ * x' = rhs_ * x + dt/2 * B (u + u'), factored once.
  Eigen::PartialPivLU<Eigen::MatrixXd> lhs_;
  Eigen::MatrixXd rhs_;
  Eigen::VectorXd hinv2_;  ///< 1/(2 H_i)

  PowerFlow pf_;
  double tm0_pu_ = 0.0;     ///< steady mechanical torque, machine base
  double delta0_rad_ = 0.0; ///< steady rotor angle in the network frame
  double te_ratio_ = 1.0;   ///< machine torque base over shaft torque base
  double quiescence_ = 0.0;

  std::vector<TmTone> tones_;
  EnergyAudit audit_;
};

}  // namespace ssti
