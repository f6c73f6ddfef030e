#pragma once

#include <complex>

#include <Eigen/Dense>

#include "ssti/scenario.hpp"

namespace ssti {

using cplx = std::complex<double>;

/// Synchronous machine with stator transients retained: five flux-linkage
/// states (stator d and q, field, one damper per axis), generator convention
/// (stator current positive out of the machine). Everything is per-unit on
/// the machine rating; time is in seconds. Mechanics live elsewhere: the
/// caller supplies rotor speed and angle each step.
///
/// Standard data (xd, xd', xd'', time constants) is converted to fundamental
/// winding parameters with the classical open-circuit formulas; the stator
/// leakage reactance, which standard data does not determine, is taken as
/// 0.6 * xd''.
class SyncMachine {
 public:
  SyncMachine(const MachineParams& p, double base_frequency_hz);

  struct Equilibrium {
    double delta_rad = 0.0;  ///< rotor q-axis angle in the network frame
    double te_pu = 0.0;      ///< air-gap torque = required mechanical torque
    double e_fd_pu = 0.0;    ///< field voltage on the stator-referred scale
  };

  /// Seeds the states from terminal phasor conditions (machine base,
  /// generator convention) so the machine is at steady state; field voltage
  /// and the returned torque are then held by the caller.
  Equilibrium initialize(cplx v_terminal, cplx i_terminal);

  /// Advances one trapezoidal step with the terminal voltage held over the
  /// interval. Returns the terminal current phasor (machine base, into the
  /// network).
  cplx step(cplx v_terminal, double omega_pu, double delta_rad, double dt_s);

  /// Terminal current step() would return for the same arguments, without
  /// committing any state. Together with interface_admittance this lets the
  /// caller solve machine and network simultaneously: predict at the current
  /// voltage, solve the network with the Norton pair, then commit with the
  /// voltage the solve produced.
  cplx predict_step(cplx v_terminal, double omega_pu, double delta_rad,
                    double dt_s) const;

  /// Terminal current phasor at the present state.
  cplx terminal_current(double delta_rad) const;

  double te() const;             ///< air-gap torque, pu on the machine base
  double e_fd() const { return e_fd_; }
  void set_e_fd(double v) { e_fd_ = v; }

  /// Magnetic field energy, pu*s on the machine base.
  double stored_energy() const;
  /// Resistive losses (stator and rotor) at the present currents, pu.
  double loss_power() const;
  /// Power delivered into the field winding by the excitation source, pu.
  double field_power() const;

  /// Flux-state time derivative at the given terminal conditions, for
  /// quiescence checks; pu flux per second.
  Eigen::VectorXd state_derivative(cplx v_terminal, double omega_pu,
                                   double delta_rad) const;

  /// Exact sensitivity of one trapezoidal step's terminal current to the
  /// end-of-step terminal voltage at rated speed (machine base), reduced to
  /// its rotation-invariant part so one complex shunt represents it at any
  /// rotor angle. The network folds this into its nodal matrix; the small
  /// remainder (rotor-axis asymmetry, off-rated speed) stays in the
  /// predicted injection and only multiplies the one-step voltage change.
  cplx interface_admittance(double dt_s) const;

  /// Derived fundamental parameters, exposed for verification.
  double x_l() const { return x_l_; }
  double x_ad() const { return x_ad_; }
  double x_aq() const { return x_aq_; }
  double x_fl() const { return x_fl_; }
  double x_kdl() const { return x_kdl_; }
  double x_kql() const { return x_kql_; }
  double r_f() const { return r_f_; }
  double r_kd() const { return r_kd_; }
  double r_kq() const { return r_kq_; }

 private:
  // State order: psi_d, psi_q, psi_f, psi_kd, psi_kq.
  using Vec5 = Eigen::Matrix<double, 5, 1>;
  using Mat5 = Eigen::Matrix<double, 5, 5>;

  Vec5 currents(const Vec5& psi) const;  ///< i_d, i_q, i_f, i_kd, i_kq
  Mat5 system_matrix(double omega_pu) const;
  Vec5 input(cplx v_terminal, double delta_rad) const;
  Vec5 advanced_state(cplx v_terminal, double omega_pu, double delta_rad,
                      double dt_s) const;  ///< one trapezoidal step, uncommitted

  double w_b_;   ///< electrical base speed, rad/s
  double ra_;
  double x_l_, x_ad_, x_aq_;
  double x_fl_, x_kdl_, x_kql_;
  double r_f_, r_kd_, r_kq_;
  Eigen::Matrix3d ld_inv_;  ///< (-i_d, i_f, i_kd) from (psi_d, psi_f, psi_kd)
  Eigen::Matrix2d lq_inv_;  ///< (-i_q, i_kq) from (psi_q, psi_kq)
  Eigen::Matrix<double, 5, 5> c_;  ///< currents = c_ * psi

  Vec5 psi_ = Vec5::Zero();
  double e_fd_ = 0.0;
  double omega_prev_ = 1.0;
  cplx v_prev_{0.0, 0.0};
  double delta_prev_ = 0.0;
};

}  // namespace ssti
