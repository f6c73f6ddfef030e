#include "ssti/vsc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ssti {

Vsc::Vsc(const HvdcParams& params, double base_frequency_hz) : p_(params) {
  p_.validate();
  if (!p_.enabled) {
    throw std::invalid_argument("converter model built from a disabled hvdc section");
  }
  w_s_ = 2.0 * std::numbers::pi * base_frequency_hz;
  p_ref_ = p_.p_setpoint_pu;
  q_ref_ = p_.q_setpoint_pu;
}

void Vsc::initialize(cplx v_pcc, cplx i_injected) {
  v_pcc_ = v_pcc;
  theta_ = std::arg(v_pcc);
  zeta_ = 0.0;
  omega_net_ = 1.0;
  i_dq_ = i_injected * std::polar(1.0, -theta_);
  // Preload the integral terms so the proportional paths see zero error.
  integ_p_ = i_dq_.real();
  integ_q_ = -i_dq_.imag();
  blocked_ = false;
  limited_ = false;
}

cplx Vsc::step(cplx v_pcc, double p_aux_pu, double dt_s) {
  v_pcc_ = v_pcc;
  const cplx v_pll = v_pcc * std::polar(1.0, -theta_);
  const double vmag = std::abs(v_pll);
  blocked_ = vmag < p_.blocking_voltage_pu;

  // PLL. The error is normalized with a floor so that a sag cannot blow up
  // the loop gain; while blocked the loop coasts on its integral term.
  const double eps =
      blocked_ ? 0.0 : v_pll.imag() / std::max(vmag, p_.blocking_voltage_pu);
  zeta_ += dt_s * p_.pll_ki * eps;
  const double dw = p_.pll_kp * eps + zeta_;  // rad/s above nominal
  theta_ = std::remainder(theta_ + dt_s * dw, 2.0 * std::numbers::pi);
  omega_net_ = 1.0 + dw / w_s_;

  // Outer loops act on the power of the previously injected current. In the
  // PLL frame the voltage is (nearly) real, so d-current carries P and
  // q-current carries -Q.
  const cplx s_meas = v_pcc * std::conj(current());
  const double e_p = p_ref_ + p_aux_pu - s_meas.real();
  const double e_q = q_ref_ - s_meas.imag();
  double id_ref = p_.power_loop_kp * e_p + integ_p_;
  double iq_ref = -(p_.power_loop_kp * e_q + integ_q_);

  if (blocked_) {
    id_ref = 0.0;
    iq_ref = 0.0;
    limited_ = false;
  } else {
    const double mag = std::hypot(id_ref, iq_ref);
    limited_ = mag > p_.current_limit_pu;
    if (limited_) {
      const double scale = p_.current_limit_pu / mag;
      id_ref *= scale;
      iq_ref *= scale;
    } else {
      // Conditional integration: the integral terms only move while the
      // references are delivered, which stops limit windup.
      integ_p_ += dt_s * p_.power_loop_ki * e_p;
      integ_q_ += dt_s * p_.power_loop_ki * e_q;
    }
  }

  // Closed inner loop as an exact first-order lag over the step.
  const double alpha = -std::expm1(-p_.current_loop_bw_rad * dt_s);
  i_dq_ += alpha * (cplx(id_ref, iq_ref) - i_dq_);
  return current();
}

cplx Vsc::current() const { return i_dq_ * std::polar(1.0, theta_); }

double Vsc::p_ac_pu() const { return (v_pcc_ * std::conj(current())).real(); }

double Vsc::q_ac_pu() const { return (v_pcc_ * std::conj(current())).imag(); }

}  // namespace ssti
