#pragma once

#include <complex>

#include "ssti/scenario.hpp"

namespace ssti {

using cplx = std::complex<double>;

/// Averaged voltage-source converter: SRF-PLL, outer P/Q loops and a
/// first-order closed inner current loop. Converter-base per unit in the
/// network phasor frame; time in seconds.
///
/// Each step the PLL advances on the PCC voltage, the outer loops turn the
/// power errors into current references in the PLL frame, the references are
/// clamped to the current limit and the inner loop lags them first order.
/// Below the blocking voltage the converter injects nothing and the loop
/// integrators freeze.
class Vsc {
 public:
  Vsc(const HvdcParams& params, double base_frequency_hz);

  /// Locks the PLL to v_pcc and preloads the loop integrators so that the
  /// pair (v_pcc, i_injected) is a stationary point of the stepping.
  /// i_injected is converter-base, network frame.
  void initialize(cplx v_pcc, cplx i_injected);

  /// Advances one step and returns the injected current (converter base,
  /// network frame). p_aux_pu adds to the active-power reference; a damping
  /// controller attaches there.
  cplx step(cplx v_pcc, double p_aux_pu, double dt_s);

  /// PLL frequency estimate in pu of the base frequency.
  double omega_net_pu() const { return omega_net_; }
  bool blocked() const { return blocked_; }
  bool limited() const { return limited_; }
  /// Injected current, converter base, network frame.
  cplx current() const;
  /// AC-side power at the last seen PCC voltage, converter base, injection
  /// positive into the network.
  double p_ac_pu() const;
  double q_ac_pu() const;
  double angle_rad() const { return theta_; }

  void set_p_ref(double p_pu) { p_ref_ = p_pu; }
  void set_q_ref(double q_pu) { q_ref_ = q_pu; }
  double p_ref() const { return p_ref_; }
  double q_ref() const { return q_ref_; }

 private:
  HvdcParams p_;
  double w_s_ = 0.0;
  double p_ref_ = 0.0;
  double q_ref_ = 0.0;

  double theta_ = 0.0;      // PLL angle in the phasor frame
  double zeta_ = 0.0;       // PLL integral term, rad/s
  double omega_net_ = 1.0;  // PLL frequency estimate, pu
  double integ_p_ = 0.0;    // outer-loop integral terms, current units
  double integ_q_ = 0.0;
  cplx i_dq_;               // inner-loop current state, PLL frame
  cplx v_pcc_{1.0, 0.0};    // last PCC voltage
  bool blocked_ = false;
  bool limited_ = false;
};

}  // namespace ssti
