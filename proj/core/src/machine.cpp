#include "ssti/machine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ssti {

namespace {

// Rotor frame mapping: f_d + j f_q = F * exp(-j(delta - pi/2)). With the
// q-axis at angle delta in the network frame, a phasor along the q-axis has
// f_d = 0, f_q = |F|.
cplx to_rotor(cplx f, double delta_rad) {
  return f * std::polar(1.0, -(delta_rad - std::numbers::pi / 2.0));
}

cplx to_network(cplx f_dq, double delta_rad) {
  return f_dq * std::polar(1.0, delta_rad - std::numbers::pi / 2.0);
}

}  // namespace

SyncMachine::SyncMachine(const MachineParams& p, double base_frequency_hz) {
  p.validate();
  w_b_ = 2.0 * std::numbers::pi * base_frequency_hz;
  ra_ = p.ra;

  // Stator leakage is not determined by standard data; the usual assumption
  // keeps the subtransient inductances realizable.
  x_l_ = 0.6 * p.xd_pp;
  x_ad_ = p.xd - x_l_;
  x_aq_ = p.xq - x_l_;

  // d-axis: transient level gives the field branch, subtransient the damper.
  x_fl_ = 1.0 / (1.0 / (p.xd_p - x_l_) - 1.0 / x_ad_);
  x_kdl_ = 1.0 / (1.0 / (p.xd_pp - x_l_) - 1.0 / x_ad_ - 1.0 / x_fl_);
  if (!(x_fl_ > 0.0) || !(x_kdl_ > 0.0)) {
    throw std::invalid_argument(
        "machine reactances are not realizable as a field plus one damper");
  }
  // The two rotor windings stay coupled through x_ad when the stator is
  // open, so the data-sheet time constants are matched exactly by solving
  // for both resistances jointly. With T1 = a2/r_f, T2 = b2/r_kd and
  // T3 = c2/r_kd, the open-circuit eigenvalue pair has sum T1 + T2 and
  // product T1 * T3, which pins r_kd through a quadratic; the larger root
  // keeps the damper as the fast winding and reduces to the familiar
  // per-winding formulas when the constants are far apart.
  const double x_par = 1.0 / (1.0 / x_ad_ + 1.0 / x_fl_);
  const double a2 = (x_ad_ + x_fl_) / w_b_;
  const double b2 = (x_ad_ + x_kdl_) / w_b_;
  const double c2 = (x_kdl_ + x_par) / w_b_;
  const double sum = p.td0_p + p.td0_pp;
  const double prod = p.td0_p * p.td0_pp;
  const double disc = sum * sum - 4.0 * prod * b2 / c2;
  if (!(disc > 0.0)) {
    throw std::invalid_argument(
        "machine d-axis time constants are too close to realize with a "
        "field plus one damper");
  }
  r_kd_ = c2 * (sum + std::sqrt(disc)) / (2.0 * prod);
  r_f_ = a2 * c2 / (prod * r_kd_);

  // q-axis: a single damper winding.
  x_kql_ = 1.0 / (1.0 / (p.xq_pp - x_l_) - 1.0 / x_aq_);
  if (!(x_kql_ > 0.0)) {
    throw std::invalid_argument(
        "machine q-axis reactances are not realizable with one damper");
  }
  r_kq_ = (x_kql_ + x_aq_) / (w_b_ * p.tq0_pp);

  Eigen::Matrix3d ld;
  ld << x_l_ + x_ad_, x_ad_, x_ad_,
        x_ad_, x_ad_ + x_fl_, x_ad_,
        x_ad_, x_ad_, x_ad_ + x_kdl_;
  ld_inv_ = ld.inverse();
  Eigen::Matrix2d lq;
  lq << x_l_ + x_aq_, x_aq_,
        x_aq_, x_aq_ + x_kql_;
  lq_inv_ = lq.inverse();

  // currents = c_ * psi with the generator-convention stator sign flip:
  // (-i_d, i_f, i_kd) = ld_inv * (psi_d, psi_f, psi_kd) and likewise in q.
  c_.setZero();
  const int dmap[3] = {0, 2, 3};  // psi_d, psi_f, psi_kd state slots
  for (int r = 0; r < 3; ++r) {
    const double sign = r == 0 ? -1.0 : 1.0;  // i_d flips
    for (int col = 0; col < 3; ++col) {
      c_(dmap[r], dmap[col]) = sign * ld_inv_(r, col);
    }
  }
  const int qmap[2] = {1, 4};  // psi_q, psi_kq
  for (int r = 0; r < 2; ++r) {
    const double sign = r == 0 ? -1.0 : 1.0;  // i_q flips
    for (int col = 0; col < 2; ++col) {
      c_(qmap[r], qmap[col]) = sign * lq_inv_(r, col);
    }
  }
}

SyncMachine::Vec5 SyncMachine::currents(const Vec5& psi) const {
  return c_ * psi;
}

SyncMachine::Mat5 SyncMachine::system_matrix(double omega_pu) const {
  // d psi/dt = w_b * (S(omega) + R * C) psi + input
  Mat5 a = Mat5::Zero();
  a.row(0) = ra_ * c_.row(0);   // + Ra i_d
  a.row(1) = ra_ * c_.row(1);   // + Ra i_q
  a.row(2) = -r_f_ * c_.row(2);
  a.row(3) = -r_kd_ * c_.row(3);
  a.row(4) = -r_kq_ * c_.row(4);
  a(0, 1) += omega_pu;   // + omega psi_q in the psi_d row
  a(1, 0) -= omega_pu;   // - omega psi_d in the psi_q row
  return w_b_ * a;
}

SyncMachine::Vec5 SyncMachine::input(cplx v_terminal, double delta_rad) const {
  const cplx v_dq = to_rotor(v_terminal, delta_rad);
  Vec5 u = Vec5::Zero();
  u(0) = v_dq.real();
  u(1) = v_dq.imag();
  u(2) = (r_f_ / x_ad_) * e_fd_;
  return w_b_ * u;
}

SyncMachine::Equilibrium SyncMachine::initialize(cplx v_terminal,
                                                 cplx i_terminal) {
  // Classical steady state: the q-axis lies along V + (Ra + jXq) I.
  const cplx e_q_dir =
      v_terminal + cplx(ra_, x_l_ + x_aq_) * i_terminal;
  const double delta = std::arg(e_q_dir);

  const cplx v_dq = to_rotor(v_terminal, delta);
  const cplx i_dq = to_rotor(i_terminal, delta);
  const double v_d = v_dq.real(), v_q = v_dq.imag();
  const double i_d = i_dq.real(), i_q = i_dq.imag();

  // Stator flux from the steady stator equations at rated speed.
  const double psi_d = v_q + ra_ * i_q;
  const double psi_q = -(v_d + ra_ * i_d);
  const double i_f = (psi_d + (x_l_ + x_ad_) * i_d) / x_ad_;

  psi_(0) = psi_d;
  psi_(1) = psi_q;
  psi_(2) = x_ad_ * (-i_d) + (x_ad_ + x_fl_) * i_f;
  psi_(3) = x_ad_ * (-i_d) + x_ad_ * i_f;   // damper current zero
  psi_(4) = x_aq_ * (-i_q);
  e_fd_ = x_ad_ * i_f;

  omega_prev_ = 1.0;
  v_prev_ = v_terminal;
  delta_prev_ = delta;

  Equilibrium eq;
  eq.delta_rad = delta;
  eq.te_pu = te();
  eq.e_fd_pu = e_fd_;
  return eq;
}

SyncMachine::Vec5 SyncMachine::advanced_state(cplx v_terminal, double omega_pu,
                                              double delta_rad,
                                              double dt_s) const {
  const Mat5 a_old = system_matrix(omega_prev_);
  const Mat5 a_new = system_matrix(omega_pu);
  const Vec5 u_old = input(v_prev_, delta_prev_);
  const Vec5 u_new = input(v_terminal, delta_rad);

  const Mat5 lhs = Mat5::Identity() - 0.5 * dt_s * a_new;
  const Vec5 rhs =
      psi_ + 0.5 * dt_s * (a_old * psi_ + u_old + u_new);
  return lhs.partialPivLu().solve(rhs);
}

cplx SyncMachine::predict_step(cplx v_terminal, double omega_pu,
                               double delta_rad, double dt_s) const {
  const Vec5 i = c_ * advanced_state(v_terminal, omega_pu, delta_rad, dt_s);
  return to_network(cplx(i(0), i(1)), delta_rad);
}

cplx SyncMachine::step(cplx v_terminal, double omega_pu, double delta_rad,
                       double dt_s) {
  psi_ = advanced_state(v_terminal, omega_pu, delta_rad, dt_s);
  omega_prev_ = omega_pu;
  v_prev_ = v_terminal;
  delta_prev_ = delta_rad;
  return terminal_current(delta_rad);
}

cplx SyncMachine::terminal_current(double delta_rad) const {
  const Vec5 i = currents(psi_);
  return to_network(cplx(i(0), i(1)), delta_rad);
}

double SyncMachine::te() const {
  const Vec5 i = currents(psi_);
  return psi_(0) * i(1) - psi_(1) * i(0);
}

double SyncMachine::stored_energy() const {
  const Vec5 i = currents(psi_);
  // Winding currents with the stator pair in the flux (motor) orientation;
  // the extra 1/w_b converts flux-current units to pu-seconds.
  const double twice =
      psi_(0) * (-i(0)) + psi_(1) * (-i(1)) + psi_(2) * i(2) +
      psi_(3) * i(3) + psi_(4) * i(4);
  return 0.5 * twice / w_b_;
}

double SyncMachine::loss_power() const {
  const Vec5 i = currents(psi_);
  return ra_ * (i(0) * i(0) + i(1) * i(1)) + r_f_ * i(2) * i(2) +
         r_kd_ * i(3) * i(3) + r_kq_ * i(4) * i(4);
}

double SyncMachine::field_power() const {
  const Vec5 i = currents(psi_);
  return (r_f_ / x_ad_) * e_fd_ * i(2);
}

Eigen::VectorXd SyncMachine::state_derivative(cplx v_terminal, double omega_pu,
                                              double delta_rad) const {
  return system_matrix(omega_pu) * psi_ + input(v_terminal, delta_rad);
}

cplx SyncMachine::interface_admittance(double dt_s) const {
  if (dt_s <= 0.0)
    throw std::invalid_argument("interface admittance needs a positive step");
  // Exact feedthrough of one trapezoidal step at rated speed: the terminal
  // voltage enters the flux update through 0.5 * dt * w_b on the stator
  // rows, and the stator currents read the advanced fluxes back out.
  const Mat5 lhs = Mat5::Identity() - 0.5 * dt_s * system_matrix(1.0);
  Eigen::Matrix<double, 5, 2> b = Eigen::Matrix<double, 5, 2>::Zero();
  b(0, 0) = 0.5 * dt_s * w_b_;
  b(1, 1) = 0.5 * dt_s * w_b_;
  const Eigen::Matrix<double, 5, 2> s = lhs.partialPivLu().solve(b);
  const Eigen::Matrix2d m = c_.topRows(2) * s;
  // Rotation-invariant part of the 2x2 rotor-frame sensitivity; it is the
  // same in the network frame for every rotor angle, so a single complex
  // shunt represents it. The sign flips because the network absorbs it as
  // a passive admittance while the machine sources the current.
  return -cplx(0.5 * (m(0, 0) + m(1, 1)), 0.5 * (m(1, 0) - m(0, 1)));
}

}  // namespace ssti
