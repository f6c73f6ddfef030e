#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ssti/scenario.hpp"

namespace ssti {

using cplx = std::complex<double>;

/// Bus numbering of the study network. The filter node exists only when the
/// blocking filter is enabled (it splits the transformer branch).
enum Bus : int {
  kBusMachine = 0,  ///< machine terminal (LV side of the step-up transformer)
  kBusPlantHv = 1,  ///< plant HV bus
  kBusNetwork = 2,  ///< network bus holding the Thevenin source
  kBusHvdc = 3,     ///< converter PCC
  kBusFilter = 4,   ///< internal node between transformer and blocking filter
};

/// Linear network in the synchronously rotating frame. Signals are complex
/// envelopes around the base frequency, so a branch inductor obeys
///   v = R i + L di/dt + j w_s L i
/// and the trapezoidal companion model gives a constant complex nodal matrix
/// that is factorized once per topology. Everything is per-unit on
/// system_base_mva; voltage bases follow the transformer ratio so its
/// per-unit ratio is 1.
class DqNetwork {
 public:
  DqNetwork(const Scenario& sc, double s_sc_mva, double dt_s);

  int bus_count() const { return n_bus_; }

  /// Advances one step: solves bus voltages for the given bus injections
  /// (current INTO the network, system-base pu) and updates branch states.
  void step(cplx i_machine, cplx i_hvdc);

  /// Bus voltages step() would produce for these injections, leaving all
  /// branch states untouched. Lets a device iterate its injection against
  /// the coming solve before the step is committed.
  Eigen::VectorXcd trial_solve(cplx i_machine, cplx i_hvdc) const;

  cplx voltage(int bus) const { return v_(bus); }

  /// Thevenin internal EMF envelope (constant between events).
  void set_source_emf(cplx e) { emf_ = e; }
  cplx source_emf() const { return emf_; }

  /// Applies a short-circuit-power change. Branch states are carried over
  /// (flux continuity), which injects the physical switching transient.
  void set_s_sc(double s_sc_mva);

  /// Registers a numerical interface-compensation shunt at a bus (system-base
  /// admittance). A device coupled by one-step-delay exchange passes
  /// i + y * v_used instead of its plain current, and the matching shunt
  /// makes the solve see i + y * (v_new - v_used): the delay then acts only
  /// on the residual beyond the device's first-order voltage sensitivity.
  /// Cancels exactly at any fixed point, so operating points are unchanged;
  /// excluded from fundamental_admittance and the energy accounting.
  void set_interface_admittance(int bus, cplx y);

  /// Seeds every branch state from a steady phasor solution so that t=0
  /// starts at equilibrium (first-step derivatives vanish).
  void init_steady(const Eigen::VectorXcd& v_bus, cplx i_machine, cplx i_hvdc);

  /// Complex nodal admittance at the base frequency (not the companion
  /// matrix), including the Thevenin branch; for power-flow use. Ordering is
  /// the Bus enum plus the source node last (held at the EMF).
  Eigen::MatrixXcd fundamental_admittance() const;

  /// Magnetic energy stored in all branch inductances and the filter
  /// capacitance, in pu·s on the system base.
  double stored_energy() const;

  /// Active power delivered by the ideal Thevenin source, pu.
  double source_power() const;

  /// Resistive losses of all branches at their present currents, pu.
  double dissipated_power() const;

 private:
  struct Branch {
    int from = 0;
    int to = -1;        ///< node, or -1: source EMF, -2: ground
    cplx g;             ///< companion admittance, i = g*v_across + h
    cplx alpha, beta;   ///< history recurrence h' = alpha*v_across + beta*i
    cplx z_fund;        ///< impedance at the base frequency (power-flow view)
    double l_pu = 0.0;  ///< inductance (pu impedance seconds) for energy audit
    double c_pu = 0.0;  ///< capacitance for energy audit
    double r_pu = 0.0;
    cplx i;             ///< branch current state (from -> to)
    cplx h;             ///< history source
    bool is_c = false;
  };

  void build(double s_sc_mva);
  void refactor();
  cplx node_voltage(int node) const;
  Branch make_rl(int from, int to, double r_pu, double x_pu) const;
  Branch make_c(int from, int to, double c_pu, double esr_pu) const;

  const Scenario* sc_;
  double dt_;
  double w_s_;
  int n_bus_ = 4;
  cplx emf_{1.0, 0.0};
  std::vector<Branch> branches_;
  Eigen::VectorXcd v_;
  Eigen::VectorXcd y_iface_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

}  // namespace ssti
