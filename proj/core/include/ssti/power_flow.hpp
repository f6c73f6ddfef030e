#pragma once

#include <Eigen/Dense>

#include "ssti/network.hpp"
#include "ssti/scenario.hpp"

namespace ssti {

/// Fundamental-frequency operating point used to seed the time-domain models.
/// All quantities are per-unit on kSystemBaseMva; voltages are envelopes in
/// the network reference frame (source EMF at angle zero).
struct PowerFlow {
  Eigen::VectorXcd v_bus;   ///< network bus voltages, Bus-enum order
  cplx i_machine;           ///< machine current injected into its bus
  cplx i_hvdc;              ///< converter current injected into its bus
  cplx s_machine;           ///< complex power delivered by the machine
  cplx s_hvdc;              ///< complex power delivered by the converter
  cplx emf{1.0, 0.0};       ///< Thevenin internal EMF (slack)
  double max_mismatch_pu = 0.0;
  int iterations = 0;
};

/// Newton-Raphson power flow over the study network at a given grid strength.
/// Machine bus: fixed P and voltage magnitude. Converter bus: fixed P and Q
/// (zero when the converter is disabled). Remaining buses carry no injection;
/// the Thevenin source is the slack with EMF 1 at angle 0. Throws when the
/// iteration fails to reach the tolerance, which is how an electrically
/// infeasible operating point (too little short-circuit capacity for the
/// scheduled transfer) surfaces.
PowerFlow solve_power_flow(const Scenario& sc, double s_sc_mva);

}  // namespace ssti
