#include "ssti/power_flow.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssti {

namespace {

constexpr double kTol = 1e-10;
constexpr int kMaxIter = 60;

}  // namespace

PowerFlow solve_power_flow(const Scenario& sc, double s_sc_mva) {
  const DqNetwork net(sc, s_sc_mva, sc.sim.dt_s);
  const int n = net.bus_count();       // unknown buses
  const int slack = n;                 // source node, fixed 1 at angle 0
  const Eigen::MatrixXcd y = net.fundamental_admittance();

  // Scheduled injections (system base).
  Eigen::VectorXd p_sched = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd q_sched = Eigen::VectorXd::Zero(n);
  p_sched(kBusMachine) = sc.machine.p_mw / sc.system_base_mva;
  if (sc.hvdc.enabled) {
    const double scale = sc.hvdc.rated_mva / sc.system_base_mva;
    p_sched(kBusHvdc) = sc.hvdc.p_setpoint_pu * scale;
    q_sched(kBusHvdc) = sc.hvdc.q_setpoint_pu * scale;
  }

  // Polar state: theta for every unknown bus, magnitude for all but the
  // voltage-controlled machine bus.
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n + 1);
  Eigen::VectorXd vm = Eigen::VectorXd::Ones(n + 1);
  vm(kBusMachine) = sc.machine.v_setpoint_pu;

  std::vector<int> pq;  // buses with a reactive-power equation
  for (int i = 0; i < n; ++i) {
    if (i != kBusMachine) pq.push_back(i);
  }
  const int n_pq = static_cast<int>(pq.size());
  const int n_var = n + n_pq;

  const auto calc_power = [&](int i) {
    cplx s = 0.0;
    const cplx vi = std::polar(vm(i), theta(i));
    for (int j = 0; j <= slack; ++j) {
      s += vi * std::conj(y(i, j) * std::polar(vm(j), theta(j)));
    }
    return s;
  };

  PowerFlow out;
  double max_mismatch = 0.0;
  for (int iter = 0;; ++iter) {
    Eigen::VectorXd p_calc(n), q_calc(n);
    for (int i = 0; i < n; ++i) {
      const cplx s = calc_power(i);
      p_calc(i) = s.real();
      q_calc(i) = s.imag();
    }

    Eigen::VectorXd mis(n_var);
    for (int i = 0; i < n; ++i) mis(i) = p_sched(i) - p_calc(i);
    for (int k = 0; k < n_pq; ++k) mis(n + k) = q_sched(pq[k]) - q_calc(pq[k]);
    max_mismatch = mis.cwiseAbs().maxCoeff();
    out.iterations = iter;
    if (max_mismatch < kTol) break;
    if (iter >= kMaxIter || !std::isfinite(max_mismatch) ||
        vm.head(n).minCoeff() < 0.05) {
      throw std::runtime_error(
          "power flow did not converge (mismatch " +
          std::to_string(max_mismatch) +
          " pu); the scheduled transfer is likely infeasible at " +
          std::to_string(s_sc_mva) + " MVA short-circuit power");
    }

    // Standard polar Jacobian. Rows: P equations then Q equations; columns:
    // theta for every unknown bus, then magnitude for PQ buses.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n_var, n_var);
    const auto fill = [&](int row, int i, bool is_q) {
      for (int j = 0; j < n; ++j) {
        const double g = y(i, j).real();
        const double b = y(i, j).imag();
        const double tij = theta(i) - theta(j);
        const double ct = std::cos(tij), st = std::sin(tij);
        if (j == i) {
          jac(row, j) = is_q ? p_calc(i) - g * vm(i) * vm(i)
                             : -q_calc(i) - b * vm(i) * vm(i);
        } else {
          const double vv = vm(i) * vm(j);
          jac(row, j) = is_q ? -vv * (g * ct + b * st) : vv * (g * st - b * ct);
        }
      }
      for (int k = 0; k < n_pq; ++k) {
        const int j = pq[k];
        const double g = y(i, j).real();
        const double b = y(i, j).imag();
        const double tij = theta(i) - theta(j);
        const double ct = std::cos(tij), st = std::sin(tij);
        if (j == i) {
          jac(row, n + k) = is_q ? q_calc(i) / vm(i) - b * vm(i)
                                 : p_calc(i) / vm(i) + g * vm(i);
        } else {
          jac(row, n + k) =
              is_q ? vm(i) * (g * st - b * ct) : vm(i) * (g * ct + b * st);
        }
      }
    };
    for (int i = 0; i < n; ++i) fill(i, i, false);
    for (int k = 0; k < n_pq; ++k) fill(n + k, pq[k], true);

    const Eigen::VectorXd dx = jac.partialPivLu().solve(mis);
    if (!dx.allFinite()) {
      throw std::runtime_error(
          "power flow Jacobian is singular; the operating point is "
          "infeasible");
    }
    for (int i = 0; i < n; ++i) theta(i) += dx(i);
    for (int k = 0; k < n_pq; ++k) vm(pq[k]) += dx(n + k);
  }

  out.v_bus.resize(n);
  for (int i = 0; i < n; ++i) out.v_bus(i) = std::polar(vm(i), theta(i));
  out.s_machine = calc_power(kBusMachine);
  out.s_hvdc = calc_power(kBusHvdc);
  out.i_machine = std::conj(out.s_machine / out.v_bus(kBusMachine));
  out.i_hvdc = std::conj(out.s_hvdc / out.v_bus(kBusHvdc));
  out.max_mismatch_pu = max_mismatch;
  return out;
}

}  // namespace ssti
