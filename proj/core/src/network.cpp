#include "ssti/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ssti {

namespace {

// Parallel RLC element values from (tuned frequency, quality factor, peak
// impedance): at resonance the L and C branches cancel and |Z| = R.
struct Rlc {
  double r, l, c;
};

Rlc filter_elements(const BlockingFilter& f, double z_scale) {
  const double w_n = 2.0 * std::numbers::pi * f.tuned_frequency_hz;
  const double r = f.peak_impedance_pu * z_scale;
  return {r, r / (f.quality_factor * w_n), f.quality_factor / (r * w_n)};
}

}  // namespace

DqNetwork::DqNetwork(const Scenario& sc, double s_sc_mva, double dt_s)
    : sc_(&sc),
      dt_(dt_s),
      w_s_(2.0 * std::numbers::pi * sc.shaft.base_frequency_hz) {
  if (dt_s <= 0.0) throw std::invalid_argument("network dt must be positive");
  if (s_sc_mva <= 0.0) {
    throw std::invalid_argument("short-circuit power must be positive");
  }
  n_bus_ = sc.filter.enabled ? 5 : 4;
  v_ = Eigen::VectorXcd::Zero(n_bus_);
  y_iface_ = Eigen::VectorXcd::Zero(n_bus_);
  build(s_sc_mva);
}

DqNetwork::Branch DqNetwork::make_rl(int from, int to, double r_pu,
                                     double x_pu) const {
  Branch b;
  b.from = from;
  b.to = to;
  b.r_pu = r_pu;
  b.l_pu = x_pu / w_s_;
  const double two_l_dt = 2.0 * b.l_pu / dt_;
  b.g = 1.0 / cplx(r_pu + two_l_dt, x_pu);
  if (b.l_pu > 0.0) {
    b.alpha = b.g;
    b.beta = b.g * cplx(two_l_dt - r_pu, -x_pu);
  } else {
    // A resistor is memoryless; giving it a history state would leave an
    // undamped alternating mode in the companion recurrence.
    b.alpha = 0.0;
    b.beta = 0.0;
  }
  b.z_fund = cplx(r_pu, x_pu);
  return b;
}

DqNetwork::Branch DqNetwork::make_c(int from, int to, double c_pu,
                                    double esr_pu) const {
  Branch b;
  b.from = from;
  b.to = to;
  b.c_pu = c_pu;
  b.r_pu = esr_pu;
  b.is_c = true;
  const double two_c_dt = 2.0 * c_pu / dt_;
  const cplx y_c(two_c_dt, w_s_ * c_pu);
  const cplx den = 1.0 + y_c * esr_pu;
  // Series loss resistance folded into the companion so that capacitor-only
  // loops (filter C against line charging) cannot sustain a circulating
  // charge mode.
  b.g = y_c / den;
  b.alpha = cplx(-two_c_dt, w_s_ * c_pu) / den;
  b.beta = (cplx(-1.0) - cplx(-two_c_dt, w_s_ * c_pu) * esr_pu) / den;
  b.z_fund = esr_pu + 1.0 / cplx(0.0, w_s_ * c_pu);
  return b;
}

void DqNetwork::build(double s_sc_mva) {
  branches_.clear();
  const double s_sys = sc_->system_base_mva;
  const double z_base = sc_->grid.nominal_kv * sc_->grid.nominal_kv / s_sys;

  // Step-up transformer, given on its own rating.
  const double xf_scale = s_sys / sc_->transformer.rated_mva;
  const int xf_hv = sc_->filter.enabled ? kBusFilter : kBusPlantHv;
  branches_.push_back(make_rl(kBusMachine, xf_hv,
                              sc_->transformer.r_pu * xf_scale,
                              sc_->transformer.x_pu * xf_scale));

  if (sc_->filter.enabled) {
    // Series-inserted parallel RLC on the transformer HV side; values are
    // per-unit on the machine rating. The capacitor carries a loss tangent
    // of 1e-4, small enough to leave the tuned peak essentially unchanged.
    const Rlc f =
        filter_elements(sc_->filter, s_sys / sc_->machine.rated_mva);
    const double w_n = 2.0 * std::numbers::pi * sc_->filter.tuned_frequency_hz;
    branches_.push_back(make_rl(kBusFilter, kBusPlantHv, f.r, 0.0));
    branches_.push_back(make_rl(kBusFilter, kBusPlantHv, 0.0, w_s_ * f.l));
    branches_.push_back(
        make_c(kBusFilter, kBusPlantHv, f.c, 1e-4 / (w_n * f.c)));
  }

  // Shunt charging with a 1e-3 loss tangent; B given as admittance pu.
  const auto shunt = [&](int bus, double b_pu) {
    if (b_pu <= 0.0) return;
    const double c = b_pu / w_s_;
    branches_.push_back(make_c(bus, -2, c, 1e-3 / b_pu));
  };

  // Overhead lines as pi sections: series impedance from ohmic data, total
  // charging susceptance split between the two ends.
  const auto line = [&](const LineParams& p, int from, int to) {
    branches_.push_back(make_rl(from, to,
                                p.r_ohm_per_km * p.length_km / z_base,
                                p.x_ohm_per_km * p.length_km / z_base));
    const double b_total = p.b_us_per_km * 1e-6 * p.length_km * z_base;
    shunt(from, 0.5 * b_total);
    shunt(to, 0.5 * b_total);
  };
  line(sc_->line_machine, kBusPlantHv, kBusNetwork);
  line(sc_->line_hvdc, kBusHvdc, kBusNetwork);

  // Machine terminal equipment (surge capacitors, station cabling), machine
  // base admittance.
  shunt(kBusMachine,
        sc_->machine.terminal_b_pu * (sc_->machine.rated_mva / s_sys));

  // Thevenin equivalent of the surrounding grid, sized by its short-circuit
  // power at the network bus.
  const double z_th = s_sys / s_sc_mva;
  const double xr = sc_->grid.x_over_r;
  const double r_th = z_th / std::sqrt(1.0 + xr * xr);
  branches_.push_back(make_rl(kBusNetwork, -1, r_th, r_th * xr));

  refactor();
}

cplx DqNetwork::node_voltage(int node) const {
  if (node >= 0) return v_(node);
  return node == -1 ? emf_ : cplx(0.0);
}

void DqNetwork::refactor() {
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n_bus_, n_bus_);
  for (const Branch& b : branches_) {
    y(b.from, b.from) += b.g;
    if (b.to >= 0) {
      y(b.to, b.to) += b.g;
      y(b.from, b.to) -= b.g;
      y(b.to, b.from) -= b.g;
    }
  }
  y.diagonal() += y_iface_;
  lu_.compute(y);
}

void DqNetwork::set_interface_admittance(int bus, cplx y) {
  if (bus < 0 || bus >= n_bus_)
    throw std::invalid_argument("interface admittance bus is out of range");
  if (!(y.real() >= 0.0))
    throw std::invalid_argument("interface admittance must be passive");
  y_iface_(bus) = y;
  refactor();
}

void DqNetwork::set_s_sc(double s_sc_mva) {
  if (s_sc_mva <= 0.0) {
    throw std::invalid_argument("short-circuit power must be positive");
  }
  std::vector<cplx> i_keep(branches_.size());
  for (size_t k = 0; k < branches_.size(); ++k) i_keep[k] = branches_[k].i;
  build(s_sc_mva);
  // Branch currents are continuous through the switching; rebuild the
  // trapezoidal histories around the carried-over state.
  for (size_t k = 0; k < branches_.size(); ++k) {
    Branch& b = branches_[k];
    b.i = i_keep[k];
    const cplx v_across = v_(b.from) - node_voltage(b.to);
    b.h = b.alpha * v_across + b.beta * b.i;
  }
}

Eigen::VectorXcd DqNetwork::trial_solve(cplx i_machine, cplx i_hvdc) const {
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n_bus_);
  rhs(kBusMachine) += i_machine;
  rhs(kBusHvdc) += i_hvdc;
  for (const Branch& b : branches_) {
    rhs(b.from) -= b.h;
    if (b.to >= 0) {
      rhs(b.to) += b.h;
    } else if (b.to == -1) {
      rhs(b.from) += b.g * emf_;
    }
  }
  return lu_.solve(rhs);
}

void DqNetwork::step(cplx i_machine, cplx i_hvdc) {
  v_ = trial_solve(i_machine, i_hvdc);
  for (Branch& b : branches_) {
    const cplx v_across = v_(b.from) - node_voltage(b.to);
    b.i = b.g * v_across + b.h;
    b.h = b.alpha * v_across + b.beta * b.i;
  }
}

void DqNetwork::init_steady(const Eigen::VectorXcd& v_bus, cplx /*i_machine*/,
                            cplx /*i_hvdc*/) {
  if (v_bus.size() != n_bus_) {
    throw std::invalid_argument("steady-state voltage vector has wrong size");
  }
  v_ = v_bus;
  for (Branch& b : branches_) {
    const cplx v_across = v_(b.from) - node_voltage(b.to);
    b.i = v_across / b.z_fund;
    // h such that the next solve reproduces the same point exactly.
    b.h = b.i - b.g * v_across;
  }
}

Eigen::MatrixXcd DqNetwork::fundamental_admittance() const {
  const int n = n_bus_ + 1;  // source node last
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  for (const Branch& b : branches_) {
    const cplx g = 1.0 / b.z_fund;
    y(b.from, b.from) += g;
    if (b.to == -2) continue;  // shunt to ground: diagonal only
    const int to = b.to >= 0 ? b.to : n_bus_;
    y(to, to) += g;
    y(b.from, to) -= g;
    y(to, b.from) -= g;
  }
  return y;
}

double DqNetwork::stored_energy() const {
  double w = 0.0;
  for (const Branch& b : branches_) {
    if (b.is_c) {
      // Energy lives on the capacitor proper, behind the series loss.
      const cplx v_c = v_(b.from) - node_voltage(b.to) - b.r_pu * b.i;
      w += 0.5 * b.c_pu * std::norm(v_c);
    } else {
      w += 0.5 * b.l_pu * std::norm(b.i);
    }
  }
  return w;
}

double DqNetwork::source_power() const {
  double p = 0.0;
  for (const Branch& b : branches_) {
    if (b.to == -1) p += std::real(emf_ * std::conj(-b.i));
  }
  return p;
}

double DqNetwork::dissipated_power() const {
  double p = 0.0;
  for (const Branch& b : branches_) p += b.r_pu * std::norm(b.i);
  return p;
}

}  // namespace ssti
