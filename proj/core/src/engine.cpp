#include "ssti/engine.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "ssti/csv.hpp"
#include "ssti/filters.hpp"
#include "ssti/machine.hpp"
#include "ssti/network.hpp"
#include "ssti/ssdc.hpp"
#include "ssti/vsc.hpp"

namespace ssti {

double EnergyAudit::turnover() const {
  return std::abs(airgap) + std::abs(field) + std::abs(converter) +
         std::abs(source) + std::abs(dissipated) + std::abs(storage_delta);
}

SimEngine::SimEngine(const Scenario& sc) : sc_(sc) {
  sc_.validate();
  shaft_ = sc_.lumped ? lump_to_single_mass(sc_.shaft) : sc_.shaft;
  n_mass_ = shaft_.mass_count();
  gen_ = shaft_.generator_index - 1;

  // Mechanical chain, x = (speed deviations pu; angle deviations rad):
  //   2 H dw/dt = u - Dm dw - Km dd,   d dd/dt = w_b dw
  // with Dm, Km per unit on the shaft torque base. A two-pole machine is
  // assumed throughout, so electrical and mechanical angles coincide.
  const double w_b = 2.0 * std::numbers::pi * shaft_.base_frequency_hz;
  const double t_base = shaft_.torque_base_nm();
  const Eigen::MatrixXd dm =
      coupling_matrix(shaft_.damping_nms_per_rad, n_mass_) *
      (shaft_.omega_m0() / t_base);
  const Eigen::MatrixXd km =
      coupling_matrix(shaft_.stiffness_nm_per_rad, n_mass_) / t_base;
  hinv2_.resize(n_mass_);
  for (int i = 0; i < n_mass_; ++i)
    hinv2_(i) = 1.0 / (2.0 * shaft_.inertia_constant_s(i));

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n_mass_, 2 * n_mass_);
  a.topLeftCorner(n_mass_, n_mass_) = (-hinv2_).asDiagonal() * dm;
  a.topRightCorner(n_mass_, n_mass_) = (-hinv2_).asDiagonal() * km;
  a.bottomLeftCorner(n_mass_, n_mass_) =
      w_b * Eigen::MatrixXd::Identity(n_mass_, n_mass_);

  const double h = sc_.sim.dt_s / 2.0;
  const Eigen::MatrixXd eye =
      Eigen::MatrixXd::Identity(2 * n_mass_, 2 * n_mass_);
  lhs_.compute(eye - h * a);
  rhs_ = eye + h * a;

  if (sc_.standin.enabled) {
    // No electrical system; the torque-free state is the equilibrium and
    // the stand-in law works directly on the shaft power base.
    return;
  }

  te_ratio_ = sc_.machine.rated_mva / shaft_.base_power_mva;
  pf_ = solve_power_flow(sc_, sc_.grid.s_sc_at(0.0));

  SyncMachine probe(sc_.machine, sc_.base_frequency_hz);
  const cplx i_mach =
      pf_.i_machine * (sc_.system_base_mva / sc_.machine.rated_mva);
  const auto eq = probe.initialize(pf_.v_bus(kBusMachine), i_mach);
  tm0_pu_ = eq.te_pu;
  delta0_rad_ = eq.delta_rad;
  quiescence_ = probe.state_derivative(pf_.v_bus(kBusMachine), 1.0, eq.delta_rad)
                    .cwiseAbs()
                    .maxCoeff();
}

void SimEngine::add_tm_tone(const TmTone& tone) {
  if (!(tone.frequency_hz > 0.0))
    throw std::invalid_argument("tm tone frequency must be positive");
  if (!(tone.amplitude_pu >= 0.0))
    throw std::invalid_argument("tm tone amplitude must be nonnegative");
  if (!(tone.t_off_s > tone.t_on_s))
    throw std::invalid_argument("tm tone must switch off after it switches on");
  if (!(tone.ramp_s >= 0.0))
    throw std::invalid_argument("tm tone ramp must be nonnegative");
  tones_.push_back(tone);
}

double SimEngine::tones_at(double t_s) const {
  double sum = 0.0;
  for (const TmTone& tone : tones_) {
    if (t_s < tone.t_on_s || t_s >= tone.t_off_s) continue;
    double env = 1.0;
    if (tone.ramp_s > 0.0) {
      const double up = (t_s - tone.t_on_s) / tone.ramp_s;
      if (up < 1.0) env = 0.5 * (1.0 - std::cos(std::numbers::pi * up));
      if (std::isfinite(tone.t_off_s)) {
        const double down = (tone.t_off_s - t_s) / tone.ramp_s;
        if (down < 1.0)
          env = std::min(env, 0.5 * (1.0 - std::cos(std::numbers::pi * down)));
      }
    }
    sum += env * tone.amplitude_pu *
           std::sin(2.0 * std::numbers::pi * tone.frequency_hz *
                    (t_s - tone.t_on_s));
  }
  return sum;
}

double SimEngine::active_tone_hz(double t_s) const {
  for (const TmTone& tone : tones_)
    if (t_s >= tone.t_on_s && t_s < tone.t_off_s) return tone.frequency_hz;
  return 0.0;
}

SimTrace SimEngine::run() {
  const double dt = sc_.sim.dt_s;
  const int n_steps = static_cast<int>(std::lround(sc_.sim.duration_s / dt));
  const int dec = sc_.sim.decimation;
  const bool standin = sc_.standin.enabled;

  SimTrace trace;
  trace.dt_s = dt * dec;
  for (int i = 0; i < n_mass_; ++i)
    trace.names.push_back("omega_mass_" + std::to_string(i + 1));
  trace.names.insert(trace.names.end(),
                     {"delta_omega", "te", "tm", "p_pcc", "q_pcc", "omega_net",
                      "p_ssdc", "limiter_active", "blocked"});
  trace.data.resize(trace.names.size());
  for (auto& ch : trace.data) ch.reserve(n_steps / dec + 1);

  // Component instances, rebuilt fresh so repeated runs are bit-identical.
  std::optional<SyncMachine> machine;
  std::optional<DqNetwork> net;
  std::optional<Vsc> vsc;
  std::optional<Ssdc> ssdc;
  const double mach_s = sc_.machine.rated_mva / sc_.system_base_mva;
  const double conv_s = sc_.hvdc.rated_mva / sc_.system_base_mva;

  audit_ = EnergyAudit{};
  double stored0 = 0.0;
  cplx v_mach{1.0, 0.0}, v_hvdc{1.0, 0.0};
  cplx y_m{0.0, 0.0};
  if (!standin) {
    machine.emplace(sc_.machine, sc_.base_frequency_hz);
    machine->initialize(pf_.v_bus(kBusMachine), pf_.i_machine / mach_s);
    y_m = machine->interface_admittance(dt);
    net.emplace(sc_, sc_.grid.s_sc_at(0.0), dt);
    net->set_interface_admittance(kBusMachine, y_m * mach_s);
    net->set_source_emf(pf_.emf);
    net->init_steady(pf_.v_bus, pf_.i_machine, pf_.i_hvdc);
    if (sc_.hvdc.enabled) {
      vsc.emplace(sc_.hvdc, sc_.base_frequency_hz);
      vsc->set_p_ref(sc_.hvdc.p_setpoint_pu);
      vsc->set_q_ref(sc_.hvdc.q_setpoint_pu);
      vsc->initialize(pf_.v_bus(kBusHvdc), pf_.i_hvdc / conv_s);
      if (sc_.ssdc.enabled) ssdc.emplace(sc_.ssdc, sc_.base_frequency_hz, dt);
    }
    v_mach = pf_.v_bus(kBusMachine);
    v_hvdc = pf_.v_bus(kBusHvdc);
    stored0 = machine->stored_energy() * mach_s + net->stored_energy();
  }

  // Stand-in dynamic state: previous speed deviation for the quadrature
  // derivative and the optional rational section.
  Biquad rational;
  if (standin && sc_.standin.rational)
    rational = bilinear_biquad(sc_.standin.b0, sc_.standin.b1, sc_.standin.b2,
                               sc_.standin.a0, sc_.standin.a1, sc_.standin.a2, dt);
  double dw_prev = 0.0;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * n_mass_);
  double te_now = standin ? 0.0 : tm0_pu_;  // machine base (stand-in: shaft base)
  cplx s_pcc = sc_.hvdc.enabled && !standin
                   ? cplx(pf_.v_bus(kBusHvdc) * std::conj(pf_.i_hvdc / conv_s))
                   : cplx(0.0, 0.0);
  double omega_net = 1.0;
  double p_ssdc = 0.0;
  bool limiter = false, blocked = false;

  std::vector<char> applied(sc_.grid.events.size(), 0);
  for (size_t e = 0; e < applied.size(); ++e)
    applied[e] = sc_.grid.events[e].t_s <= 0.0;

  // Appends one decimated sample; returns false when a channel left the
  // numeric window (the divergence report, not an error).
  const auto log_sample = [&](double t_s) {
    size_t c = 0;
    for (int i = 0; i < n_mass_; ++i) trace.data[c++].push_back(1.0 + x(i));
    trace.data[c++].push_back(x(gen_));
    trace.data[c++].push_back(te_now);
    trace.data[c++].push_back(tm0_pu_ + tones_at(t_s));
    trace.data[c++].push_back(s_pcc.real());
    trace.data[c++].push_back(s_pcc.imag());
    trace.data[c++].push_back(omega_net);
    trace.data[c++].push_back(p_ssdc);
    trace.data[c++].push_back(limiter ? 1.0 : 0.0);
    trace.data[c++].push_back(blocked ? 1.0 : 0.0);
    for (size_t ch = 0; ch < trace.data.size(); ++ch) {
      const double v = trace.data[ch].back();
      if (std::isfinite(v) && std::abs(v) <= sc_.sim.divergence_limit_pu)
        continue;
      trace.aborted = true;
      trace.abort_time_s = t_s;
      trace.abort_reason = "channel '" + trace.names[ch] + "' reached " +
                           format_double(v) + " pu at t = " +
                           format_double(t_s) + " s";
      return false;
    }
    return true;
  };
  log_sample(0.0);

  Eigen::VectorXd rhs_vec(2 * n_mass_);
  for (int k = 0; k < n_steps && !trace.aborted; ++k) {
    const double t = k * dt;
    const double t_next = t + dt;

    if (net) {
      bool switched = false;
      for (size_t e = 0; e < applied.size(); ++e) {
        if (applied[e] || sc_.grid.events[e].t_s > t_next) continue;
        applied[e] = 1;
        switched = true;
      }
      if (switched) net->set_s_sc(sc_.grid.s_sc_at(t_next));
    }

    // Mechanical chain first, with the air-gap torque of the previous step
    // held over the interval (one-step-delay coupling). Tone torques are
    // evaluated exactly at both endpoints.
    const double te_shaft = te_now * te_ratio_;
    const double u_gen = (tm0_pu_ + tones_at(t)) * te_ratio_ - te_shaft +
                         (tm0_pu_ + tones_at(t_next)) * te_ratio_ - te_shaft;
    rhs_vec.noalias() = rhs_ * x;
    rhs_vec(gen_) += (dt / 2.0) * hinv2_(gen_) * u_gen;
    x = lhs_.solve(rhs_vec);

    const double dw_gen = x(gen_);
    if (standin) {
      // Quadrature through the scaled speed derivative: purely imaginary at
      // every frequency and equal to ke at the active tone's frequency.
      const double f_ref = active_tone_hz(t_next);
      const double nu = 2.0 * std::numbers::pi *
                        (f_ref > 0.0 ? f_ref : shaft_.base_frequency_hz);
      double te = sc_.standin.de * dw_gen +
                  (sc_.standin.ke / nu) * (dw_gen - dw_prev) / dt;
      if (sc_.standin.rational) te += rational.step(dw_gen);
      dw_prev = dw_gen;
      te_now = te;
    } else {
      const double omega_pu = 1.0 + dw_gen;
      const double delta = delta0_rad_ + x(n_mass_ + gen_);
      p_ssdc = ssdc ? ssdc->step(omega_net) : 0.0;
      cplx i_conv{0.0, 0.0};
      if (vsc) {
        i_conv = vsc->step(v_hvdc, p_ssdc, dt);
        omega_net = vsc->omega_net_pu();
        limiter = vsc->limited() || (ssdc && ssdc->saturated());
        blocked = vsc->blocked();
      }
      // Norton exchange, iterated to the simultaneous solution: predict the
      // machine current at the candidate voltage, trial-solve the network
      // with the matching interface shunt on its diagonal, and repeat until
      // the candidate stops moving. The folded shunt makes the iteration a
      // strong contraction (only the rotation-asymmetric remainder of the
      // machine feedthrough drives it), so a couple of passes reach
      // roundoff; the committed step is then the monolithic trapezoid of
      // machine plus network.
      cplx i_pred{0.0, 0.0};
      for (int pass = 0; pass < 8; ++pass) {
        i_pred = machine->predict_step(v_mach, omega_pu, delta, dt) +
                 y_m * v_mach;
        const cplx v_next =
            net->trial_solve(i_pred * mach_s, i_conv * conv_s)(kBusMachine);
        if (std::abs(v_next - v_mach) < 1e-13) break;
        v_mach = v_next;
      }
      net->step(i_pred * mach_s, i_conv * conv_s);
      v_mach = net->voltage(kBusMachine);
      v_hvdc = net->voltage(kBusHvdc);
      machine->step(v_mach, omega_pu, delta, dt);
      te_now = machine->te();
      s_pcc = vsc ? v_hvdc * std::conj(i_conv) : cplx(0.0, 0.0);

      audit_.airgap += dt * te_now * omega_pu * mach_s;
      audit_.field += dt * machine->field_power() * mach_s;
      audit_.converter += dt * s_pcc.real() * conv_s;
      audit_.source += dt * net->source_power();
      audit_.dissipated +=
          dt * (machine->loss_power() * mach_s + net->dissipated_power());
    }

    if ((k + 1) % dec == 0 && !log_sample(t_next)) break;
  }

  if (!standin)
    audit_.storage_delta =
        machine->stored_energy() * mach_s + net->stored_energy() - stored0;
  return trace;
}

}  // namespace ssti
