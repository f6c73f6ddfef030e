#include "ssti/shaft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ssti {

namespace {

constexpr double kRigidBodyRadPerSec = 0.01;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument("ShaftModel: " + msg);
}

}  // namespace

double ShaftModel::omega_m0() const { return 2.0 * std::numbers::pi * base_frequency_hz; }

double ShaftModel::inertia_constant_s(int mass) const {
  const double w = omega_m0();
  return inertia_kgm2.at(static_cast<size_t>(mass)) * w * w / (2.0 * base_power_mva * 1e6);
}

double ShaftModel::torque_base_nm() const { return base_power_mva * 1e6 / omega_m0(); }

void ShaftModel::validate() const {
  const int n = mass_count();
  require(n >= 1, "inertia_kgm2 must hold at least one mass");
  require(static_cast<int>(stiffness_nm_per_rad.size()) == n - 1,
          "stiffness_nm_per_rad must have one entry per adjacent mass pair");
  require(static_cast<int>(damping_nms_per_rad.size()) == n - 1,
          "damping_nms_per_rad must have one entry per adjacent mass pair");
  for (double j : inertia_kgm2) require(j > 0.0, "inertia_kgm2 entries must be positive");
  for (double k : stiffness_nm_per_rad) require(k > 0.0, "stiffness_nm_per_rad entries must be positive");
  for (double d : damping_nms_per_rad) require(d >= 0.0, "damping_nms_per_rad entries must be non-negative");
  require(generator_index >= 1 && generator_index <= n,
          "generator_index must address one of the masses (1-based)");
  require(base_power_mva > 0.0, "base_power_mva must be positive");
  require(base_frequency_hz > 0.0, "base_frequency_hz must be positive");
}

Eigen::MatrixXd coupling_matrix(const std::vector<double>& adjacent, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  if (static_cast<int>(adjacent.size()) != n - 1)
    throw std::invalid_argument("coupling_matrix: need exactly n-1 adjacent values");
  for (int i = 0; i + 1 < n; ++i) {
    const double v = adjacent[static_cast<size_t>(i)];
    m(i, i) += v;
    m(i + 1, i + 1) += v;
    m(i, i + 1) -= v;
    m(i + 1, i) -= v;
  }
  return m;
}

StateMatrices build_state_matrices(const ShaftModel& model) {
  model.validate();
  const int n = model.mass_count();
  const Eigen::MatrixXd k = coupling_matrix(model.stiffness_nm_per_rad, n);
  const Eigen::MatrixXd d = coupling_matrix(model.damping_nms_per_rad, n);
  Eigen::VectorXd jinv(n);
  for (int i = 0; i < n; ++i) jinv(i) = 1.0 / model.inertia_kgm2[static_cast<size_t>(i)];

  StateMatrices sm;
  sm.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  sm.A.topLeftCorner(n, n) = -(jinv.asDiagonal() * d);
  sm.A.topRightCorner(n, n) = -(jinv.asDiagonal() * k);
  sm.A.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);

  sm.B = Eigen::MatrixXd::Zero(2 * n, n);
  sm.B.topRows(n) = Eigen::MatrixXd(jinv.asDiagonal());
  return sm;
}

std::vector<std::pair<double, double>> modal_frequencies(const ShaftModel& model) {
  const StateMatrices sm = build_state_matrices(model);
  Eigen::EigenSolver<Eigen::MatrixXd> es(sm.A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("modal_frequencies: eigen decomposition failed");

  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const std::complex<double> ev = es.eigenvalues()(i);
    if (ev.imag() <= kRigidBodyRadPerSec) continue;  // keep one of each conjugate pair
    out.emplace_back(ev.imag() / (2.0 * std::numbers::pi), ev.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

ModalResult modal_inertia_and_damping(const ShaftModel& model) {
  model.validate();
  const int n = model.mass_count();
  const double w0 = model.omega_m0();
  const double s_base = model.base_power_mva * 1e6;

  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) h(i) = model.inertia_constant_s(i);

  // Per-unit undamped problem 1/2*H^-1*K_pu, solved on the similar symmetric
  // matrix 1/2*H^-1/2*K_pu*H^-1/2 so eigenvalues are guaranteed real.
  const Eigen::MatrixXd k_pu = coupling_matrix(model.stiffness_nm_per_rad, n) * (w0 / s_base);
  const Eigen::VectorXd h_isqrt = h.array().rsqrt();
  const Eigen::MatrixXd sym =
      0.5 * (h_isqrt.asDiagonal() * k_pu * h_isqrt.asDiagonal());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("modal_inertia_and_damping: eigen decomposition failed");

  const auto damped = modal_frequencies(model);

  double min_spacing = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < damped.size(); ++i)
    min_spacing = std::min(min_spacing, damped[i].first - damped[i - 1].first);

  ModalResult result;
  std::vector<bool> used(damped.size(), false);
  const int gen = model.generator_index - 1;
  for (int m = 0; m < n; ++m) {
    const double lambda = es.eigenvalues()(m);
    const double omega = std::sqrt(std::max(lambda, 0.0) * w0);  // omega^2 = omega_m0 * lambda
    if (omega <= kRigidBodyRadPerSec) continue;
    const double f_undamped = omega / (2.0 * std::numbers::pi);

    Eigen::VectorXd shape = h_isqrt.asDiagonal() * es.eigenvectors().col(m);
    const double gen_entry = shape(gen);
    if (std::abs(gen_entry) < 1e-12)
      throw std::runtime_error(
          "modal_inertia_and_damping: generator does not participate in a torsional mode; "
          "cannot normalize its shape");
    shape /= gen_entry;

    // Pair the per-unit mode with the damped eigenvalue of closest frequency.
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    double second_d = best_d;
    for (size_t i = 0; i < damped.size(); ++i) {
      const double dist = std::abs(damped[i].first - f_undamped);
      if (dist < best_d) {
        second_d = best_d;
        best_d = dist;
        best = i;
      } else if (dist < second_d) {
        second_d = dist;
      }
    }
    if (damped.size() > 1 && (second_d - best_d) < 0.01 * min_spacing)
      throw std::runtime_error(
          "modal_inertia_and_damping: ambiguous frequency pairing between per-unit and "
          "damped modes; modal spacing too small to associate sigma reliably");
    if (best >= used.size() || used[best])
      throw std::runtime_error(
          "modal_inertia_and_damping: damping shifts eigenvalues so strongly that two "
          "mode shapes claim the same damped frequency; sigma association is ambiguous");
    used[best] = true;

    Mode mode;
    mode.frequency_hz = damped[best].first;
    mode.sigma = damped[best].second;
    mode.shape = shape;
    double hm = 0.0;
    for (int i = 0; i < n; ++i) hm += h(i) * shape(i) * shape(i);
    mode.modal_inertia_s = hm;
    mode.modal_damping_pu = -4.0 * mode.sigma * hm;
    result.modes.push_back(std::move(mode));
  }

  std::sort(result.modes.begin(), result.modes.end(),
            [](const Mode& a, const Mode& b) { return a.frequency_hz < b.frequency_hz; });
  return result;
}

ShaftModel lump_to_single_mass(const ShaftModel& model) {
  model.validate();
  ShaftModel out;
  double j = 0.0;
  for (double ji : model.inertia_kgm2) j += ji;
  out.inertia_kgm2 = {j};
  out.generator_index = 1;
  out.base_power_mva = model.base_power_mva;
  out.base_frequency_hz = model.base_frequency_hz;
  return out;
}

}  // namespace ssti
