#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace ssti {

/// Lumped-mass torsional model of a turbine-generator shaft line.
///
/// Masses are ordered along the shaft (e.g. HP, IP, LP1, LP2, GEN, EXC).
/// Stiffness and damping act between adjacent masses only, so both coupling
/// matrices are tridiagonal with zero row sums.
struct ShaftModel {
  std::vector<double> inertia_kgm2;          ///< J_i, one per mass
  std::vector<double> stiffness_nm_per_rad;  ///< K_(i,i+1), size N-1
  std::vector<double> damping_nms_per_rad;   ///< D_(i,i+1), size N-1
  int generator_index = 0;                   ///< 1-based position of the generator mass
  double base_power_mva = 0.0;               ///< per-unit power base for torque and D_m
  double base_frequency_hz = 50.0;

  int mass_count() const { return static_cast<int>(inertia_kgm2.size()); }

  /// Mechanical synchronous speed, rad/s. A 2-pole machine is assumed, so
  /// mechanical and electrical angles coincide; this is the convention the
  /// per-unit inertia constants below are defined against.
  double omega_m0() const;

  /// Per-unit inertia constant of one mass: H_i = J_i*omega_m0^2 / (2*S_base), seconds.
  double inertia_constant_s(int mass) const;

  /// Torque base S_base/omega_m0, N·m.
  double torque_base_nm() const;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// First-order form of J·x2'' + D·x2' + K·x2 = T with state X = (speeds, angles).
struct StateMatrices {
  Eigen::MatrixXd A;  ///< 2N x 2N
  Eigen::MatrixXd B;  ///< 2N x N, one torque input per mass, N·m
};

struct Mode {
  double frequency_hz = 0.0;     ///< Im(eigenvalue)/2pi of the damped system
  double sigma = 0.0;            ///< Re(eigenvalue), 1/s
  double modal_inertia_s = 0.0;  ///< H_m under generator-row-normalized shape
  double modal_damping_pu = 0.0; ///< D_m = -4*sigma*H_m
  Eigen::VectorXd shape;         ///< length N, generator entry == 1
};

/// Torsional modes in ascending frequency; the rigid-body pair is removed.
struct ModalResult {
  std::vector<Mode> modes;
};

/// Tridiagonal coupling matrix with zero row sums from the N-1 adjacent values.
Eigen::MatrixXd coupling_matrix(const std::vector<double>& adjacent, int n);

StateMatrices build_state_matrices(const ShaftModel& m);

/// (frequency_hz, sigma) per torsional mode, ascending frequency.
/// Conjugate pairs are collapsed; modes below 0.01 rad/s count as rigid-body
/// and are dropped.
std::vector<std::pair<double, double>> modal_frequencies(const ShaftModel& m);

/// Full modal quantities. Mode shapes come from the per-unit undamped problem
/// (eigenvectors of 1/2*H^-1*K_pu, solved in symmetrized form), normalized so
/// the generator row equals one. Each shape is paired with the damped
/// eigenvalue of closest frequency; pairing must be unambiguous (closest and
/// second-closest candidate separated by at least 1% of the minimum modal
/// spacing) or the call throws.
ModalResult modal_inertia_and_damping(const ShaftModel& m);

/// Sum of all inertias as a single free mass, for side-by-side runs that
/// suppress torsional dynamics. Keeps bases and generator placement.
ShaftModel lump_to_single_mass(const ShaftModel& m);

}  // namespace ssti
