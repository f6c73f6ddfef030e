#pragma once

#include <string>
#include <vector>

#include "ssti/csv.hpp"
#include "ssti/scenario.hpp"
#include "ssti/shaft.hpp"
#include "ssti/trace.hpp"

namespace ssti {

/// "restart", "progressive" or "multitone"; matches the scenario file keys.
const char* scan_variant_name(ScanVariant v);

/// Materialized frequency plan for electrical_damping_curve. Periods are
/// counted at each tone's own frequency: a point at f occupies
/// settle_periods/f seconds of settling (the tone raised-cosine-ramps over
/// the first half of that window) followed by measure_periods/f seconds of
/// measurement.
struct ScanPlan {
  std::vector<double> frequencies_hz;
  double amplitude_pu = 1e-3;  ///< tone amplitude, pu of machine torque base
  int settle_periods = 10;
  int measure_periods = 20;
  ScanVariant variant = ScanVariant::kRestart;
  int max_tones = 3;         ///< per batch, multi-tone variant only
  int jobs = 0;              ///< restart-variant workers; 0 = one per core
  std::string journal_path;  ///< per-point checkpoint CSV; empty disables

  /// Throws std::invalid_argument: frequencies must be nonempty, distinct,
  /// and inside (0, 1.2 * base]; amplitude in (0, 0.5); counts positive.
  void validate(double base_frequency_hz) const;
};

/// The scenario's scan section turned into a concrete plan: the coarse grid
/// plus a refined band around each torsional mode (merged, deduplicated,
/// clipped to (0, 1.2 * base]), with the measurement knobs copied over.
ScanPlan make_scan_plan(const ScanParams& params, const ModalResult& modal,
                        double base_frequency_hz);

struct TonePhasor {
  double amplitude = 0.0;
  double phase_rad = 0.0;  ///< of A*cos(2*pi*f*t + phase) against trace time
};

struct ToneMeasurement {
  TonePhasor d_te;        ///< air-gap torque deviation, machine-base pu
  TonePhasor d_omega;     ///< generator speed deviation, pu
  double window_s = 0.0;  ///< realized window after integer-period rounding
};

/// Single-bin discrete Fourier evaluation of the te and delta_omega channels
/// at exactly f over [t_start, t_start + window]. The window is rounded to
/// the nearest whole number of periods of f (integer-period windows make the
/// bin orthogonal to dc and to any tone sharing the window lattice), so the
/// returned window_s is the realized one; the window mean is removed before
/// the projection, since te rides on its operating-point value. Throws
/// std::invalid_argument when the requested window is shorter than one
/// period or runs past the trace.
ToneMeasurement measure_tone(const SimTrace& trace, double f_hz,
                             double t_start_s, double window_s);

/// One scanned frequency. de + j*ke = phasor(dTe) / phasor(dOmega), so
/// de = (|dTe|/|dOmega|) * cos(phi_te - phi_omega) by construction; de > 0
/// means the electrical side opposes generator speed deviations at f.
struct DampingPoint {
  double f_hz = 0.0;
  double de = 0.0;  ///< pu torque per pu speed, machine base
  double ke = 0.0;  ///< quadrature (synchronizing) part, same units
  double d_te_amp = 0.0;
  double d_omega_amp = 0.0;
  double phi_te_rad = 0.0;
  double phi_omega_rad = 0.0;
  bool nonlinear = false;  ///< limiter/blocking fired in the window; discarded
  ScanVariant variant = ScanVariant::kRestart;
  double settle_s = 0.0;
  double window_s = 0.0;
};

struct DampingCurve {
  std::vector<DampingPoint> points;  ///< ascending f

  /// Linear interpolation over the non-discarded points. Throws
  /// std::runtime_error when f falls outside their span (coverage error).
  double de_at(double f_hz) const;
  double ke_at(double f_hz) const;
};

/// Runs the scan: for each planned frequency (per the chosen variant) inject
/// a small mechanical-torque tone at the generator mass, wait out the settle
/// window, measure the te and delta_omega phasors, and form de + j*ke.
///
/// Scheduled grid events in the scenario are ignored: a scan characterizes
/// one operating point, so callers scan pre- and post-event conditions by
/// setting the scenario fields (e.g. grid.s_sc_mva) explicitly.
///
/// Errors: a pre-scan unperturbed run must hold every channel steady
/// (settle error otherwise, e.g. an electrically unstable operating point);
/// a diverging measurement run is reported with its abort reason. Points
/// whose measurement window saw converter current limiting, damping-output
/// saturation, or blocking are kept but flagged nonlinear and excluded from
/// interpolation.
///
/// With a journal path set, completed points are appended to the journal
/// CSV as they finish, and frequencies already present in the file are not
/// recomputed, so an interrupted scan resumes without rework.
DampingCurve electrical_damping_curve(const Scenario& scenario,
                                      const ScanPlan& plan);

/// Per-mode stability bookkeeping: d_t = de(f_i) + d_m_i, stable iff
/// d_t > 0 (strict; a zero-damping boundary counts as unstable).
struct ModeVerdict {
  double f_hz = 0.0;
  double de = 0.0;
  double d_m = 0.0;  ///< as applied: zero when the verdict is conservative
  double d_t = 0.0;
  bool stable = false;
};

struct StabilityVerdict {
  std::vector<ModeVerdict> modes;
  bool stable = false;        ///< all modes stable
  bool conservative = false;  ///< mechanical damping ignored (treated as 0)
};

/// Interpolates the curve at each torsional mode and applies the total
/// damping criterion. The conservative option ignores the mechanical
/// contribution, calling the system stable only where the electrical
/// damping alone is positive. Throws std::runtime_error when a modal
/// frequency lies outside the curve's usable span.
StabilityVerdict stability_verdict(const DampingCurve& curve,
                                   const ModalResult& modal,
                                   bool conservative = false);

/// Curve export: columns f_hz, de, ke, flags (1 = nonlinear/discarded).
CsvTable curve_to_table(const DampingCurve& curve);
void save_curve_csv(const DampingCurve& curve, const std::string& path);

/// Journal round-trip (full per-point metadata, one row per point).
void append_journal_row(const std::string& path, const DampingPoint& p);
DampingCurve load_journal_csv(const std::string& path);

}  // namespace ssti
