#include "ssti/damping_scan.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "ssti/engine.hpp"

namespace ssti {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Logged samples per tone period (about 128): dense enough that rounding
/// the measurement window to the sample lattice perturbs the projection far
/// below the accuracy budget, while low-frequency runs stay small.
int adaptive_decimation(double f_hz, double dt_s) {
  const int d = static_cast<int>(std::floor(1.0 / (128.0 * f_hz * dt_s)));
  return std::max(1, d);
}

struct Window {
  int k0 = 0;  ///< first sample
  int n = 0;   ///< sample count
};

Window tone_window(const SimTrace& tr, double f_hz, double t_start_s,
                   double window_s) {
  const long periods = std::lround(window_s * f_hz);
  if (periods < 1)
    throw std::invalid_argument("measure_tone: window " + format_double(window_s) +
                                " s is shorter than one period of " +
                                format_double(f_hz) + " Hz");
  const long n = std::lround(static_cast<double>(periods) / (f_hz * tr.dt_s));
  if (n < 2)
    throw std::invalid_argument("measure_tone: trace sampling too coarse for " +
                                format_double(f_hz) + " Hz");
  const long k0 = std::lround((t_start_s - tr.t0_s) / tr.dt_s);
  if (k0 < 0 || k0 + n > tr.sample_count())
    throw std::invalid_argument("measure_tone: window [" + format_double(t_start_s) +
                                ", " + format_double(t_start_s + window_s) +
                                "] s runs past the trace");
  return {static_cast<int>(k0), static_cast<int>(n)};
}

/// Single-bin projection with the window mean removed first: the te channel
/// rides on its operating-point value, and an integer-period bin is only
/// near-orthogonal to dc once the window is rounded to the sample lattice.
TonePhasor project_bin(const SimTrace& tr, const std::string& name, double f_hz,
                       const Window& w) {
  const std::vector<double>& x = tr.signal(name);
  double mean = 0.0;
  for (int k = 0; k < w.n; ++k) mean += x[static_cast<size_t>(w.k0 + k)];
  mean /= w.n;
  std::complex<double> acc{0.0, 0.0};
  for (int k = 0; k < w.n; ++k) {
    const double t = tr.time_at(w.k0 + k);
    acc += (x[static_cast<size_t>(w.k0 + k)] - mean) *
           std::polar(1.0, -kTwoPi * f_hz * t);
  }
  acc *= 2.0 / w.n;
  return {std::abs(acc), std::arg(acc)};
}

bool window_saw_limiting(const SimTrace& tr, const Window& w) {
  const std::vector<double>& lim = tr.signal("limiter_active");
  const std::vector<double>& blk = tr.signal("blocked");
  for (int k = w.k0; k < w.k0 + w.n; ++k) {
    if (lim[static_cast<size_t>(k)] > 0.5) return true;
    if (blk[static_cast<size_t>(k)] > 0.5) return true;
  }
  return false;
}

DampingPoint point_from_phasors(double f_hz, const TonePhasor& te,
                                const TonePhasor& dw, bool nonlinear,
                                ScanVariant variant, double settle_s,
                                double window_s) {
  DampingPoint p;
  p.f_hz = f_hz;
  p.d_te_amp = te.amplitude;
  p.phi_te_rad = te.phase_rad;
  p.d_omega_amp = dw.amplitude;
  p.phi_omega_rad = dw.phase_rad;
  p.nonlinear = nonlinear;
  p.variant = variant;
  p.settle_s = settle_s;
  p.window_s = window_s;
  if (!(p.d_omega_amp > 0.0))
    throw std::runtime_error("damping scan at " + format_double(f_hz) +
                             " Hz: no speed response to the injected tone");
  const double ratio = p.d_te_amp / p.d_omega_amp;
  const double dphi = p.phi_te_rad - p.phi_omega_rad;
  p.de = ratio * std::cos(dphi);
  p.ke = ratio * std::sin(dphi);
  return p;
}

void check_not_aborted(const SimTrace& tr, const std::string& what) {
  if (tr.aborted)
    throw std::runtime_error("damping scan: " + what + " diverged at t = " +
                             format_double(tr.abort_time_s) + " s: " +
                             tr.abort_reason);
}

/// The scan measures deviations around a steady operating point; an
/// operating point that moves on its own (an electrically unstable plant,
/// a mis-initialized run) would be folded into every phasor, so it is
/// rejected up front.
void require_quiescent(const Scenario& sc) {
  Scenario s = sc;
  s.sim.duration_s = 0.5;
  SimEngine eng(s);
  const SimTrace tr = eng.run();
  check_not_aborted(tr, "unperturbed settle check");
  for (size_t ch = 0; ch < tr.names.size(); ++ch) {
    const std::vector<double>& x = tr.data[ch];
    if (x.empty()) continue;
    double worst = 0.0;
    for (double v : x) worst = std::max(worst, std::abs(v - x.front()));
    if (worst > 1e-6)
      throw std::runtime_error(
          "damping scan settle check: channel '" + tr.names[ch] + "' moved " +
          format_double(worst) +
          " with no injection; the operating point does not hold");
  }
}

TmTone make_tone(double f_hz, double amplitude_pu, double t_on_s,
                 double settle_s, double t_off_s) {
  TmTone tone;
  tone.frequency_hz = f_hz;
  tone.amplitude_pu = amplitude_pu;
  tone.t_on_s = t_on_s;
  tone.t_off_s = t_off_s;
  tone.ramp_s = 0.5 * settle_s;
  return tone;
}

DampingPoint restart_point(const Scenario& base, const ScanPlan& plan,
                           double f_hz) {
  const double settle_s = plan.settle_periods / f_hz;
  const double window_s = plan.measure_periods / f_hz;
  Scenario s = base;
  s.sim.decimation = adaptive_decimation(f_hz, s.sim.dt_s);
  // Two decimated samples of slack so window rounding stays inside the run.
  s.sim.duration_s = settle_s + window_s + 2.0 * s.sim.decimation * s.sim.dt_s;
  SimEngine eng(s);
  eng.add_tm_tone(make_tone(f_hz, plan.amplitude_pu, 0.0, settle_s,
                            std::numeric_limits<double>::infinity()));
  const SimTrace tr = eng.run();
  check_not_aborted(tr, "run at " + format_double(f_hz) + " Hz");
  const Window w = tone_window(tr, f_hz, settle_s, window_s);
  return point_from_phasors(f_hz, project_bin(tr, "te", f_hz, w),
                            project_bin(tr, "delta_omega", f_hz, w),
                            window_saw_limiting(tr, w), plan.variant, settle_s,
                            w.n * tr.dt_s);
}

std::vector<DampingPoint> progressive_points(const Scenario& base,
                                             const ScanPlan& plan,
                                             const std::vector<double>& freqs) {
  struct Segment {
    double f = 0.0, t_on = 0.0, t_meas = 0.0, settle_s = 0.0, window_s = 0.0,
           t_end = 0.0;
  };
  std::vector<Segment> layout;
  double cursor = 0.0;
  double f_max = 0.0;
  for (double f : freqs) {
    Segment g;
    g.f = f;
    g.settle_s = plan.settle_periods / f;
    g.window_s = plan.measure_periods / f;
    g.t_on = cursor;
    g.t_meas = cursor + g.settle_s;
    // The tone ramps back down after the measurement window so the next
    // segment starts from a tone-free plant without a switch-off kick.
    g.t_end = g.t_meas + g.window_s + 0.5 * g.settle_s;
    cursor = g.t_end;
    layout.push_back(g);
    f_max = std::max(f_max, f);
  }

  Scenario s = base;
  s.sim.decimation = adaptive_decimation(f_max, s.sim.dt_s);
  s.sim.duration_s = cursor + 2.0 * s.sim.decimation * s.sim.dt_s;
  SimEngine eng(s);
  for (const Segment& g : layout)
    eng.add_tm_tone(make_tone(g.f, plan.amplitude_pu, g.t_on, g.settle_s, g.t_end));
  const SimTrace tr = eng.run();
  check_not_aborted(tr, "progressive run");

  std::vector<DampingPoint> out;
  for (const Segment& g : layout) {
    const Window w = tone_window(tr, g.f, g.t_meas, g.window_s);
    out.push_back(point_from_phasors(g.f, project_bin(tr, "te", g.f, w),
                                     project_bin(tr, "delta_omega", g.f, w),
                                     window_saw_limiting(tr, w), plan.variant,
                                     g.settle_s, w.n * tr.dt_s));
  }
  return out;
}

/// Tones sharing a multi-tone batch must stay jointly resolvable: separated
/// enough for the common fit window, and free of harmonic or
/// sum/difference coincidences that would alias one tone's nonlinear
/// products onto another's bin.
bool batch_conflict(const std::vector<double>& batch, double f,
                    int measure_periods) {
  constexpr double kCoincidenceTolHz = 0.3;
  double f_min = f;
  for (double g : batch) f_min = std::min(f_min, g);
  const double window_s = measure_periods / f_min;
  for (double g : batch) {
    if (std::abs(f - g) * window_s < 2.0) return true;
    for (int m = 2; m <= 4; ++m) {
      if (std::abs(f - m * g) < kCoincidenceTolHz) return true;
      if (std::abs(g - m * f) < kCoincidenceTolHz) return true;
    }
  }
  for (size_t i = 0; i < batch.size(); ++i)
    for (size_t j = i + 1; j < batch.size(); ++j) {
      if (std::abs(f - (batch[i] + batch[j])) < kCoincidenceTolHz) return true;
      if (std::abs(f - std::abs(batch[i] - batch[j])) < kCoincidenceTolHz)
        return true;
    }
  return false;
}

std::vector<std::vector<double>> make_batches(const std::vector<double>& freqs,
                                              const ScanPlan& plan) {
  std::vector<std::vector<double>> batches;
  for (double f : freqs) {
    bool placed = false;
    for (std::vector<double>& b : batches) {
      if (static_cast<int>(b.size()) >= plan.max_tones) continue;
      if (batch_conflict(b, f, plan.measure_periods)) continue;
      b.push_back(f);
      placed = true;
      break;
    }
    if (!placed) batches.push_back({f});
  }
  return batches;
}

/// Joint least-squares fit of dc plus one cosine/sine pair per tone over the
/// common window; unlike per-bin projection this stays exact when the batch
/// tones are not mutually orthogonal over the realized window.
std::vector<std::array<TonePhasor, 2>> fit_tone_phasors(
    const SimTrace& tr, const std::vector<double>& freqs, const Window& w) {
  const int b = static_cast<int>(freqs.size());
  const int m = 2 * b + 1;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd r_te = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd r_dw = Eigen::VectorXd::Zero(m);
  const std::vector<double>& te = tr.signal("te");
  const std::vector<double>& dw = tr.signal("delta_omega");
  Eigen::VectorXd phi(m);
  for (int k = 0; k < w.n; ++k) {
    const double t = tr.time_at(w.k0 + k);
    phi(0) = 1.0;
    for (int i = 0; i < b; ++i) {
      phi(1 + 2 * i) = std::cos(kTwoPi * freqs[static_cast<size_t>(i)] * t);
      phi(2 + 2 * i) = std::sin(kTwoPi * freqs[static_cast<size_t>(i)] * t);
    }
    g.selfadjointView<Eigen::Lower>().rankUpdate(phi);
    r_te += te[static_cast<size_t>(w.k0 + k)] * phi;
    r_dw += dw[static_cast<size_t>(w.k0 + k)] * phi;
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(
      Eigen::MatrixXd(g.selfadjointView<Eigen::Lower>()));
  const Eigen::VectorXd a_te = ldlt.solve(r_te);
  const Eigen::VectorXd a_dw = ldlt.solve(r_dw);
  std::vector<std::array<TonePhasor, 2>> out;
  for (int i = 0; i < b; ++i) {
    const auto phasor = [&](const Eigen::VectorXd& a) {
      const double c = a(1 + 2 * i), s = a(2 + 2 * i);
      return TonePhasor{std::hypot(c, s), std::atan2(-s, c)};
    };
    out.push_back({phasor(a_te), phasor(a_dw)});
  }
  return out;
}

std::vector<DampingPoint> multitone_batch(const Scenario& base,
                                          const ScanPlan& plan,
                                          const std::vector<double>& batch) {
  const double f_min = *std::min_element(batch.begin(), batch.end());
  const double f_max = *std::max_element(batch.begin(), batch.end());
  const double settle_s = plan.settle_periods / f_min;
  const double window_s = plan.measure_periods / f_min;
  Scenario s = base;
  s.sim.decimation = adaptive_decimation(f_max, s.sim.dt_s);
  s.sim.duration_s = settle_s + window_s + 2.0 * s.sim.decimation * s.sim.dt_s;
  SimEngine eng(s);
  for (double f : batch)
    eng.add_tm_tone(make_tone(f, plan.amplitude_pu, 0.0,
                              plan.settle_periods / f,
                              std::numeric_limits<double>::infinity()));
  const SimTrace tr = eng.run();
  check_not_aborted(tr, "multi-tone batch at " + format_double(f_min) + ".." +
                            format_double(f_max) + " Hz");
  const Window w = tone_window(tr, f_min, settle_s, window_s);
  const bool nonlinear = window_saw_limiting(tr, w);
  const std::vector<std::array<TonePhasor, 2>> fit =
      fit_tone_phasors(tr, batch, w);
  std::vector<DampingPoint> out;
  for (size_t i = 0; i < batch.size(); ++i)
    out.push_back(point_from_phasors(batch[i], fit[i][0], fit[i][1], nonlinear,
                                     plan.variant, settle_s, w.n * tr.dt_s));
  return out;
}

const std::vector<std::string>& journal_header() {
  static const std::vector<std::string> h = {
      "f_hz",        "de",        "ke",         "d_te_amp",
      "d_omega_amp", "phi_te_rad", "phi_omega_rad", "nonlinear",
      "variant",     "settle_s",  "window_s"};
  return h;
}

double variant_code(ScanVariant v) {
  switch (v) {
    case ScanVariant::kRestart: return 0.0;
    case ScanVariant::kProgressive: return 1.0;
    case ScanVariant::kMultitone: return 2.0;
  }
  throw std::invalid_argument("unknown scan variant");
}

ScanVariant variant_from_code(double code) {
  const long c = std::lround(code);
  if (c == 0) return ScanVariant::kRestart;
  if (c == 1) return ScanVariant::kProgressive;
  if (c == 2) return ScanVariant::kMultitone;
  throw std::invalid_argument("journal: unknown scan variant code " +
                              format_double(code));
}

std::vector<double> journal_row(const DampingPoint& p) {
  return {p.f_hz,
          p.de,
          p.ke,
          p.d_te_amp,
          p.d_omega_amp,
          p.phi_te_rad,
          p.phi_omega_rad,
          p.nonlinear ? 1.0 : 0.0,
          variant_code(p.variant),
          p.settle_s,
          p.window_s};
}

bool same_frequency(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(a, b));
}

/// Interpolation shared by de_at/ke_at and the verdict: linear between the
/// non-discarded points, error outside their span.
double interp_points(const std::vector<DampingPoint>& points, double f_hz,
                     bool want_ke) {
  std::vector<std::pair<double, double>> usable;
  for (const DampingPoint& p : points)
    if (!p.nonlinear) usable.emplace_back(p.f_hz, want_ke ? p.ke : p.de);
  if (usable.empty())
    throw std::runtime_error("damping curve has no usable points");
  std::sort(usable.begin(), usable.end());
  const double lo = usable.front().first, hi = usable.back().first;
  if (f_hz < lo - 1e-9 || f_hz > hi + 1e-9)
    throw std::runtime_error("damping curve does not cover " +
                             format_double(f_hz) + " Hz; usable points span " +
                             format_double(lo) + " to " + format_double(hi) +
                             " Hz");
  const auto it = std::lower_bound(
      usable.begin(), usable.end(), f_hz,
      [](const std::pair<double, double>& p, double f) { return p.first < f; });
  if (it != usable.end() && same_frequency(it->first, f_hz)) return it->second;
  if (it == usable.begin()) return usable.front().second;
  if (it == usable.end()) return usable.back().second;
  const auto& [f1, v1] = *(it - 1);
  const auto& [f2, v2] = *it;
  return v1 + (v2 - v1) * (f_hz - f1) / (f2 - f1);
}

}  // namespace

const char* scan_variant_name(ScanVariant v) {
  switch (v) {
    case ScanVariant::kRestart: return "restart";
    case ScanVariant::kProgressive: return "progressive";
    case ScanVariant::kMultitone: return "multitone";
  }
  throw std::invalid_argument("unknown scan variant");
}

void ScanPlan::validate(double base_frequency_hz) const {
  if (!(base_frequency_hz > 0.0))
    throw std::invalid_argument("scan plan: base frequency must be positive");
  if (frequencies_hz.empty())
    throw std::invalid_argument("scan plan: no frequencies to scan");
  const double f_max = 1.2 * base_frequency_hz;
  for (double f : frequencies_hz)
    if (!std::isfinite(f) || f <= 0.0 || f > f_max + 1e-9)
      throw std::invalid_argument("scan plan: frequency " + format_double(f) +
                                  " Hz outside (0, " + format_double(f_max) +
                                  "]");
  std::vector<double> sorted = frequencies_hz;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] - sorted[i - 1] <= 1e-9)
      throw std::invalid_argument("scan plan: duplicate frequency " +
                                  format_double(sorted[i]) + " Hz");
  if (!(amplitude_pu > 0.0) || amplitude_pu >= 0.5)
    throw std::invalid_argument("scan plan: amplitude must lie in (0, 0.5) pu");
  if (settle_periods < 1)
    throw std::invalid_argument("scan plan: settle_periods must be at least 1");
  if (measure_periods < 1)
    throw std::invalid_argument("scan plan: measure_periods must be at least 1");
  if (max_tones < 1 || max_tones > 3)
    throw std::invalid_argument("scan plan: max_tones must lie in [1, 3]");
  if (jobs < 0)
    throw std::invalid_argument("scan plan: jobs must be nonnegative");
}

ScanPlan make_scan_plan(const ScanParams& params, const ModalResult& modal,
                        double base_frequency_hz) {
  params.validate(base_frequency_hz);
  std::vector<double> fs;
  for (int k = 0;; ++k) {
    const double f = params.coarse_start_hz + k * params.coarse_step_hz;
    if (f > params.coarse_stop_hz + 1e-9) break;
    fs.push_back(f);
  }
  for (const Mode& m : modal.modes)
    for (int k = 0;; ++k) {
      const double f = m.frequency_hz - params.refine_span_hz +
                       k * params.refine_step_hz;
      if (f > m.frequency_hz + params.refine_span_hz + 1e-9) break;
      if (f > 0.0) fs.push_back(f);
    }
  const double f_max = 1.2 * base_frequency_hz;
  std::erase_if(fs, [&](double f) { return f <= 0.0 || f > f_max; });
  std::sort(fs.begin(), fs.end());
  std::vector<double> merged;
  for (double f : fs)
    if (merged.empty() || f - merged.back() > 1e-6) merged.push_back(f);

  ScanPlan plan;
  plan.frequencies_hz = std::move(merged);
  plan.amplitude_pu = params.amplitude_pu;
  plan.settle_periods = params.settle_periods;
  plan.measure_periods = params.measure_periods;
  plan.variant = params.variant;
  plan.max_tones = params.max_tones;
  return plan;
}

ToneMeasurement measure_tone(const SimTrace& trace, double f_hz,
                             double t_start_s, double window_s) {
  if (!std::isfinite(f_hz) || f_hz <= 0.0)
    throw std::invalid_argument("measure_tone: frequency must be positive");
  if (trace.dt_s <= 0.0 || trace.sample_count() < 2)
    throw std::invalid_argument("measure_tone: trace is empty");
  const Window w = tone_window(trace, f_hz, t_start_s, window_s);
  ToneMeasurement out;
  out.d_te = project_bin(trace, "te", f_hz, w);
  out.d_omega = project_bin(trace, "delta_omega", f_hz, w);
  out.window_s = w.n * trace.dt_s;
  return out;
}

double DampingCurve::de_at(double f_hz) const {
  return interp_points(points, f_hz, false);
}

double DampingCurve::ke_at(double f_hz) const {
  return interp_points(points, f_hz, true);
}

DampingCurve electrical_damping_curve(const Scenario& scenario,
                                      const ScanPlan& plan) {
  plan.validate(scenario.base_frequency_hz);
  Scenario base = scenario;
  base.grid.events.clear();  // a scan characterizes one operating point
  base.validate();
  require_quiescent(base);

  std::vector<double> pending = plan.frequencies_hz;
  std::sort(pending.begin(), pending.end());

  std::vector<DampingPoint> done;
  const bool journal = !plan.journal_path.empty();
  if (journal && std::filesystem::exists(plan.journal_path) &&
      std::filesystem::file_size(plan.journal_path) > 0) {
    const DampingCurve prior = load_journal_csv(plan.journal_path);
    std::erase_if(pending, [&](double f) {
      for (const DampingPoint& p : prior.points)
        if (same_frequency(p.f_hz, f)) {
          done.push_back(p);
          return true;
        }
      return false;
    });
  }

  std::mutex mu;  // guards done and the journal file
  const auto record = [&](const DampingPoint& p) {
    const std::lock_guard<std::mutex> lock(mu);
    done.push_back(p);
    if (journal) append_journal_row(plan.journal_path, p);
  };

  if (plan.variant == ScanVariant::kProgressive) {
    if (!pending.empty())
      for (const DampingPoint& p : progressive_points(base, plan, pending))
        record(p);
  } else if (plan.variant == ScanVariant::kMultitone) {
    for (const std::vector<double>& batch : make_batches(pending, plan))
      for (const DampingPoint& p : multitone_batch(base, plan, batch))
        record(p);
  } else {
    int jobs = plan.jobs > 0
                   ? plan.jobs
                   : static_cast<int>(
                         std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min<int>(jobs, static_cast<int>(pending.size()));
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    const auto worker = [&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= pending.size()) return;
        {
          const std::lock_guard<std::mutex> lock(mu);
          if (first_error) return;
        }
        try {
          record(restart_point(base, plan, pending[i]));
        } catch (...) {
          const std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    if (jobs <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
  }

  std::sort(done.begin(), done.end(),
            [](const DampingPoint& a, const DampingPoint& b) {
              return a.f_hz < b.f_hz;
            });
  DampingCurve curve;
  curve.points = std::move(done);
  return curve;
}

StabilityVerdict stability_verdict(const DampingCurve& curve,
                                   const ModalResult& modal,
                                   bool conservative) {
  StabilityVerdict v;
  v.conservative = conservative;
  v.stable = true;
  for (const Mode& m : modal.modes) {
    ModeVerdict mv;
    mv.f_hz = m.frequency_hz;
    mv.de = curve.de_at(m.frequency_hz);
    mv.d_m = conservative ? 0.0 : m.modal_damping_pu;
    mv.d_t = mv.de + mv.d_m;
    mv.stable = mv.d_t > 0.0;
    v.stable = v.stable && mv.stable;
    v.modes.push_back(mv);
  }
  return v;
}

CsvTable curve_to_table(const DampingCurve& curve) {
  CsvTable t;
  std::vector<double> f, de, ke, flags;
  for (const DampingPoint& p : curve.points) {
    f.push_back(p.f_hz);
    de.push_back(p.de);
    ke.push_back(p.ke);
    flags.push_back(p.nonlinear ? 1.0 : 0.0);
  }
  t.add_column("f_hz", std::move(f));
  t.add_column("de", std::move(de));
  t.add_column("ke", std::move(ke));
  t.add_column("flags", std::move(flags));
  return t;
}

void save_curve_csv(const DampingCurve& curve, const std::string& path) {
  write_csv(curve_to_table(curve), path);
}

void append_journal_row(const std::string& path, const DampingPoint& p) {
  const bool fresh = !std::filesystem::exists(path) ||
                     std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open journal: " + path);
  const auto write_row = [&out](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i)
      out << (i ? "," : "") << cells[i];
    out << "\n";
  };
  if (fresh) write_row(journal_header());
  std::vector<std::string> cells;
  for (double v : journal_row(p)) cells.push_back(format_double(v));
  write_row(cells);
  if (!out.flush()) throw std::runtime_error("cannot write journal: " + path);
}

DampingCurve load_journal_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header != journal_header())
    throw std::invalid_argument("journal " + path +
                                ": unexpected column layout");
  DampingCurve curve;
  for (size_t r = 0; r < t.row_count(); ++r) {
    DampingPoint p;
    p.f_hz = t.columns[0][r];
    p.de = t.columns[1][r];
    p.ke = t.columns[2][r];
    p.d_te_amp = t.columns[3][r];
    p.d_omega_amp = t.columns[4][r];
    p.phi_te_rad = t.columns[5][r];
    p.phi_omega_rad = t.columns[6][r];
    p.nonlinear = t.columns[7][r] > 0.5;
    p.variant = variant_from_code(t.columns[8][r]);
    p.settle_s = t.columns[9][r];
    p.window_s = t.columns[10][r];
    curve.points.push_back(p);
  }
  std::sort(curve.points.begin(), curve.points.end(),
            [](const DampingPoint& a, const DampingPoint& b) {
              return a.f_hz < b.f_hz;
            });
  return curve;
}

}  // namespace ssti
