#pragma once

#include <string>
#include <vector>

namespace ssti {

/// Uniformly sampled named signals from one simulation run. The time axis is
/// implicit: sample k sits at t0_s + k * dt_s (dt_s is the decimated
/// spacing). All channels have identical length. An aborted run keeps the
/// samples logged up to the abort and flags it; that is a reported outcome,
/// not an error.
struct SimTrace {
  double t0_s = 0.0;
  double dt_s = 0.0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> data;  ///< data[channel][sample]

  bool aborted = false;
  double abort_time_s = 0.0;
  std::string abort_reason;

  int sample_count() const {
    return data.empty() ? 0 : static_cast<int>(data.front().size());
  }
  double time_at(int k) const { return t0_s + k * dt_s; }

  /// Channel index by name; throws std::invalid_argument if missing.
  int channel(const std::string& name) const;
  const std::vector<double>& signal(const std::string& name) const;
};

/// CSV with a leading time column "t" and one column per channel.
std::string trace_to_csv(const SimTrace& trace);
void save_trace_csv(const SimTrace& trace, const std::string& path);

/// Exponential growth rate (1/s) of the f_target component over the trailing
/// `window_s` seconds: quadrature demodulation, second-order Butterworth
/// low-pass at f_target/5, least-squares slope of the log envelope. The
/// window must cover at least ten cycles of f_target. Throws
/// std::runtime_error("no detectable component...") when the envelope never
/// rises above 1e-9.
double growth_rate(const std::vector<double>& x, double dt_s, double f_target_hz,
                   double window_s);

}  // namespace ssti
