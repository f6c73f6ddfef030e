#include "ssti/trace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "ssti/csv.hpp"
#include "ssti/filters.hpp"

namespace ssti {

int SimTrace::channel(const std::string& name) const {
  for (int c = 0; c < static_cast<int>(names.size()); ++c)
    if (names[c] == name) return c;
  throw std::invalid_argument("trace has no channel named '" + name + "'");
}

const std::vector<double>& SimTrace::signal(const std::string& name) const {
  return data[channel(name)];
}

static CsvTable trace_to_table(const SimTrace& trace) {
  CsvTable table;
  const int rows = trace.sample_count();
  std::vector<double> time(rows);
  for (int k = 0; k < rows; ++k) time[k] = trace.time_at(k);
  table.add_column("t", std::move(time));
  for (size_t c = 0; c < trace.names.size(); ++c)
    table.add_column(trace.names[c], trace.data[c]);
  return table;
}

std::string trace_to_csv(const SimTrace& trace) {
  return to_csv_string(trace_to_table(trace));
}

void save_trace_csv(const SimTrace& trace, const std::string& path) {
  write_csv(trace_to_table(trace), path);
}

double growth_rate(const std::vector<double>& x, double dt_s, double f_target_hz,
                   double window_s) {
  if (!(dt_s > 0.0) || !(f_target_hz > 0.0))
    throw std::invalid_argument("growth_rate needs positive dt and frequency");
  const int n = static_cast<int>(x.size());
  const int window = static_cast<int>(std::lround(window_s / dt_s));
  if (window < 2 || window > n)
    throw std::invalid_argument("growth_rate window does not fit the signal");
  if (window_s * f_target_hz < 10.0)
    throw std::invalid_argument(
        "growth_rate window must cover at least ten cycles of the target");

  // Quadrature demodulation shifts the f_target component to dc; the
  // low-pass keeps only a f_target/5 neighbourhood around it, so the log of
  // the envelope magnitude is affine in time with slope sigma.
  const double w = 2.0 * std::numbers::pi * f_target_hz;
  Biquad lp_re = make_lowpass2(f_target_hz / 5.0, dt_s);
  Biquad lp_im = make_lowpass2(f_target_hz / 5.0, dt_s);
  std::vector<double> env(n);
  for (int k = 0; k < n; ++k) {
    const double t = k * dt_s;
    const double re = lp_re.step(x[k] * std::cos(w * t));
    const double im = lp_im.step(-x[k] * std::sin(w * t));
    env[k] = std::hypot(re, im);
  }

  // Least-squares line through log(env) over the trailing window.
  const int k0 = n - window;
  double peak = 0.0;
  for (int k = k0; k < n; ++k) peak = std::max(peak, env[k]);
  if (!(peak > 1e-9))
    throw std::runtime_error(
        "no detectable component at the requested frequency");

  double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
  int count = 0;
  for (int k = k0; k < n; ++k) {
    if (!(env[k] > 0.0)) continue;
    const double t = k * dt_s;
    const double y = std::log(env[k]);
    sum_t += t;
    sum_y += y;
    sum_tt += t * t;
    sum_ty += t * y;
    ++count;
  }
  const double denom = count * sum_tt - sum_t * sum_t;
  if (count < 2 || !(std::abs(denom) > 0.0))
    throw std::runtime_error(
        "no detectable component at the requested frequency");
  return (count * sum_ty - sum_t * sum_y) / denom;
}

}  // namespace ssti
