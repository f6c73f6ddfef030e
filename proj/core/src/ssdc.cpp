#include "ssti/ssdc.hpp"

#include <cmath>
#include <stdexcept>

namespace ssti {

Ssdc::Ssdc(const SsdcParams& params, double base_frequency_hz, double dt_s)
    : p_(params) {
  p_.validate(base_frequency_hz);
  if (!p_.enabled) {
    throw std::invalid_argument(
        "damping controller built from a disabled ssdc section");
  }
  bandpass_ = make_bandpass(p_.center_frequency_hz, p_.quality_factor, dt_s);
  leadlag_ = make_leadlag(p_.t1_s, p_.t2_s, dt_s);
}

double Ssdc::step(double omega_net_pu) {
  const double band = bandpass_.step(omega_net_pu - 1.0);
  double y = p_.gain * leadlag_.step(band);
  saturated_ = std::abs(y) > p_.output_limit_pu;
  if (saturated_) y = std::copysign(p_.output_limit_pu, y);
  out_ = y;
  return y;
}

}  // namespace ssti
