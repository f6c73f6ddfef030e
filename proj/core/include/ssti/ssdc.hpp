#pragma once

#include "ssti/filters.hpp"
#include "ssti/scenario.hpp"

namespace ssti {

/// Narrow-band damping path added to the converter's active-power reference:
/// band-pass at the targeted torsional frequency, lead-lag phase
/// compensation, gain, symmetric saturation. The input is the PLL frequency
/// estimate; at lock (1 pu) the whole chain rests at zero.
class Ssdc {
 public:
  Ssdc(const SsdcParams& params, double base_frequency_hz, double dt_s);

  /// One step: PLL frequency estimate in, active-power addition out.
  double step(double omega_net_pu);

  bool saturated() const { return saturated_; }
  double output_pu() const { return out_; }

 private:
  SsdcParams p_;
  Biquad bandpass_;
  FirstOrder leadlag_;
  double out_ = 0.0;
  bool saturated_ = false;
};

}  // namespace ssti
