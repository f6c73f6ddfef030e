#pragma once

#include <complex>

namespace ssti {

/// Second-order direct-form-I section. Coefficients are normalized (a0 == 1).
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;

  double step(double x);
  void reset();
  /// Preload states so a constant input yields the filter's DC response
  /// immediately (no startup transient at equilibrium).
  void settle_to(double constant_input);
};

/// First-order section (1 + T1 s)/(1 + T2 s), bilinear discretization.
struct FirstOrder {
  double b0 = 1.0, b1 = 0.0, a1 = 0.0;
  double x1 = 0.0, y1 = 0.0;

  double step(double x);
  void reset();
  void settle_to(double constant_input);
};

/// Band-pass with unity gain at the center frequency, from the analog
/// prototype H(s) = (s/(Q w0)) / (s^2/w0^2 + s/(Q w0) + 1), bilinear with
/// prewarping at the center so the discrete peak sits exactly on f_center.
Biquad make_bandpass(double f_center_hz, double q, double dt_s);

/// Second-order Butterworth low-pass, bilinear with prewarping at the corner.
Biquad make_lowpass2(double f_corner_hz, double dt_s);

FirstOrder make_leadlag(double t1_s, double t2_s, double dt_s);
FirstOrder make_lowpass1(double f_corner_hz, double dt_s);

/// General bilinear discretization of
///   H(s) = (b0 + b1 s + b2 s^2) / (a0 + a1 s + a2 s^2)
/// without prewarping. The denominator must be a proper stable candidate
/// (a2 > 0, or a2 == 0 with a1 > 0, or pure gain).
Biquad bilinear_biquad(double b0, double b1, double b2, double a0, double a1,
                       double a2, double dt_s);

std::complex<double> rational_response(double b0, double b1, double b2,
                                       double a0, double a1, double a2,
                                       double f_hz);

/// Analog frequency responses of the prototypes above, for design checks.
std::complex<double> bandpass_response(double f_center_hz, double q, double f_hz);
std::complex<double> lowpass2_response(double f_corner_hz, double f_hz);
std::complex<double> leadlag_response(double t1_s, double t2_s, double f_hz);

}  // namespace ssti
