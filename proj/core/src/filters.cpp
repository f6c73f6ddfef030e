#include "ssti/filters.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ssti {

namespace {

double prewarp(double omega0, double dt) {
  // Bilinear frequency mapping constant chosen so the discrete response is
  // exact at omega0.
  return omega0 / std::tan(omega0 * dt / 2.0);
}

}  // namespace

double Biquad::step(double x) {
  const double y = b0 * x + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
  x2 = x1;
  x1 = x;
  y2 = y1;
  y1 = y;
  return y;
}

void Biquad::reset() { x1 = x2 = y1 = y2 = 0.0; }

void Biquad::settle_to(double constant_input) {
  const double y = constant_input * (b0 + b1 + b2) / (1.0 + a1 + a2);
  x1 = x2 = constant_input;
  y1 = y2 = y;
}

double FirstOrder::step(double x) {
  const double y = b0 * x + b1 * x1 - a1 * y1;
  x1 = x;
  y1 = y;
  return y;
}

void FirstOrder::reset() { x1 = y1 = 0.0; }

void FirstOrder::settle_to(double constant_input) {
  x1 = constant_input;
  y1 = constant_input * (b0 + b1) / (1.0 + a1);
}

Biquad make_bandpass(double f_center_hz, double q, double dt_s) {
  if (f_center_hz <= 0.0 || q <= 0.0 || dt_s <= 0.0)
    throw std::invalid_argument("make_bandpass: f_center, q and dt must be positive");
  if (f_center_hz >= 0.5 / dt_s)
    throw std::invalid_argument("make_bandpass: f_center must be below Nyquist");
  const double w0 = 2.0 * std::numbers::pi * f_center_hz;
  const double c = prewarp(w0, dt_s);
  const double a0 = c * c + w0 * c / q + w0 * w0;
  Biquad f;
  f.b0 = (w0 * c / q) / a0;
  f.b1 = 0.0;
  f.b2 = -f.b0;
  f.a1 = (2.0 * w0 * w0 - 2.0 * c * c) / a0;
  f.a2 = (c * c - w0 * c / q + w0 * w0) / a0;
  return f;
}

Biquad make_lowpass2(double f_corner_hz, double dt_s) {
  if (f_corner_hz <= 0.0 || dt_s <= 0.0)
    throw std::invalid_argument("make_lowpass2: corner and dt must be positive");
  if (f_corner_hz >= 0.5 / dt_s)
    throw std::invalid_argument("make_lowpass2: corner must be below Nyquist");
  const double w0 = 2.0 * std::numbers::pi * f_corner_hz;
  const double c = prewarp(w0, dt_s);
  const double sq2 = std::numbers::sqrt2;
  const double a0 = c * c + sq2 * w0 * c + w0 * w0;
  Biquad f;
  f.b0 = w0 * w0 / a0;
  f.b1 = 2.0 * f.b0;
  f.b2 = f.b0;
  f.a1 = (2.0 * w0 * w0 - 2.0 * c * c) / a0;
  f.a2 = (c * c - sq2 * w0 * c + w0 * w0) / a0;
  return f;
}

FirstOrder make_leadlag(double t1_s, double t2_s, double dt_s) {
  if (t1_s < 0.0 || t2_s <= 0.0 || dt_s <= 0.0)
    throw std::invalid_argument("make_leadlag: need T1 >= 0, T2 > 0, dt > 0");
  const double k = 2.0 / dt_s;
  const double a0 = 1.0 + k * t2_s;
  FirstOrder f;
  f.b0 = (1.0 + k * t1_s) / a0;
  f.b1 = (1.0 - k * t1_s) / a0;
  f.a1 = (1.0 - k * t2_s) / a0;
  return f;
}

FirstOrder make_lowpass1(double f_corner_hz, double dt_s) {
  if (f_corner_hz <= 0.0 || dt_s <= 0.0)
    throw std::invalid_argument("make_lowpass1: corner and dt must be positive");
  if (f_corner_hz >= 0.5 / dt_s)
    throw std::invalid_argument("make_lowpass1: corner must be below Nyquist");
  const double w0 = 2.0 * std::numbers::pi * f_corner_hz;
  const double c = prewarp(w0, dt_s);
  const double a0 = c + w0;
  FirstOrder f;
  f.b0 = w0 / a0;
  f.b1 = w0 / a0;
  f.a1 = (w0 - c) / a0;
  return f;
}

Biquad bilinear_biquad(double b0, double b1, double b2, double a0, double a1,
                       double a2, double dt_s) {
  if (dt_s <= 0.0) throw std::invalid_argument("bilinear_biquad: dt must be positive");
  const bool ok = a2 > 0.0 || (a2 == 0.0 && a1 > 0.0) ||
                  (a2 == 0.0 && a1 == 0.0 && a0 != 0.0);
  if (!ok)
    throw std::invalid_argument("bilinear_biquad: degenerate denominator");
  const double k = 2.0 / dt_s;
  const double d0 = a0 + a1 * k + a2 * k * k;
  Biquad f;
  f.b0 = (b0 + b1 * k + b2 * k * k) / d0;
  f.b1 = (2.0 * b0 - 2.0 * b2 * k * k) / d0;
  f.b2 = (b0 - b1 * k + b2 * k * k) / d0;
  f.a1 = (2.0 * a0 - 2.0 * a2 * k * k) / d0;
  f.a2 = (a0 - a1 * k + a2 * k * k) / d0;
  return f;
}

std::complex<double> rational_response(double b0, double b1, double b2,
                                       double a0, double a1, double a2,
                                       double f_hz) {
  const std::complex<double> s(0.0, 2.0 * std::numbers::pi * f_hz);
  return (b0 + b1 * s + b2 * s * s) / (a0 + a1 * s + a2 * s * s);
}

std::complex<double> bandpass_response(double f_center_hz, double q, double f_hz) {
  const std::complex<double> s(0.0, 2.0 * std::numbers::pi * f_hz);
  const double w0 = 2.0 * std::numbers::pi * f_center_hz;
  return (s * w0 / q) / (s * s + s * w0 / q + w0 * w0);
}

std::complex<double> lowpass2_response(double f_corner_hz, double f_hz) {
  const std::complex<double> s(0.0, 2.0 * std::numbers::pi * f_hz);
  const double w0 = 2.0 * std::numbers::pi * f_corner_hz;
  return (w0 * w0) / (s * s + std::numbers::sqrt2 * w0 * s + w0 * w0);
}

std::complex<double> leadlag_response(double t1_s, double t2_s, double f_hz) {
  const std::complex<double> s(0.0, 2.0 * std::numbers::pi * f_hz);
  return (1.0 + t1_s * s) / (1.0 + t2_s * s);
}

}  // namespace ssti
