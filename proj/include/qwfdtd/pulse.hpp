#pragma once

#include <cmath>
#include <string>

#include "qwfdtd/constants.hpp"
#include "qwfdtd/errors.hpp"

namespace qwfdtd {

/// Cosine-modulated Gaussian wave packet
///   E(t) = E0 cos(wc (t - t0)) exp(-(t - t0)^2 / tau^2).
struct PulseSpec {
  double amplitude = 0.0;  // E0, V/m
  double carrier = 0.0;    // wc, rad/s
  double delay = 0.0;      // t0, s
  double width = 0.0;      // tau, s
};

/// Delay that puts the packet start 4.5 widths before the peak.
inline constexpr double kDelayWidths = 4.5;

inline void validate(const PulseSpec& p) {
  if (!(p.amplitude >= 0.0))
    throw InvalidParameter("pulse amplitude must be >= 0");
  if (!(p.width > 0.0)) throw InvalidParameter("pulse width must be > 0");
  // Small slack so delay = 4.5 * width computed in floating point passes.
  if (!(p.delay >= kDelayWidths * p.width * (1.0 - 1e-12)))
    throw InvalidParameter("pulse delay must be >= 4.5 widths");
}

inline PulseSpec make_pulse(double amplitude, double carrier, double width) {
  PulseSpec p{amplitude, carrier, kDelayWidths * width, width};
  validate(p);
  return p;
}

/// Field amplitude whose energy density, integrated over `volume`, equals
/// one photon: (1/2) eps E0^2 V = hbar omega.
inline double e0_from_photon_energy(double omega, double epsilon,
                                    double volume) {
  if (!(omega > 0) || !(epsilon > 0) || !(volume > 0))
    throw InvalidParameter(
        "photon calibration needs positive omega, epsilon, volume");
  return std::sqrt(2.0 * phys::hbar * omega / (epsilon * volume));
}

inline double pulse_value(const PulseSpec& p, double t) {
  const double s = t - p.delay;
  const double u = s / p.width;
  return p.amplitude * std::cos(p.carrier * s) * std::exp(-u * u);
}

inline double pulse_envelope(const PulseSpec& p, double t) {
  const double u = (t - p.delay) / p.width;
  return p.amplitude * std::exp(-u * u);
}

/// Closed-form Fourier magnitude of the packet (delay phase factored out):
///   E(w) = E0 tau sqrt(pi)/2 [exp(-tau^2 (w-wc)^2/4) + exp(-tau^2 (w+wc)^2/4)]
inline double pulse_spectrum(const PulseSpec& p, double omega) {
  const double half = p.width * std::sqrt(phys::pi) / 2.0;
  const double a = p.width * (omega - p.carrier) / 2.0;
  const double b = p.width * (omega + p.carrier) / 2.0;
  return p.amplitude * half * (std::exp(-a * a) + std::exp(-b * b));
}

/// tau = n_c * ds_max / (2 c), n_c being cells per wavelength.
inline double tau_from_grid(double cells_per_wavelength, double ds_max) {
  if (!(cells_per_wavelength >= 1.0))
    throw InvalidParameter("cells per wavelength must be >= 1");
  if (!(ds_max > 0.0)) throw InvalidParameter("grid step must be > 0");
  return cells_per_wavelength * ds_max / (2.0 * phys::c0);
}

}  // namespace qwfdtd
