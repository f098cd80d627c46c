#pragma once

// Test-only measurements on the FDTD engine: 1D plane-wave dispersion and
// normal-incidence reflection. They drive step_h/step_e/apply_abc directly
// and analyse the recorded fields with independent fits.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qwfdtd/fdtd.hpp"

namespace probes {

using namespace qwfdtd;

/// x-propagating plane wave: periodic in y and z, `xb` on the x faces.
inline YeeGrid plane_wave_grid(int nx, double dx, Boundary xb) {
  auto g = new_grid(nx, 2, 2, dx, dx, dx);
  g.boundary = {xb, Boundary::periodic, Boundary::periodic};
  return g;
}

template <class Source>
inline void drive_plane(YeeGrid& g, int i_src, double t, Source&& src) {
  const double v = src(t);
  for (int j = 0; j < g.ny; ++j)
    for (int k = 0; k < g.nz; ++k) {
      SourceEvent ev;
      ev.cell = {i_src, j, k};
      // Zero-delay, zero-carrier packet evaluated at its peak is just v.
      ev.pulse = {v, 0.0, 0.0, 1.0};
      ev.start_time = 0.0;
      inject_soft_source(g, ev, 0.0);
    }
}

struct PhaseVelocity {
  double measured;     // m/s
  double theoretical;  // from the 1D Yee dispersion relation
};

/// Launches a ramped sinusoid with `cells_per_wavelength` resolution, runs
/// `steps` iterations, then fits A cos + B sin at the drive frequency over
/// the last `window` steps at each cell in [lo, hi] and regresses the
/// unwrapped phase on x.
inline PhaseVelocity measure_phase_velocity(double cells_per_wavelength,
                                            int steps = 1000) {
  const double dx = 10e-9;
  const int nx = 1400, i_src = 100, lo = 160, hi = 360, window = 300;
  auto g = plane_wave_grid(nx, dx, Boundary::absorbing);
  const double dt = courant_dt(g, 0.9);
  const double lambda = cells_per_wavelength * dx;
  const double omega = 2.0 * std::numbers::pi * phys::c0 / lambda;
  const double ramp = 60.0 * dt;
  auto src = [&](double t) {
    const double r = 1.0 - std::exp(-(t / ramp) * (t / ramp));
    return r * std::sin(omega * t);
  };

  std::vector<double> cc(hi - lo + 1, 0.0), cs(hi - lo + 1, 0.0);
  std::vector<double> ss(hi - lo + 1, 0.0);
  std::vector<double> ysc(hi - lo + 1, 0.0), yss(hi - lo + 1, 0.0);
  for (int n = 1; n <= steps; ++n) {
    step_h(g, dt);
    const auto hist = BoundaryHistory::capture(g);
    step_e(g, dt);
    drive_plane(g, i_src, n * dt, src);
    apply_abc(g, hist, dt);
    if (n > steps - window) {
      const double t = n * dt;
      const double c = std::cos(omega * t), s = std::sin(omega * t);
      for (int i = lo; i <= hi; ++i) {
        const double y = g.ez(i, 0, 0);
        const auto m = static_cast<std::size_t>(i - lo);
        cc[m] += c * c;
        cs[m] += c * s;
        ss[m] += s * s;
        ysc[m] += y * c;
        yss[m] += y * s;
      }
    }
  }

  // Least squares y ~ A cos + B sin; phase = atan2(-B, A) for A cos(wt + p).
  std::vector<double> phase;
  for (std::size_t m = 0; m < cc.size(); ++m) {
    const double det = cc[m] * ss[m] - cs[m] * cs[m];
    const double a = (ysc[m] * ss[m] - yss[m] * cs[m]) / det;
    const double b = (yss[m] * cc[m] - ysc[m] * cs[m]) / det;
    phase.push_back(std::atan2(-b, a));
  }
  for (std::size_t m = 1; m < phase.size(); ++m) {
    while (phase[m] - phase[m - 1] > std::numbers::pi) phase[m] -= 2 * std::numbers::pi;
    while (phase[m] - phase[m - 1] < -std::numbers::pi) phase[m] += 2 * std::numbers::pi;
  }
  // Slope of phase vs x is -k.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(phase.size());
  for (std::size_t m = 0; m < phase.size(); ++m) {
    const double x = static_cast<double>(m) * dx;
    sx += x;
    sy += phase[m];
    sxx += x * x;
    sxy += x * phase[m];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double k = -slope;

  const double courant = phys::c0 * dt / dx;
  const double kth =
      2.0 / dx * std::asin(std::sin(omega * dt / 2.0) / courant);
  return {omega / k, omega / kth};
}

struct Reflection {
  double incident;
  double reflected;
};

/// Gaussian plane pulse launched toward the low-x face; the probe sits
/// between source and face so incident and reflected passes separate.
inline Reflection measure_reflection(Boundary xb) {
  const double dx = 10e-9;
  const int nx = 400, i_src = 200, i_probe = 80;
  auto g = plane_wave_grid(nx, dx, xb);
  const double dt = courant_dt(g, 0.9);
  const PulseSpec p = make_pulse(1.0, 2.0 * std::numbers::pi * 3.7e14, 10.0 * dt);
  auto src = [&](double t) { return pulse_value(p, t); };

  const double speed = phys::c0 * dt / dx;  // cells per step
  const int t_peak = static_cast<int>(p.delay / dt);
  const int arrive = t_peak + static_cast<int>((i_src - i_probe) / speed);
  const int back = arrive + static_cast<int>(2.0 * i_probe / speed);
  const int split = (arrive + back) / 2;
  // The rightward pass must not reach the far face before we stop.
  const int stop = back + (back - split);

  Reflection r{0.0, 0.0};
  for (int n = 1; n <= stop; ++n) {
    step_h(g, dt);
    const auto hist = BoundaryHistory::capture(g);
    step_e(g, dt);
    drive_plane(g, i_src, n * dt, src);
    apply_abc(g, hist, dt);
    const double v = std::abs(g.ez(i_probe, 0, 0));
    if (n < split)
      r.incident = std::max(r.incident, v);
    else
      r.reflected = std::max(r.reflected, v);
  }
  return r;
}

}  // namespace probes
