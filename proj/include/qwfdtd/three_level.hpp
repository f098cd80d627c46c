#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qwfdtd/constants.hpp"
#include "qwfdtd/errors.hpp"

namespace qwfdtd {

using cplx = std::complex<double>;
using Matrix3 = std::array<std::array<cplx, 3>, 3>;

/// L-type three-level atom driven by two resonant envelopes.
///
/// Times passed to resonance_controls/hamiltonian/propagate are in the
/// natural unit `time_unit` (seconds per unit, default 1/Omega_R); the
/// carrier phases inside the controls use physical time s * time_unit.
struct ThreeLevelSystem {
  std::array<double, 3> energies{};  // E1 < E2 < E3, joules
  double phi1 = 0.0;                 // joule-seconds, enters as phi/hbar
  double phi2 = 0.0;
  double coupling_energy = phys::hbar * 2.0 * phys::pi * 1e12;  // hbar Omega_R
  double time_unit = 1.0 / (2.0 * phys::pi * 1e12);

  double omega1() const { return (energies[1] - energies[0]) / phys::hbar; }
  double omega2() const { return (energies[2] - energies[1]) / phys::hbar; }

  /// Ground level at zero energy, transition frequencies w1, w2 (rad/s).
  static ThreeLevelSystem from_frequencies(double w1, double w2,
                                           double phi1_rad = 0.0,
                                           double phi2_rad = 0.0) {
    ThreeLevelSystem s;
    s.energies = {0.0, phys::hbar * w1, phys::hbar * (w1 + w2)};
    s.phi1 = phi1_rad * phys::hbar;
    s.phi2 = phi2_rad * phys::hbar;
    return s;
  }
};

inline void validate(const ThreeLevelSystem& s) {
  if (!(s.energies[0] < s.energies[1] && s.energies[1] < s.energies[2]))
    throw InvalidParameter("level energies must satisfy E1 < E2 < E3");
  if (!(s.coupling_energy >= 0.0))
    throw InvalidParameter("coupling energy must be >= 0");
  if (!(s.time_unit > 0.0)) throw InvalidParameter("time unit must be > 0");
}

struct AtomicState {
  std::array<cplx, 3> c{};

  double norm2() const {
    return std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]);
  }
  std::array<double, 3> populations() const {
    return {std::norm(c[0]), std::norm(c[1]), std::norm(c[2])};
  }
  static AtomicState level(int n) {
    AtomicState s;
    s.c[n] = 1.0;
    return s;
  }
};

struct Controls {
  cplx omega1;
  cplx omega2;
};

/// Resonance envelopes
///   Omega1 = cos(t/sqrt3) exp(i[(E2-E1) t + phi1]/hbar)
///   Omega2 = sin(t/sqrt3) exp(i[(E3-E2) t + phi2]/hbar)
inline Controls resonance_controls(const ThreeLevelSystem& s, double t) {
  const double arg = t / std::sqrt(3.0);
  const double tp = t * s.time_unit;
  const double th1 = ((s.energies[1] - s.energies[0]) * tp + s.phi1) / phys::hbar;
  const double th2 = ((s.energies[2] - s.energies[1]) * tp + s.phi2) / phys::hbar;
  return {std::cos(arg) * std::polar(1.0, th1),
          std::sin(arg) * std::polar(1.0, th2)};
}

/// RWA Hamiltonian in joules. With drift: D + V(t), D = diag(E1, E2, E3);
/// without: V(t) alone. V couples 1-2 and 2-3 only.
inline Matrix3 hamiltonian(const ThreeLevelSystem& s, double t,
                           bool include_drift) {
  const auto w = resonance_controls(s, t);
  const double g = s.coupling_energy;
  Matrix3 h{};
  h[0][1] = g * w.omega1;
  h[1][0] = std::conj(h[0][1]);
  h[1][2] = g * w.omega2;
  h[2][1] = std::conj(h[1][2]);
  if (include_drift)
    for (int n = 0; n < 3; ++n) h[n][n] = s.energies[n];
  return h;
}

/// V(t) seen from the frame rotating with the drift:
///   H_I = exp(i D t/hbar) V exp(-i D t/hbar).
/// The carrier phases of the resonance controls cancel against the level
/// splittings here, leaving the slow envelopes.
inline Matrix3 interaction_hamiltonian(const ThreeLevelSystem& s, double t) {
  const Matrix3 v = hamiltonian(s, t, false);
  const double tp = t * s.time_unit;
  std::array<cplx, 3> rot;
  for (int n = 0; n < 3; ++n) rot[n] = std::polar(1.0, s.energies[n] * tp / phys::hbar);
  Matrix3 h{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) h[a][b] = rot[a] * v[a][b] * std::conj(rot[b]);
  return h;
}

enum class Picture {
  interaction,  // d/dt c = -i H_I c / hbar; populations equal the lab frame
  lab,          // full D + V(t)
};

namespace detail {

inline std::array<cplx, 3> apply(const Matrix3& m, const std::array<cplx, 3>& v) {
  std::array<cplx, 3> r{};
  for (int a = 0; a < 3; ++a)
    r[a] = m[a][0] * v[0] + m[a][1] * v[1] + m[a][2] * v[2];
  return r;
}

}  // namespace detail

/// Classical RK4 integrator for i hbar dc/dt = H(t) c on a fixed step.
class LevelPropagator {
 public:
  LevelPropagator(const ThreeLevelSystem& s, Picture p) : sys_(s), pic_(p) {
    validate(s);
  }

  AtomicState step(const AtomicState& x, double t, double h) const {
    auto k1 = rhs(t, x.c);
    auto k2 = rhs(t + h / 2, axpy(x.c, h / 2, k1));
    auto k3 = rhs(t + h / 2, axpy(x.c, h / 2, k2));
    auto k4 = rhs(t + h, axpy(x.c, h, k3));
    AtomicState out;
    for (int n = 0; n < 3; ++n)
      out.c[n] = x.c[n] + h / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
    return out;
  }

 private:
  // dc/ds in natural time: -i (time_unit / hbar) H(s) c.
  std::array<cplx, 3> rhs(double t, const std::array<cplx, 3>& c) const {
    const Matrix3 h = pic_ == Picture::lab ? hamiltonian(sys_, t, true)
                                           : interaction_hamiltonian(sys_, t);
    auto hc = detail::apply(h, c);
    const cplx scale(0.0, -sys_.time_unit / phys::hbar);
    for (auto& v : hc) v *= scale;
    return hc;
  }

  static std::array<cplx, 3> axpy(const std::array<cplx, 3>& x, double a,
                                  const std::array<cplx, 3>& y) {
    return {x[0] + a * y[0], x[1] + a * y[1], x[2] + a * y[2]};
  }

  ThreeLevelSystem sys_;
  Picture pic_;
};

struct TracePoint {
  double t;  // natural units
  AtomicState state;
};

/// Integrates from t_start to t_end with the largest step <= dt_int that
/// divides the interval evenly. No renormalization; throws
/// IntegratorAccuracy if the squared norm drifts by more than 1e-6.
/// Every `record_every` steps (0 = never) a trace point is appended.
inline AtomicState propagate(const ThreeLevelSystem& s, const AtomicState& start,
                             double t_start, double t_end, double dt_int,
                             Picture pic = Picture::interaction,
                             std::vector<TracePoint>* trace = nullptr,
                             int record_every = 0) {
  if (!(dt_int > 0.0)) throw InvalidParameter("integration step must be > 0");
  if (!(t_end >= t_start)) throw InvalidParameter("t_end must be >= t_start");
  const LevelPropagator prop(s, pic);
  const double span = t_end - t_start;
  const long n = span == 0.0 ? 0 : static_cast<long>(std::ceil(span / dt_int - 1e-9));
  const double h = n == 0 ? 0.0 : span / static_cast<double>(n);

  AtomicState x = start;
  if (trace && record_every > 0) trace->push_back({t_start, x});
  for (long i = 0; i < n; ++i) {
    const double t = t_start + static_cast<double>(i) * h;
    x = prop.step(x, t, h);
    if (trace && record_every > 0 && (i + 1) % record_every == 0)
      trace->push_back({t_start + static_cast<double>(i + 1) * h, x});
  }
  const double drift = std::abs(x.norm2() - start.norm2());
  if (drift > 1e-6)
    throw IntegratorAccuracy("norm drift " + std::to_string(drift) +
                             " exceeds 1e-6; reduce the integration step");
  return x;
}

}  // namespace qwfdtd
