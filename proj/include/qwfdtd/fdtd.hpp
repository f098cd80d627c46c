#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qwfdtd/grid.hpp"
#include "qwfdtd/pulse.hpp"

namespace qwfdtd {

enum class Component { ez };

/// Additive Ez excitation at one cell, starting at start_time.
struct SourceEvent {
  CellIndex cell;
  Component component = Component::ez;
  PulseSpec pulse;
  double start_time = 0.0;
};

/// Ez on the xz-plane j = fixed_index, x-major: values[i * cols + k].
struct FieldSnapshot {
  int fixed_index = 0;
  int step = 0;
  double time = 0.0;
  int rows = 0;  // x samples (nx + 1)
  int cols = 0;  // z samples (nz)
  std::vector<double> values;

  double at(int i, int k) const { return values[static_cast<std::size_t>(i) * cols + k]; }
  bool operator==(const FieldSnapshot&) const = default;
};

inline FieldSnapshot take_snapshot(const YeeGrid& g, int j, int step,
                                   double dt) {
  if (j < 0 || j > g.ny)
    throw InvalidParameter("snapshot plane j=" + std::to_string(j) +
                           " outside grid");
  FieldSnapshot s;
  s.fixed_index = j;
  s.step = step;
  s.time = step * dt;
  s.rows = g.nx + 1;
  s.cols = g.nz;
  s.values.reserve(static_cast<std::size_t>(s.rows) * s.cols);
  for (int i = 0; i < s.rows; ++i)
    for (int k = 0; k < s.cols; ++k) s.values.push_back(g.ez(i, j, k));
  return s;
}

namespace detail {

inline void check_stable(const YeeGrid& g, double dt) {
  const double limit = courant_dt(g, 1.0);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12))
    throw StabilityError("time step " + std::to_string(dt) +
                         " s exceeds the Courant limit " +
                         std::to_string(limit) + " s");
}

inline bool periodic(const YeeGrid& g, int axis) {
  return g.boundary[axis] == Boundary::periodic;
}

// First index updated by the curl for a tangential E index along `axis`.
inline int first_tangential(const YeeGrid& g, int axis) {
  return periodic(g, axis) ? 0 : 1;
}

inline int prev(int i, int n, bool wrap) { return (i == 0 && wrap) ? n - 1 : i - 1; }

// Copies index 0 onto index n along a periodic axis of an E component.
inline void close_seam(Array3<double>& f, int axis, int n) {
  const auto e = f.extents();
  if (axis == 0) {
    for (int j = 0; j < e[1]; ++j)
      for (int k = 0; k < e[2]; ++k) f(n, j, k) = f(0, j, k);
  } else if (axis == 1) {
    for (int i = 0; i < e[0]; ++i)
      for (int k = 0; k < e[2]; ++k) f(i, n, k) = f(i, 0, k);
  } else {
    for (int i = 0; i < e[0]; ++i)
      for (int j = 0; j < e[1]; ++j) f(i, j, n) = f(i, j, 0);
  }
}

}  // namespace detail

/// Advances H by one step using the curl of E.
inline void step_h(YeeGrid& g, double dt) {
  detail::check_stable(g, dt);
  const int nx = g.nx, ny = g.ny, nz = g.nz;

  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        const double m = g.mu_x(i, j, k);
        g.hx(i, j, k) += dt / (m * g.dz) * (g.ey(i, j, k + 1) - g.ey(i, j, k)) -
                         dt / (m * g.dy) * (g.ez(i, j + 1, k) - g.ez(i, j, k));
      }

  for (int i = 0; i < nx; ++i)
    for (int j = 0; j <= ny; ++j)
      for (int k = 0; k < nz; ++k) {
        const double m = g.mu_y(i, j, k);
        g.hy(i, j, k) += dt / (m * g.dx) * (g.ez(i + 1, j, k) - g.ez(i, j, k)) -
                         dt / (m * g.dz) * (g.ex(i, j, k + 1) - g.ex(i, j, k));
      }

  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k <= nz; ++k) {
        const double m = g.mu_z(i, j, k);
        g.hz(i, j, k) += dt / (m * g.dy) * (g.ex(i, j + 1, k) - g.ex(i, j, k)) -
                         dt / (m * g.dx) * (g.ey(i + 1, j, k) - g.ey(i, j, k));
      }
}

/// Advances E by one step using the curl of H. Tangential samples on
/// non-periodic outer faces are left to apply_abc (or stay zero for PEC).
inline void step_e(YeeGrid& g, double dt) {
  detail::check_stable(g, dt);
  using detail::prev;
  const int nx = g.nx, ny = g.ny, nz = g.nz;
  const bool px = detail::periodic(g, 0);
  const bool py = detail::periodic(g, 1);
  const bool pz = detail::periodic(g, 2);
  const int i0 = detail::first_tangential(g, 0);
  const int j0 = detail::first_tangential(g, 1);
  const int k0 = detail::first_tangential(g, 2);

  for (int i = 0; i < nx; ++i)
    for (int j = j0; j < ny; ++j)
      for (int k = k0; k < nz; ++k) {
        const double e = g.eps_x(i, j, k);
        const int jm = prev(j, ny, py), km = prev(k, nz, pz);
        g.ex(i, j, k) += dt / (e * g.dy) * (g.hz(i, j, k) - g.hz(i, jm, k)) -
                         dt / (e * g.dz) * (g.hy(i, j, k) - g.hy(i, j, km));
      }

  for (int i = i0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = k0; k < nz; ++k) {
        const double e = g.eps_y(i, j, k);
        const int km = prev(k, nz, pz), im = prev(i, nx, px);
        g.ey(i, j, k) += dt / (e * g.dz) * (g.hx(i, j, k) - g.hx(i, j, km)) -
                         dt / (e * g.dx) * (g.hz(i, j, k) - g.hz(im, j, k));
      }

  for (int i = i0; i < nx; ++i)
    for (int j = j0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        const double e = g.eps_z(i, j, k);
        const int im = prev(i, nx, px), jm = prev(j, ny, py);
        g.ez(i, j, k) += dt / (e * g.dx) * (g.hy(i, j, k) - g.hy(im, j, k)) -
                         dt / (e * g.dy) * (g.hx(i, j, k) - g.hx(i, jm, k));
      }

  if (px) {
    detail::close_seam(g.ey, 0, nx);
    detail::close_seam(g.ez, 0, nx);
  }
  if (py) {
    detail::close_seam(g.ex, 1, ny);
    detail::close_seam(g.ez, 1, ny);
  }
  if (pz) {
    detail::close_seam(g.ex, 2, nz);
    detail::close_seam(g.ey, 2, nz);
  }
}

/// Face and adjacent-layer tangential E at time level n, captured before
/// step_e, as required by the first-order Mur update.
class BoundaryHistory {
 public:
  struct Face {
    int component;  // 0 = ex, 1 = ey, 2 = ez
    int axis;       // face normal
    bool high;      // face at index n rather than 0
    std::vector<double> face;
    std::vector<double> inner;
  };

  static BoundaryHistory capture(const YeeGrid& g) {
    BoundaryHistory h;
    for (int axis = 0; axis < 3; ++axis) {
      if (g.boundary[axis] != Boundary::absorbing) continue;
      for (int c = 0; c < 3; ++c) {
        if (c == axis) continue;
        for (bool high : {false, true}) {
          Face f{c, axis, high, {}, {}};
          const int n = g.cells()[axis];
          const int face = high ? n : 0;
          const int inner = high ? n - 1 : 1;
          for_each_face_sample(g, c, axis, [&](int a, int b) {
            f.face.push_back(sample(g, c, axis, face, a, b));
            f.inner.push_back(sample(g, c, axis, inner, a, b));
          });
          h.faces_.push_back(std::move(f));
        }
      }
    }
    return h;
  }

  const std::vector<Face>& faces() const noexcept { return faces_; }

  // Visits (a, b) coordinates on a face, a along the lower remaining axis and
  // b along the higher one. Edge samples shared with a non-periodic
  // neighbouring face are skipped and stay PEC.
  template <class Fn>
  static void for_each_face_sample(const YeeGrid& g, int component, int axis,
                                   Fn&& fn) {
    const auto [ax, bx] = transverse(axis);
    const auto ext = field(g, component).extents();
    auto range = [&](int t) {
      // Component's own axis is staggered: no edge samples along it.
      if (t == component) return std::array<int, 2>{0, ext[t] - 1};
      if (g.boundary[t] == Boundary::periodic)
        return std::array<int, 2>{0, ext[t] - 2};
      return std::array<int, 2>{1, ext[t] - 2};
    };
    const auto ra = range(ax);
    const auto rb = range(bx);
    for (int a = ra[0]; a <= ra[1]; ++a)
      for (int b = rb[0]; b <= rb[1]; ++b) fn(a, b);
  }

  static std::array<int, 2> transverse(int axis) {
    if (axis == 0) return {1, 2};
    if (axis == 1) return {0, 2};
    return {0, 1};
  }

  static const Array3<double>& field(const YeeGrid& g, int c) {
    return c == 0 ? g.ex : (c == 1 ? g.ey : g.ez);
  }
  static Array3<double>& field(YeeGrid& g, int c) {
    return c == 0 ? g.ex : (c == 1 ? g.ey : g.ez);
  }
  static const Array3<double>& permittivity(const YeeGrid& g, int c) {
    return c == 0 ? g.eps_x : (c == 1 ? g.eps_y : g.eps_z);
  }

  static std::array<int, 3> index(int axis, int layer, int a, int b) {
    if (axis == 0) return {layer, a, b};
    if (axis == 1) return {a, layer, b};
    return {a, b, layer};
  }

  static double sample(const YeeGrid& g, int c, int axis, int layer, int a,
                       int b) {
    const auto [i, j, k] = index(axis, layer, a, b);
    return field(g, c)(i, j, k);
  }

 private:
  std::vector<Face> faces_;
};

/// First-order Mur condition on every absorbing face:
///   E_face^{n+1} = E_inner^n + (v dt - d)/(v dt + d) (E_inner^{n+1} - E_face^n)
inline void apply_abc(YeeGrid& g, const BoundaryHistory& prev, double dt) {
  using H = BoundaryHistory;
  const auto spacing = g.spacing();
  for (const auto& f : prev.faces()) {
    const int n = g.cells()[f.axis];
    const int face = f.high ? n : 0;
    const int inner = f.high ? n - 1 : 1;
    auto& field = H::field(g, f.component);
    const auto& eps = H::permittivity(g, f.component);
    const double d = spacing[f.axis];
    std::size_t s = 0;
    H::for_each_face_sample(g, f.component, f.axis, [&](int a, int b) {
      const auto [i, j, k] = H::index(f.axis, face, a, b);
      const auto [ii, jj, kk] = H::index(f.axis, inner, a, b);
      const double v = 1.0 / std::sqrt(eps(i, j, k) * phys::mu0);
      const double coef = (v * dt - d) / (v * dt + d);
      field(i, j, k) = f.inner[s] + coef * (field(ii, jj, kk) - f.face[s]);
      ++s;
    });
  }
  // Re-close periodic seams touched by the face updates.
  for (int axis = 0; axis < 3; ++axis) {
    if (!detail::periodic(g, axis)) continue;
    const int n = g.cells()[axis];
    for (int c = 0; c < 3; ++c)
      if (c != axis) detail::close_seam(H::field(g, c), axis, n);
  }
}

inline void validate_source(const YeeGrid& g, const SourceEvent& ev) {
  const auto& c = ev.cell;
  if (c.i < 0 || c.j < 0 || c.k < 0 || c.i > g.nx || c.j > g.ny ||
      c.k >= g.nz)
    throw InvalidSource("source cell (" + std::to_string(c.i) + "," +
                        std::to_string(c.j) + "," + std::to_string(c.k) +
                        ") outside grid");
  if (!(ev.start_time >= 0.0))
    throw InvalidSource("source start time must be >= 0");
}

/// Adds the event's pulse at local time t - start_time to Ez at its cell.
/// Returns the increment applied (zero before the event starts).
inline double inject_soft_source(YeeGrid& g, const SourceEvent& ev, double t) {
  validate_source(g, ev);
  const auto& c = ev.cell;
  if (t < ev.start_time) return 0.0;
  const double inc = pulse_value(ev.pulse, t - ev.start_time);
  g.ez(c.i, c.j, c.k) += inc;
  // Keep periodic images in step.
  const bool wrap_i = detail::periodic(g, 0) && (c.i == 0 || c.i == g.nx);
  const bool wrap_j = detail::periodic(g, 1) && (c.j == 0 || c.j == g.ny);
  const int ii = c.i == 0 ? g.nx : 0;
  const int jj = c.j == 0 ? g.ny : 0;
  if (wrap_i) g.ez(ii, c.j, c.k) += inc;
  if (wrap_j) g.ez(c.i, jj, c.k) += inc;
  if (wrap_i && wrap_j) g.ez(ii, jj, c.k) += inc;
  return inc;
}

struct RunOptions {
  int n_steps = 100;
  int snapshot_every = 20;  // 0 disables cadence snapshots
  double dt = 0.0;
  int snapshot_j = 0;
};

struct RunResult {
  std::vector<FieldSnapshot> snapshots;
  /// Largest |increment| applied by each event, indexed like the input.
  std::vector<double> peak_injection;
};

/// Leapfrog loop: H half step, E step, sources at t = n dt, then Mur.
/// Snapshots every `snapshot_every` iterations plus the final one.
inline RunResult run(YeeGrid& g, const std::vector<SourceEvent>& events,
                     const RunOptions& opt) {
  if (opt.n_steps < 1) throw InvalidParameter("n_steps must be >= 1");
  if (opt.snapshot_every < 0)
    throw InvalidParameter("snapshot_every must be >= 0");
  detail::check_stable(g, opt.dt);
  for (const auto& ev : events) validate_source(g, ev);

  RunResult out;
  out.peak_injection.assign(events.size(), 0.0);
  for (int n = 1; n <= opt.n_steps; ++n) {
    step_h(g, opt.dt);
    const auto history = BoundaryHistory::capture(g);
    step_e(g, opt.dt);
    const double t = n * opt.dt;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const double inc = inject_soft_source(g, events[e], t);
      out.peak_injection[e] = std::max(out.peak_injection[e], std::abs(inc));
    }
    apply_abc(g, history, opt.dt);
    const bool cadence = opt.snapshot_every > 0 && n % opt.snapshot_every == 0;
    if (cadence || n == opt.n_steps)
      out.snapshots.push_back(take_snapshot(g, opt.snapshot_j, n, opt.dt));
  }
  return out;
}

}  // namespace qwfdtd
