#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qwfdtd/constants.hpp"
#include "qwfdtd/errors.hpp"

namespace qwfdtd {

/// Dense 3D array, k fastest.
template <class T>
class Array3 {
 public:
  Array3() = default;
  Array3(int n0, int n1, int n2, T fill = T{})
      : n_{n0, n1, n2},
        data_(static_cast<std::size_t>(n0) * n1 * n2, fill) {}

  T& operator()(int i, int j, int k) noexcept { return data_[offset(i, j, k)]; }
  const T& operator()(int i, int j, int k) const noexcept {
    return data_[offset(i, j, k)];
  }

  int extent(int axis) const noexcept { return n_[axis]; }
  std::array<int, 3> extents() const noexcept { return n_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  bool operator==(const Array3&) const = default;

 private:
  std::size_t offset(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(i) * n_[1] + j) * n_[2] + k;
  }

  std::array<int, 3> n_{0, 0, 0};
  std::vector<T> data_;
};

struct CellIndex {
  int i = 0;
  int j = 0;
  int k = 0;
  bool operator==(const CellIndex&) const = default;
};

/// Per-axis treatment of the two outer faces.
enum class Boundary {
  absorbing,  // first-order Mur
  pec,        // tangential E held at zero
  periodic,   // face j = n identified with j = 0
};

/// Staggered Yee lattice of nx*ny*nz cells. Tangential E components live on
/// the outer faces, so E extents are (cells + 1) along the two transverse
/// axes and H extents are (cells + 1) along the component axis only:
///
///   ex: nx   x (ny+1) x (nz+1)     hx: (nx+1) x ny     x nz
///   ey: (nx+1) x ny   x (nz+1)     hy: nx     x (ny+1) x nz
///   ez: (nx+1) x (ny+1) x nz       hz: nx     x ny     x (nz+1)
///
/// Ez(i, j, k) sits at (i*dx, j*dy, (k+1/2)*dz).
struct YeeGrid {
  int nx = 0, ny = 0, nz = 0;
  double dx = 0, dy = 0, dz = 0;

  Array3<double> ex, ey, ez;
  Array3<double> hx, hy, hz;

  // Permittivity per E sample, permeability per H sample.
  Array3<double> eps_x, eps_y, eps_z;
  Array3<double> mu_x, mu_y, mu_z;

  std::array<Boundary, 3> boundary{Boundary::absorbing, Boundary::absorbing,
                                   Boundary::absorbing};

  std::array<int, 3> cells() const noexcept { return {nx, ny, nz}; }
  std::array<double, 3> spacing() const noexcept { return {dx, dy, dz}; }

  void clear_fields() {
    for (auto* f : {&ex, &ey, &ez, &hx, &hy, &hz}) f->fill(0.0);
  }
};

/// Inclusive cell-index box with a uniform relative permittivity.
struct MaterialRegion {
  CellIndex lo;
  CellIndex hi;
  double relative_permittivity = 1.0;
};

inline YeeGrid new_grid(int nx, int ny, int nz, double dx, double dy,
                        double dz) {
  if (nx < 2 || ny < 2 || nz < 2)
    throw InvalidGeometry("cell counts must be >= 2, got " +
                          std::to_string(nx) + "x" + std::to_string(ny) + "x" +
                          std::to_string(nz));
  if (!(dx > 0) || !(dy > 0) || !(dz > 0) || !std::isfinite(dx) ||
      !std::isfinite(dy) || !std::isfinite(dz))
    throw InvalidGeometry("cell spacings must be positive and finite");

  YeeGrid g;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  g.dx = dx;
  g.dy = dy;
  g.dz = dz;
  g.ex = Array3<double>(nx, ny + 1, nz + 1);
  g.ey = Array3<double>(nx + 1, ny, nz + 1);
  g.ez = Array3<double>(nx + 1, ny + 1, nz);
  g.hx = Array3<double>(nx + 1, ny, nz);
  g.hy = Array3<double>(nx, ny + 1, nz);
  g.hz = Array3<double>(nx, ny, nz + 1);
  g.eps_x = Array3<double>(nx, ny + 1, nz + 1, phys::eps0);
  g.eps_y = Array3<double>(nx + 1, ny, nz + 1, phys::eps0);
  g.eps_z = Array3<double>(nx + 1, ny + 1, nz, phys::eps0);
  g.mu_x = Array3<double>(nx + 1, ny, nz, phys::mu0);
  g.mu_y = Array3<double>(nx, ny + 1, nz, phys::mu0);
  g.mu_z = Array3<double>(nx, ny, nz + 1, phys::mu0);
  return g;
}

namespace detail {

// Sample index range covered by cells [lo, hi] along one axis. Samples at
// half-integer positions (the component's own axis) map to cell indices;
// integer-position samples include both bounding faces.
struct IndexRange {
  int first;
  int last;
};

inline IndexRange covered(int lo, int hi, bool staggered) {
  return staggered ? IndexRange{lo, hi} : IndexRange{lo, hi + 1};
}

inline void paint(Array3<double>& eps, const MaterialRegion& r, int axis,
                  double value) {
  const IndexRange ri = covered(r.lo.i, r.hi.i, axis == 0);
  const IndexRange rj = covered(r.lo.j, r.hi.j, axis == 1);
  const IndexRange rk = covered(r.lo.k, r.hi.k, axis == 2);
  for (int i = ri.first; i <= ri.last; ++i)
    for (int j = rj.first; j <= rj.last; ++j)
      for (int k = rk.first; k <= rk.last; ++k) eps(i, j, k) = value;
}

}  // namespace detail

/// Assigns relative_permittivity * eps0 to every E sample whose position lies
/// in the closed box spanned by the region's cells. No subcell averaging.
inline void set_material(YeeGrid& g, const MaterialRegion& r) {
  const bool ordered = r.lo.i <= r.hi.i && r.lo.j <= r.hi.j && r.lo.k <= r.hi.k;
  const bool inside = r.lo.i >= 0 && r.lo.j >= 0 && r.lo.k >= 0 &&
                      r.hi.i < g.nx && r.hi.j < g.ny && r.hi.k < g.nz;
  if (!ordered || !inside)
    throw InvalidRegion("material region [" + std::to_string(r.lo.i) + "," +
                        std::to_string(r.lo.j) + "," + std::to_string(r.lo.k) +
                        "]..[" + std::to_string(r.hi.i) + "," +
                        std::to_string(r.hi.j) + "," + std::to_string(r.hi.k) +
                        "] is outside the grid or inverted");
  if (!(r.relative_permittivity >= 1.0) ||
      !std::isfinite(r.relative_permittivity))
    throw InvalidParameter("relative permittivity must be >= 1 (passive media)");

  const double eps = r.relative_permittivity * phys::eps0;
  detail::paint(g.eps_x, r, 0, eps);
  detail::paint(g.eps_y, r, 1, eps);
  detail::paint(g.eps_z, r, 2, eps);
}

/// Largest stable leapfrog step scaled by cfl_factor. Passive media never
/// exceed vacuum speed, so c0 bounds the wave speed everywhere.
inline double courant_dt(const YeeGrid& g, double cfl_factor) {
  if (!(cfl_factor > 0.0 && cfl_factor <= 1.0))
    throw InvalidParameter("cfl factor must lie in (0, 1], got " +
                           std::to_string(cfl_factor));
  const double inv = std::sqrt(1.0 / (g.dx * g.dx) + 1.0 / (g.dy * g.dy) +
                               1.0 / (g.dz * g.dz));
  return cfl_factor / (phys::c0 * inv);
}

}  // namespace qwfdtd
