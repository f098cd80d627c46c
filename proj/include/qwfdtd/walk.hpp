#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qwfdtd/errors.hpp"
#include "qwfdtd/fdtd.hpp"

namespace qwfdtd {

using Rational = boost::multiprecision::cpp_rational;

enum class Topology { line, parallel };

inline std::string_view to_string(Topology t) {
  return t == Topology::line ? "line" : "parallel";
}

inline Topology parse_topology(std::string_view s) {
  if (s == "line") return Topology::line;
  if (s == "parallel") return Topology::parallel;
  throw TopologyError("unknown topology '" + std::string(s) +
                      "' (expected line or parallel)");
}

/// Lattice site. `line` is 0 on the single-line topology, 1 or 2 otherwise.
struct Site {
  int line = 0;
  int x = 0;
  auto operator<=>(const Site&) const = default;
};

/// Exact occupation probabilities after `step` transitions. The parallel
/// topology carries one walker per line, so its total mass is 2; use
/// normalization() for the per-walker total.
struct WalkDistribution {
  Topology topology = Topology::line;
  int step = 0;
  std::map<Site, Rational> probs;

  Rational at(Site s) const {
    auto it = probs.find(s);
    return it == probs.end() ? Rational(0) : it->second;
  }
  int line_count() const { return topology == Topology::line ? 1 : 2; }
  bool operator==(const WalkDistribution&) const = default;
};

inline WalkDistribution initial_distribution(Topology t) {
  WalkDistribution d;
  d.topology = t;
  if (t == Topology::line) {
    d.probs[{0, 0}] = 1;
  } else {
    d.probs[{1, 0}] = 1;
    d.probs[{2, 0}] = 1;
  }
  return d;
}

/// Each site hands 1/2 of its probability to each nearest neighbour.
inline WalkDistribution step_line(const WalkDistribution& d) {
  if (d.topology != Topology::line)
    throw TopologyError("step_line needs the line topology");
  WalkDistribution out;
  out.topology = Topology::line;
  out.step = d.step + 1;
  const Rational half(1, 2);
  for (const auto& [s, p] : d.probs) {
    if (p == 0) continue;
    out.probs[{0, s.x - 1}] += p * half;
    out.probs[{0, s.x + 1}] += p * half;
  }
  return out;
}

/// Each site hands 1/3 to its left and right neighbours and 1/3 to the
/// same-x site on the other line (quantum-state exchange).
inline WalkDistribution step_parallel(const WalkDistribution& d) {
  if (d.topology != Topology::parallel)
    throw TopologyError("step_parallel needs the parallel topology");
  WalkDistribution out;
  out.topology = Topology::parallel;
  out.step = d.step + 1;
  const Rational third(1, 3);
  for (const auto& [s, p] : d.probs) {
    if (p == 0) continue;
    const int other = s.line == 1 ? 2 : 1;
    out.probs[{s.line, s.x - 1}] += p * third;
    out.probs[{s.line, s.x + 1}] += p * third;
    out.probs[{other, s.x}] += p * third;
  }
  return out;
}

inline WalkDistribution advance(const WalkDistribution& d) {
  return d.topology == Topology::line ? step_line(d) : step_parallel(d);
}

/// Distribution after `steps` transitions from the initial state.
inline WalkDistribution walk(Topology t, int steps) {
  if (steps < 0) throw InvalidParameter("walk steps must be >= 0");
  WalkDistribution d = initial_distribution(t);
  for (int k = 0; k < steps; ++k) d = advance(d);
  return d;
}

/// Per-walker total probability: total mass divided by the line count.
inline Rational normalization(const WalkDistribution& d) {
  Rational total = 0;
  for (const auto& [s, p] : d.probs) total += p;
  return total / d.line_count();
}

/// The published third-step amplitudes for two parallel lines, squared:
/// |psi_0|^2 = 1/9, |psi_{+-1}|^2 = 1/9 + 1/27, |psi_{+-2}|^2 = 2/27,
/// |psi_{+-3}|^2 = 1/27 on each line. Kept verbatim for comparison; it is
/// not normalized (17/27 per line).
inline WalkDistribution published_parallel_step3() {
  WalkDistribution d;
  d.topology = Topology::parallel;
  d.step = 3;
  for (int line : {1, 2}) {
    d.probs[{line, 0}] = Rational(1, 9);
    for (int sign : {-1, 1}) {
      d.probs[{line, sign * 1}] = Rational(1, 9) + Rational(1, 27);
      d.probs[{line, sign * 2}] = Rational(2, 27);
      d.probs[{line, sign * 3}] = Rational(1, 27);
    }
  }
  return d;
}

/// One probability-weighted emission: the atom at `site` releases its
/// photon at the start of walk step `step`.
struct Emission {
  int step = 1;
  double start_time = 0.0;
  Site site;
  Rational probability;
  double amplitude_scale = 0.0;  // sqrt(probability), correctly rounded
};

struct EmissionSchedule {
  Topology topology = Topology::line;
  int n_steps = 0;
  double step_period = 0.0;  // T1 + T2
  std::vector<Emission> events;
};

/// Step k (1-based) emits from every occupied site of the distribution
/// reached after k - 1 transitions, at time (k - 1)(T1 + T2), scaled by
/// the square root of the site probability.
inline EmissionSchedule compile_schedule(Topology t, int n_steps, double t1,
                                         double t2) {
  if (n_steps < 1) throw InvalidParameter("schedule needs n_steps >= 1");
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw InvalidParameter("T1 and T2 must be > 0");
  EmissionSchedule sched;
  sched.topology = t;
  sched.n_steps = n_steps;
  sched.step_period = t1 + t2;
  WalkDistribution d = initial_distribution(t);
  for (int k = 1; k <= n_steps; ++k) {
    const double start = (k - 1) * sched.step_period;
    for (const auto& [site, p] : d.probs) {
      if (p == 0) continue;
      sched.events.push_back(
          {k, start, site, p, std::sqrt(p.convert_to<double>())});
    }
    if (k < n_steps) d = advance(d);
  }
  return sched;
}

/// Placement of lattice sites on the Yee grid: x sites every
/// `cells_per_site` cells about `center_i`, one j row per line.
struct SiteMapping {
  int center_i = 0;
  int center_k = 0;
  int cells_per_site = 1;
  int line_j[3] = {0, 0, 0};  // [0] single line, [1], [2] parallel lines

  CellIndex cell(Site s) const {
    return {center_i + s.x * cells_per_site, line_j[s.line], center_k};
  }
};

/// Turns the schedule into Ez soft sources. `unit_pulse` carries the full
/// single-photon amplitude; each event scales it by its amplitude_scale.
/// Sites must land strictly inside the grid (off the absorbing faces).
inline std::vector<SourceEvent> to_source_events(const EmissionSchedule& sched,
                                                 const SiteMapping& map,
                                                 const PulseSpec& unit_pulse,
                                                 const YeeGrid& g) {
  std::vector<SourceEvent> out;
  out.reserve(sched.events.size());
  for (const auto& e : sched.events) {
    const CellIndex c = map.cell(e.site);
    if (c.i < 1 || c.i > g.nx - 1 || c.j < 1 || c.j > g.ny - 1 || c.k < 0 ||
        c.k >= g.nz)
      throw ScheduleOverflow("site (line " + std::to_string(e.site.line) +
                             ", x " + std::to_string(e.site.x) +
                             ") maps to cell (" + std::to_string(c.i) + "," +
                             std::to_string(c.j) + "," + std::to_string(c.k) +
                             ") outside the grid interior");
    PulseSpec p = unit_pulse;
    p.amplitude *= e.amplitude_scale;
    out.push_back({c, Component::ez, p, e.start_time});
  }
  return out;
}

/// "{-3:1/8, -1:3/8, +1:3/8, +3:1/8}" for one line (0 for the single line).
inline std::string format_line(const WalkDistribution& d, int line,
                               bool decimal = false) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [s, p] : d.probs) {
    if (s.line != line || p == 0) continue;
    if (!first) os << ", ";
    first = false;
    if (s.x > 0) os << '+';
    os << s.x << ':' << p.str();
    if (decimal) {
      std::ostringstream dec;
      dec.precision(6);
      dec << p.convert_to<double>();
      os << " (" << dec.str() << ')';
    }
  }
  os << '}';
  return os.str();
}

}  // namespace qwfdtd
