#include "catch_amalgamated.hpp"

#include <cmath>
#include <map>

#include "qwfdtd/walk.hpp"

using namespace qwfdtd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Enumerate every move sequence; each one carries probability 1/branches^n.
std::map<Site, Rational> brute_force(Topology t, int n) {
  std::map<Site, Rational> out;
  const int branches = t == Topology::line ? 2 : 3;
  long paths = 1;
  for (int s = 0; s < n; ++s) paths *= branches;
  const Rational w(1, paths);
  const std::vector<int> starts = t == Topology::line ? std::vector<int>{0}
                                                      : std::vector<int>{1, 2};
  for (int line0 : starts) {
    for (long code = 0; code < paths; ++code) {
      Site s{line0, 0};
      long c = code;
      for (int step = 0; step < n; ++step) {
        const int move = static_cast<int>(c % branches);
        c /= branches;
        if (move == 0) s.x -= 1;
        else if (move == 1) s.x += 1;
        else s.line = s.line == 1 ? 2 : 1;
      }
      out[s] += w;
    }
  }
  return out;
}

Rational binomial_probability(int n, int x) {
  if ((n + x) % 2 != 0 || std::abs(x) > n) return 0;
  const int k = (n + x) / 2;
  boost::multiprecision::cpp_int c = 1;
  for (int m = 1; m <= k; ++m) c = c * (n - k + m) / m;
  boost::multiprecision::cpp_int denom = 1;
  denom <<= n;
  return Rational(c, denom);
}

Rational per_line(const WalkDistribution& d, int line) {
  Rational s = 0;
  for (const auto& [site, p] : d.probs)
    if (site.line == line) s += p;
  return s;
}

}  // namespace

TEST_CASE("walk agrees with path enumeration", "[walk]") {
  for (auto t : {Topology::line, Topology::parallel}) {
    for (int n = 0; n <= 8; ++n) {
      const auto d = walk(t, n);
      const auto ref = brute_force(t, n);
      CHECK(d.probs == ref);
      CHECK(d.step == n);
    }
  }
}

TEST_CASE("line walk is binomial", "[walk]") {
  for (int n = 0; n <= 20; ++n) {
    const auto d = walk(Topology::line, n);
    for (int x = -n - 2; x <= n + 2; ++x)
      CHECK(d.at({0, x}) == binomial_probability(n, x));
  }
}

TEST_CASE("walk tables for the first steps", "[walk]") {
  const auto l3 = walk(Topology::line, 3);
  CHECK(format_line(l3, 0) == "{-3:1/8, -1:3/8, +1:3/8, +3:1/8}");
  CHECK(format_line(walk(Topology::line, 1), 0) == "{-1:1/2, +1:1/2}");

  const auto p1 = walk(Topology::parallel, 1);
  CHECK(format_line(p1, 1) == "{-1:1/3, 0:1/3, +1:1/3}");
  const auto p2 = walk(Topology::parallel, 2);
  for (int line : {1, 2})
    CHECK(format_line(p2, line) == "{-2:1/9, -1:2/9, 0:1/3, +1:2/9, +2:1/9}");
  const auto p3 = walk(Topology::parallel, 3);
  for (int line : {1, 2})
    CHECK(format_line(p3, line) ==
          "{-3:1/27, -2:1/9, -1:2/9, 0:7/27, +1:2/9, +2:1/9, +3:1/27}");
}

TEST_CASE("probability is conserved exactly", "[walk]") {
  for (auto t : {Topology::line, Topology::parallel}) {
    auto d = initial_distribution(t);
    for (int n = 0; n <= 15; ++n) {
      CHECK(normalization(d) == 1);
      d = advance(d);
    }
  }
  // Each parallel line keeps mass 1: the exchange is symmetric.
  const auto p = walk(Topology::parallel, 7);
  CHECK(per_line(p, 1) == 1);
  CHECK(per_line(p, 2) == 1);
}

TEST_CASE("walk is mirror symmetric and supported on the light cone", "[walk]") {
  for (int n = 0; n <= 12; ++n) {
    const auto l = walk(Topology::line, n);
    for (const auto& [s, p] : l.probs) {
      CHECK(l.at({0, -s.x}) == p);
      CHECK(std::abs(s.x) <= n);
      CHECK((s.x + n) % 2 == 0);
      CHECK(p > 0);
    }
    const auto q = walk(Topology::parallel, n);
    for (const auto& [s, p] : q.probs) {
      CHECK(q.at({s.line, -s.x}) == p);
      CHECK(q.at({s.line == 1 ? 2 : 1, s.x}) == p);
      CHECK(std::abs(s.x) <= n);
    }
  }
}

TEST_CASE("published parallel step-3 table is not normalized", "[walk]") {
  const auto pub = published_parallel_step3();
  CHECK(per_line(pub, 1) == Rational(17, 27));
  CHECK(normalization(pub) == Rational(17, 27));
  CHECK(pub != walk(Topology::parallel, 3));
  CHECK(format_line(pub, 2) ==
        "{-3:1/27, -2:2/27, -1:4/27, 0:1/9, +1:4/27, +2:2/27, +3:1/27}");
}

TEST_CASE("line schedule emits one step behind the walk", "[walk][schedule]") {
  const double T = 1.5e-15;
  const auto s = compile_schedule(Topology::line, 3, T, T);
  CHECK(s.step_period == 2 * T);
  REQUIRE(s.events.size() == 1 + 2 + 3);

  CHECK(s.events[0].step == 1);
  CHECK(s.events[0].site == Site{0, 0});
  CHECK(s.events[0].amplitude_scale == 1.0);
  CHECK(s.events[0].start_time == 0.0);

  for (int e : {1, 2}) {
    CHECK(s.events[e].step == 2);
    CHECK(std::abs(s.events[e].site.x) == 1);
    CHECK(s.events[e].probability == Rational(1, 2));
    CHECK_THAT(s.events[e].amplitude_scale, WithinRel(std::sqrt(0.5), 1e-15));
    CHECK(s.events[e].start_time == 2 * T);
  }
  CHECK(s.events[3].site.x == -2);
  CHECK(s.events[4].site.x == 0);
  CHECK(s.events[4].probability == Rational(1, 2));
  CHECK(s.events[5].probability == Rational(1, 4));
  CHECK(s.events[5].start_time == 4 * T);
}

TEST_CASE("parallel schedule source counts", "[walk][schedule]") {
  const auto s = compile_schedule(Topology::parallel, 3, 1e-15, 1e-15);
  std::map<int, int> per_step;
  for (const auto& e : s.events) ++per_step[e.step];
  CHECK(per_step[1] == 2);
  CHECK(per_step[2] == 6);   // three per line
  CHECK(per_step[3] == 10);  // five per line
}

TEST_CASE("amplitude scale is the square root of probability", "[walk][schedule]") {
  for (auto t : {Topology::line, Topology::parallel}) {
    const auto s = compile_schedule(t, 6, 1e-15, 2e-15);
    std::map<int, double> energy;
    for (const auto& e : s.events) {
      const double p = e.probability.convert_to<double>();
      CHECK_THAT(e.amplitude_scale * e.amplitude_scale, WithinRel(p, 4e-16));
      CHECK(e.start_time == (e.step - 1) * s.step_period);
      energy[e.step] += e.amplitude_scale * e.amplitude_scale;
    }
    for (const auto& [step, sum] : energy)
      CHECK_THAT(sum, WithinRel(t == Topology::line ? 1.0 : 2.0, 1e-14));
  }
}

TEST_CASE("sources land on the mapped cells", "[walk][schedule]") {
  const auto g = new_grid(110, 29, 39, 1e-8, 1e-8, 1e-8);
  SiteMapping m;
  m.center_i = 55;
  m.center_k = 19;
  m.cells_per_site = 4;
  m.line_j[0] = 14;
  m.line_j[1] = 12;
  m.line_j[2] = 16;
  const PulseSpec unit = make_pulse(2.0, 2.3e15, 1e-16);
  const auto line = to_source_events(compile_schedule(Topology::line, 2, 1e-15, 1e-15),
                                     m, unit, g);
  REQUIRE(line.size() == 3);
  CHECK(line[0].cell == CellIndex{55, 14, 19});
  CHECK(line[1].cell == CellIndex{51, 14, 19});
  CHECK(line[2].cell == CellIndex{59, 14, 19});
  CHECK_THAT(line[1].pulse.amplitude, WithinRel(2.0 * std::sqrt(0.5), 1e-15));
  CHECK(line[1].start_time == 2e-15);

  const auto par = to_source_events(compile_schedule(Topology::parallel, 1, 1e-15, 1e-15),
                                    m, unit, g);
  REQUIRE(par.size() == 2);
  CHECK(par[0].cell == CellIndex{55, 12, 19});
  CHECK(par[1].cell == CellIndex{55, 16, 19});
}

TEST_CASE("schedule that outgrows the grid is refused", "[walk][schedule]") {
  const auto g = new_grid(20, 10, 10, 1e-8, 1e-8, 1e-8);
  SiteMapping m;
  m.center_i = 10;
  m.center_k = 5;
  m.cells_per_site = 4;
  m.line_j[0] = 5;
  const PulseSpec unit = make_pulse(1.0, 2.3e15, 1e-16);
  CHECK_NOTHROW(to_source_events(compile_schedule(Topology::line, 3, 1e-15, 1e-15),
                                 m, unit, g));
  CHECK_THROWS_AS(to_source_events(compile_schedule(Topology::line, 4, 1e-15, 1e-15),
                                   m, unit, g),
                  ScheduleOverflow);
  m.line_j[0] = 0;
  CHECK_THROWS_AS(to_source_events(compile_schedule(Topology::line, 1, 1e-15, 1e-15),
                                   m, unit, g),
                  ScheduleOverflow);
}

TEST_CASE("walk argument errors", "[walk]") {
  CHECK_THROWS_AS(parse_topology("ring"), TopologyError);
  CHECK(parse_topology("parallel") == Topology::parallel);
  CHECK(to_string(Topology::line) == "line");
  CHECK_THROWS_AS(step_line(initial_distribution(Topology::parallel)), TopologyError);
  CHECK_THROWS_AS(step_parallel(initial_distribution(Topology::line)), TopologyError);
  CHECK_THROWS_AS(walk(Topology::line, -1), InvalidParameter);
  CHECK_THROWS_AS(compile_schedule(Topology::line, 0, 1e-15, 1e-15), InvalidParameter);
  CHECK_THROWS_AS(compile_schedule(Topology::line, 2, 0.0, 1e-15), InvalidParameter);
}
