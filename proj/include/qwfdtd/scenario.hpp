#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "qwfdtd/config.hpp"
#include "qwfdtd/fdtd.hpp"
#include "qwfdtd/io.hpp"
#include "qwfdtd/pulse.hpp"
#include "qwfdtd/walk.hpp"

namespace qwfdtd {

/// Everything derived from a SimulationConfig before time stepping.
struct Scenario {
  SimulationConfig config;
  YeeGrid grid;
  MaterialRegion crystal;
  double dt = 0.0;
  double omega = 0.0;  // carrier, rad/s
  double tau = 0.0;
  double e0 = 0.0;     // single-photon amplitude in one cell
  PulseSpec unit_pulse;
  SiteMapping mapping;
  EmissionSchedule schedule;
  std::vector<SourceEvent> events;
  int snapshot_j = 0;
};

inline Scenario build_scenario(const SimulationConfig& cfg) {
  validate(cfg);
  Scenario s;
  s.config = cfg;
  const double ds = cfg.cell_nm * phys::nm;
  const auto n = grid_cells(cfg);
  const auto crystal = crystal_cells(cfg);
  s.grid = new_grid(n[0], n[1], n[2], ds, ds, ds);
  const int p = cfg.padding_cells;
  s.crystal = {{p, p, p},
               {p + crystal[0] - 1, p + crystal[1] - 1, p + crystal[2] - 1},
               cfg.epsilon_r};
  set_material(s.grid, s.crystal);

  s.dt = courant_dt(s.grid, cfg.cfl);
  s.omega = 2.0 * phys::pi * cfg.frequency_hz;
  s.tau = tau_from_grid(cfg.cells_per_wavelength, ds);
  s.e0 = e0_from_photon_energy(s.omega, cfg.epsilon_r * phys::eps0, ds * ds * ds);
  s.unit_pulse = make_pulse(s.e0, s.omega, s.tau);

  s.mapping.center_i = n[0] / 2;
  s.mapping.center_k = n[2] / 2;
  s.mapping.cells_per_site = cells_per_site(cfg);
  const int mid_j = n[1] / 2;
  const int off = static_cast<int>(std::lround(cfg.line_offset_nm / cfg.cell_nm));
  s.mapping.line_j[0] = mid_j;
  s.mapping.line_j[1] = mid_j - off;
  s.mapping.line_j[2] = mid_j + off;

  s.schedule = compile_schedule(cfg.topology, cfg.walk_steps,
                                cfg.T1_tau * s.tau, cfg.T2_tau * s.tau);
  s.events = to_source_events(s.schedule, s.mapping, s.unit_pulse, s.grid);
  s.snapshot_j = cfg.topology == Topology::line ? s.mapping.line_j[0]
                                                : s.mapping.line_j[1];
  return s;
}

struct SnapshotRecord {
  std::string file;
  int step = 0;
  double time = 0.0;
};

struct RunManifest {
  nlohmann::json config;
  std::vector<SnapshotRecord> snapshots;
  nlohmann::json document;  // full manifest as written
};

inline std::string snapshot_file_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06d.csv", step);
  return buf;
}

namespace detail {

inline nlohmann::json walk_tables(const Scenario& s) {
  // Emitting distribution at each walk step.
  nlohmann::json steps = nlohmann::json::array();
  WalkDistribution d = initial_distribution(s.config.topology);
  for (int k = 1; k <= s.config.walk_steps; ++k) {
    nlohmann::json lines = nlohmann::json::object();
    for (int line = (d.line_count() == 1 ? 0 : 1);
         line <= (d.line_count() == 1 ? 0 : 2); ++line) {
      nlohmann::json table = nlohmann::json::object();
      for (const auto& [site, p] : d.probs)
        if (site.line == line && p != 0) table[std::to_string(site.x)] = p.str();
      lines[std::to_string(line)] = table;
    }
    steps.push_back({{"step", k},
                     {"transitions", d.step},
                     {"normalization", normalization(d).str()},
                     {"lines", lines}});
    d = advance(d);
  }
  return steps;
}

}  // namespace detail

/// Runs the configured pipeline and writes snapshots plus manifest.json
/// to out_dir. Output depends only on the configuration.
inline RunManifest run_pipeline(const SimulationConfig& cfg,
                                const std::filesystem::path& out_dir) {
  Scenario s = build_scenario(cfg);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string(), "cannot create output directory");

  RunOptions opt;
  opt.n_steps = cfg.n_steps;
  opt.snapshot_every = cfg.snapshot_every;
  opt.dt = s.dt;
  opt.snapshot_j = s.snapshot_j;
  const RunResult result = run(s.grid, s.events, opt);

  RunManifest m;
  m.config = to_json(cfg);
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& snap : result.snapshots) {
    const std::string name = snapshot_file_name(snap.step);
    write_snapshot(snap, out_dir / name);
    m.snapshots.push_back({name, snap.step, snap.time});
    snaps.push_back({{"file", name}, {"step", snap.step}, {"time", snap.time}});
  }

  nlohmann::json events = nlohmann::json::array();
  for (std::size_t e = 0; e < s.events.size(); ++e) {
    const auto& em = s.schedule.events[e];
    const auto& ev = s.events[e];
    events.push_back({{"step", em.step},
                      {"start_time", em.start_time},
                      {"line", em.site.line},
                      {"x", em.site.x},
                      {"probability", em.probability.str()},
                      {"amplitude_scale", em.amplitude_scale},
                      {"cell", {ev.cell.i, ev.cell.j, ev.cell.k}},
                      {"peak_injected", result.peak_injection[e]}});
  }

  m.document = {
      {"config", m.config},
      {"derived",
       {{"grid_cells", {s.grid.nx, s.grid.ny, s.grid.nz}},
        {"cell_m", s.grid.dx},
        {"dt", s.dt},
        {"tau", s.tau},
        {"t0", s.unit_pulse.delay},
        {"carrier_rad_s", s.omega},
        {"e0", s.e0},
        {"step_period", s.schedule.step_period},
        {"snapshot_plane", "xz"},
        {"snapshot_j", s.snapshot_j},
        {"crystal_lo", {s.crystal.lo.i, s.crystal.lo.j, s.crystal.lo.k}},
        {"crystal_hi", {s.crystal.hi.i, s.crystal.hi.j, s.crystal.hi.k}}}},
      {"walk", {{"topology", std::string(to_string(cfg.topology))},
                {"emitting_distributions", detail::walk_tables(s)}}},
      {"events", events},
      {"snapshots", snaps},
  };
  write_text_atomic(out_dir / "manifest.json", m.document.dump(2) + "\n");
  return m;
}

/// Reads a manifest and checks every listed snapshot parses with a header
/// matching its record. Throws FormatError / IoError on the first problem.
inline RunManifest read_manifest(const std::filesystem::path& path) {
  RunManifest m;
  try {
    m.document = nlohmann::json::parse(read_text(path));
    m.config = m.document.at("config");
    for (const auto& r : m.document.at("snapshots")) {
      m.snapshots.push_back({r.at("file").get<std::string>(),
                             r.at("step").get<int>(),
                             r.at("time").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": bad manifest: " + e.what());
  }
  const auto dir = path.parent_path();
  for (const auto& r : m.snapshots) {
    const auto snap = read_snapshot(dir / r.file);
    if (snap.step != r.step || snap.time != r.time)
      throw FormatError((dir / r.file).string() +
                        ": header does not match manifest record");
  }
  return m;
}

}  // namespace qwfdtd
