#pragma once

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwfdtd/config.hpp"
#include "qwfdtd/io.hpp"
#include "qwfdtd/scenario.hpp"
#include "qwfdtd/three_level.hpp"
#include "qwfdtd/walk.hpp"

namespace qwfdtd::cli {

enum ExitCode : int { ok = 0, usage = 2, config_error = 2, runtime_error = 3 };

namespace detail {

inline SimulationConfig load_config(const std::string& path) {
  if (path.empty()) return parse_config("{}");
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError& e) {
    throw ConfigError("", e.what());
  }
  return parse_config(text);
}

inline void print_walk(std::ostream& out, Topology topo, int steps,
                       bool decimal) {
  out << "topology " << to_string(topo) << '\n';
  WalkDistribution d = initial_distribution(topo);
  for (int k = 1; k <= steps; ++k) {
    d = advance(d);
    const std::string total = normalization(d).str();
    if (topo == Topology::line) {
      out << "step " << k << " (total " << total
          << "): " << format_line(d, 0, decimal) << '\n';
    } else {
      out << "step " << k << " (total " << total << ")\n";
      for (int line : {1, 2})
        out << "  line " << line << ": " << format_line(d, line, decimal)
            << '\n';
    }
  }
}

inline void print_published_comparison(std::ostream& out, bool decimal) {
  const WalkDistribution pub = published_parallel_step3();
  const WalkDistribution rule = walk(Topology::parallel, 3);
  out << "parallel step 3 comparison (per line)\n";
  out << "  published (total " << normalization(pub).str()
      << "): " << format_line(pub, 1, decimal) << '\n';
  out << "  equal-split (total " << normalization(rule).str()
      << "): " << format_line(rule, 1, decimal) << '\n';
}

}  // namespace detail

/// Entry point behind the qwfdtd executable. `args` excludes argv[0].
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"Quantum-walk driven 3D FDTD simulator", "qwfdtd"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string topology_arg;
  std::optional<int> steps_arg;
  bool compare_published = false;
  bool decimal = false;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file");
  };

  auto* run_cmd = app.add_subcommand("run", "Run the full walk -> FDTD pipeline");
  add_config(run_cmd);
  run_cmd->add_option("--out", out_dir, "Output directory (overrides out_dir)");

  auto* walk_cmd = app.add_subcommand("walk", "Print exact walk distribution tables");
  add_config(walk_cmd);
  walk_cmd->add_option("--topology", topology_arg, "line or parallel");
  walk_cmd->add_option("--steps", steps_arg, "Number of walk steps");
  walk_cmd->add_flag("--compare-paper", compare_published,
                     "Also print the published parallel step-3 table");
  walk_cmd->add_flag("--decimal", decimal, "Append decimal values");

  auto* pulse_cmd = app.add_subcommand("pulse", "Emit sampled source pulse as t,E CSV");
  add_config(pulse_cmd);
  pulse_cmd->add_option("--out", out_dir, "Write pulse.csv into this directory");

  auto* levels_cmd =
      app.add_subcommand("levels", "Emit three-level population traces as CSV");
  add_config(levels_cmd);
  levels_cmd->add_option("--out", out_dir, "Write levels.csv into this directory");

  auto* validate_cmd =
      app.add_subcommand("validate-config", "Parse and validate a configuration");
  add_config(validate_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : usage;
  }

  auto emit = [&](const std::string& name, const std::string& text) {
    if (out_dir.empty()) {
      out << text;
    } else {
      std::filesystem::create_directories(out_dir);
      const auto path = std::filesystem::path(out_dir) / name;
      write_text_atomic(path, text);
      out << "wrote " << path.string() << '\n';
    }
  };

  try {
    const SimulationConfig cfg = detail::load_config(config_path);

    if (*run_cmd) {
      const std::filesystem::path dir = out_dir.empty() ? cfg.out_dir : out_dir;
      const RunManifest m = run_pipeline(cfg, dir);
      out << "wrote " << m.snapshots.size() << " snapshots and "
          << (dir / "manifest.json").string() << '\n';
    } else if (*walk_cmd) {
      Topology topo = cfg.topology;
      if (!topology_arg.empty()) {
        try {
          topo = parse_topology(topology_arg);
        } catch (const TopologyError& e) {
          throw ConfigError("topology", e.what());
        }
      }
      const int steps = steps_arg.value_or(cfg.walk_steps);
      if (steps < 1) throw ConfigError("steps", "--steps must be >= 1");
      detail::print_walk(out, topo, steps, decimal);
      if (compare_published) detail::print_published_comparison(out, decimal);
    } else if (*pulse_cmd) {
      const Scenario s = build_scenario(cfg);
      std::string csv = "t,E\n";
      for (int n = 0; n <= cfg.n_steps; ++n) {
        const double t = n * s.dt;
        csv += format_double(t) + ',' + format_double(pulse_value(s.unit_pulse, t)) + '\n';
      }
      emit("pulse.csv", csv);
    } else if (*levels_cmd) {
      const double w = 2.0 * phys::pi * cfg.frequency_hz;
      const auto sys = ThreeLevelSystem::from_frequencies(w, w, cfg.phi1, cfg.phi2);
      // One full control period, starting in the upper level.
      const double period = 2.0 * phys::pi * std::sqrt(3.0);
      std::vector<TracePoint> trace;
      propagate(sys, AtomicState::level(2), 0.0, period, 1e-3,
                Picture::interaction, &trace, 20);
      std::string csv = "t,p1,p2,p3\n";
      for (const auto& tp : trace) {
        const auto pop = tp.state.populations();
        csv += format_double(tp.t * sys.time_unit) + ',' + format_double(pop[0]) +
               ',' + format_double(pop[1]) + ',' + format_double(pop[2]) + '\n';
      }
      emit("levels.csv", csv);
    } else if (*validate_cmd) {
      const Scenario s = build_scenario(cfg);
      out << "config ok: grid " << s.grid.nx << 'x' << s.grid.ny << 'x'
          << s.grid.nz << ", dt " << format_double(s.dt) << " s, tau "
          << format_double(s.tau) << " s, " << s.events.size()
          << " source events\n";
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return runtime_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return runtime_error;
  }
  return ok;
}

}  // namespace qwfdtd::cli
