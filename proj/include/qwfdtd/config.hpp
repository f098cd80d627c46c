#pragma once

#include <array>
#include <cmath>
#include <set>
#include <string>
#include <string_view>

#include "json.hpp"
#include "qwfdtd/errors.hpp"
#include "qwfdtd/walk.hpp"

namespace qwfdtd {

/// Run configuration. Defaults describe the quartz-crystal scenario: a
/// 900 x 90 x 190 nm block, 10 nm cells, eps_r 2.37, 804 nm / 3.7e14 Hz
/// light, atoms every 40 nm.
struct SimulationConfig {
  std::array<double, 3> domain_nm{900.0, 90.0, 190.0};
  double cell_nm = 10.0;
  int padding_cells = 10;
  double epsilon_r = 2.37;
  double cfl = 0.9;
  double wavelength_nm = 804.0;
  double frequency_hz = 3.7e14;
  double cells_per_wavelength = 10.0;  // n_c in tau = n_c ds / (2c)
  double lattice_spacing_nm = 40.0;
  double line_offset_nm = 20.0;  // parallel lines sit at +-offset about y mid
  Topology topology = Topology::line;
  int walk_steps = 1;
  double T1_tau = 9.0;  // half-step durations in pulse widths
  double T2_tau = 9.0;
  double phi1 = 0.0;  // radians (phi / hbar)
  double phi2 = 0.0;
  int n_steps = 100;
  int snapshot_every = 20;
  std::string out_dir = "out";

  bool operator==(const SimulationConfig&) const = default;
};

namespace detail {

inline int line_of_offset(std::string_view text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline double get_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number())
    throw ConfigError(key, "config key '" + key + "' must be a number");
  return v.get<double>();
}

inline int get_int(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer())
    throw ConfigError(key, "config key '" + key + "' must be an integer");
  return v.get<int>();
}

inline void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) throw ConfigError(key, "invalid value for '" + key + "': " + why);
}

}  // namespace detail

/// Cells per lattice site after snapping to the grid.
inline int cells_per_site(const SimulationConfig& c) {
  return static_cast<int>(std::lround(c.lattice_spacing_nm / c.cell_nm));
}

inline std::array<int, 3> crystal_cells(const SimulationConfig& c) {
  std::array<int, 3> n{};
  for (int a = 0; a < 3; ++a)
    n[a] = static_cast<int>(std::lround(c.domain_nm[a] / c.cell_nm));
  return n;
}

inline std::array<int, 3> grid_cells(const SimulationConfig& c) {
  auto n = crystal_cells(c);
  for (auto& v : n) v += 2 * c.padding_cells;
  return n;
}

inline void validate(const SimulationConfig& c) {
  using detail::require;
  for (int a = 0; a < 3; ++a)
    require(std::isfinite(c.domain_nm[a]) && c.domain_nm[a] > 0, "domain_nm",
            "extents must be positive");
  require(std::isfinite(c.cell_nm) && c.cell_nm > 0, "cell_nm", "must be > 0");
  for (int a = 0; a < 3; ++a)
    require(crystal_cells(c)[a] >= 1, "domain_nm",
            "each extent must span at least one cell");
  require(c.padding_cells >= 1, "padding_cells", "must be >= 1");
  require(std::isfinite(c.epsilon_r) && c.epsilon_r >= 1.0, "epsilon_r",
          "must be >= 1");
  require(c.cfl > 0.0 && c.cfl <= 1.0, "cfl", "must lie in (0, 1]");
  require(std::isfinite(c.wavelength_nm) && c.wavelength_nm > 0,
          "wavelength_nm", "must be > 0");
  require(std::isfinite(c.frequency_hz) && c.frequency_hz > 0, "frequency_hz",
          "must be > 0");
  require(std::isfinite(c.cells_per_wavelength) && c.cells_per_wavelength >= 1,
          "cells_per_wavelength", "must be >= 1");
  require(std::isfinite(c.lattice_spacing_nm) && c.lattice_spacing_nm > 0 &&
              cells_per_site(c) >= 1,
          "lattice_spacing_nm", "must be at least half a cell");
  require(std::isfinite(c.line_offset_nm) && c.line_offset_nm > 0 &&
              std::lround(c.line_offset_nm / c.cell_nm) >= 1,
          "line_offset_nm", "must be at least half a cell");
  require(c.walk_steps >= 1, "walk_steps", "must be >= 1");
  require(std::isfinite(c.T1_tau) && c.T1_tau > 0, "T1_tau", "must be > 0");
  require(std::isfinite(c.T2_tau) && c.T2_tau > 0, "T2_tau", "must be > 0");
  require(std::isfinite(c.phi1), "phi1", "must be finite");
  require(std::isfinite(c.phi2), "phi2", "must be finite");
  require(c.n_steps >= 1, "n_steps", "must be >= 1");
  require(c.snapshot_every >= 0, "snapshot_every", "must be >= 0");
  require(!c.out_dir.empty(), "out_dir", "must not be empty");

  // Outermost emitting site is (walk_steps - 1) sites from the centre.
  const auto n = grid_cells(c);
  const int reach = (c.walk_steps - 1) * cells_per_site(c);
  require(reach <= n[0] / 2 - 1, "walk_steps",
          "walk sites do not fit inside the padded grid");
  if (c.topology == Topology::parallel) {
    const long off = std::lround(c.line_offset_nm / c.cell_nm);
    require(off <= n[1] / 2 - 1, "line_offset_nm",
            "parallel lines do not fit inside the padded grid");
  }
}

inline nlohmann::json to_json(const SimulationConfig& c) {
  return nlohmann::json{
      {"domain_nm", c.domain_nm},
      {"cell_nm", c.cell_nm},
      {"padding_cells", c.padding_cells},
      {"epsilon_r", c.epsilon_r},
      {"cfl", c.cfl},
      {"wavelength_nm", c.wavelength_nm},
      {"frequency_hz", c.frequency_hz},
      {"cells_per_wavelength", c.cells_per_wavelength},
      {"lattice_spacing_nm", c.lattice_spacing_nm},
      {"line_offset_nm", c.line_offset_nm},
      {"topology", std::string(to_string(c.topology))},
      {"walk_steps", c.walk_steps},
      {"T1_tau", c.T1_tau},
      {"T2_tau", c.T2_tau},
      {"phi1", c.phi1},
      {"phi2", c.phi2},
      {"n_steps", c.n_steps},
      {"snapshot_every", c.snapshot_every},
      {"out_dir", c.out_dir},
  };
}

/// Parses a JSON object over the defaults. Unknown keys are rejected.
inline SimulationConfig parse_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const int line = detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("", "config parse error at line " + std::to_string(line) +
                              ": " + e.what(),
                      line);
  }
  if (!doc.is_object())
    throw ConfigError("", "config must be a JSON object", 1);

  SimulationConfig c;
  using detail::get_int;
  using detail::get_number;
  for (const auto& [key, v] : doc.items()) {
    if (key == "domain_nm") {
      if (!v.is_array() || v.size() != 3)
        throw ConfigError(key, "config key 'domain_nm' must be [x, y, z]");
      for (int a = 0; a < 3; ++a) c.domain_nm[a] = get_number(v[a], key);
    } else if (key == "cell_nm") {
      c.cell_nm = get_number(v, key);
    } else if (key == "padding_cells") {
      c.padding_cells = get_int(v, key);
    } else if (key == "epsilon_r") {
      c.epsilon_r = get_number(v, key);
    } else if (key == "cfl") {
      c.cfl = get_number(v, key);
    } else if (key == "wavelength_nm") {
      c.wavelength_nm = get_number(v, key);
    } else if (key == "frequency_hz") {
      c.frequency_hz = get_number(v, key);
    } else if (key == "cells_per_wavelength") {
      c.cells_per_wavelength = get_number(v, key);
    } else if (key == "lattice_spacing_nm") {
      c.lattice_spacing_nm = get_number(v, key);
    } else if (key == "line_offset_nm") {
      c.line_offset_nm = get_number(v, key);
    } else if (key == "topology") {
      if (!v.is_string())
        throw ConfigError(key, "config key 'topology' must be a string");
      try {
        c.topology = parse_topology(v.get<std::string>());
      } catch (const TopologyError& e) {
        throw ConfigError(key, std::string("invalid value for 'topology': ") +
                                   e.what());
      }
    } else if (key == "walk_steps") {
      c.walk_steps = get_int(v, key);
    } else if (key == "T1_tau") {
      c.T1_tau = get_number(v, key);
    } else if (key == "T2_tau") {
      c.T2_tau = get_number(v, key);
    } else if (key == "phi1") {
      c.phi1 = get_number(v, key);
    } else if (key == "phi2") {
      c.phi2 = get_number(v, key);
    } else if (key == "n_steps") {
      c.n_steps = get_int(v, key);
    } else if (key == "snapshot_every") {
      c.snapshot_every = get_int(v, key);
    } else if (key == "out_dir") {
      if (!v.is_string())
        throw ConfigError(key, "config key 'out_dir' must be a string");
      c.out_dir = v.get<std::string>();
    } else {
      throw ConfigError(key, "unknown config key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

}  // namespace qwfdtd
