#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "qwfdtd/errors.hpp"
#include "qwfdtd/fdtd.hpp"

namespace qwfdtd {

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string format_double_17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw FormatError(where + ": not a number: '" + std::string(s) + "'");
  return v;
}

/// Writes through a sibling temporary and renames it into place.
inline void write_text_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError(path.string(), "cannot open for writing");
    os << content;
    os.flush();
    if (!os) throw IoError(path.string(), "write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError(path.string(), "rename failed");
  }
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path.string(), "cannot open for reading");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// Header line:
///   # t=<%.17g> step=<n> plane=xz j=<j> nx=<rows> nz=<cols> field=Ez
/// then `rows` lines of `cols` comma-separated shortest round-trip doubles.
inline std::string serialize_snapshot(const FieldSnapshot& s) {
  std::string out = "# t=" + format_double_17(s.time) +
                    " step=" + std::to_string(s.step) +
                    " plane=xz j=" + std::to_string(s.fixed_index) +
                    " nx=" + std::to_string(s.rows) +
                    " nz=" + std::to_string(s.cols) + " field=Ez\n";
  out.reserve(out.size() + s.values.size() * 12);
  for (int i = 0; i < s.rows; ++i) {
    for (int k = 0; k < s.cols; ++k) {
      if (k) out += ',';
      out += format_double(s.at(i, k));
    }
    out += '\n';
  }
  return out;
}

inline void write_snapshot(const FieldSnapshot& s,
                           const std::filesystem::path& path) {
  write_text_atomic(path, serialize_snapshot(s));
}

inline FieldSnapshot parse_snapshot(std::string_view text,
                                    const std::string& where = "snapshot") {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty() || !lines[0].starts_with("# "))
    throw FormatError(where + ": missing header line");

  FieldSnapshot s;
  bool seen[6] = {};
  std::istringstream hs{std::string(lines[0].substr(2))};
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw FormatError(where + ": bad header token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    auto as_int = [&]() {
      return static_cast<int>(parse_double(val, where + " header " + key));
    };
    if (key == "t") {
      s.time = parse_double(val, where + " header t");
      seen[0] = true;
    } else if (key == "step") {
      s.step = as_int();
      seen[1] = true;
    } else if (key == "plane") {
      if (val != "xz") throw FormatError(where + ": unsupported plane " + val);
      seen[2] = true;
    } else if (key == "j") {
      s.fixed_index = as_int();
      seen[3] = true;
    } else if (key == "nx") {
      s.rows = as_int();
      seen[4] = true;
    } else if (key == "nz") {
      s.cols = as_int();
      seen[5] = true;
    } else if (key == "field") {
      if (val != "Ez") throw FormatError(where + ": unsupported field " + val);
    } else {
      throw FormatError(where + ": unknown header key " + key);
    }
  }
  for (bool b : seen)
    if (!b) throw FormatError(where + ": incomplete header");
  if (s.rows < 0 || s.cols < 0) throw FormatError(where + ": negative extents");

  std::size_t body = lines.size() - 1;
  while (body > 0 && lines[body].empty()) --body;
  if (body != static_cast<std::size_t>(s.rows))
    throw FormatError(where + ": header nx=" + std::to_string(s.rows) +
                      " but body has " + std::to_string(body) + " rows");
  s.values.reserve(static_cast<std::size_t>(s.rows) * s.cols);
  for (int i = 0; i < s.rows; ++i) {
    const auto line = lines[1 + i];
    int count = 0;
    std::size_t p = 0;
    while (p <= line.size()) {
      std::size_t comma = line.find(',', p);
      if (comma == std::string_view::npos) comma = line.size();
      s.values.push_back(parse_double(line.substr(p, comma - p),
                                      where + " row " + std::to_string(i)));
      ++count;
      p = comma + 1;
    }
    if (count != s.cols)
      throw FormatError(where + ": header nz=" + std::to_string(s.cols) +
                        " but row " + std::to_string(i) + " has " +
                        std::to_string(count) + " values");
  }
  return s;
}

inline FieldSnapshot read_snapshot(const std::filesystem::path& path) {
  return parse_snapshot(read_text(path), path.string());
}

}  // namespace qwfdtd
