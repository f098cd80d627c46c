#pragma once

#include <stdexcept>
#include <string>

namespace qwfdtd {

/// Base of every error raised by the library. The CLI maps ConfigError to
/// exit status 2 and everything else to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

class InvalidRegion : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Time step exceeds the Courant limit; the engine refuses to step.
class StabilityError : public Error {
 public:
  using Error::Error;
};

class InvalidSource : public Error {
 public:
  using Error::Error;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

/// A walk site mapped outside the interior of the grid.
class ScheduleOverflow : public Error {
 public:
  using Error::Error;
};

class IntegratorAccuracy : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Malformed or invalid configuration. `key()` names the offending key for
/// validation errors; `line()` is set for JSON syntax errors.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what, int line = 0)
      : Error(what), key_(std::move(key)), line_(line) {}
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

}  // namespace qwfdtd
