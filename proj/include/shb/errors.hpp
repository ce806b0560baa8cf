#pragma once

#include <stdexcept>
#include <string>

namespace shb {

// Violated numeric precondition (non-unit vector, Ts <= 0, bad step size, ...).
struct InputError : std::invalid_argument {
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Inconsistent or incomplete experiment configuration.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// File system / parse failures on data files.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace shb
