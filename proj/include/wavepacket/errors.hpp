#pragma once

#include <stdexcept>
#include <string>

namespace wavepacket {

// Bad user input: malformed config, out-of-range parameter, impossible grid.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// The run itself went numerically bad: non-finite amplitudes, a failed
// convergence gate, quadrature that refuses to settle. Exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wavepacket
