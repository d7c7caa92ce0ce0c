#pragma once
#include <stdexcept>

namespace patkit {

// The CLI maps these to its exit codes: 2, 3, 4 in order.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace patkit
