#pragma once

#include <stdexcept>
#include <string>

namespace entangler {

// Bad input: dimension mismatch, malformed configuration, out-of-range label.
// The CLI maps this to exit code 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical guard tripped: truncation tail too large, resonant denominator,
// integrator drift, vanishing success probability. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entangler
