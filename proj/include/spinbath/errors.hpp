#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spinbath {

// Library error taxonomy. The CLI maps these onto process exit codes:
// parse/config -> 1, domain/numerical -> 2, I/O -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quantum state violated its invariants (non-Hermitian, trace != 1,
// negative eigenvalue beyond tolerance, Bloch norm > 1).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied value is outside an operation's domain.
class InputError : public Error {
 public:
  using Error::Error;
};

// Bad experiment/method configuration (grids, quadrature sizes, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Nonlinear fit failed to converge; carries the cost per iteration.
class FitError : public Error {
 public:
  FitError(const std::string& msg, std::vector<double> cost_trace)
      : Error(msg), cost_trace(std::move(cost_trace)) {}
  std::vector<double> cost_trace;
};

}  // namespace spinbath
