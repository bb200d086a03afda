#pragma once

#include <stdexcept>
#include <string>

namespace smlab {

// Error families map one-to-one onto CLI exit codes (see cli.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model parameters (gamma, N, c, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Evaluation point outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inconsistent boundary conditions / mesh / problem combination.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Malformed user input (grids, lists, config files).
class InputError : public Error {
 public:
  using Error::Error;
};

// Mesh too coarse for the requested quantity.
class MeshResolutionError : public Error {
 public:
  using Error::Error;
};

// Solver failure: non-bracketing bisection, breakdown, non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace smlab
