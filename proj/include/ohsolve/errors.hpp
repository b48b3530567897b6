#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ohsolve {

/// Base class for every error raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A flux sample evaluated to NaN or Inf.
class InvalidFluxError : public Error {
 public:
  using Error::Error;
};

/// Initial data violating the zero-mean constraints on u0 or P0.
class RejectedInitialDataError : public Error {
 public:
  RejectedInitialDataError(const std::string& what, double mass, double p_mass)
      : Error(what), mass_(mass), p_mass_(p_mass) {}

  double mass() const { return mass_; }
  double p_mass() const { return p_mass_; }

 private:
  double mass_;
  double p_mass_;
};

/// Invalid configuration value; the message names the failing invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite state produced during time integration.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double t, std::size_t cell)
      : Error(what), t_(t), cell_(cell) {}

  double time() const { return t_; }
  std::size_t cell() const { return cell_; }

 private:
  double t_;
  std::size_t cell_;
};

/// Two-run comparison with identical inputs.
class DegenerateComparisonError : public Error {
 public:
  using Error::Error;
};

/// Fields or space-time arrays defined on different grids.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Internal invariant broken (e.g. singular tridiagonal system).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ohsolve
