#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace aclab {

// Bad argument to an operation (out-of-range radius, non-finite input, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Grid mask is inconsistent with the stencils (an interior node misses a neighbor).
class MaskConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation is not defined for this configuration (e.g. min-truncation with m != 1).
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Energy became non-finite during the line search. Carries the recent
// (step, energy) trace for diagnostics.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(const std::string& what, std::vector<double> steps, std::vector<double> energies)
      : std::runtime_error(what), steps_(std::move(steps)), energies_(std::move(energies)) {}

  const std::vector<double>& steps() const noexcept { return steps_; }
  const std::vector<double>& energies() const noexcept { return energies_; }

 private:
  std::vector<double> steps_;
  std::vector<double> energies_;
};

// A sample above the threshold could not be covered by a high-energy disc:
// the measured Hölder data were too small for the field.
class ClearingOutViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Field handed to a solution-only analysis has a too-large Euler-Lagrange residual.
class NotASolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural hypothesis of an analysis is not met (e.g. potential fails the
// radial-monotonicity check required by the maximum principle).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A checked invariant failed at run time (e.g. competitor beat a minimizer).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace aclab
