#pragma once

#include <stdexcept>
#include <string>

namespace rotor {

/// Base class for every error raised by the toolkit engines.
class RotorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Edge population of a truncated basis exceeded the allowed tolerance.
class TruncationError : public RotorError {
 public:
  TruncationError(const std::string& what, double edge_population)
      : RotorError(what), edge_population_(edge_population) {}
  double edge_population() const noexcept { return edge_population_; }

 private:
  double edge_population_;
};

/// Objective is constant over the whole search horizon.
class FlatObjective : public RotorError {
 public:
  using RotorError::RotorError;
};

/// Accumulative schedule produced a non-decreasing factor.
class MonotonicityViolation : public RotorError {
 public:
  using RotorError::RotorError;
};

/// Linearized focusing equation has no zero inside the window.
class NoFocus : public RotorError {
 public:
  using RotorError::RotorError;
};

/// Halving the time step changed the result beyond tolerance.
class StepSizeError : public RotorError {
 public:
  StepSizeError(const std::string& what, double change)
      : RotorError(what), change_(change) {}
  double change() const noexcept { return change_; }

 private:
  double change_;
};

/// An operation was called with arguments outside its contract.
class ContractError : public RotorError {
 public:
  using RotorError::RotorError;
};

/// Invalid experiment configuration; `field` names the offending key.
class ConfigError : public RotorError {
 public:
  ConfigError(std::string field, const std::string& message)
      : RotorError(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace rotor
