#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rotorkit/classical2d.hpp"
#include "rotorkit/errors.hpp"
#include "rotorkit/pulse.hpp"

namespace rotor {

/// Ensemble used to score delay vectors. At zero temperature it is a
/// deterministic midpoint grid of initial angles; otherwise a seeded
/// Monte-Carlo sample. The same sample is reused for every candidate.
struct ObjectiveSpec {
  double strength = 1.0;
  ThermalSpec thermal{};
  std::size_t n_particles = 8192;
  std::uint64_t seed = 1;
};

/// Default particle counts for the two regimes.
inline constexpr std::size_t kColdQuadraturePoints = 8192;
inline constexpr std::size_t kThermalParticles = 100000;

ObjectiveSpec default_objective(double strength, const ThermalSpec& thermal, std::uint64_t seed);

/// Kick/delay chain scorer: n identical kicks, delay k follows kick k, and the
/// last delay ends at the measurement.
class SequenceObjective {
 public:
  explicit SequenceObjective(const ObjectiveSpec& spec);

  double operator()(std::span<const double> delays) const;
  /// Monte-Carlo standard error of the factor for these delays (0 at zero
  /// temperature, where the ensemble is a quadrature grid).
  double standard_error(std::span<const double> delays) const;
  const ObjectiveSpec& spec() const { return spec_; }

 private:
  std::vector<double> final_angles(std::span<const double> delays) const;

  ObjectiveSpec spec_;
  ClassicalEnsemble2D initial_;
};

/// One-shot form of SequenceObjective.
double evaluate_sequence(std::span<const double> delays, double strength, const ThermalSpec& thermal,
                         std::size_t n_particles, std::uint64_t seed);

struct OptimizerBudget {
  int restarts = 24;
  int max_iterations = 4000;
  /// Simplex converged when both the value spread and the diameter fall below.
  double f_tolerance = 1e-10;
  double x_tolerance = 1e-9;
};

struct OptimizationResult {
  std::vector<double> best_delays;
  double best_factor = 0.0;
  std::size_t evaluations = 0;
  int restarts = 0;
  int converged_restarts = 0;
  std::uint64_t seed = 0;
  double strength = 1.0;
  double sigma_omega = 0.0;
  std::vector<double> restart_factors;

  PulseSequence sequence() const;
};

/// No restart met the convergence test within its iteration cap.
class BudgetExhausted : public RotorError {
 public:
  BudgetExhausted(const std::string& what, OptimizationResult best)
      : RotorError(what), best_(std::move(best)) {}
  const OptimizationResult& best() const noexcept { return best_; }

 private:
  OptimizationResult best_;
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead on the non-negative orthant; trial points are reflected at the
/// boundary (x -> |x|).
template <class F>
SimplexResult nelder_mead(F&& f, std::vector<double> start, double initial_step, const OptimizerBudget& budget);

/// Multistart simplex search over n delays, seeded from the accumulative
/// schedule, uniform random delays in (0, 4/P], and copies with randomly
/// zeroed components (merged pulses).
OptimizationResult optimize_delays(int n_kicks, const ObjectiveSpec& objective, const OptimizerBudget& budget = {},
                                   std::span<const double> accumulative_delays = {});

/// Accumulative delays for the classical engine scored on the same ensemble.
std::vector<double> accumulative_delays(int n_kicks, const ObjectiveSpec& objective);

struct Comparison {
  int n_kicks = 0;
  double o_acc = 0.0;
  double o_opt = 0.0;
  std::vector<double> acc_delays;
  OptimizationResult optimized;
};

Comparison compare_accumulative(int n_kicks, const ObjectiveSpec& objective, const OptimizerBudget& budget = {});

/// "n,O_acc,O_opt" with two decimals.
std::string table_row(const Comparison& c);

/// Number of delays (excluding the final flight) below `threshold`.
int merged_pulse_count(std::span<const double> delays, double threshold);

}  // namespace rotor

#include "rotorkit/pulse_opt_impl.hpp"
