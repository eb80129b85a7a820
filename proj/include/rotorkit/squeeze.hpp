#pragma once

#include <concepts>
#include <cstddef>
#include <vector>

#include "rotorkit/classical2d.hpp"
#include "rotorkit/pulse.hpp"
#include "rotorkit/quantum2d.hpp"

namespace rotor {

/// Anything the squeezing scheduler can drive: kick, free flight, and the
/// orientation (localization) factor with cheap look-ahead.
template <class E>
concept Evolvable = requires(const E& e, double x, std::size_t n) {
  { e.kicked(x) } -> std::same_as<E>;
  { e.drifted(x) } -> std::same_as<E>;
  { e.factor() } -> std::convertible_to<double>;
  { e.factor_after(x) } -> std::convertible_to<double>;
  { e.factor_scan(x, n) } -> std::same_as<std::vector<double>>;
  { e.theta_variance() } -> std::convertible_to<double>;
  { e.velocity_variance() } -> std::convertible_to<double>;
  { e.time() } -> std::convertible_to<double>;
  { E::has_revivals } -> std::convertible_to<bool>;
};

/// Quantum planar rotor engine.
class QuantumEngine {
 public:
  static constexpr bool has_revivals = true;

  QuantumEngine() : state_(ground_state()) {}
  explicit QuantumEngine(QuantumState2D state) : state_(std::move(state)) {}

  QuantumEngine kicked(double strength) const { return QuantumEngine(apply_kick(state_, strength)); }
  QuantumEngine drifted(double dtau) const { return QuantumEngine(free_evolve(state_, dtau)); }
  double factor() const { return orientation_factor(state_); }
  double factor_after(double dtau) const { return orientation_after(state_, dtau); }
  std::vector<double> factor_scan(double step, std::size_t count) const {
    return orientation_scan(state_, step, count);
  }
  double theta_variance() const { return theta_second_moment(state_); }
  double velocity_variance() const { return momentum_second_moment(state_); }
  double time() const { return state_.tau; }
  const QuantumState2D& state() const { return state_; }

 private:
  QuantumState2D state_;
};

/// Classical Monte-Carlo (or stratified quadrature) planar rotor engine.
class ClassicalEngine {
 public:
  static constexpr bool has_revivals = false;

  ClassicalEngine() = default;
  explicit ClassicalEngine(ClassicalEnsemble2D ens) : ens_(std::move(ens)) {}

  ClassicalEngine kicked(double strength) const { return ClassicalEngine(kick(ens_, strength)); }
  ClassicalEngine drifted(double dtau) const { return ClassicalEngine(drift(ens_, dtau)); }
  double factor() const { return localization_factor(ens_); }
  double factor_after(double dtau) const { return localization_after(ens_, dtau); }
  std::vector<double> factor_scan(double step, std::size_t count) const {
    return localization_scan(ens_, step, count);
  }
  double theta_variance() const { return theta_second_moment(ens_); }
  double velocity_variance() const { return omega_second_moment(ens_); }
  double time() const { return ens_.tau; }
  const ClassicalEnsemble2D& ensemble() const { return ens_; }

 private:
  ClassicalEnsemble2D ens_;
};

static_assert(Evolvable<QuantumEngine>);
static_assert(Evolvable<ClassicalEngine>);

struct MinimumOptions {
  std::size_t grid_points = 4096;
  double time_tolerance = 1e-10;
  /// Grid minima within this fraction of the factor's spread above the best
  /// grid value are refined before the global winner is chosen.
  double candidate_slack = 1e-3;
  /// Extra scans of the same size over windows shrunk by `zoom_factor` per
  /// level, taken when the first grid cell could hide the minimum.
  int zoom_levels = 3;
  double zoom_factor = 64.0;
};

struct MinimumResult {
  double delta_tau = 0.0;
  double factor = 0.0;
};

/// Golden-section search for a minimum of f on [a, b] to `tol` in time.
template <class F>
MinimumResult golden_section(F&& f, double a, double b, double tol);

/// Global minimum of the factor over (0, horizon]: grid scan, then
/// golden-section refinement of every competitive local minimum. Ties go to
/// the earlier time. Throws FlatObjective when the factor is constant.
template <Evolvable E>
MinimumResult next_minimum(const E& engine, double horizon, const MinimumOptions& options = {});

struct SqueezeRow {
  int k = 0;             // kick index, 1-based
  double tau = 0.0;      // kick instant
  double delta_tau = 0.0;
  double factor = 0.0;   // O at tau + delta_tau
  double u = 0.0;        // <theta^2> at the kick
  double w = 0.0;        // <omega^2> / P^2 at the kick (before it)
};

struct SqueezeTrace {
  double strength = 0.0;
  bool quantum = false;
  std::vector<SqueezeRow> rows;

  /// The accumulative schedule as a kick sequence.
  PulseSequence schedule() const;
};

struct AccumulateOptions {
  MinimumOptions minimum;
  /// Fixed search window; <= 0 selects the engine default.
  double horizon = 0.0;
  /// Upper bound on the classical window.
  double classical_horizon_cap = kRevivalPeriod2D;
};

/// Classical search window 2 / (P sqrt(O)), capped.
double classical_horizon(double strength, double factor, double cap);

/// Kick, free-fly to the next minimum, repeat. Throws MonotonicityViolation if
/// a minimum does not improve on the previous one.
template <Evolvable E>
SqueezeTrace run_accumulative(const E& engine, double strength, int n_kicks, const AccumulateOptions& options = {});

/// Parabolic-limit recurrence in units of 1/P. Row k holds the k-th delay
/// (computed from u_{k-1}, w_{k-1}) and the updated u_k, w_k.
struct RecurrenceRow {
  int k = 0;
  double delta_tau = 0.0;
  double u = 0.0;
  double w = 0.0;
};

std::vector<RecurrenceRow> parabolic_recurrence(double u0, double w0, int n);

/// Delay the parabolic model predicts for a trace row, in tau units.
double parabolic_prediction(const SqueezeRow& row, double strength);

/// Accumulative schedule with the revival period added to every delay.
/// Only quantum traces have revivals; classical traces raise ContractError.
PulseSequence revival_shifted_schedule(const SqueezeTrace& trace);

/// Applies each kick of `seq` followed by its delay and returns the factor
/// at the end of every delay.
template <Evolvable E>
std::vector<double> simulate_sequence(const E& engine, const PulseSequence& seq);

}  // namespace rotor

#include "rotorkit/squeeze_impl.hpp"
