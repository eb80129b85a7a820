#include "rotorkit/pulse_opt.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <future>
#include <random>

#include "rotorkit/squeeze.hpp"

namespace rotor {

namespace {

// Delays shorter than this fraction of the focal time 1/P count as merged.
constexpr double kSnapFraction = 1e-3;

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), 0x9e3779b9u};
  std::uint64_t out = 0;
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  out = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out;
}

}  // namespace

ObjectiveSpec default_objective(double strength, const ThermalSpec& thermal, std::uint64_t seed) {
  ObjectiveSpec spec;
  spec.strength = strength;
  spec.thermal = thermal;
  spec.seed = seed;
  spec.n_particles = thermal.sigma_omega > 0.0 ? kThermalParticles : kColdQuadraturePoints;
  return spec;
}

SequenceObjective::SequenceObjective(const ObjectiveSpec& spec) : spec_(spec) {
  if (spec.n_particles < 1) throw ContractError("evaluate_sequence: n_particles must be >= 1");
  initial_ = spec.thermal.sigma_omega > 0.0 ? sample_uniform(spec.n_particles, spec.thermal, spec.seed)
                                            : sample_stratified(spec.n_particles, spec.thermal, spec.seed);
}

std::vector<double> SequenceObjective::final_angles(std::span<const double> delays) const {
  const std::size_t n = initial_.size();
  std::vector<double> theta(initial_.theta), omega(initial_.omega);
  const double p = spec_.strength;
  for (double d : delays) {
    if (d < 0.0) throw ContractError("evaluate_sequence: delays must be non-negative");
    for (std::size_t i = 0; i < n; ++i) {
      omega[i] -= p * std::sin(theta[i]);
      theta[i] += omega[i] * d;
    }
  }
  return theta;
}

double SequenceObjective::operator()(std::span<const double> delays) const {
  const auto theta = final_angles(delays);
  double s = 0.0;
  for (double t : theta) s += std::cos(t);
  return 1.0 - s / static_cast<double>(theta.size());
}

double SequenceObjective::standard_error(std::span<const double> delays) const {
  if (!(spec_.thermal.sigma_omega > 0.0)) return 0.0;
  const auto theta = final_angles(delays);
  const double n = static_cast<double>(theta.size());
  double s = 0.0, s2 = 0.0;
  for (double t : theta) {
    const double c = std::cos(t);
    s += c;
    s2 += c * c;
  }
  const double mean = s / n;
  return std::sqrt(std::max(0.0, s2 / n - mean * mean) / n);
}

double evaluate_sequence(std::span<const double> delays, double strength, const ThermalSpec& thermal,
                         std::size_t n_particles, std::uint64_t seed) {
  return SequenceObjective(ObjectiveSpec{strength, thermal, n_particles, seed})(delays);
}

PulseSequence OptimizationResult::sequence() const {
  PulseSequence seq;
  seq.provenance = Provenance::optimized;
  seq.delays = best_delays;
  seq.strengths.assign(best_delays.size(), strength);
  return seq;
}

std::vector<double> accumulative_delays(int n_kicks, const ObjectiveSpec& objective) {
  const ClassicalEnsemble2D ens = objective.thermal.sigma_omega > 0.0
                                      ? sample_uniform(objective.n_particles, objective.thermal, objective.seed)
                                      : sample_stratified(objective.n_particles, objective.thermal, objective.seed);
  const auto trace = run_accumulative(ClassicalEngine(ens), objective.strength, n_kicks);
  return trace.schedule().delays;
}

OptimizationResult optimize_delays(int n_kicks, const ObjectiveSpec& objective, const OptimizerBudget& budget,
                                   std::span<const double> acc) {
  if (n_kicks < 1 || n_kicks > 16) throw ContractError("optimize_delays: n_kicks must lie in [1, 16]");
  if (budget.restarts < 1) throw ContractError("optimize_delays: need at least one restart");
  const SequenceObjective f(objective);
  const double p = std::fabs(objective.strength);
  const double tau_f = 1.0 / p;
  const auto n = static_cast<std::size_t>(n_kicks);

  std::vector<double> acc_delays(acc.begin(), acc.end());
  if (acc_delays.size() != n) acc_delays = accumulative_delays(n_kicks, objective);

  auto start_point = [&](int r) {
    std::mt19937_64 rng(restart_seed(objective.seed, r));
    std::uniform_real_distribution<double> uni(0.0, 4.0 / p);
    std::bernoulli_distribution zero(0.35);
    if (r == 0) return acc_delays;
    std::vector<double> x(n);
    for (auto& v : x) {
      do v = uni(rng);
      while (v == 0.0);
    }
    if (r % 2 == 0) {
      // Merged-pulse probes; the final flight is never zeroed.
      const std::vector<double>& base = (r % 4 == 0) ? acc_delays : x;
      x = base;
      for (std::size_t k = 0; k + 1 < n; ++k)
        if (zero(rng)) x[k] = 0.0;
    }
    return x;
  };

  auto run_restart = [&](int r) {
    SimplexResult s = nelder_mead(f, start_point(r), 0.25 * tau_f, budget);
    // Polish from a fresh, smaller simplex around the first answer.
    SimplexResult polish = nelder_mead(f, s.x, 0.02 * tau_f, budget);
    polish.evaluations += s.evaluations;
    polish.converged = polish.converged || s.converged;
    if (s.f < polish.f) {
      s.evaluations = polish.evaluations;
      s.converged = polish.converged;
      return s;
    }
    return polish;
  };

  std::vector<std::future<SimplexResult>> jobs;
  jobs.reserve(static_cast<std::size_t>(budget.restarts));
  for (int r = 0; r < budget.restarts; ++r) jobs.push_back(std::async(std::launch::async, run_restart, r));

  OptimizationResult out;
  out.seed = objective.seed;
  out.strength = objective.strength;
  out.sigma_omega = objective.thermal.sigma_omega;
  out.restarts = budget.restarts;
  out.best_factor = INFINITY;
  for (auto& job : jobs) {
    const SimplexResult s = job.get();
    out.evaluations += s.evaluations;
    out.converged_restarts += s.converged ? 1 : 0;
    out.restart_factors.push_back(s.f);
    // Restarts are scanned in index order, so ties keep the earlier one.
    if (s.f < out.best_factor) {
      out.best_factor = s.f;
      out.best_delays = s.x;
    }
  }

  // Delays that collapsed onto the boundary are snapped to exact zeros when
  // that does not raise the factor.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (out.best_delays[k] == 0.0 || out.best_delays[k] >= kSnapFraction * tau_f) continue;
    std::vector<double> trial = out.best_delays;
    trial[k] = 0.0;
    const double v = f(trial);
    ++out.evaluations;
    if (v <= out.best_factor + 1e-12) {
      out.best_delays = trial;
      out.best_factor = std::min(out.best_factor, v);
    }
  }

  if (out.converged_restarts == 0)
    throw BudgetExhausted("optimize_delays: no restart converged within the iteration cap", out);
  return out;
}

Comparison compare_accumulative(int n_kicks, const ObjectiveSpec& objective, const OptimizerBudget& budget) {
  Comparison c;
  c.n_kicks = n_kicks;
  c.acc_delays = accumulative_delays(n_kicks, objective);
  c.o_acc = SequenceObjective(objective)(c.acc_delays);
  c.optimized = optimize_delays(n_kicks, objective, budget, c.acc_delays);
  c.o_opt = c.optimized.best_factor;
  return c;
}

std::string table_row(const Comparison& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d,%.2f,%.2f", c.n_kicks, c.o_acc, c.o_opt);
  return buf;
}

int merged_pulse_count(std::span<const double> delays, double threshold) {
  int count = 0;
  for (std::size_t k = 0; k + 1 < delays.size(); ++k)
    if (delays[k] < threshold) ++count;
  return count;
}

}  // namespace rotor
