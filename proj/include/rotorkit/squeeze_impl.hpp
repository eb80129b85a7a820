#pragma once

// Template definitions for squeeze.hpp.

#include <algorithm>
#include <cmath>
#include <string>

#include "rotorkit/errors.hpp"

namespace rotor {

template <class F>
MinimumResult golden_section(F&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? MinimumResult{c, fc} : MinimumResult{d, fd};
}

template <Evolvable E>
MinimumResult next_minimum(const E& engine, double horizon, const MinimumOptions& options) {
  if (!(horizon > 0.0)) throw ContractError("next_minimum: horizon must be positive");
  if (options.grid_points < 2) throw ContractError("next_minimum: need at least two grid points");
  if (options.zoom_levels < 0 || !(options.zoom_factor > 1.0))
    throw ContractError("next_minimum: zoom levels must be >= 0 and the zoom factor > 1");
  const std::size_t n = options.grid_points;
  const double start = engine.factor();

  struct Candidate {
    double t;
    double value;
    double a;
    double b;
  };
  std::vector<Candidate> cands;
  double lo = start, hi = start;
  double window = horizon;
  for (int level = 0; level <= options.zoom_levels; ++level, window /= options.zoom_factor) {
    const double h = window / static_cast<double>(n);
    if (!(h > 0.5 * options.time_tolerance)) break;
    std::vector<double> vals(n + 1);
    vals[0] = start;
    const auto scan = engine.factor_scan(h, n);
    std::copy(scan.begin(), scan.end(), vals.begin() + 1);
    const auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
    lo = std::min(lo, *lo_it);
    hi = std::max(hi, *hi_it);
    // Local minima of the grid; tau = 0 is only ever a left neighbour. A
    // zoomed level leaves its right edge to the coarser level.
    const std::size_t last = level == 0 ? n : n - 1;
    std::size_t first_min = 0;
    for (std::size_t j = 1; j <= last; ++j) {
      const bool left = vals[j] < vals[j - 1];
      const bool right = j == n || vals[j] <= vals[j + 1];
      if (left && right) {
        cands.push_back({static_cast<double>(j) * h, vals[j], static_cast<double>(j - 1) * h,
                         std::min(window, static_cast<double>(j + 1) * h)});
        if (first_min == 0) first_min = j;
      }
    }
    // Zoom only when the first cell could hide a minimum: the factor does not
    // fall over it, or the earliest minimum sits right next to tau = 0.
    const bool early = vals[1] >= vals[0] || (first_min != 0 && first_min <= 2);
    if (!early) break;
  }
  const double spread = hi - lo;
  if (spread < 1e-14) throw FlatObjective("next_minimum: factor varies by less than 1e-14 over the horizon");
  if (cands.empty()) throw FlatObjective("next_minimum: factor has no minimum inside the horizon");

  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.t < y.t; });
  double best_grid = cands.front().value;
  for (const auto& c : cands) best_grid = std::min(best_grid, c.value);
  const double threshold = best_grid + options.candidate_slack * spread;

  MinimumResult best{0.0, INFINITY};
  auto f = [&engine](double t) { return engine.factor_after(t); };
  for (const auto& c : cands) {
    if (c.value > threshold) continue;
    MinimumResult r = golden_section(f, c.a, c.b, options.time_tolerance);
    if (c.value < r.factor) r = {c.t, c.value};
    if (!(r.delta_tau > 0.0)) continue;
    // Candidates are visited in time order, so keeping strict improvements
    // breaks ties toward the earlier minimum.
    if (r.factor < best.factor - 1e-12) best = r;
  }
  if (!std::isfinite(best.factor)) throw FlatObjective("next_minimum: no interior minimum found");
  return best;
}

template <Evolvable E>
SqueezeTrace run_accumulative(const E& engine, double strength, int n_kicks, const AccumulateOptions& options) {
  if (n_kicks < 1) throw ContractError("run_accumulative: n_kicks must be >= 1");
  if (!(strength != 0.0 && std::isfinite(strength)))
    throw ContractError("run_accumulative: strength must be finite and nonzero");
  SqueezeTrace trace;
  trace.strength = strength;
  trace.quantum = E::has_revivals;
  E e = engine;
  double previous = e.factor();
  for (int k = 1; k <= n_kicks; ++k) {
    SqueezeRow row;
    row.k = k;
    row.tau = e.time();
    row.u = e.theta_variance();
    row.w = e.velocity_variance() / (strength * strength);
    e = e.kicked(strength);
    double horizon = options.horizon;
    if (!(horizon > 0.0))
      horizon = E::has_revivals ? kRevivalPeriod2D
                                : classical_horizon(strength, e.factor(), options.classical_horizon_cap);
    const MinimumResult m = next_minimum(e, horizon, options.minimum);
    if (!(m.factor < previous))
      throw MonotonicityViolation("run_accumulative: factor did not decrease at kick " + std::to_string(k));
    row.delta_tau = m.delta_tau;
    row.factor = m.factor;
    trace.rows.push_back(row);
    e = e.drifted(m.delta_tau);
    previous = m.factor;
  }
  return trace;
}

template <Evolvable E>
std::vector<double> simulate_sequence(const E& engine, const PulseSequence& seq) {
  if (seq.delays.size() != seq.strengths.size())
    throw ContractError("simulate_sequence: strengths and delays differ in length");
  std::vector<double> out;
  out.reserve(seq.size());
  E e = engine;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (seq.delays[k] < 0.0) throw ContractError("simulate_sequence: delays must be non-negative");
    e = e.kicked(seq.strengths[k]).drifted(seq.delays[k]);
    out.push_back(e.factor());
  }
  return out;
}

}  // namespace rotor
