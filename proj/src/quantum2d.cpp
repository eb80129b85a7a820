#include "rotorkit/quantum2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rotorkit/errors.hpp"
#include "rotorkit/special.hpp"

namespace rotor {

namespace {

constexpr double kPi = std::numbers::pi;

// Free phases are periodic in dtau with period 4 pi; reducing first keeps
// n^2 dtau / 2 small and makes revivals exact to rounding.
double reduce_free_time(double dtau) { return std::fmod(dtau, kRevivalPeriod2D); }

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

int basis_cutoff(double total_abs_kick) {
  const double k = std::ceil(std::fabs(total_abs_kick));
  return static_cast<int>(k + 4.0 * std::ceil(std::cbrt(k)) + 32.0);
}

QuantumState2D ground_state(int n_max) {
  if (n_max < 1) throw ContractError("ground_state: n_max must be positive");
  QuantumState2D s;
  s.n_max = n_max;
  s.coeffs.assign(2 * static_cast<std::size_t>(n_max) + 1, cplx{});
  s.coeffs[static_cast<std::size_t>(n_max)] = 1.0;
  return s;
}

QuantumState2D grow_basis(const QuantumState2D& state, int n_max) {
  if (n_max <= state.n_max) return state;
  QuantumState2D out = state;
  out.n_max = n_max;
  out.coeffs.assign(2 * static_cast<std::size_t>(n_max) + 1, cplx{});
  const std::size_t shift = static_cast<std::size_t>(n_max - state.n_max);
  std::copy(state.coeffs.begin(), state.coeffs.end(), out.coeffs.begin() + static_cast<std::ptrdiff_t>(shift));
  return out;
}

double norm_squared(const QuantumState2D& state) {
  double s = 0.0;
  for (const auto& c : state.coeffs) s += std::norm(c);
  return s;
}

double edge_population(const QuantumState2D& state) {
  if (state.coeffs.empty()) return 0.0;
  return std::max(std::norm(state.coeffs.front()), std::norm(state.coeffs.back()));
}

QuantumState2D free_evolve(const QuantumState2D& state, double dtau) {
  if (!(dtau >= 0.0)) throw ContractError("free_evolve: dtau must be non-negative");
  QuantumState2D out = state;
  const double t = reduce_free_time(dtau);
  for (int n = -state.n_max; n <= state.n_max; ++n) {
    const double phase = -0.5 * static_cast<double>(n) * n * t;
    out.coeffs[static_cast<std::size_t>(n + state.n_max)] *= std::polar(1.0, phase);
  }
  out.tau = state.tau + dtau;
  return out;
}

QuantumState2D apply_kick(const QuantumState2D& state, double strength, const KickOptions& options) {
  if (!std::isfinite(strength)) throw ContractError("apply_kick: kick strength must be finite");
  if (strength == 0.0) return state;

  QuantumState2D in = state;
  if (options.auto_grow) in = grow_basis(state, basis_cutoff(state.applied_kick + std::fabs(strength)));

  const int band = bessel_band_limit(strength);
  const auto j = bessel_j_sequence(band, strength);
  // g_k = i^k J_k(P) is even in k.
  std::vector<cplx> kernel(static_cast<std::size_t>(band) + 1);
  for (int k = 0; k <= band; ++k) kernel[k] = i_power(k) * j[k];

  const int n_max = in.n_max;
  const int dim = 2 * n_max + 1;
  QuantumState2D out = in;
  // Offsets +k and -k share g_k and are added pairwise first, so an even
  // state maps to an exactly even state.
  auto at = [&](int idx) { return (idx < 0 || idx >= dim) ? cplx{} : in.coeffs[idx]; };
  for (int n = 0; n < dim; ++n) {
    cplx acc = kernel[0] * in.coeffs[n];
    for (int k = 1; k <= band; ++k) acc += kernel[k] * (at(n - k) + at(n + k));
    out.coeffs[n] = acc;
  }
  out.applied_kick = state.applied_kick + std::fabs(strength);

  const double edge = edge_population(out);
  out.truncation_safe = state.truncation_safe && edge < options.edge_tolerance;
  if (edge >= options.edge_tolerance) {
    throw TruncationError("apply_kick: edge population " + std::to_string(edge) +
                              " exceeds tolerance at n_max=" + std::to_string(n_max),
                          edge);
  }
  return out;
}

QuantumState2D apply_kick(const QuantumState2D& state, const KickSpec& kick, const KickOptions& options) {
  if (kick.tau < state.tau) throw ContractError("apply_kick: kick time lies before the state time");
  return apply_kick(free_evolve(state, kick.tau - state.tau), kick.strength, options);
}

std::vector<double> theta_grid(std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t j = 0; j < count; ++j) g[j] = -kPi + 2.0 * kPi * static_cast<double>(j) / count;
  return g;
}

std::vector<double> angular_density(const QuantumState2D& state, std::span<const double> grid) {
  if (grid.empty()) throw ContractError("angular_density: empty grid");
  std::vector<double> out(grid.size());
  const double inv_2pi = 1.0 / (2.0 * kPi);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const cplx step = std::polar(1.0, grid[j]);
    cplx basis = std::polar(1.0, -static_cast<double>(state.n_max) * grid[j]);
    cplx psi{};
    for (const auto& c : state.coeffs) {
      psi += c * basis;
      basis *= step;
    }
    out[j] = std::norm(psi) * inv_2pi;
  }
  return out;
}

double orientation_factor(const QuantumState2D& state) {
  double re = 0.0;
  for (std::size_t k = 0; k + 1 < state.coeffs.size(); ++k)
    re += (std::conj(state.coeffs[k + 1]) * state.coeffs[k]).real();
  return 1.0 - re;
}

double orientation_after(const QuantumState2D& state, double dtau) {
  const double t = reduce_free_time(dtau);
  double re = 0.0;
  for (int n = -state.n_max; n < state.n_max; ++n) {
    const std::size_t k = static_cast<std::size_t>(n + state.n_max);
    const cplx z = std::conj(state.coeffs[k + 1]) * state.coeffs[k];
    re += (z * std::polar(1.0, 0.5 * (2.0 * n + 1.0) * t)).real();
  }
  return 1.0 - re;
}

std::vector<double> orientation_scan(const QuantumState2D& state, double step, std::size_t count) {
  const std::size_t pairs = state.coeffs.empty() ? 0 : state.coeffs.size() - 1;
  std::vector<cplx> z(pairs), rot(pairs);
  const double h = reduce_free_time(step);
  for (std::size_t k = 0; k < pairs; ++k) {
    const double n = static_cast<double>(k) - state.n_max;
    z[k] = std::conj(state.coeffs[k + 1]) * state.coeffs[k];
    rot[k] = std::polar(1.0, 0.5 * (2.0 * n + 1.0) * h);
  }
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    double re = 0.0;
    for (std::size_t k = 0; k < pairs; ++k) {
      z[k] *= rot[k];
      re += z[k].real();
    }
    out[j] = 1.0 - re;
  }
  return out;
}

double theta_second_moment(const QuantumState2D& state) {
  // (1/2pi) int theta^2 e^{ik theta} = pi^2/3 (k = 0), 2 (-1)^k / k^2 otherwise.
  const std::size_t dim = state.coeffs.size();
  double total = norm_squared(state) * kPi * kPi / 3.0;
  for (std::size_t k = 1; k < dim; ++k) {
    cplx acc{};
    for (std::size_t n = k; n < dim; ++n) acc += std::conj(state.coeffs[n - k]) * state.coeffs[n];
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    total += 4.0 * sign / (static_cast<double>(k) * k) * acc.real();
  }
  return total;
}

double momentum_second_moment(const QuantumState2D& state) {
  double s = 0.0;
  for (int n = -state.n_max; n <= state.n_max; ++n)
    s += static_cast<double>(n) * n * std::norm(state.coeffs[static_cast<std::size_t>(n + state.n_max)]);
  return s;
}

double resonance_density_gap(double strength, int count, double spacing) {
  if (count < 1) throw ContractError("resonance_equivalence_check: N must be >= 1");
  const int n_max = basis_cutoff(std::fabs(strength) * count);
  QuantumState2D train = ground_state(n_max);
  for (int k = 0; k < count; ++k) {
    if (k > 0) train = free_evolve(train, spacing);
    train = apply_kick(train, strength);
  }
  QuantumState2D single = apply_kick(ground_state(n_max), strength * count);

  const auto grid = theta_grid(1024);
  const auto a = angular_density(train, grid);
  const auto b = angular_density(single, grid);
  double gap = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) gap = std::max(gap, std::fabs(a[j] - b[j]));
  return gap;
}

bool resonance_equivalence_check(double strength, int count, double spacing, double tolerance) {
  return resonance_density_gap(strength, count, spacing) <= tolerance;
}

}  // namespace rotor
