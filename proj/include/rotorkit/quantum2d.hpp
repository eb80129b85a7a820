#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace rotor {

using cplx = std::complex<double>;

/// Full revival period of the free planar rotor in units of tau = t hbar / I.
inline constexpr double kRevivalPeriod2D = 4.0 * std::numbers::pi;

/// Planar rotor wave function in the angular-momentum basis n = -n_max..n_max.
///
/// Psi(theta) = (2 pi)^{-1/2} sum_n c_n exp(i n theta). `applied_kick` keeps the
/// running total of |P| delivered to the state; the basis is sized from it.
struct QuantumState2D {
  std::vector<cplx> coeffs;
  double tau = 0.0;
  int n_max = 0;
  double applied_kick = 0.0;
  bool truncation_safe = true;

  cplx coeff(int n) const {
    return (n < -n_max || n > n_max) ? cplx{} : coeffs[static_cast<std::size_t>(n + n_max)];
  }
  std::size_t size() const { return coeffs.size(); }
};

/// Impulsive kick exp(+i P cos theta) applied at time `tau`.
struct KickSpec {
  double strength = 0.0;
  double tau = 0.0;
};

struct KickOptions {
  double edge_tolerance = 1e-12;
  bool auto_grow = true;
};

/// Basis cutoff rule: ceil(K) + 4 ceil(K^{1/3}) + 32 for total kick K.
int basis_cutoff(double total_abs_kick);

QuantumState2D ground_state(int n_max = 32);

/// Zero-pads the basis to `n_max` (never shrinks).
QuantumState2D grow_basis(const QuantumState2D& state, int n_max);

double norm_squared(const QuantumState2D& state);
/// max(|c_{-n_max}|^2, |c_{n_max}|^2)
double edge_population(const QuantumState2D& state);

/// c_n <- c_n exp(-i n^2 dtau / 2). Requires dtau >= 0.
QuantumState2D free_evolve(const QuantumState2D& state, double dtau);

/// c_n <- sum_m i^{n-m} J_{n-m}(P) c_m. Grows the basis first when
/// `options.auto_grow`; throws TruncationError if the edge population after
/// the kick exceeds the tolerance.
QuantumState2D apply_kick(const QuantumState2D& state, double strength,
                          const KickOptions& options = {});

/// Free-evolves to kick.tau (must not lie in the past), then kicks.
QuantumState2D apply_kick(const QuantumState2D& state, const KickSpec& kick,
                          const KickOptions& options = {});

/// |Psi(theta_j)|^2 on the supplied grid.
std::vector<double> angular_density(const QuantumState2D& state, std::span<const double> grid);

/// Uniform grid of `count` points on [-pi, pi).
std::vector<double> theta_grid(std::size_t count);

/// O = 1 - <cos theta>, from nearest-neighbour coefficient products.
double orientation_factor(const QuantumState2D& state);

/// O after a further free flight of `dtau` (state is not modified).
double orientation_after(const QuantumState2D& state, double dtau);

/// O at drift times step, 2 step, ..., count * step.
std::vector<double> orientation_scan(const QuantumState2D& state, double step, std::size_t count);

/// <theta^2> with theta taken in [-pi, pi).
double theta_second_moment(const QuantumState2D& state);

/// <n^2> = <(-i d/dtheta)^2>.
double momentum_second_moment(const QuantumState2D& state);

/// N kicks of strength P spaced by `spacing` vs one kick of N P; true when the
/// densities agree in sup norm on a 1024-point grid within `tolerance`.
bool resonance_equivalence_check(double strength, int count,
                                 double spacing = kRevivalPeriod2D, double tolerance = 1e-8);

/// Sup-norm density difference used by resonance_equivalence_check.
double resonance_density_gap(double strength, int count, double spacing = kRevivalPeriod2D);

}  // namespace rotor
