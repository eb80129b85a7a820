#pragma once

#include <Eigen/Core>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "rotorkit/pulse.hpp"

namespace rotor {

using cplx = std::complex<double>;

/// Revival period of the free linear rotor (phases J(J+1)/2 tau).
inline constexpr double kRevivalPeriod3D = 2.0 * std::numbers::pi;

/// Linear rotor in the m = 0 sector: Psi(theta) = sum_J c_J Y_J0(theta).
struct QuantumState3D {
  std::vector<cplx> coeffs;
  double tau = 0.0;
  int j_max = 0;
  double applied_strength = 0.0;
  bool truncation_safe = true;

  std::size_t size() const { return coeffs.size(); }
};

struct PropagateOptions {
  double edge_tolerance = 1e-12;
  bool auto_grow = true;
  /// Re-run with dt/2 and throw StepSizeError if <cos^2> moves by more than
  /// `step_tolerance`.
  bool verify_step = false;
  double step_tolerance = 1e-6;
};

/// Basis cutoff for a total integrated strength P_eff.
int j_max_for_strength(double total_strength);

/// |J = 0, m = 0> at time `tau` in a basis of size j_max + 1.
QuantumState3D isotropic_ground_state(int j_max = 8, double tau = 0.0);

/// Zero-pads the basis to `j_max` (never shrinks).
QuantumState3D grow_basis(const QuantumState3D& state, int j_max);

double norm_squared(const QuantumState3D& state);
/// max(|c_{J_max}|^2, |c_{J_max - 1}|^2); both parities are checked.
double edge_population(const QuantumState3D& state);

/// <J,0| cos^2 theta |J',0> for J, J' = 0..j_max. Pentadiagonal and symmetric.
Eigen::MatrixXd build_coupling(int j_max);

/// c_J <- c_J exp(-i J(J+1) dtau / 2). Requires dtau >= 0.
QuantumState3D free_evolve(const QuantumState3D& state, double dtau);

/// Instantaneous kick exp(+i P cos^2 theta).
QuantumState3D apply_impulsive(const QuantumState3D& state, double strength, const PropagateOptions& options = {});

/// Second-order split-step propagation under -eps(tau) cos^2 theta from t0 to
/// t1 with step at most dt inside the pulse support; exact free evolution
/// outside it. Delta envelopes are applied as impulsive kicks.
QuantumState3D propagate(const QuantumState3D& state, const PulseEnvelope& envelope, double t0, double t1,
                         double dt, const PropagateOptions& options = {});

/// <cos^2 theta>
double alignment_factor(const QuantumState3D& state);

/// Uniform grid of `count` points on [0, pi] (both ends included).
std::vector<double> polar_grid(std::size_t count);

/// 2 pi sin(theta) |Psi(theta)|^2 on the grid.
std::vector<double> angular_density_3d(const QuantumState3D& state, std::span<const double> grid);

/// |Psi(0)|^2, probability per unit solid angle at the pole.
double pole_density(const QuantumState3D& state);

/// Density contour: rows are tau samples, columns the theta grid.
struct DensityContour {
  std::vector<double> tau;
  std::vector<double> theta;
  std::vector<double> values;  // row-major, tau.size() x theta.size()
  std::vector<double> alignment;

  double at(std::size_t row, std::size_t col) const { return values[row * theta.size() + col]; }
};

/// Propagates from state.tau through every (sorted) sample time and records
/// 2 pi sin(theta)|Psi|^2 on `grid` and <cos^2 theta> at each.
DensityContour density_contour(const QuantumState3D& state, const PulseEnvelope& envelope,
                               std::span<const double> sample_taus, std::span<const double> grid, double dt,
                               const PropagateOptions& options = {});

}  // namespace rotor
