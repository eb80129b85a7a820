#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rotor {

/// Gaussian spread of the initial angular velocity.
struct ThermalSpec {
  double sigma_omega = 0.0;
};

/// Ensemble of planar rotors (or lattice atoms with theta = 2 k_l x).
/// Angles are kept wrapped to [-pi, pi).
struct ClassicalEnsemble2D {
  std::vector<double> theta;
  std::vector<double> omega;
  double tau = 0.0;
  std::uint64_t rng_seed = 0;

  std::size_t size() const { return theta.size(); }
};

double wrap_angle(double theta);

/// Uniform random angles, gaussian omega; reproducible for a fixed seed.
ClassicalEnsemble2D sample_uniform(std::size_t n, const ThermalSpec& thermal, std::uint64_t seed);

/// Midpoint grid of angles (a deterministic quadrature ensemble); omega is
/// still drawn from the seed when sigma_omega > 0.
ClassicalEnsemble2D sample_stratified(std::size_t n, const ThermalSpec& thermal, std::uint64_t seed);

/// omega <- omega - P sin(theta)
ClassicalEnsemble2D kick(const ClassicalEnsemble2D& ens, double strength);

/// theta <- wrap(theta + omega dtau)
ClassicalEnsemble2D drift(const ClassicalEnsemble2D& ens, double dtau);

/// O = 1 - mean(cos theta)
double localization_factor(const ClassicalEnsemble2D& ens);

/// Standard error of the Monte-Carlo estimate of O.
double localization_standard_error(const ClassicalEnsemble2D& ens);

double localization_after(const ClassicalEnsemble2D& ens, double dtau);

/// O at drift times step, 2 step, ..., count * step without moving the ensemble.
std::vector<double> localization_scan(const ClassicalEnsemble2D& ens, double step, std::size_t count);

double theta_second_moment(const ClassicalEnsemble2D& ens);
double omega_second_moment(const ClassicalEnsemble2D& ens);

/// Normalized bin-count density over [-pi, pi).
std::vector<double> histogram(const ClassicalEnsemble2D& ens, std::size_t bins);

/// One preimage theta0 of the cold single-kick map theta = theta0 - P tau sin(theta0).
struct Branch {
  double theta0 = 0.0;
  double slope = 0.0;   // d theta / d theta0
  double weight = 0.0;  // 1 / |slope|, capped near caustics
  bool caustic = false;
};

struct BranchSet {
  double tau = 0.0;
  double strength = 0.0;
  double theta = 0.0;
  std::vector<Branch> branches;
  bool caustic_proximity = false;
};

inline constexpr double kCausticSlope = 1e-8;

/// All roots of theta0 - P tau sin(theta0) = theta (mod 2 pi) in [-pi, pi).
BranchSet find_branches(double tau, double strength, double theta);

/// Angles where d theta / d theta0 vanishes (empty while P tau < 1).
std::vector<double> caustic_angles(double tau, double strength);

/// Branch-summed density (1/2pi) sum_a 1/|d theta/d theta0^a| with no flagging.
double branch_density(double tau, double strength, double theta);

struct ClassicalDensity {
  std::vector<double> theta;
  std::vector<double> density;  // NaN where flagged
  std::vector<bool> caustic;
};

/// Cold-ensemble density on `grid`. Points within half a grid spacing of a
/// caustic angle, or with a near-zero branch slope, are flagged, not summed.
ClassicalDensity classical_density(double tau, double strength, std::span<const double> grid);

}  // namespace rotor
