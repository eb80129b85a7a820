#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <vector>

#include "rotorkit/classical2d.hpp"

namespace rotor {

/// Linear rotor as a unit axis plus its tangential velocity d(axis)/d tau.
struct Rotor3D {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d angvel = Eigen::Vector3d::Zero();

  double polar_angle() const;
  double azimuth() const;
  /// p_phi = (axis x angvel) . z
  double azimuthal_momentum() const;
};

struct ClassicalEnsemble3D {
  std::vector<Rotor3D> particles;
  double tau = 0.0;
  std::uint64_t rng_seed = 0;

  std::size_t size() const { return particles.size(); }
};

/// Axes uniform on the sphere; tangent-plane gaussian velocities with
/// `thermal.sigma_omega` per component.
ClassicalEnsemble3D sample_isotropic(std::size_t n, const ThermalSpec& thermal, std::uint64_t seed);

/// angvel += P (z - (axis.z) axis): an impulse of P sin(theta) toward the pole.
ClassicalEnsemble3D kick3d(const ClassicalEnsemble3D& ens, double strength);

/// Exact great-circle rotation at rate |angvel| for a time dtau.
ClassicalEnsemble3D drift3d(const ClassicalEnsemble3D& ens, double dtau);

/// Probability per unit solid angle, bins uniform in cos(theta) and phi.
/// `values` is row-major [cos_bin][phi_bin]; cos bins run from -1 to 1.
struct SphereHistogram {
  std::size_t cos_bins = 0;
  std::size_t phi_bins = 1;
  std::vector<double> values;

  double at(std::size_t cos_bin, std::size_t phi_bin = 0) const { return values[cos_bin * phi_bins + phi_bin]; }
  double cos_center(std::size_t cos_bin) const;
  double phi_center(std::size_t phi_bin) const;
  /// sum value * dOmega (1 for a normalized histogram)
  double total_probability() const;
};

SphereHistogram solid_angle_density(const ClassicalEnsemble3D& ens, std::size_t cos_bins, std::size_t phi_bins = 1);

/// Probability per unit polar angle on uniform theta bins over [0, pi]
/// (includes the sin(theta) measure; the quantity drawn on sphere plots with
/// equal d theta d phi cells).
std::vector<double> polar_angle_histogram(const ClassicalEnsemble3D& ens, std::size_t bins);

}  // namespace rotor
