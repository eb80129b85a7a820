#include "rotorkit/classical3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rotorkit/errors.hpp"

namespace rotor {

namespace {
constexpr double kPi = std::numbers::pi;
}

double Rotor3D::polar_angle() const { return std::atan2(std::hypot(axis.x(), axis.y()), axis.z()); }

double Rotor3D::azimuth() const { return std::atan2(axis.y(), axis.x()); }

double Rotor3D::azimuthal_momentum() const { return axis.cross(angvel).z(); }

ClassicalEnsemble3D sample_isotropic(std::size_t n, const ThermalSpec& thermal, std::uint64_t seed) {
  if (n == 0) throw ContractError("sample_isotropic: n must be >= 1");
  if (thermal.sigma_omega < 0.0) throw ContractError("sample_isotropic: sigma must be non-negative");
  ClassicalEnsemble3D ens;
  ens.rng_seed = seed;
  ens.particles.resize(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto& p : ens.particles) {
    Eigen::Vector3d a;
    do {
      a = {gauss(rng), gauss(rng), gauss(rng)};
    } while (a.squaredNorm() < 1e-24);
    p.axis = a.normalized();
    if (thermal.sigma_omega > 0.0) {
      // Orthonormal tangent frame, then two independent components.
      const Eigen::Vector3d helper = std::fabs(p.axis.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
      const Eigen::Vector3d e1 = p.axis.cross(helper).normalized();
      const Eigen::Vector3d e2 = p.axis.cross(e1);
      p.angvel = thermal.sigma_omega * (gauss(rng) * e1 + gauss(rng) * e2);
    } else {
      p.angvel.setZero();
    }
  }
  return ens;
}

ClassicalEnsemble3D kick3d(const ClassicalEnsemble3D& ens, double strength) {
  ClassicalEnsemble3D out = ens;
  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
  for (auto& p : out.particles) p.angvel += strength * (z - p.axis.z() * p.axis);
  return out;
}

ClassicalEnsemble3D drift3d(const ClassicalEnsemble3D& ens, double dtau) {
  if (!(dtau >= 0.0)) throw ContractError("drift3d: dtau must be non-negative");
  ClassicalEnsemble3D out = ens;
  for (auto& p : out.particles) {
    const double speed = p.angvel.norm();
    if (speed == 0.0) continue;
    const double phase = speed * dtau;
    const double c = std::cos(phase), s = std::sin(phase);
    const Eigen::Vector3d u = p.angvel / speed;
    Eigen::Vector3d axis = c * p.axis + s * u;
    Eigen::Vector3d vel = speed * (c * u - s * p.axis);
    axis.normalize();
    vel -= vel.dot(axis) * axis;
    p.axis = axis;
    p.angvel = vel;
  }
  out.tau = ens.tau + dtau;
  return out;
}

double SphereHistogram::cos_center(std::size_t cos_bin) const {
  return -1.0 + (static_cast<double>(cos_bin) + 0.5) * 2.0 / static_cast<double>(cos_bins);
}

double SphereHistogram::phi_center(std::size_t phi_bin) const {
  return -kPi + (static_cast<double>(phi_bin) + 0.5) * 2.0 * kPi / static_cast<double>(phi_bins);
}

double SphereHistogram::total_probability() const {
  const double d_omega = (2.0 / cos_bins) * (2.0 * kPi / phi_bins);
  double s = 0.0;
  for (double v : values) s += v * d_omega;
  return s;
}

SphereHistogram solid_angle_density(const ClassicalEnsemble3D& ens, std::size_t cos_bins, std::size_t phi_bins) {
  if (cos_bins < 8) throw ContractError("solid_angle_density: need at least 8 cos(theta) bins");
  if (phi_bins < 1) throw ContractError("solid_angle_density: need at least one phi bin");
  SphereHistogram h;
  h.cos_bins = cos_bins;
  h.phi_bins = phi_bins;
  h.values.assign(cos_bins * phi_bins, 0.0);
  for (const auto& p : ens.particles) {
    const double c = std::clamp(p.axis.z(), -1.0, 1.0);
    auto i = static_cast<std::size_t>(std::floor((c + 1.0) * 0.5 * static_cast<double>(cos_bins)));
    i = std::min(i, cos_bins - 1);
    std::size_t j = 0;
    if (phi_bins > 1) {
      j = static_cast<std::size_t>(std::floor((p.azimuth() + kPi) / (2.0 * kPi) * static_cast<double>(phi_bins)));
      j = std::min(j, phi_bins - 1);
    }
    h.values[i * phi_bins + j] += 1.0;
  }
  const double d_omega = (2.0 / cos_bins) * (2.0 * kPi / phi_bins);
  const double norm = 1.0 / (static_cast<double>(ens.size()) * d_omega);
  for (auto& v : h.values) v *= norm;
  return h;
}

std::vector<double> polar_angle_histogram(const ClassicalEnsemble3D& ens, std::size_t bins) {
  if (bins < 2) throw ContractError("polar_angle_histogram: bins must be >= 2");
  std::vector<double> h(bins, 0.0);
  const double width = kPi / static_cast<double>(bins);
  for (const auto& p : ens.particles) {
    auto i = static_cast<std::size_t>(std::floor(p.polar_angle() / width));
    h[std::min(i, bins - 1)] += 1.0;
  }
  const double norm = 1.0 / (static_cast<double>(ens.size()) * width);
  for (auto& v : h) v *= norm;
  return h;
}

}  // namespace rotor
