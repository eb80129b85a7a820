#include "rotorkit/classical2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rotorkit/errors.hpp"

namespace rotor {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kScanBlock = 1024;

void draw_omega(ClassicalEnsemble2D& ens, const ThermalSpec& thermal, std::mt19937_64& rng) {
  ens.omega.assign(ens.theta.size(), 0.0);
  if (thermal.sigma_omega < 0.0) throw ContractError("thermal sigma_omega must be non-negative");
  if (thermal.sigma_omega == 0.0) return;
  std::normal_distribution<double> gauss(0.0, thermal.sigma_omega);
  for (auto& w : ens.omega) w = gauss(rng);
}

double map_angle(double theta0, double kappa) { return theta0 - kappa * std::sin(theta0); }

}  // namespace

double wrap_angle(double theta) {
  double t = std::fmod(theta + kPi, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  t -= kPi;
  return t >= kPi ? -kPi : t;
}

ClassicalEnsemble2D sample_uniform(std::size_t n, const ThermalSpec& thermal, std::uint64_t seed) {
  if (n == 0) throw ContractError("sample_uniform: n must be >= 1");
  ClassicalEnsemble2D ens;
  ens.rng_seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-kPi, kPi);
  ens.theta.resize(n);
  for (auto& t : ens.theta) t = wrap_angle(uni(rng));
  draw_omega(ens, thermal, rng);
  return ens;
}

ClassicalEnsemble2D sample_stratified(std::size_t n, const ThermalSpec& thermal, std::uint64_t seed) {
  if (n == 0) throw ContractError("sample_stratified: n must be >= 1");
  ClassicalEnsemble2D ens;
  ens.rng_seed = seed;
  ens.theta.resize(n);
  for (std::size_t i = 0; i < n; ++i) ens.theta[i] = -kPi + (static_cast<double>(i) + 0.5) * kTwoPi / n;
  std::mt19937_64 rng(seed);
  draw_omega(ens, thermal, rng);
  return ens;
}

ClassicalEnsemble2D kick(const ClassicalEnsemble2D& ens, double strength) {
  ClassicalEnsemble2D out = ens;
  for (std::size_t i = 0; i < out.size(); ++i) out.omega[i] -= strength * std::sin(out.theta[i]);
  return out;
}

ClassicalEnsemble2D drift(const ClassicalEnsemble2D& ens, double dtau) {
  if (!(dtau >= 0.0)) throw ContractError("drift: dtau must be non-negative");
  ClassicalEnsemble2D out = ens;
  for (std::size_t i = 0; i < out.size(); ++i) out.theta[i] = wrap_angle(out.theta[i] + out.omega[i] * dtau);
  out.tau = ens.tau + dtau;
  return out;
}

double localization_factor(const ClassicalEnsemble2D& ens) {
  if (ens.size() == 0) throw ContractError("localization_factor: empty ensemble");
  double s = 0.0;
  for (double t : ens.theta) s += std::cos(t);
  return 1.0 - s / static_cast<double>(ens.size());
}

double localization_standard_error(const ClassicalEnsemble2D& ens) {
  const double n = static_cast<double>(ens.size());
  double s = 0.0, s2 = 0.0;
  for (double t : ens.theta) {
    const double c = std::cos(t);
    s += c;
    s2 += c * c;
  }
  const double mean = s / n;
  const double var = std::max(0.0, s2 / n - mean * mean);
  return std::sqrt(var / n);
}

double localization_after(const ClassicalEnsemble2D& ens, double dtau) {
  double s = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) s += std::cos(ens.theta[i] + ens.omega[i] * dtau);
  return 1.0 - s / static_cast<double>(ens.size());
}

std::vector<double> localization_scan(const ClassicalEnsemble2D& ens, double step, std::size_t count) {
  // e^{i(theta + omega t_j)} by complex rotation, blocked so each particle
  // block stays in cache for the whole time grid.
  std::vector<double> sums(count, 0.0);
  std::vector<double> zr(kScanBlock), zi(kScanBlock), cr(kScanBlock), sr(kScanBlock);
  const std::size_t n = ens.size();
  for (std::size_t start = 0; start < n; start += kScanBlock) {
    const std::size_t len = std::min(kScanBlock, n - start);
    for (std::size_t i = 0; i < len; ++i) {
      zr[i] = std::cos(ens.theta[start + i]);
      zi[i] = std::sin(ens.theta[start + i]);
      const double a = ens.omega[start + i] * step;
      cr[i] = std::cos(a);
      sr[i] = std::sin(a);
    }
    double* __restrict pr = zr.data();
    double* __restrict pi = zi.data();
    const double* __restrict pc = cr.data();
    const double* __restrict ps = sr.data();
    for (std::size_t j = 0; j < count; ++j) {
      double acc = 0.0;
#pragma omp simd reduction(+ : acc)
      for (std::size_t i = 0; i < len; ++i) {
        const double re = pr[i] * pc[i] - pi[i] * ps[i];
        const double im = pr[i] * ps[i] + pi[i] * pc[i];
        pr[i] = re;
        pi[i] = im;
        acc += re;
      }
      sums[j] += acc;
    }
  }
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = 1.0 - sums[j] / static_cast<double>(n);
  return out;
}

double theta_second_moment(const ClassicalEnsemble2D& ens) {
  double s = 0.0;
  for (double t : ens.theta) s += t * t;
  return s / static_cast<double>(ens.size());
}

double omega_second_moment(const ClassicalEnsemble2D& ens) {
  double s = 0.0;
  for (double w : ens.omega) s += w * w;
  return s / static_cast<double>(ens.size());
}

std::vector<double> histogram(const ClassicalEnsemble2D& ens, std::size_t bins) {
  if (bins < 2) throw ContractError("histogram: bins must be >= 2");
  std::vector<double> h(bins, 0.0);
  const double width = kTwoPi / static_cast<double>(bins);
  for (double t : ens.theta) {
    auto b = static_cast<std::ptrdiff_t>(std::floor((t + kPi) / width));
    b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1);
    h[static_cast<std::size_t>(b)] += 1.0;
  }
  const double norm = 1.0 / (static_cast<double>(ens.size()) * width);
  for (auto& v : h) v *= norm;
  return h;
}

BranchSet find_branches(double tau, double strength, double theta) {
  if (!(tau > 0.0)) throw ContractError("find_branches: tau must be positive");
  const double kappa = strength * tau;
  BranchSet set{tau, strength, theta, {}, false};

  const int intervals = 16 * (1 + static_cast<int>(std::ceil(std::fabs(kappa))));
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(intervals) + 3);
  for (int i = 0; i <= intervals; ++i) nodes.push_back(-kPi + kTwoPi * i / intervals);
  if (std::fabs(kappa) >= 1.0) {
    const double c = std::acos(1.0 / kappa);
    nodes.push_back(c);
    nodes.push_back(-c);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  double f_lo = std::numeric_limits<double>::infinity();
  double f_hi = -f_lo;
  for (double x : nodes) {
    const double f = map_angle(x, kappa);
    f_lo = std::min(f_lo, f);
    f_hi = std::max(f_hi, f);
  }
  const double target = wrap_angle(theta);
  const int m_lo = static_cast<int>(std::ceil((f_lo - target) / kTwoPi)) - 1;
  const int m_hi = static_cast<int>(std::floor((f_hi - target) / kTwoPi)) + 1;

  auto add_root = [&](double x) {
    Branch b;
    b.theta0 = x;
    b.slope = 1.0 - kappa * std::cos(x);
    const double a = std::fabs(b.slope);
    b.caustic = a < kCausticSlope;
    b.weight = 1.0 / std::max(a, kCausticSlope);
    set.caustic_proximity = set.caustic_proximity || b.caustic;
    set.branches.push_back(b);
  };

  for (int m = m_lo; m <= m_hi; ++m) {
    const double goal = target + kTwoPi * m;
    // Nodes include every critical point, so F is monotone on each bracket.
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      double a = nodes[k], b = nodes[k + 1];
      double ga = map_angle(a, kappa) - goal;
      const double gb = map_angle(b, kappa) - goal;
      if (ga == 0.0) {
        add_root(a);
        continue;
      }
      if (gb == 0.0 || (ga < 0.0) == (gb < 0.0)) continue;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double gm = map_angle(mid, kappa) - goal;
        if (gm == 0.0) {
          a = b = mid;
          break;
        }
        if ((gm < 0.0) == (ga < 0.0)) {
          a = mid;
          ga = gm;
        } else {
          b = mid;
        }
      }
      add_root(0.5 * (a + b));
    }
  }
  std::sort(set.branches.begin(), set.branches.end(),
            [](const Branch& x, const Branch& y) { return x.theta0 < y.theta0; });
  return set;
}

std::vector<double> caustic_angles(double tau, double strength) {
  const double kappa = strength * tau;
  std::vector<double> out;
  if (std::fabs(kappa) < 1.0) return out;
  const double c = std::acos(1.0 / kappa);
  out.push_back(wrap_angle(map_angle(c, kappa)));
  const double other = wrap_angle(map_angle(-c, kappa));
  if (std::fabs(other - out.front()) > 1e-15) out.push_back(other);
  std::sort(out.begin(), out.end());
  return out;
}

double branch_density(double tau, double strength, double theta) {
  const auto set = find_branches(tau, strength, theta);
  double s = 0.0;
  for (const auto& b : set.branches) s += b.weight;
  return s / kTwoPi;
}

ClassicalDensity classical_density(double tau, double strength, std::span<const double> grid) {
  ClassicalDensity out;
  out.theta.assign(grid.begin(), grid.end());
  out.density.assign(grid.size(), 0.0);
  out.caustic.assign(grid.size(), false);
  if (grid.empty()) return out;

  for (double c : caustic_angles(tau, strength)) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double d = std::fabs(wrap_angle(grid[j] - c));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    double spacing = kTwoPi;
    if (grid.size() > 1) {
      const std::size_t nb = best + 1 < grid.size() ? best + 1 : best - 1;
      spacing = std::fabs(wrap_angle(grid[nb] - grid[best]));
    }
    if (best_d <= 0.5 * spacing + 1e-15) out.caustic[best] = true;
  }

  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto set = find_branches(tau, strength, grid[j]);
    if (set.caustic_proximity) out.caustic[j] = true;
    if (out.caustic[j]) {
      out.density[j] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double s = 0.0;
    for (const auto& b : set.branches) s += b.weight;
    out.density[j] = s / kTwoPi;
  }
  return out;
}

}  // namespace rotor
