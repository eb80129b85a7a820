#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "rotorkit/errors.hpp"
#include "rotorkit/focal.hpp"
#include "rotorkit/quantum3d.hpp"

using namespace rotor;

namespace {

constexpr double kPi = std::numbers::pi;

double y_norm(int j) { return std::sqrt((2.0 * j + 1.0) / (4.0 * kPi)); }

// Composite 20-point Gauss-Legendre on 500 panels of [-1, 1] (10^4 nodes).
template <class F>
double integrate_x(F f) {
  constexpr int panels = 500;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = -1.0 + 2.0 * k / panels, b = -1.0 + 2.0 * (k + 1.0) / panels;
    total += boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
  }
  return total;
}

// Psi(theta) from coefficients with std::legendre, independent of the library.
cplx reference_psi(const std::vector<cplx>& c, double theta) {
  const double x = std::cos(theta);
  cplx psi{};
  for (std::size_t j = 0; j < c.size(); ++j) psi += c[j] * y_norm(static_cast<int>(j)) * std::legendre(static_cast<unsigned>(j), x);
  return psi;
}

std::vector<double> reference_density(const std::vector<cplx>& c, std::span<const double> grid) {
  std::vector<double> out;
  for (double t : grid) out.push_back(2.0 * kPi * std::sin(t) * std::norm(reference_psi(c, t)));
  return out;
}

QuantumState3D mixed_state(int j_max) {
  QuantumState3D s = isotropic_ground_state(j_max);
  double norm = 0.0;
  for (int j = 0; j <= j_max; ++j) {
    s.coeffs[j] = cplx(std::cos(1.3 * j + 0.2), std::sin(0.7 * j * j)) / (1.0 + j);
    norm += std::norm(s.coeffs[j]);
  }
  for (auto& c : s.coeffs) c /= std::sqrt(norm);
  return s;
}

double sup_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::fabs(a[i] - b[i]));
  return g;
}

const PulseEnvelope kStrongPulse = PulseEnvelope::gaussian(3000.0, 0.01);

}  // namespace

TEST_CASE("coupling matrix agrees with Legendre quadrature") {
  const int j_max = 8;
  const auto c = build_coupling(j_max);
  double worst = 0.0;
  for (int j = 0; j <= j_max; ++j) {
    for (int k = 0; k <= j_max; ++k) {
      const double q = 2.0 * kPi * y_norm(j) * y_norm(k) * integrate_x([&](double x) {
                         return std::legendre(j, x) * std::legendre(k, x) * x * x;
                       });
      worst = std::max(worst, std::fabs(c(j, k) - q));
      if (std::abs(j - k) != 0 && std::abs(j - k) != 2) CHECK(c(j, k) == 0.0);
    }
    CHECK(c(j, j) > 0.0);
    CHECK(c(j, j) < 1.0);
  }
  CHECK(worst < 1e-10);
  CHECK(c(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK((c - c.transpose()).norm() == 0.0);
  CHECK_THROWS_AS(build_coupling(1), ContractError);
}

TEST_CASE("free evolution follows direct phase bookkeeping and revives at 2 pi") {
  const auto s = mixed_state(8);
  const auto grid = polar_grid(257);
  const auto d0 = angular_density_3d(s, grid);
  CHECK(sup_gap(d0, angular_density_3d(free_evolve(s, 2.0 * kPi), grid)) < 1e-12);
  CHECK(sup_gap(d0, angular_density_3d(free_evolve(s, 5 * 2.0 * kPi), grid)) < 1e-11);

  for (double t : {kPi, 0.77}) {
    const auto e = free_evolve(s, t);
    for (int j = 0; j <= 8; ++j) {
      const cplx expected = s.coeffs[j] * std::exp(cplx(0.0, -0.5 * j * (j + 1) * t));
      CHECK(std::abs(e.coeffs[j] - expected) < 1e-13);
    }
  }
  // Even-J states at half the revival period: J and J +- 2 pick up opposite
  // signs, so the coherent part of <cos^2> flips while the diagonal part stays.
  auto even = s;
  for (int j = 1; j <= 8; j += 2) even.coeffs[j] = 0.0;
  double diag = 0.0;
  const auto c = build_coupling(8);
  for (int j = 0; j <= 8; ++j) diag += c(j, j) * std::norm(even.coeffs[j]);
  CHECK(alignment_factor(even) + alignment_factor(free_evolve(even, kPi)) ==
        doctest::Approx(2.0 * diag).epsilon(1e-12));
  CHECK_THROWS_AS(free_evolve(s, -0.1), ContractError);
}

TEST_CASE("zero envelope propagation is pure free evolution") {
  const auto s = mixed_state(12);
  const auto env = PulseEnvelope::gaussian(0.0, 0.01, 0.0);
  const auto p = propagate(s, env, 0.0, 1.3, 1e-4);
  const auto f = free_evolve(s, 1.3);
  for (std::size_t j = 0; j < s.size(); ++j) CHECK(std::abs(p.coeffs[j] - f.coeffs[j]) < 1e-11);
}

TEST_CASE("narrow pulse reproduces the impulsive kick") {
  const double p_eff = 5.0, width = 2e-5, after = 0.05;
  const auto env = PulseEnvelope::gaussian(p_eff / (width * std::sqrt(kPi)), width);
  const auto start = isotropic_ground_state(8, -20.0 * width);
  const auto s = propagate(start, env, start.tau, after, width / 50.0);

  // Oracle: exp(+i P cos^2 theta) applied to Y_00 in position space, projected
  // back on Y_J0 by quadrature, then free phases.
  const int j_ref = 48;
  std::vector<cplx> ref(j_ref + 1);
  for (int j = 0; j <= j_ref; j += 2) {
    auto part = [&](bool imag) {
      return integrate_x([&](double x) {
        const double phase = p_eff * x * x;
        return (imag ? std::sin(phase) : std::cos(phase)) * std::legendre(j, x);
      });
    };
    const double pre = 2.0 * kPi * y_norm(0) * y_norm(j);
    ref[j] = pre * cplx(part(false), part(true)) * std::exp(cplx(0.0, -0.5 * j * (j + 1) * after));
  }
  const auto grid = polar_grid(721);
  CHECK(sup_gap(angular_density_3d(s, grid), reference_density(ref, grid)) < 1e-4);
  CHECK(s.applied_strength == doctest::Approx(p_eff).epsilon(1e-8));

  const auto impulsive = free_evolve(apply_impulsive(isotropic_ground_state(8), p_eff), after);
  CHECK(sup_gap(angular_density_3d(impulsive, grid), reference_density(ref, grid)) < 1e-10);

  const auto via_delta = propagate(isotropic_ground_state(8), PulseEnvelope::delta(p_eff, 0.0), 0.0, after, 1e-3);
  CHECK(sup_gap(angular_density_3d(via_delta, grid), reference_density(ref, grid)) < 1e-10);
}

TEST_CASE("strong pulse conserves norm and parity") {
  const auto start = isotropic_ground_state(8, -0.08);
  const auto s = propagate(start, kStrongPulse, -0.08, 0.3, 2e-5);
  CHECK(std::fabs(norm_squared(s) - 1.0) < 1e-9);
  for (int j = 1; j <= s.j_max; j += 2) CHECK(s.coeffs[j] == cplx{});
  CHECK(s.truncation_safe);
  CHECK(edge_population(s) < 1e-12);
  const double a = alignment_factor(s);
  CHECK(a >= 0.0);
  CHECK(a <= 1.0);
}

TEST_CASE("alignment factor bounds") {
  CHECK(alignment_factor(isotropic_ground_state()) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  double previous = 0.0;
  for (double l : {4.0, 12.0, 40.0}) {
    QuantumState3D s = isotropic_ground_state(240);
    double norm = 0.0;
    for (int j = 0; j <= 240; j += 2) {
      s.coeffs[j] = y_norm(j) * std::exp(-0.5 * j * j / (l * l));
      norm += std::norm(s.coeffs[j]);
    }
    for (auto& c : s.coeffs) c /= std::sqrt(norm);
    const double a = alignment_factor(s);
    CHECK(a > previous);
    CHECK(a <= 1.0);
    previous = a;
  }
  CHECK(previous > 0.99);
}

TEST_CASE("angular density of the isotropic state and pole zeros") {
  const auto grid = polar_grid(181);
  const auto d = angular_density_3d(isotropic_ground_state(), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(d[i] == doctest::Approx(0.5 * std::sin(grid[i])).epsilon(1e-13));
  const auto m = angular_density_3d(mixed_state(10), grid);
  CHECK(std::fabs(m.front()) < 1e-15);
  CHECK(std::fabs(m.back()) < 1e-15);
  CHECK(pole_density(isotropic_ground_state()) == doctest::Approx(1.0 / (4.0 * kPi)));
  const std::vector<double> bad{-0.1};
  CHECK_THROWS_AS(angular_density_3d(mixed_state(4), bad), ContractError);
}

TEST_CASE("density integrates to one") {
  const auto s = free_evolve(apply_impulsive(isotropic_ground_state(), 20.0), 0.04);
  const std::size_t n = 4001;
  const auto grid = polar_grid(n);
  const auto d = angular_density_3d(s, grid);
  double total = 0.0;
  for (std::size_t i = 0; i + 2 < n; i += 2) total += (d[i] + 4.0 * d[i + 1] + d[i + 2]) * (grid[i + 1] - grid[i]) / 3.0;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("step size preconditions") {
  const auto s = isotropic_ground_state(8, -0.08);
  CHECK_THROWS_AS(propagate(s, kStrongPulse, -0.08, 0.0, 1e-3), ContractError);
  const auto tall = PulseEnvelope::gaussian(1e5, 1.0);
  CHECK_THROWS_AS(propagate(isotropic_ground_state(8, -8.0), tall, -8.0, 0.0, 2e-6), ContractError);
  CHECK_THROWS_AS(propagate(s, kStrongPulse, -0.1, 0.0, 2e-5), ContractError);
  CHECK_THROWS_AS(propagate(s, kStrongPulse, -0.08, 0.0, 0.0), ContractError);
}

TEST_CASE("step halving verification") {
  PropagateOptions strict;
  strict.verify_step = true;
  strict.step_tolerance = 1e-15;
  const auto s = isotropic_ground_state(8, -0.08);
  CHECK_THROWS_AS(propagate(s, kStrongPulse, -0.08, 0.0, 3e-5, strict), StepSizeError);
  try {
    propagate(s, kStrongPulse, -0.08, 0.0, 3e-5, strict);
  } catch (const StepSizeError& e) {
    CHECK(e.change() > 1e-15);
  }
}

TEST_CASE("split step converges at second order") {
  const auto s = isotropic_ground_state(8, -0.08);
  auto run = [&](double dt) { return alignment_factor(propagate(s, kStrongPulse, -0.08, 0.005, dt)); };
  const double a1 = run(3.2e-5), a2 = run(1.6e-5), a3 = run(8e-6);
  const double ratio = std::fabs(a1 - a2) / std::fabs(a2 - a3);
  CHECK(std::log2(ratio) >= 1.9);
}

TEST_CASE("truncation is reported when growth is disabled") {
  PropagateOptions fixed;
  fixed.auto_grow = false;
  CHECK_THROWS_AS(apply_impulsive(isotropic_ground_state(8), 50.0, fixed), TruncationError);
  const auto grown = apply_impulsive(isotropic_ground_state(8), 50.0);
  CHECK(grown.j_max >= j_max_for_strength(50.0));
  CHECK(std::fabs(norm_squared(grown) - 1.0) < 1e-12);
}

TEST_CASE("strong pulse aligns at the first focal time and forms symmetric rings later") {
  const auto report = solve_linearized(kStrongPulse, -0.08, 0.5, 1e-10, kPolarizationRestoring);
  const double tf = report.focal_times.front();
  const auto start = isotropic_ground_state(8, -0.08);
  const auto coarse = propagate(start, kStrongPulse, -0.08, tf, 2e-5);
  const auto fine = propagate(start, kStrongPulse, -0.08, tf, 1e-5);
  CHECK(alignment_factor(coarse) > 0.6);
  CHECK(alignment_factor(fine) > 0.6);
  CHECK(std::fabs(alignment_factor(coarse) - alignment_factor(fine)) < 1e-5);

  const auto late = free_evolve(coarse, 3.0 * tf);
  const auto grid = polar_grid(1001);
  const auto d = angular_density_3d(late, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::fabs(d[i] - d[grid.size() - 1 - i]) < 1e-12);
  const auto peak = static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
  CHECK(std::fabs(grid[peak] - kPi / 2.0) > 0.05);
}

TEST_CASE("density contour layout") {
  const std::vector<double> taus{-0.01, 0.0, 0.01, 0.02};
  const auto grid = polar_grid(33);
  const auto start = isotropic_ground_state(8, -0.08);
  const auto c = density_contour(start, kStrongPulse, taus, grid, 2e-5);
  CHECK(c.values.size() == taus.size() * grid.size());
  CHECK(c.alignment.size() == taus.size());
  const auto direct = propagate(start, kStrongPulse, -0.08, 0.01, 2e-5);
  CHECK(c.at(2, 16) == doctest::Approx(angular_density_3d(direct, grid)[16]).epsilon(1e-8));
  const std::vector<double> unsorted{0.1, 0.0};
  CHECK_THROWS_AS(density_contour(start, kStrongPulse, unsorted, grid, 2e-5), ContractError);
}
