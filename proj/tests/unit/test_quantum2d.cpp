#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rotorkit/errors.hpp"
#include "rotorkit/quantum2d.hpp"

using namespace rotor;

namespace {

constexpr double kPi = std::numbers::pi;

double sup_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::fabs(a[i] - b[i]));
  return g;
}

// Coefficients of exp(iP cos theta)|0> from the library-independent Bessel
// reference: c_n = i^n J_n(P).
QuantumState2D reference_kicked_ground(double p, int n_max) {
  QuantumState2D s = ground_state(n_max);
  for (int n = -n_max; n <= n_max; ++n) {
    const int k = std::abs(n);
    const double j = std::cyl_bessel_j(static_cast<double>(k), p) * ((n < 0 && k % 2) ? -1.0 : 1.0);
    s.coeffs[static_cast<std::size_t>(n + n_max)] = std::pow(cplx(0.0, 1.0), n) * j;
  }
  return s;
}

QuantumState2D gaussian_packet(double width, int n_max) {
  QuantumState2D s = ground_state(n_max);
  double norm = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    const double a = std::exp(-0.5 * n * n / (width * width));
    s.coeffs[static_cast<std::size_t>(n + n_max)] = a;
    norm += a * a;
  }
  for (auto& c : s.coeffs) c /= std::sqrt(norm);
  return s;
}

}  // namespace

TEST_CASE("ground state is flat and has unit orientation factor") {
  const auto s = ground_state();
  const auto grid = theta_grid(64);
  for (double d : angular_density(s, grid)) CHECK(d == doctest::Approx(1.0 / (2.0 * kPi)));
  CHECK(orientation_factor(s) == 1.0);
  CHECK(free_evolve(s, 3.7).coeffs == s.coeffs);
}

TEST_CASE("zero kick is the identity") {
  const auto s = apply_kick(gaussian_packet(3.0, 40), 0.0);
  CHECK(s.coeffs == gaussian_packet(3.0, 40).coeffs);
}

TEST_CASE("kick coefficients match the Bessel reference and preserve the norm") {
  const auto s = apply_kick(ground_state(), 17.5);
  const auto ref = reference_kicked_ground(17.5, s.n_max);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s.coeffs[i] - ref.coeffs[i]) < 1e-12);
  CHECK(norm_squared(s) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.truncation_safe);
  CHECK(edge_population(s) < 1e-12);
}

TEST_CASE("unitarity over a long sequence") {
  QuantumState2D s = ground_state();
  for (int k = 0; k < 20; ++k) s = free_evolve(apply_kick(s, 4.3), 0.37 + 0.1 * k);
  CHECK(std::fabs(norm_squared(s) - 1.0) < 1e-10);
}

TEST_CASE("free evolution rejects negative times") {
  CHECK_THROWS_AS(free_evolve(ground_state(), -1e-3), ContractError);
  auto s = ground_state();
  s.tau = 1.0;
  CHECK_THROWS_AS(apply_kick(s, KickSpec{1.0, 0.5}), ContractError);
}

TEST_CASE("kick spec drifts to the kick time first") {
  auto a = apply_kick(free_evolve(apply_kick(ground_state(), 2.0), 0.8), 3.0);
  auto b = apply_kick(apply_kick(ground_state(), KickSpec{2.0, 0.0}), KickSpec{3.0, 0.8});
  CHECK(b.tau == doctest::Approx(0.8));
  const auto grid = theta_grid(256);
  CHECK(sup_gap(angular_density(a, grid), angular_density(b, grid)) < 1e-14);
}

TEST_CASE("revival after 4 pi") {
  const auto s = free_evolve(apply_kick(ground_state(), 12.0), 0.3);
  const auto grid = theta_grid(1024);
  CHECK(sup_gap(angular_density(s, grid), angular_density(free_evolve(s, 4.0 * kPi), grid)) < 1e-10);
  CHECK(sup_gap(angular_density(s, grid), angular_density(free_evolve(s, 3 * 4.0 * kPi), grid)) < 1e-10);
}

TEST_CASE("even states stay even under kicks") {
  QuantumState2D s = gaussian_packet(2.0, 30);
  for (double p : {1.3, -7.0, 25.0}) {
    s = free_evolve(apply_kick(s, p), 0.21);
    for (int n = 1; n <= s.n_max; ++n) CHECK(s.coeff(n) == s.coeff(-n));
  }
}

TEST_CASE("focusing at the focal time for P = 85") {
  const double p = 85.0;
  const auto s = free_evolve(apply_kick(ground_state(), p), 1.0 / p);
  const std::vector<double> zero{0.0};
  CHECK(angular_density(s, zero)[0] > 10.0 / (2.0 * kPi));
}

TEST_CASE("rainbow at twice the focal time") {
  const double p = 85.0;
  const auto s = free_evolve(apply_kick(ground_state(), p), 2.0 / p);
  const auto grid = theta_grid(2048);
  const auto d = angular_density(s, grid);
  const auto peak = std::max_element(d.begin(), d.end());
  const double theta_peak = grid[static_cast<std::size_t>(peak - d.begin())];
  CHECK(std::fabs(theta_peak) > 0.1);
  // Steep outer edge: density collapses within a short angular distance.
  const auto j = static_cast<std::size_t>(peak - d.begin());
  const int dir = theta_peak > 0 ? 1 : -1;
  const std::size_t outer = j + dir * 40;
  CHECK(d[outer] < 0.2 * *peak);
  CHECK(*peak > 3.0 / (2.0 * kPi));
}

TEST_CASE("densities integrate to one on coarse and fine grids") {
  const auto s = free_evolve(apply_kick(ground_state(), 20.0), 0.09);
  auto integrate = [&](std::size_t n) {
    const auto g = theta_grid(n);
    double sum = 0.0;
    for (double v : angular_density(s, g)) sum += v;
    return sum * 2.0 * kPi / static_cast<double>(n);
  };
  CHECK(std::fabs(integrate(512) - integrate(4096)) < 1e-6);
  CHECK(integrate(4096) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("orientation factor agrees with grid quadrature") {
  const auto s = free_evolve(apply_kick(ground_state(), 9.0), 0.17);
  const auto g = theta_grid(8192);
  const auto d = angular_density(s, g);
  double q = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) q += (1.0 - std::cos(g[i])) * d[i];
  q *= 2.0 * kPi / static_cast<double>(g.size());
  CHECK(orientation_factor(s) == doctest::Approx(q).epsilon(1e-10));
  CHECK(orientation_after(s, 0.05) == doctest::Approx(orientation_factor(free_evolve(s, 0.05))).epsilon(1e-12));
}

TEST_CASE("concentrated packets approach zero orientation factor") {
  double previous = 1.0;
  for (double w : {2.0, 8.0, 32.0}) {
    const double o = orientation_factor(gaussian_packet(w, 200));
    CHECK(o < previous);
    previous = o;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("scan recurrence agrees with direct evaluation") {
  const auto s = apply_kick(ground_state(), 30.0);
  const double h = 1e-3;
  const auto scan = orientation_scan(s, h, 500);
  for (std::size_t j : {0u, 99u, 499u}) CHECK(scan[j] == doctest::Approx(orientation_after(s, (j + 1) * h)).epsilon(1e-11));
}

TEST_CASE("second moments agree with grid quadrature") {
  const auto s = free_evolve(apply_kick(ground_state(), 6.0), 0.2);
  const auto g = theta_grid(16384);
  const auto d = angular_density(s, g);
  double q = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) q += g[i] * g[i] * d[i];
  q *= 2.0 * kPi / static_cast<double>(g.size());
  CHECK(theta_second_moment(s) == doctest::Approx(q).epsilon(1e-6));
  CHECK(theta_second_moment(ground_state()) == doctest::Approx(kPi * kPi / 3.0));
  // <n^2> after a kick from rest is P^2 / 2.
  CHECK(momentum_second_moment(s) == doctest::Approx(18.0).epsilon(1e-12));
}

TEST_CASE("classical correspondence of the orientation factor for P = 85") {
  const double p = 85.0;
  const auto s = apply_kick(ground_state(), p);
  double worst = 0.0;
  for (int j = 0; j <= 200; ++j) {
    const double tau = 2.0 / p * j / 200.0;
    worst = std::max(worst, std::fabs(orientation_after(s, tau) - (1.0 - std::cyl_bessel_j(1.0, p * tau))));
  }
  CHECK(worst < 0.02);
}

TEST_CASE("basis doubling leaves observables unchanged") {
  const double p = 40.0;
  const auto s = free_evolve(apply_kick(ground_state(), p), 0.031);
  auto big = ground_state(2 * basis_cutoff(p));
  big = free_evolve(apply_kick(big, p), 0.031);
  CHECK(std::fabs(orientation_factor(s) - orientation_factor(big)) < 1e-8);
  CHECK(std::fabs(theta_second_moment(s) - theta_second_moment(big)) < 1e-8);
}

TEST_CASE("truncation is detected when growth is disabled") {
  KickOptions strict;
  strict.auto_grow = false;
  CHECK_THROWS_AS(apply_kick(ground_state(10), 30.0, strict), TruncationError);
  try {
    apply_kick(ground_state(10), 30.0, strict);
  } catch (const TruncationError& e) {
    CHECK(e.edge_population() > 1e-12);
  }
}

TEST_CASE("quantum resonance") {
  CHECK(resonance_equivalence_check(5.0, 1));
  CHECK(resonance_equivalence_check(5.0, 3));
  CHECK(resonance_density_gap(5.0, 3) < 1e-8);
  CHECK_FALSE(resonance_equivalence_check(5.0, 3, 4.0 * kPi + 0.1));
  CHECK_THROWS_AS(resonance_equivalence_check(5.0, 0), ContractError);
}
