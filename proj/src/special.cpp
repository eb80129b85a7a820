#include "rotorkit/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rotor {

namespace {

constexpr double kRescaleAbove = 1e140;

int miller_start_order(int max_order, double ax) {
  const double base = std::max<double>(max_order, ax);
  return static_cast<int>(base + 30.0 + 4.0 * std::cbrt(base) + std::sqrt(40.0 * base)) + 2;
}

}  // namespace

std::vector<double> bessel_j_sequence(int max_order, double x) {
  if (max_order < 0) throw std::invalid_argument("bessel_j_sequence: negative order");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double ax = std::fabs(x);
  const int start = miller_start_order(max_order, ax);

  // Unnormalized values for orders 0..start; only 0..max_order are kept.
  std::vector<double> work(static_cast<std::size_t>(start) + 2, 0.0);
  work[start + 1] = 0.0;
  work[start] = 1.0;
  const double two_over_x = 2.0 / ax;
  for (int k = start; k >= 1; --k) {
    work[k - 1] = k * two_over_x * work[k] - work[k + 1];
    if (std::fabs(work[k - 1]) > kRescaleAbove) {
      for (int j = k - 1; j <= start + 1; ++j) work[j] /= kRescaleAbove;
    }
  }

  double sum_sq = work[0] * work[0];
  double even_sum = work[0];
  for (int k = 1; k <= start; ++k) {
    sum_sq += 2.0 * work[k] * work[k];
    if (k % 2 == 0) even_sum += 2.0 * work[k];
  }
  double scale = 1.0 / std::sqrt(sum_sq);
  if (even_sum < 0.0) scale = -scale;

  for (int k = 0; k <= max_order; ++k) {
    double v = work[k] * scale;
    if (x < 0.0 && (k % 2 == 1)) v = -v;
    out[k] = v;
  }
  return out;
}

double bessel_j(int order, double x) {
  if (order < 0) {
    const double v = bessel_j(-order, x);
    return (order % 2 == 0) ? v : -v;
  }
  return bessel_j_sequence(order, x).back();
}

int bessel_band_limit(double x, double threshold) {
  const double ax = std::fabs(x);
  if (ax == 0.0) return 0;
  const int guess = static_cast<int>(std::ceil(ax) + 4.0 * std::ceil(std::cbrt(ax)) + 32.0);
  const auto seq = bessel_j_sequence(guess, ax);
  int k = guess;
  while (k > 0 && std::fabs(seq[k]) < threshold) --k;
  return std::min(guess, k + 1);
}

}  // namespace rotor
