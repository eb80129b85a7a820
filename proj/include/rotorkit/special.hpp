#pragma once

#include <vector>

namespace rotor {

/// Bessel functions of the first kind J_0(x) .. J_max_order(x).
///
/// Backward (Miller) recurrence started well above max(max_order, |x|).
/// The magnitude of the sequence is fixed by J_0^2 + 2 sum_k J_k^2 = 1 and
/// the sign by J_0 + 2 sum_k J_2k = 1. Negative x uses J_k(-x) = (-1)^k J_k(x).
std::vector<double> bessel_j_sequence(int max_order, double x);

/// Single-order convenience wrapper around bessel_j_sequence (order >= 0).
double bessel_j(int order, double x);

/// Largest order k whose |J_k(x)| may exceed `threshold`; a safe band edge
/// for kick propagators.
int bessel_band_limit(double x, double threshold = 1e-16);

}  // namespace rotor
