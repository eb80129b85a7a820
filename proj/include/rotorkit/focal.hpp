#pragma once

#include <cstddef>
#include <vector>

#include "rotorkit/pulse.hpp"

namespace rotor {

/// Restoring factor for the permanent-dipole cos(theta) interaction.
inline constexpr double kDipoleRestoring = 1.0;
/// Restoring factor for the polarization cos^2(theta) interaction: the second
/// derivative of -eps cos^2(theta) at theta = 0 is 2 eps.
inline constexpr double kPolarizationRestoring = 2.0;

struct FocalSample {
  double tau = 0.0;
  double theta = 0.0;
  double dtheta = 0.0;
};

/// Zeros of the small-angle trajectory theta'' + scale eps(tau) theta = 0.
struct FocusReport {
  std::vector<double> focal_times;
  std::vector<double> slopes;  // theta'(tau_f) at each zero
  std::vector<FocalSample> samples;
  PulseEnvelope pulse;
  double restoring_scale = 1.0;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
};

/// Integrates from (theta, theta') = (theta0, 0) at tau0 to tau_end with an
/// adaptive 5(4) Runge-Kutta method and returns every zero in the window,
/// refined to 1e-12 in time. Delta envelopes enter as theta' -= scale P theta.
/// Throws NoFocus when the trajectory never crosses zero.
FocusReport solve_linearized(const PulseEnvelope& pulse, double tau0, double tau_end, double tol = 1e-10,
                             double restoring_scale = kDipoleRestoring, double theta0 = 1.0);

}  // namespace rotor
