#include "rotorkit/focal.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "rotorkit/errors.hpp"

namespace rotor {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 2>;
using Stepper = ode::runge_kutta_dopri5<State>;

constexpr double kZeroTimeTolerance = 1e-12;

// Within one segment the envelope is smooth; sampling it on [lo, hi) keeps a
// stage evaluated exactly at a breakpoint on the segment's own side.
struct Linearized {
  const PulseEnvelope* pulse;
  double scale;
  double lo;
  double hi;
  void operator()(const State& x, State& dxdt, double t) const {
    const double inside = std::clamp(t, lo, std::max(lo, std::nextafter(hi, lo)));
    dxdt[0] = x[1];
    dxdt[1] = -scale * pulse->value(inside) * x[0];
  }
};

// Controlled integration from t_a to exactly t_b.
State advance(const Linearized& sys, State x, double t_a, double t_b, double tol) {
  if (t_b <= t_a) return x;
  auto stepper = ode::make_controlled(tol, tol, Stepper());
  ode::integrate_adaptive(stepper, sys, x, t_a, t_b, std::min(1e-3, t_b - t_a));
  return x;
}

void refine_zero(const Linearized& sys, const State& left, double t_a, double t_b, double tol, FocusReport& out) {
  double lo = t_a, hi = t_b;
  State x_lo = left;
  for (int it = 0; it < 200 && hi - lo > kZeroTimeTolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const State x_mid = advance(sys, x_lo, lo, mid, tol);
    if (x_mid[0] == 0.0) {
      lo = hi = mid;
      x_lo = x_mid;
      break;
    }
    if ((x_mid[0] > 0.0) == (x_lo[0] > 0.0)) {
      lo = mid;
      x_lo = x_mid;
    } else {
      hi = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  const State x = advance(sys, x_lo, lo, t, tol);
  if (!out.focal_times.empty() && t <= out.focal_times.back()) return;
  out.focal_times.push_back(t);
  out.slopes.push_back(x[1]);
}

void integrate_segment(const Linearized& sys, State& x, double t_a, double t_b, double tol, FocusReport& out) {
  auto stepper = ode::make_controlled(tol, tol, Stepper());
  double t = t_a;
  const double scale = sys.pulse->resolution_scale();
  double h = std::min({1e-3, t_b - t_a, scale > 0.0 ? 0.1 * scale : 1e-3});
  if (!(h > 0.0)) return;
  if (out.samples.empty()) out.samples.push_back({t, x[0], x[1]});
  while (t < t_b) {
    h = std::min(h, t_b - t);
    State trial = x;
    double t_new = t;
    if (stepper.try_step(sys, trial, t_new, h) == ode::fail) {
      ++out.rejected_steps;
      continue;
    }
    if (t_b - t_new < 1e-15 * std::max(1.0, std::fabs(t_b))) t_new = t_b;
    ++out.steps;
    if (x[0] == 0.0) {
      if (out.focal_times.empty() || t > out.focal_times.back()) {
        out.focal_times.push_back(t);
        out.slopes.push_back(x[1]);
      }
    } else if ((trial[0] < 0.0) != (x[0] < 0.0) && trial[0] != 0.0) {
      refine_zero(sys, x, t, t_new, tol, out);
    }
    x = trial;
    t = t_new;
    out.samples.push_back({t, x[0], x[1]});
  }
}

}  // namespace

FocusReport solve_linearized(const PulseEnvelope& pulse, double tau0, double tau_end, double tol,
                             double restoring_scale, double theta0) {
  if (!(tau_end > tau0)) throw ContractError("solve_linearized: tau_end must exceed tau0");
  if (!(tol > 0.0)) throw ContractError("solve_linearized: tol must be positive");
  if (theta0 == 0.0) throw ContractError("solve_linearized: theta0 must be nonzero");
  if (pulse.is_delta()) {
    if (std::get<DeltaShape>(pulse.shape()).at < tau0)
      throw ContractError("solve_linearized: tau0 must precede the pulse");
  } else {
    const double lead = pulse.support().first;
    if (lead < tau0 && std::fabs(pulse.integral(lead, tau0)) > 1e-6 * std::fabs(pulse.integral()))
      throw ContractError("solve_linearized: tau0 must precede the pulse onset");
  }

  FocusReport out;
  out.pulse = pulse;
  out.restoring_scale = restoring_scale;
  const double inner_tol = std::max(tol * 1e-2, 1e-14);

  std::vector<double> cuts{tau0};
  std::vector<double> marks = pulse.breakpoints();
  if (!pulse.is_delta()) {
    // A narrow pulse inside a long segment could be stepped over entirely.
    const auto [lead, tail] = pulse.support();
    marks.push_back(lead);
    marks.push_back(tail);
  }
  for (double b : marks)
    if (b > tau0 && b < tau_end) cuts.push_back(b);
  cuts.push_back(tau_end);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  State x{theta0, 0.0};
  auto apply_delta = [&](double t) {
    if (!pulse.is_delta()) return;
    const auto& d = std::get<DeltaShape>(pulse.shape());
    if (t != d.at) return;
    x[1] -= restoring_scale * d.strength * x[0];
    out.samples.push_back({t, x[0], x[1]});
  };
  apply_delta(tau0);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Linearized sys{&pulse, restoring_scale, cuts[k], cuts[k + 1]};
    integrate_segment(sys, x, cuts[k], cuts[k + 1], inner_tol, out);
    apply_delta(cuts[k + 1]);
  }

  if (out.focal_times.empty()) throw NoFocus("solve_linearized: no zero of theta in the window");
  return out;
}

}  // namespace rotor
