#include "rotorkit/squeeze.hpp"

#include <cmath>

#include "rotorkit/errors.hpp"

namespace rotor {

PulseSequence SqueezeTrace::schedule() const {
  PulseSequence seq;
  seq.provenance = Provenance::accumulative;
  for (const auto& r : rows) {
    seq.strengths.push_back(strength);
    seq.delays.push_back(r.delta_tau);
  }
  return seq;
}

double classical_horizon(double strength, double factor, double cap) {
  if (!(factor > 0.0)) return cap;
  return std::min(2.0 / (std::fabs(strength) * std::sqrt(factor)), cap);
}

std::vector<RecurrenceRow> parabolic_recurrence(double u0, double w0, int n) {
  if (!(u0 > 0.0)) throw ContractError("parabolic_recurrence: u0 must be positive");
  if (!(w0 >= 0.0)) throw ContractError("parabolic_recurrence: w0 must be non-negative");
  if (n < 0) throw ContractError("parabolic_recurrence: n must be non-negative");
  std::vector<RecurrenceRow> rows;
  rows.reserve(static_cast<std::size_t>(n));
  double u = u0, w = w0;
  for (int k = 1; k <= n; ++k) {
    const double s = u + w;
    const double dt = u / s;
    const double u_next = u - u * u / s;
    w = w + u;
    u = u_next;
    rows.push_back({k, dt, u, w});
  }
  return rows;
}

double parabolic_prediction(const SqueezeRow& row, double strength) {
  return row.u / (row.u + row.w) / std::fabs(strength);
}

PulseSequence revival_shifted_schedule(const SqueezeTrace& trace) {
  if (!trace.quantum) throw ContractError("revival_shifted_schedule: classical engines have no revivals");
  PulseSequence seq = trace.schedule();
  for (auto& d : seq.delays) d += kRevivalPeriod2D;
  return seq;
}

}  // namespace rotor
