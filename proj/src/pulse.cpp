#include "rotorkit/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rotorkit/errors.hpp"

namespace rotor {

namespace {

// exp(-x^2) < 1e-25 beyond |x| = 7.6
constexpr double kGaussianReach = 7.6;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

PulseEnvelope::PulseEnvelope(Shape shape) : shape_(std::move(shape)) {
  std::visit(overloaded{
                 [](const GaussianShape& g) {
                   if (!(g.width > 0.0)) throw ContractError("gaussian pulse: width must be positive");
                 },
                 [](const DeltaShape&) {},
                 [](const StepShape& s) {
                   if (!(s.stop >= s.start)) throw ContractError("step pulse: stop must not precede start");
                 },
                 [](const TabulatedShape& t) {
                   if (t.times.size() != t.values.size() || t.times.size() < 2)
                     throw ContractError("tabulated pulse: need >= 2 matching samples");
                   if (!std::is_sorted(t.times.begin(), t.times.end()))
                     throw ContractError("tabulated pulse: times must be sorted");
                 },
             },
             shape_);
}

PulseEnvelope PulseEnvelope::gaussian(double amplitude, double width, double center) {
  return PulseEnvelope(GaussianShape{amplitude, width, center});
}

PulseEnvelope PulseEnvelope::delta(double strength, double at) { return PulseEnvelope(DeltaShape{strength, at}); }

PulseEnvelope PulseEnvelope::step(double level, double start, double stop) {
  return PulseEnvelope(StepShape{level, start, stop});
}

PulseEnvelope PulseEnvelope::tabulated(std::vector<double> times, std::vector<double> values) {
  return PulseEnvelope(TabulatedShape{std::move(times), std::move(values)});
}

double PulseEnvelope::value(double tau) const {
  return std::visit(overloaded{
                        [&](const GaussianShape& g) {
                          const double x = (tau - g.center) / g.width;
                          return g.amplitude * std::exp(-x * x);
                        },
                        [](const DeltaShape&) { return 0.0; },
                        [&](const StepShape& s) { return (tau >= s.start && tau < s.stop) ? s.level : 0.0; },
                        [&](const TabulatedShape& t) {
                          if (tau < t.times.front() || tau > t.times.back()) return 0.0;
                          auto it = std::upper_bound(t.times.begin(), t.times.end(), tau);
                          if (it == t.times.end()) return t.values.back();
                          const auto k = static_cast<std::size_t>(it - t.times.begin());
                          const double t0 = t.times[k - 1], t1 = t.times[k];
                          const double w = t1 > t0 ? (tau - t0) / (t1 - t0) : 0.0;
                          return (1.0 - w) * t.values[k - 1] + w * t.values[k];
                        },
                    },
                    shape_);
}

double PulseEnvelope::integral() const {
  return std::visit(overloaded{
                        [](const GaussianShape& g) { return g.amplitude * g.width * std::sqrt(std::numbers::pi); },
                        [](const DeltaShape& d) { return d.strength; },
                        [](const StepShape& s) { return s.level * (s.stop - s.start); },
                        [](const TabulatedShape& t) {
                          double s = 0.0;
                          for (std::size_t k = 1; k < t.times.size(); ++k)
                            s += 0.5 * (t.values[k] + t.values[k - 1]) * (t.times[k] - t.times[k - 1]);
                          return s;
                        },
                    },
                    shape_);
}

double PulseEnvelope::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  return std::visit(overloaded{
                        [&](const GaussianShape& g) {
                          const double xa = (a - g.center) / g.width, xb = (b - g.center) / g.width;
                          return g.amplitude * g.width * std::sqrt(std::numbers::pi) * 0.5 *
                                 (std::erf(xb) - std::erf(xa));
                        },
                        [&](const DeltaShape& d) { return (d.at >= a && d.at < b) ? d.strength : 0.0; },
                        [&](const StepShape& s) {
                          const double lo = std::max(a, s.start), hi = std::min(b, s.stop);
                          return hi > lo ? s.level * (hi - lo) : 0.0;
                        },
                        [&](const TabulatedShape& t) {
                          // Exact for the piecewise-linear interpolant.
                          std::vector<double> pts{a, b};
                          for (double x : t.times)
                            if (x > a && x < b) pts.push_back(x);
                          std::sort(pts.begin(), pts.end());
                          double s = 0.0;
                          for (std::size_t k = 1; k < pts.size(); ++k)
                            s += 0.5 * (value(pts[k]) + value(pts[k - 1])) * (pts[k] - pts[k - 1]);
                          return s;
                        },
                    },
                    shape_);
}

double PulseEnvelope::peak() const {
  return std::visit(overloaded{
                        [](const GaussianShape& g) { return std::fabs(g.amplitude); },
                        [](const DeltaShape&) { return 0.0; },
                        [](const StepShape& s) { return std::fabs(s.level); },
                        [](const TabulatedShape& t) {
                          double m = 0.0;
                          for (double v : t.values) m = std::max(m, std::fabs(v));
                          return m;
                        },
                    },
                    shape_);
}

std::pair<double, double> PulseEnvelope::support() const {
  return std::visit(overloaded{
                        [](const GaussianShape& g) {
                          return std::pair{g.center - kGaussianReach * g.width, g.center + kGaussianReach * g.width};
                        },
                        [](const DeltaShape& d) { return std::pair{d.at, d.at}; },
                        [](const StepShape& s) { return std::pair{s.start, s.stop}; },
                        [](const TabulatedShape& t) { return std::pair{t.times.front(), t.times.back()}; },
                    },
                    shape_);
}

std::vector<double> PulseEnvelope::breakpoints() const {
  return std::visit(overloaded{
                        [](const GaussianShape&) { return std::vector<double>{}; },
                        [](const DeltaShape& d) { return std::vector<double>{d.at}; },
                        [](const StepShape& s) { return std::vector<double>{s.start, s.stop}; },
                        [](const TabulatedShape& t) { return t.times; },
                    },
                    shape_);
}

double PulseEnvelope::resolution_scale() const {
  return std::visit(overloaded{
                        [](const GaussianShape& g) { return g.width; },
                        [](const DeltaShape&) { return 0.0; },
                        [](const StepShape& s) { return s.stop - s.start; },
                        [](const TabulatedShape& t) {
                          double m = t.times.back() - t.times.front();
                          for (std::size_t k = 1; k < t.times.size(); ++k)
                            if (t.times[k] > t.times[k - 1]) m = std::min(m, t.times[k] - t.times[k - 1]);
                          return m;
                        },
                    },
                    shape_);
}

void PulseEnvelope::require_non_negative() const {
  const bool ok = std::visit(overloaded{
                                 [](const GaussianShape& g) { return g.amplitude >= 0.0; },
                                 [](const DeltaShape& d) { return d.strength >= 0.0; },
                                 [](const StepShape& s) { return s.level >= 0.0; },
                                 [](const TabulatedShape& t) {
                                   return std::all_of(t.values.begin(), t.values.end(),
                                                      [](double v) { return v >= 0.0; });
                                 },
                             },
                             shape_);
  if (!ok) throw ContractError("polarization envelope must be non-negative");
}

}  // namespace rotor

namespace rotor {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::accumulative: return "accumulative";
    case Provenance::optimized: return "optimized";
    default: return "manual";
  }
}

Provenance provenance_from_string(const std::string& name) {
  if (name == "accumulative") return Provenance::accumulative;
  if (name == "optimized") return Provenance::optimized;
  if (name == "manual") return Provenance::manual;
  throw ContractError("unknown provenance '" + name + "'");
}

std::vector<double> PulseSequence::kick_times() const {
  std::vector<double> t(strengths.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) t[k] = t[k - 1] + delays[k - 1];
  return t;
}

}  // namespace rotor
