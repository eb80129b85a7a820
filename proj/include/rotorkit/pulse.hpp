#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rotor {

/// amplitude * exp(-((tau - center) / width)^2)
struct GaussianShape {
  double amplitude = 0.0;
  double width = 1.0;
  double center = 0.0;
};

/// Impulsive pulse of integrated strength `strength` at time `at`.
struct DeltaShape {
  double strength = 0.0;
  double at = 0.0;
};

/// Constant `level` on [start, stop).
struct StepShape {
  double level = 0.0;
  double start = 0.0;
  double stop = 0.0;
};

/// Piecewise-linear samples, zero outside [times.front(), times.back()].
struct TabulatedShape {
  std::vector<double> times;
  std::vector<double> values;
};

/// Effective dimensionless pulse strength eps(tau).
///
/// For the permanent-dipole rotor this is mu E(t) I / hbar^2; for the
/// polarization interaction it is E^2 (alpha_par - alpha_perp) I / (4 hbar^2).
class PulseEnvelope {
 public:
  using Shape = std::variant<GaussianShape, DeltaShape, StepShape, TabulatedShape>;

  PulseEnvelope() : shape_(StepShape{}) {}
  explicit PulseEnvelope(Shape shape);

  static PulseEnvelope gaussian(double amplitude, double width, double center = 0.0);
  static PulseEnvelope delta(double strength, double at = 0.0);
  static PulseEnvelope step(double level, double start, double stop);
  static PulseEnvelope tabulated(std::vector<double> times, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  bool is_delta() const { return std::holds_alternative<DeltaShape>(shape_); }

  /// Smooth part of eps(tau); zero for delta pulses.
  double value(double tau) const;
  /// Integral over all time (the kick strength P).
  double integral() const;
  /// Integral over [a, b].
  double integral(double a, double b) const;
  /// max eps(tau)
  double peak() const;
  /// Interval outside which eps is negligible (< 1e-25 of the peak).
  std::pair<double, double> support() const;
  /// Points where eps or its derivative is discontinuous (delta times included).
  std::vector<double> breakpoints() const;
  /// Characteristic duration the time step has to resolve.
  double resolution_scale() const;

  /// Throws ContractError if eps < 0 anywhere (polarization interaction).
  void require_non_negative() const;

 private:
  Shape shape_;
};

}  // namespace rotor

namespace rotor {

enum class Provenance { accumulative, optimized, manual };

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& name);

/// Identical-or-not delta kicks: kick k has strength strengths[k] and is
/// followed by a free flight delays[k] (the last delay ends at measurement).
struct PulseSequence {
  std::vector<double> strengths;
  std::vector<double> delays;
  Provenance provenance = Provenance::manual;

  std::size_t size() const { return strengths.size(); }
  /// Kick instants, starting at 0.
  std::vector<double> kick_times() const;

  bool operator==(const PulseSequence&) const = default;
};

}  // namespace rotor
