#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rotorkit/pulse.hpp"

namespace rotor::toolkit {

enum class Engine { quantum2d, classical2d, classical3d, quantum3d };

std::string to_string(Engine e);
/// Throws ConfigError("engine") for an unknown name.
Engine engine_from_string(const std::string& name);

/// Serializable description of a pulse envelope.
struct PulseConfig {
  std::string shape = "gaussian";  // gaussian | delta | step | tabulated
  double amplitude = 3000.0;
  double width = 0.01;
  double center = 0.0;
  double strength = 0.0;  // delta
  double at = 0.0;        // delta
  double level = 0.0;     // step
  double start = 0.0;     // step
  double stop = 0.0;      // step
  std::vector<double> times;   // tabulated
  std::vector<double> values;  // tabulated

  PulseEnvelope envelope() const;
  bool operator==(const PulseConfig&) const = default;
};

/// One run of the toolkit. Times are dimensionless (tau = t hbar / I), angles
/// in radians, velocities in the units of the kick strength P.
struct ExperimentConfig {
  std::string scenario = "single_kick";  // single_kick | accumulate | optimize | focal | figure:<id>
  Engine engine = Engine::quantum2d;
  double strength = 85.0;
  int kicks = 1;
  double sigma_omega = 0.0;
  /// Additional sigma_omega / P ratios for multi-temperature figures.
  std::vector<double> temperatures;
  std::size_t particles = 200000;
  /// n_max (2D) or J_max (3D); 0 selects the automatic cutoff.
  int basis = 0;
  std::uint64_t seed = 1;
  /// Sample times for densities; empty selects multiples of 1/P.
  std::vector<double> taus;
  int grid_points = 1024;
  double dt = 2e-5;
  double t0 = -0.08;
  double t_end = 0.5;
  double restoring_scale = 2.0;
  int restarts = 24;
  int max_iterations = 4000;
  bool revival_shift = false;
  PulseConfig pulse;
  std::string output_dir = "rotorkit_out";

  bool operator==(const ExperimentConfig&) const = default;
};

/// Canonical JSON text (sorted keys, shortest round-trip doubles).
std::string serialize(const ExperimentConfig& config);
/// Parses JSON text. Missing keys keep their defaults; unknown keys and type
/// mismatches raise ConfigError naming the field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Field-level checks, including engine/scenario compatibility.
void validate(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

struct ScenarioInfo {
  std::string name;
  std::string description;
  ExperimentConfig defaults;
};

/// Built-in reproductions in a fixed order.
const std::vector<ScenarioInfo>& scenario_catalog();
/// Throws ConfigError("scenario") when the name is not in the catalog.
const ScenarioInfo& find_scenario(const std::string& name);

struct RunManifest {
  std::string version;
  std::string config_hash;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::filesystem::path output_dir;
  std::vector<std::string> outputs;
};

const char* toolkit_version();

/// Output directory after applying the ROTORKIT_OUTPUT_DIR override.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config);

/// Validates, runs the scenario into a staging directory, and moves the
/// outputs plus config.json and manifest.json into place only on success.
RunManifest run(const ExperimentConfig& config);

}  // namespace rotor::toolkit
