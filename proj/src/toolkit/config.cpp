#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "rotorkit/errors.hpp"
#include "rotorkit/toolkit.hpp"

namespace rotor::toolkit {

namespace {

using nlohmann::json;

json pulse_to_json(const PulseConfig& p) {
  return json{{"shape", p.shape},   {"amplitude", p.amplitude}, {"width", p.width}, {"center", p.center},
              {"strength", p.strength}, {"at", p.at},           {"level", p.level}, {"start", p.start},
              {"stop", p.stop},     {"times", p.times},         {"values", p.values}};
}

json to_json(const ExperimentConfig& c) {
  return json{{"scenario", c.scenario},
              {"engine", to_string(c.engine)},
              {"strength", c.strength},
              {"kicks", c.kicks},
              {"sigma_omega", c.sigma_omega},
              {"temperatures", c.temperatures},
              {"particles", c.particles},
              {"basis", c.basis},
              {"seed", c.seed},
              {"taus", c.taus},
              {"grid_points", c.grid_points},
              {"dt", c.dt},
              {"t0", c.t0},
              {"t_end", c.t_end},
              {"restoring_scale", c.restoring_scale},
              {"restarts", c.restarts},
              {"max_iterations", c.max_iterations},
              {"revival_shift", c.revival_shift},
              {"pulse", pulse_to_json(c.pulse)},
              {"output_dir", c.output_dir}};
}

// Reads `key` into `out` if present; type errors name the field.
template <class T>
void read(const json& j, const char* key, T& out, const std::string& prefix = "") {
  const auto it = j.find(key);
  if (it == j.end()) return;
  const std::string field = prefix + key;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) throw ConfigError(field, "expected a number");
    } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!it->is_number_integer()) throw ConfigError(field, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (!it->is_number_unsigned()) throw ConfigError(field, "expected a non-negative integer");
      }
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ConfigError(field, "expected true or false");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw ConfigError(field, "expected a string");
    } else {
      if (!it->is_array()) throw ConfigError(field, "expected an array of numbers");
      for (const auto& v : *it)
        if (!v.is_number()) throw ConfigError(field, "expected an array of numbers");
    }
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field, e.what());
  }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError(prefix + key, "unknown field");
}

PulseConfig pulse_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("pulse", "expected an object");
  reject_unknown(j, {"shape", "amplitude", "width", "center", "strength", "at", "level", "start", "stop", "times", "values"},
                 "pulse.");
  PulseConfig p;
  read(j, "shape", p.shape, "pulse.");
  read(j, "amplitude", p.amplitude, "pulse.");
  read(j, "width", p.width, "pulse.");
  read(j, "center", p.center, "pulse.");
  read(j, "strength", p.strength, "pulse.");
  read(j, "at", p.at, "pulse.");
  read(j, "level", p.level, "pulse.");
  read(j, "start", p.start, "pulse.");
  read(j, "stop", p.stop, "pulse.");
  read(j, "times", p.times, "pulse.");
  read(j, "values", p.values, "pulse.");
  return p;
}

bool finite(double x) { return std::isfinite(x); }

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

bool is_figure(const std::string& s) { return s.rfind("figure:", 0) == 0; }

void validate_pulse(const PulseConfig& p) {
  if (p.shape == "gaussian") {
    require(finite(p.amplitude) && p.amplitude >= 0.0, "pulse.amplitude", "must be finite and non-negative");
    require(finite(p.width) && p.width > 0.0, "pulse.width", "must be positive");
    require(finite(p.center), "pulse.center", "must be finite");
  } else if (p.shape == "delta") {
    require(finite(p.strength), "pulse.strength", "must be finite");
    require(finite(p.at), "pulse.at", "must be finite");
  } else if (p.shape == "step") {
    require(finite(p.level) && p.level >= 0.0, "pulse.level", "must be finite and non-negative");
    require(finite(p.start) && finite(p.stop) && p.stop > p.start, "pulse.stop", "must exceed pulse.start");
  } else if (p.shape == "tabulated") {
    require(p.times.size() >= 2 && p.times.size() == p.values.size(), "pulse.times",
            "needs at least two points and one value per time");
    for (std::size_t i = 0; i < p.times.size(); ++i) {
      require(finite(p.times[i]) && (i == 0 || p.times[i] > p.times[i - 1]), "pulse.times",
              "must be finite and strictly increasing");
      require(finite(p.values[i]) && p.values[i] >= 0.0, "pulse.values", "must be finite and non-negative");
    }
  } else {
    throw ConfigError("pulse.shape", "unknown shape '" + p.shape + "' (gaussian, delta, step, tabulated)");
  }
}

}  // namespace

std::string to_string(Engine e) {
  switch (e) {
    case Engine::quantum2d: return "quantum2d";
    case Engine::classical2d: return "classical2d";
    case Engine::classical3d: return "classical3d";
    case Engine::quantum3d: return "quantum3d";
  }
  return "quantum2d";
}

Engine engine_from_string(const std::string& name) {
  if (name == "quantum2d") return Engine::quantum2d;
  if (name == "classical2d") return Engine::classical2d;
  if (name == "classical3d") return Engine::classical3d;
  if (name == "quantum3d") return Engine::quantum3d;
  throw ConfigError("engine", "unknown engine '" + name + "' (quantum2d, classical2d, classical3d, quantum3d)");
}

PulseEnvelope PulseConfig::envelope() const {
  if (shape == "gaussian") return PulseEnvelope::gaussian(amplitude, width, center);
  if (shape == "delta") return PulseEnvelope::delta(strength, at);
  if (shape == "step") return PulseEnvelope::step(level, start, stop);
  if (shape == "tabulated") return PulseEnvelope::tabulated(times, values);
  throw ConfigError("pulse.shape", "unknown shape '" + shape + "'");
}

std::string serialize(const ExperimentConfig& config) { return to_json(config).dump(2); }

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  reject_unknown(j,
                 {"scenario", "engine", "strength", "kicks", "sigma_omega", "temperatures", "particles", "basis", "seed",
                  "taus", "grid_points", "dt", "t0", "t_end", "restoring_scale", "restarts", "max_iterations",
                  "revival_shift", "pulse", "output_dir"},
                 "");
  ExperimentConfig c;
  read(j, "scenario", c.scenario);
  std::string engine = to_string(c.engine);
  read(j, "engine", engine);
  c.engine = engine_from_string(engine);
  read(j, "strength", c.strength);
  read(j, "kicks", c.kicks);
  read(j, "sigma_omega", c.sigma_omega);
  read(j, "temperatures", c.temperatures);
  read(j, "particles", c.particles);
  read(j, "basis", c.basis);
  read(j, "seed", c.seed);
  read(j, "taus", c.taus);
  read(j, "grid_points", c.grid_points);
  read(j, "dt", c.dt);
  read(j, "t0", c.t0);
  read(j, "t_end", c.t_end);
  read(j, "restoring_scale", c.restoring_scale);
  read(j, "restarts", c.restarts);
  read(j, "max_iterations", c.max_iterations);
  read(j, "revival_shift", c.revival_shift);
  if (j.contains("pulse")) c.pulse = pulse_from_json(j["pulse"]);
  read(j, "output_dir", c.output_dir);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& c) {
  const std::string& s = c.scenario;
  const bool known_mode = s == "single_kick" || s == "accumulate" || s == "optimize" || s == "focal";
  if (!known_mode) {
    if (!is_figure(s)) throw ConfigError("scenario", "unknown scenario '" + s + "'");
    const auto& fig = find_scenario(s);
    if (c.engine != fig.defaults.engine)
      throw ConfigError("engine", s + " runs on the " + to_string(fig.defaults.engine) + " engine, not " +
                                      to_string(c.engine));
  }
  const bool two_d = c.engine == Engine::quantum2d || c.engine == Engine::classical2d;
  const bool quantum = c.engine == Engine::quantum2d || c.engine == Engine::quantum3d;
  if (s == "accumulate" || s == "figure:3" || s == "figure:5")
    require(two_d, "engine", "accumulative squeezing needs a planar engine (quantum2d or classical2d)");
  if (s == "optimize" || s == "figure:6" || s == "figure:table1")
    require(c.engine == Engine::classical2d, "engine", "delay optimization runs on the classical2d engine");
  if (s == "focal")
    require(!two_d, "engine", "focal predictions cross-check the 3D engines (quantum3d or classical3d)");
  if (c.revival_shift)
    require(c.engine == Engine::quantum2d && (s == "accumulate" || s == "figure:3"), "revival_shift",
            "revival shifts exist only for quantum2d accumulative runs");

  const bool pulse_driven = s == "focal" || s == "figure:8" || (c.engine == Engine::quantum3d && s != "single_kick");
  if (!pulse_driven) require(finite(c.strength) && c.strength != 0.0, "strength", "must be finite and nonzero");
  else require(finite(c.strength), "strength", "must be finite");
  require(c.kicks >= 1, "kicks", "must be >= 1");
  if (s == "optimize" || s == "figure:table1" || s == "figure:6")
    require(c.kicks <= 16, "kicks", "delay optimization supports at most 16 kicks");
  require(c.kicks <= 100000, "kicks", "must be <= 100000");
  require(finite(c.sigma_omega) && c.sigma_omega >= 0.0, "sigma_omega", "must be finite and non-negative");
  if (quantum) require(c.sigma_omega == 0.0, "sigma_omega", "quantum engines start from the ground state");
  for (double t : c.temperatures)
    require(finite(t) && t >= 0.0, "temperatures", "ratios must be finite and non-negative");
  require(c.particles >= 1 && c.particles <= 100000000, "particles", "must lie in [1, 1e8]");
  require(c.basis >= 0 && c.basis <= 200000, "basis", "must lie in [0, 200000]");
  for (std::size_t i = 0; i < c.taus.size(); ++i) {
    require(finite(c.taus[i]), "taus", "must be finite");
    require(i == 0 || c.taus[i] >= c.taus[i - 1], "taus", "must be sorted");
    if (c.engine != Engine::quantum3d) require(c.taus[i] >= 0.0, "taus", "must be non-negative");
    else require(c.taus[i] >= c.t0, "taus", "must not precede t0");
  }
  require(c.grid_points >= 8 && c.grid_points <= (1 << 20), "grid_points", "must lie in [8, 1048576]");
  require(finite(c.dt) && c.dt > 0.0, "dt", "must be positive");
  require(finite(c.t0) && finite(c.t_end) && c.t_end > c.t0, "t_end", "must exceed t0");
  require(finite(c.restoring_scale) && c.restoring_scale > 0.0, "restoring_scale", "must be positive");
  require(c.restarts >= 1 && c.restarts <= 10000, "restarts", "must lie in [1, 10000]");
  require(c.max_iterations >= 1, "max_iterations", "must be >= 1");
  validate_pulse(c.pulse);
  require(!c.output_dir.empty(), "output_dir", "must not be empty");
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : to_json(config).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rotor::toolkit
