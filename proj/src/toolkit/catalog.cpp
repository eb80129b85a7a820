#include "rotorkit/errors.hpp"
#include "rotorkit/toolkit.hpp"

namespace rotor::toolkit {

namespace {

ExperimentConfig base(const std::string& scenario, Engine engine, double strength) {
  ExperimentConfig c;
  c.scenario = scenario;
  c.engine = engine;
  c.strength = strength;
  std::string dir = scenario;
  for (auto& ch : dir)
    if (ch == ':') ch = '_';
  c.output_dir = "rotorkit_out/" + dir;
  return c;
}

std::vector<ScenarioInfo> build_catalog() {
  std::vector<ScenarioInfo> out;
  auto add = [&](ExperimentConfig c, std::string description) {
    out.push_back({c.scenario, std::move(description), std::move(c)});
  };

  {
    auto c = base("single_kick", Engine::quantum2d, 85.0);
    c.grid_points = 2048;
    add(c, "One kick, densities at multiples of 1/P and the O(tau) curve against 1 - J1(P tau)");
  }
  {
    auto c = base("accumulate", Engine::quantum2d, 3.0);
    c.kicks = 100;
    add(c, "Accumulative squeezing: kick at each successive minimum of O");
  }
  {
    auto c = base("optimize", Engine::classical2d, 1.0);
    c.kicks = 4;
    c.particles = 8192;
    add(c, "Optimized delays between identical kicks for the smallest final localization factor");
  }
  {
    auto c = base("focal", Engine::quantum3d, 0.0);
    add(c, "Linearized focal times for a pulse envelope (cos^2 interaction, restoring factor 2)");
  }
  {
    auto c = base("figure:1", Engine::quantum2d, 85.0);
    c.taus = {0.5 / 85.0, 1.0 / 85.0, 1.5 / 85.0, 2.0 / 85.0, 3.0 / 85.0};
    c.grid_points = 2048;
    add(c, "Quantum planar rotor after a P = 85 kick: focusing and rainbows");
  }
  {
    auto c = base("figure:1b", Engine::quantum2d, 85.0);
    c.taus = {1.0 / 85.0};
    c.grid_points = 2048;
    add(c, "Quantum planar density at the focal time 1/P (narrowing at theta = 0)");
  }
  {
    auto c = base("figure:2", Engine::classical2d, 1.0);
    c.taus = {0.5, 1.0, 2.0};
    add(c, "Cold classical map theta(theta0) before, at and after the focus, with branch-summed densities");
  }
  {
    auto c = base("figure:3", Engine::quantum2d, 3.0);
    c.kicks = 100;
    add(c, "Quantum accumulative squeezing for P = 3 over 100 kicks");
  }
  {
    auto c = base("figure:4", Engine::classical2d, 1.0);
    c.particles = 1000000;
    c.temperatures = {0.0, 1.0 / 6.0, 1.0 / 3.0};
    c.taus = {1.0, 2.5};
    c.grid_points = 512;
    add(c, "Lattice atoms after one kick: focusing, rainbows and thermal smoothing");
  }
  {
    auto c = base("figure:5", Engine::classical2d, 1.0);
    c.kicks = 100;
    c.particles = 20000;
    c.temperatures = {0.0, 1.0 / 3.0, 2.0 / 3.0};
    add(c, "Classical accumulative squeezing at three temperatures (parallel log-log slopes)");
  }
  {
    auto c = base("figure:6", Engine::classical2d, 1.0);
    c.kicks = 4;
    c.particles = 8192;
    c.grid_points = 512;
    add(c, "Optimized four-kick sequence: O(tau) along the sequence and the final density");
  }
  {
    auto c = base("figure:7", Engine::classical3d, 10.0);
    c.particles = 1000000;
    c.temperatures = {0.0, 0.1};
    c.taus = {0.1, 0.33, 0.5};
    c.grid_points = 64;
    add(c, "Classical 3D ensemble: corona, rainbow ring and glory per solid angle");
  }
  {
    auto c = base("figure:8", Engine::quantum3d, 0.0);
    c.grid_points = 181;
    c.t0 = -0.08;
    c.t_end = 0.5;
    add(c, "Quantum linear molecule under 3e3 exp(-(tau/0.01)^2) cos^2: alignment and ring pairs");
  }
  {
    auto c = base("figure:table1", Engine::classical2d, 1.0);
    c.kicks = 5;
    c.particles = 8192;
    add(c, "Accumulative versus optimized localization factor for n = 2..kicks (zero temperature)");
  }
  return out;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog = build_catalog();
  return catalog;
}

const ScenarioInfo& find_scenario(const std::string& name) {
  for (const auto& s : scenario_catalog())
    if (s.name == name) return s;
  throw ConfigError("scenario", "unknown scenario '" + name + "'");
}

}  // namespace rotor::toolkit
