// rotorkit: command-line front end for the rotor focusing and squeezing toolkit.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "rotorkit/errors.hpp"
#include "rotorkit/toolkit.hpp"

namespace {

using namespace rotor;
using namespace rotor::toolkit;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

constexpr const char* kDescription =
    "Focusing, rainbows and squeezing of kicked rotors.\n"
    "Engines: quantum2d, classical2d, classical3d, quantum3d. Times are dimensionless (tau = t hbar / I),\n"
    "angles in radians. The classical2d engine also describes atoms in a pulsed optical lattice through\n"
    "the relabelling theta = 2 k_l x; sigma_omega is then the spread of 2 k_l v and P the lattice impulse.\n"
    "Exit codes: 0 success, 2 configuration error, 3 numerical error.";

void print_manifest(const RunManifest& m) {
  std::printf("wrote %zu files to %s (config %s, seed %llu, %.2f s)\n", m.outputs.size(), m.output_dir.c_str(),
              m.config_hash.c_str(), static_cast<unsigned long long>(m.seed), m.wall_seconds);
  for (const auto& f : m.outputs) std::printf("  %s\n", f.c_str());
}

int execute(ExperimentConfig config) {
  print_manifest(run(config));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{kDescription, "rotorkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", toolkit_version());

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a JSON config file or a catalog scenario");
  std::string config_path, scenario_name, output;
  run_cmd->add_option("config", config_path, "Path to a JSON experiment config");
  run_cmd->add_option("--scenario", scenario_name, "Catalog scenario to run with its default config (see 'list')");
  run_cmd->add_option("--output", output, "Output directory (overrides the config)");
  std::uint64_t run_seed = 0;
  auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "Random seed (overrides the config)");

  // list
  auto* list_cmd = app.add_subcommand("list", "Print the scenario catalog with default configs");
  bool list_json = false;
  list_cmd->add_flag("--json", list_json, "Print each default config as JSON");

  // optimize
  auto* opt_cmd = app.add_subcommand("optimize", "Optimize delays between identical kicks (classical2d)");
  ExperimentConfig opt = find_scenario("optimize").defaults;
  opt_cmd->add_option("--kicks", opt.kicks, "Number of kicks n (1..16)")->capture_default_str();
  opt_cmd->add_option("--temperature", opt.sigma_omega, "Thermal spread sigma_omega of the initial velocities")
      ->capture_default_str();
  opt_cmd->add_option("--restarts", opt.restarts, "Multistart restarts")->capture_default_str();
  opt_cmd->add_option("--seed", opt.seed, "Seed for restarts and thermal sampling")->capture_default_str();
  opt_cmd->add_option("--strength", opt.strength, "Kick strength P")->capture_default_str();
  opt_cmd->add_option("--particles", opt.particles, "Ensemble size")->capture_default_str();
  opt_cmd->add_option("--max-iterations", opt.max_iterations, "Simplex iteration cap per restart")
      ->capture_default_str();
  opt_cmd->add_option("--output", opt.output_dir, "Output directory")->capture_default_str();

  // accumulate
  auto* acc_cmd = app.add_subcommand("accumulate", "Accumulative squeezing: kick at each minimum of O");
  ExperimentConfig acc = find_scenario("accumulate").defaults;
  std::string acc_engine = "quantum2d";
  acc_cmd->add_option("--engine", acc_engine, "quantum2d or classical2d")->capture_default_str();
  acc_cmd->add_option("--strength", acc.strength, "Kick strength P")->capture_default_str();
  acc_cmd->add_option("--kicks", acc.kicks, "Number of kicks")->capture_default_str();
  acc_cmd->add_option("--temperature", acc.sigma_omega, "Thermal spread sigma_omega (classical2d)")
      ->capture_default_str();
  acc_cmd->add_option("--particles", acc.particles, "Ensemble size (classical2d)")->capture_default_str();
  acc_cmd->add_option("--seed", acc.seed, "Seed")->capture_default_str();
  acc_cmd->add_flag("--revival-shift", acc.revival_shift, "Also simulate the schedule shifted by the revival period");
  acc_cmd->add_option("--output", acc.output_dir, "Output directory")->capture_default_str();

  // focal
  auto* focal_cmd = app.add_subcommand("focal", "Linearized focal times for a pulse envelope");
  ExperimentConfig foc = find_scenario("focal").defaults;
  focal_cmd->add_option("--shape", foc.pulse.shape, "gaussian, delta or step")->capture_default_str();
  focal_cmd->add_option("--amplitude", foc.pulse.amplitude, "Gaussian amplitude")->capture_default_str();
  focal_cmd->add_option("--width", foc.pulse.width, "Gaussian width")->capture_default_str();
  focal_cmd->add_option("--center", foc.pulse.center, "Gaussian center")->capture_default_str();
  focal_cmd->add_option("--strength", foc.pulse.strength, "Delta strength P")->capture_default_str();
  focal_cmd->add_option("--at", foc.pulse.at, "Delta time")->capture_default_str();
  focal_cmd->add_option("--level", foc.pulse.level, "Step level")->capture_default_str();
  focal_cmd->add_option("--start", foc.pulse.start, "Step start")->capture_default_str();
  focal_cmd->add_option("--stop", foc.pulse.stop, "Step stop")->capture_default_str();
  focal_cmd->add_option("--restoring", foc.restoring_scale, "Restoring factor: 1 dipole, 2 polarization (cos^2)")
      ->capture_default_str();
  focal_cmd->add_option("--t0", foc.t0, "Start time, before the pulse onset")->capture_default_str();
  focal_cmd->add_option("--t-end", foc.t_end, "End of the window")->capture_default_str();
  focal_cmd->add_option("--output", foc.output_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*list_cmd) {
      for (const auto& s : scenario_catalog()) {
        std::printf("%-14s %-12s %s\n", s.name.c_str(), to_string(s.defaults.engine).c_str(), s.description.c_str());
        if (list_json) std::printf("%s\n", serialize(s.defaults).c_str());
      }
      return 0;
    }
    if (*run_cmd) {
      if (config_path.empty() == scenario_name.empty())
        throw ConfigError("", "give either a config file or --scenario");
      ExperimentConfig c = config_path.empty() ? find_scenario(scenario_name).defaults : load_config(config_path);
      if (!output.empty()) c.output_dir = output;
      if (run_seed_opt->count() > 0) c.seed = run_seed;
      return execute(c);
    }
    if (*opt_cmd) return execute(opt);
    if (*acc_cmd) {
      acc.engine = engine_from_string(acc_engine);
      return execute(acc);
    }
    if (*focal_cmd) return execute(foc);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const RotorError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return 0;
}
