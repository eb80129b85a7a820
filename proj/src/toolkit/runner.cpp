#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <numbers>

#include "rotorkit/classical2d.hpp"
#include "rotorkit/classical3d.hpp"
#include "rotorkit/errors.hpp"
#include "rotorkit/focal.hpp"
#include "rotorkit/pulse_opt.hpp"
#include "rotorkit/quantum2d.hpp"
#include "rotorkit/quantum3d.hpp"
#include "rotorkit/special.hpp"
#include "rotorkit/squeeze.hpp"
#include "rotorkit/toolkit.hpp"

namespace rotor::toolkit {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Collects outputs in a staging directory; files become visible only when
// the whole run succeeds.
class Stage {
 public:
  Stage(const ExperimentConfig& config, fs::path dir) : config_(config), hash_(config_hash(config)), dir_(std::move(dir)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  // Writes a CSV with the schema, hash and seed header lines.
  void csv(const std::string& name, const std::string& columns, const std::vector<std::vector<double>>& rows,
           const std::vector<std::string>& notes = {}) {
    std::ofstream out = open(name);
    out << "# schema=1\n# config_hash=" << hash_ << "\n# seed=" << config_.seed << "\n# scenario=" << config_.scenario
        << "\n";
    for (const auto& n : notes) out << "# " << n << "\n";
    out << columns << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << num(r[i]);
      out << "\n";
    }
  }

  void raw_csv(const std::string& name, const std::string& columns, const std::vector<std::string>& lines) {
    std::ofstream out = open(name);
    out << "# schema=1\n# config_hash=" << hash_ << "\n# seed=" << config_.seed << "\n# scenario=" << config_.scenario
        << "\n"
        << columns << "\n";
    for (const auto& l : lines) out << l << "\n";
  }

  void write_json(const std::string& name, const json& j) { open(name) << j.dump(2) << "\n"; }

  const fs::path& dir() const { return dir_; }
  const std::vector<std::string>& outputs() const { return outputs_; }

 private:
  std::ofstream open(const std::string& name) {
    outputs_.push_back(name);
    std::ofstream out(dir_ / name);
    if (!out) throw RotorError("cannot write " + (dir_ / name).string());
    return out;
  }

  const ExperimentConfig& config_;
  std::string hash_;
  fs::path dir_;
  std::vector<std::string> outputs_;
};

std::vector<double> default_taus(const ExperimentConfig& c, std::initializer_list<double> multiples) {
  if (!c.taus.empty()) return c.taus;
  std::vector<double> out;
  for (double m : multiples) out.push_back(m / std::fabs(c.strength));
  return out;
}

double one_minus_j1(double x) { return 1.0 - bessel_j(1, x); }

ClassicalEnsemble2D planar_ensemble(const ExperimentConfig& c, double sigma) {
  return sigma > 0.0 ? sample_uniform(c.particles, {sigma}, c.seed) : sample_stratified(c.particles, {}, c.seed);
}

double log_log_slope(const std::vector<SqueezeRow>& rows, int k_min) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& r : rows) {
    if (r.k < k_min) continue;
    const double x = std::log(r.k), y = std::log(r.factor);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return NAN;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// ---- single kick -----------------------------------------------------------

void quantum2d_single(const ExperimentConfig& c, Stage& st) {
  const double p = c.strength;
  const int n_max = c.basis > 0 ? c.basis : basis_cutoff(p);
  const auto kicked = apply_kick(ground_state(n_max), p);
  const auto taus = default_taus(c, {1.0, 2.0});
  const auto grid = theta_grid(static_cast<std::size_t>(c.grid_points));
  std::vector<std::vector<double>> rows;
  json peaks = json::array();
  for (double t : taus) {
    const auto d = angular_density(free_evolve(kicked, t), grid);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rows.push_back({t, grid[i], d[i]});
      if (d[i] > d[arg]) arg = i;
    }
    peaks.push_back({{"tau", t}, {"argmax_theta", grid[arg]}, {"max_density", d[arg]}});
  }
  st.csv("density.csv", "tau,theta,density", rows);

  std::vector<std::vector<double>> f;
  const double span = 3.0 / std::fabs(p);
  for (int j = 0; j <= 300; ++j) {
    const double t = span * j / 300.0;
    f.push_back({t, orientation_after(kicked, t), one_minus_j1(std::fabs(p) * t)});
  }
  st.csv("factor.csv", "tau,O,classical_estimate", f);
  const auto m = next_minimum(QuantumEngine(kicked), kRevivalPeriod2D);
  st.write_json("summary.json", {{"n_max", n_max},
                                 {"edge_population", edge_population(kicked)},
                                 {"truncation_safe", kicked.truncation_safe},
                                 {"peaks", peaks},
                                 {"minimum", {{"delta_tau", m.delta_tau}, {"O", m.factor}}}});
}

void classical2d_single(const ExperimentConfig& c, Stage& st) {
  const double p = c.strength;
  const auto kicked = kick(planar_ensemble(c, c.sigma_omega), p);
  const auto taus = default_taus(c, {1.0, 2.0});
  const auto bins = static_cast<std::size_t>(c.grid_points);
  std::vector<std::vector<double>> rows;
  for (double t : taus) {
    const auto h = histogram(drift(kicked, t), bins);
    for (std::size_t i = 0; i < bins; ++i) rows.push_back({t, -kPi + 2.0 * kPi * (i + 0.5) / bins, h[i]});
  }
  st.csv("density.csv", "tau,theta,density", rows);
  std::vector<std::vector<double>> f;
  const double span = 3.0 / std::fabs(p);
  for (int j = 0; j <= 300; ++j) {
    const double t = span * j / 300.0;
    const auto e = drift(kicked, t);
    f.push_back({t, localization_factor(e), localization_standard_error(e), one_minus_j1(std::fabs(p) * t)});
  }
  st.csv("factor.csv", "tau,O,standard_error,classical_estimate", f);
}

void classical3d_densities(const ExperimentConfig& c, Stage& st, const std::vector<double>& ratios) {
  const double p = c.strength;
  const auto taus = default_taus(c, {1.0, 3.3, 5.0});
  const auto bins = static_cast<std::size_t>(c.grid_points);
  std::vector<std::vector<double>> solid, polar;
  for (double r : ratios) {
    const double sigma = r * std::fabs(p);
    const auto kicked = kick3d(sample_isotropic(c.particles, {sigma}, c.seed), p);
    for (double t : taus) {
      const auto e = drift3d(kicked, t);
      const auto h = solid_angle_density(e, bins);
      for (std::size_t i = 0; i < bins; ++i)
        solid.push_back({sigma, t, h.cos_center(i), std::acos(h.cos_center(i)), h.at(i)});
      const auto ph = polar_angle_histogram(e, bins);
      for (std::size_t i = 0; i < bins; ++i) polar.push_back({sigma, t, kPi * (i + 0.5) / bins, ph[i]});
    }
  }
  st.csv("density.csv", "sigma_omega,tau,cos_theta,theta,density_per_solid_angle", solid);
  st.csv("polar.csv", "sigma_omega,tau,theta,density_per_radian", polar);
}

void quantum3d_single(const ExperimentConfig& c, Stage& st) {
  const double p = c.strength;
  const auto kicked = apply_impulsive(isotropic_ground_state(c.basis > 2 ? c.basis : 8), p);
  const auto taus = default_taus(c, {0.5, 1.0, 2.0});
  const auto grid = polar_grid(static_cast<std::size_t>(c.grid_points));
  std::vector<std::vector<double>> rows, align;
  for (double t : taus) {
    const auto s = free_evolve(kicked, t);
    const auto d = angular_density_3d(s, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({t, grid[i], d[i]});
    align.push_back({t, alignment_factor(s), pole_density(s)});
  }
  st.csv("density.csv", "tau,theta,density", rows);
  st.csv("alignment.csv", "tau,alignment,pole_density", align);
}

// ---- accumulative squeezing -----------------------------------------------

json schedule_json(const PulseSequence& seq) {
  json out = json::array();
  for (std::size_t k = 0; k < seq.size(); ++k) out.push_back({{"P", seq.strengths[k]}, {"delay", seq.delays[k]}});
  return out;
}

std::vector<std::vector<double>> trace_rows(const SqueezeTrace& t, double sigma, bool with_sigma) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : t.rows) {
    std::vector<double> row{static_cast<double>(r.k), r.tau, r.delta_tau, r.factor, r.u, r.w,
                            parabolic_prediction(r, t.strength)};
    if (with_sigma) row.insert(row.begin(), sigma);
    rows.push_back(std::move(row));
  }
  return rows;
}

void accumulate(const ExperimentConfig& c, Stage& st) {
  SqueezeTrace trace;
  if (c.engine == Engine::quantum2d) {
    const QuantumEngine engine(c.basis > 0 ? ground_state(c.basis) : ground_state());
    trace = run_accumulative(engine, c.strength, c.kicks);
    if (c.revival_shift) {
      const auto plain = simulate_sequence(engine, trace.schedule());
      const auto shifted_seq = revival_shifted_schedule(trace);
      const auto shifted = simulate_sequence(engine, shifted_seq);
      std::vector<std::vector<double>> rows;
      for (std::size_t k = 0; k < plain.size(); ++k) rows.push_back({k + 1.0, plain[k], shifted[k]});
      st.csv("revival_shift.csv", "k,O_plain,O_shifted", rows);
      st.write_json("shifted_schedule.json", schedule_json(shifted_seq));
    }
  } else {
    trace = run_accumulative(ClassicalEngine(planar_ensemble(c, c.sigma_omega)), c.strength, c.kicks);
  }
  st.csv("trace.csv", "k,tau_k,delta_tau_k,O_k,u_k,w_k,parabolic_delta_tau", trace_rows(trace, 0.0, false));
  st.write_json("schedule.json", schedule_json(trace.schedule()));
  st.write_json("summary.json", {{"final_O", trace.rows.back().factor},
                                 {"log_log_slope_k20", log_log_slope(trace.rows, std::min(20, c.kicks / 5 + 1))}});
}

void accumulate_temperatures(const ExperimentConfig& c, Stage& st) {
  std::vector<std::vector<double>> rows;
  json slopes = json::array();
  const int k_min = c.kicks >= 100 ? 20 : std::max(1, c.kicks / 5);
  for (double r : c.temperatures) {
    const double sigma = r * std::fabs(c.strength);
    const auto t = run_accumulative(ClassicalEngine(planar_ensemble(c, sigma)), c.strength, c.kicks);
    const auto part = trace_rows(t, sigma, true);
    rows.insert(rows.end(), part.begin(), part.end());
    slopes.push_back({{"sigma_over_P", r}, {"slope", log_log_slope(t.rows, k_min)}, {"final_O", t.rows.back().factor}});
  }
  st.csv("trace.csv", "sigma_omega,k,tau_k,delta_tau_k,O_k,u_k,w_k,parabolic_delta_tau", rows);
  st.write_json("slopes.json", {{"k_min", k_min}, {"k_max", c.kicks}, {"fits", slopes}});
}

// ---- optimization -----------------------------------------------------------

ObjectiveSpec objective_for(const ExperimentConfig& c) {
  ObjectiveSpec spec = default_objective(c.strength, {c.sigma_omega}, c.seed);
  spec.n_particles = c.particles;
  return spec;
}

OptimizerBudget budget_for(const ExperimentConfig& c) {
  OptimizerBudget b;
  b.restarts = c.restarts;
  b.max_iterations = c.max_iterations;
  return b;
}

json comparison_json(const Comparison& cmp, const SequenceObjective& f) {
  const auto& o = cmp.optimized;
  return {{"n_kicks", cmp.n_kicks},
          {"O_acc", cmp.o_acc},
          {"O_opt", cmp.o_opt},
          {"acc_delays", cmp.acc_delays},
          {"best_delays", o.best_delays},
          {"standard_error", f.standard_error(o.best_delays)},
          {"merged_pulses", merged_pulse_count(o.best_delays, 1e-3 / std::fabs(o.strength))},
          {"evaluations", o.evaluations},
          {"restarts", o.restarts},
          {"converged_restarts", o.converged_restarts},
          {"restart_factors", o.restart_factors},
          {"seed", o.seed},
          {"strength", o.strength},
          {"sigma_omega", o.sigma_omega}};
}

void optimize(const ExperimentConfig& c, Stage& st) {
  const auto spec = objective_for(c);
  const auto cmp = compare_accumulative(c.kicks, spec, budget_for(c));
  const SequenceObjective f(spec);
  st.write_json("result.json", comparison_json(cmp, f));
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < c.kicks; ++k) rows.push_back({k + 1.0, cmp.optimized.best_delays[k], cmp.acc_delays[k]});
  st.csv("delays.csv", "k,optimized_delay,accumulative_delay", rows);
}

void figure6(const ExperimentConfig& c, Stage& st) {
  const auto spec = objective_for(c);
  const auto cmp = compare_accumulative(c.kicks, spec, budget_for(c));
  const SequenceObjective f(spec);
  st.write_json("result.json", comparison_json(cmp, f));

  const auto start = planar_ensemble(c, c.sigma_omega);
  std::vector<std::vector<double>> traj, dens;
  const auto bins = static_cast<std::size_t>(c.grid_points);
  auto follow = [&](const std::vector<double>& delays, double label) {
    ClassicalEnsemble2D e = start;
    double tau = 0.0;
    for (double d : delays) {
      e = kick(e, c.strength);
      for (int j = 0; j < 50; ++j) traj.push_back({label, tau + d * j / 50.0, localization_after(e, d * j / 50.0)});
      e = drift(e, d);
      tau += d;
    }
    traj.push_back({label, tau, localization_factor(e)});
    const auto h = histogram(e, bins);
    for (std::size_t i = 0; i < bins; ++i) dens.push_back({label, -kPi + 2.0 * kPi * (i + 0.5) / bins, h[i]});
  };
  follow(cmp.optimized.best_delays, 1.0);
  follow(cmp.acc_delays, 0.0);
  st.csv("trajectory.csv", "optimized,tau,O", traj, {"optimized=1 for the optimized sequence, 0 for accumulative"});
  st.csv("density.csv", "optimized,theta,density", dens, {"final density at the measurement time"});
}

void table1(const ExperimentConfig& c, Stage& st) {
  const auto spec = objective_for(c);
  const SequenceObjective f(spec);
  std::vector<std::string> lines;
  json details = json::array();
  for (int n = 2; n <= c.kicks; ++n) {
    const auto cmp = compare_accumulative(n, spec, budget_for(c));
    lines.push_back(table_row(cmp));
    details.push_back(comparison_json(cmp, f));
  }
  st.raw_csv("table1.csv", "n,O_acc,O_opt", lines);
  st.write_json("table1.json", details);
}

// ---- focusing ----------------------------------------------------------------

json focal_json(const FocusReport& r) {
  return {{"focal_times", r.focal_times}, {"slopes", r.slopes},         {"restoring_scale", r.restoring_scale},
          {"steps", r.steps},             {"rejected_steps", r.rejected_steps}, {"pulse_integral", r.pulse.integral()}};
}

void focal(const ExperimentConfig& c, Stage& st) {
  const auto r = solve_linearized(c.pulse.envelope(), c.t0, c.t_end, 1e-10, c.restoring_scale);
  std::vector<std::vector<double>> rows;
  for (const auto& s : r.samples) rows.push_back({s.tau, s.theta, s.dtheta});
  st.csv("focal.csv", "tau,theta,dtheta", rows);
  st.write_json("focal.json", focal_json(r));
}

void figure2(const ExperimentConfig& c, Stage& st) {
  const double p = c.strength;
  const auto taus = default_taus(c, {0.5, 1.0, 2.0});
  const auto n = static_cast<std::size_t>(c.grid_points);
  std::vector<std::vector<double>> map, dens;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = -kPi + 2.0 * kPi * (i + 0.5) / n;
  for (double t : taus) {
    for (double t0 : grid) map.push_back({t, t0, wrap_angle(t0 - p * t * std::sin(t0))});
    const auto d = classical_density(t, p, grid);
    for (std::size_t i = 0; i < n; ++i) dens.push_back({t, grid[i], d.density[i], d.caustic[i] ? 1.0 : 0.0});
  }
  st.csv("map.csv", "tau,theta0,theta", map);
  st.csv("density.csv", "tau,theta,density,caustic", dens, {"density is nan where a caustic is flagged"});
}

void figure4(const ExperimentConfig& c, Stage& st) {
  const double p = c.strength;
  const auto taus = default_taus(c, {1.0, 2.5});
  const auto bins = static_cast<std::size_t>(c.grid_points);
  std::vector<std::vector<double>> dens, fac;
  for (double r : c.temperatures) {
    const double sigma = r * std::fabs(p);
    const auto kicked = kick(planar_ensemble(c, sigma), p);
    for (double t : taus) {
      const auto h = histogram(drift(kicked, t), bins);
      for (std::size_t i = 0; i < bins; ++i) dens.push_back({sigma, t, -kPi + 2.0 * kPi * (i + 0.5) / bins, h[i]});
    }
    const double span = 3.0 / std::fabs(p);
    const auto scan = localization_scan(kicked, span / 300.0, 300);
    fac.push_back({sigma, 0.0, localization_factor(kicked)});
    for (std::size_t j = 0; j < scan.size(); ++j) fac.push_back({sigma, span * (j + 1.0) / 300.0, scan[j]});
  }
  st.csv("density.csv", "sigma_omega,tau,theta,density", dens);
  st.csv("factor.csv", "sigma_omega,tau,O", fac);
}

void figure8(const ExperimentConfig& c, Stage& st) {
  const auto env = c.pulse.envelope();
  std::vector<double> taus = c.taus;
  if (taus.empty())
    for (int j = 0; j <= 200; ++j) taus.push_back(c.t0 + (c.t_end - c.t0) * j / 200.0);
  const auto grid = polar_grid(static_cast<std::size_t>(c.grid_points));
  const auto start = isotropic_ground_state(c.basis > 2 ? c.basis : 8, c.t0);
  const auto contour = density_contour(start, env, taus, grid, c.dt);

  std::vector<std::vector<double>> rows, align;
  for (std::size_t r = 0; r < contour.tau.size(); ++r) {
    rows.emplace_back(contour.values.begin() + static_cast<std::ptrdiff_t>(r * grid.size()),
                      contour.values.begin() + static_cast<std::ptrdiff_t>((r + 1) * grid.size()));
    align.push_back({contour.tau[r], contour.alignment[r]});
  }
  st.csv("contour.csv", "row_per_tau_columns_per_theta", rows,
         {"values are 2 pi sin(theta)|Psi|^2; grids in contour_grid.json"});
  st.write_json("contour_grid.json", {{"tau", contour.tau}, {"theta", contour.theta}});
  st.csv("alignment.csv", "tau,alignment", align);
  json focus = json::object();
  try {
    focus = focal_json(solve_linearized(env, c.t0, c.t_end, 1e-10, c.restoring_scale));
  } catch (const NoFocus&) {
    focus = {{"focal_times", json::array()}};
  }
  st.write_json("focal.json", focus);
}

void dispatch(const ExperimentConfig& c, Stage& st) {
  const std::string& s = c.scenario;
  if (s == "single_kick" || s == "figure:1" || s == "figure:1b") {
    switch (c.engine) {
      case Engine::quantum2d: return quantum2d_single(c, st);
      case Engine::classical2d: return classical2d_single(c, st);
      case Engine::classical3d: return classical3d_densities(c, st, {c.sigma_omega / std::fabs(c.strength)});
      case Engine::quantum3d: return quantum3d_single(c, st);
    }
  }
  if (s == "accumulate" || s == "figure:3") return accumulate(c, st);
  if (s == "optimize") return optimize(c, st);
  if (s == "focal") return focal(c, st);
  if (s == "figure:2") return figure2(c, st);
  if (s == "figure:4") return figure4(c, st);
  if (s == "figure:5") return accumulate_temperatures(c, st);
  if (s == "figure:6") return figure6(c, st);
  if (s == "figure:7") return classical3d_densities(c, st, c.temperatures);
  if (s == "figure:8") return figure8(c, st);
  if (s == "figure:table1") return table1(c, st);
  throw ConfigError("scenario", "no runner for '" + s + "'");
}

}  // namespace

const char* toolkit_version() { return "0.3.0"; }

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
  const char* env = std::getenv("ROTORKIT_OUTPUT_DIR");
  const fs::path configured(config.output_dir);
  if (env == nullptr || *env == '\0') return configured;
  // One directory per run under the override root.
  fs::path leaf = configured.filename();
  if (leaf.empty()) leaf = configured.parent_path().filename();
  return fs::path(env) / leaf;
}

RunManifest run(const ExperimentConfig& config) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  const fs::path final_dir = resolve_output_dir(config);
  const fs::path staging = final_dir.string() + ".partial";

  RunManifest manifest;
  manifest.version = toolkit_version();
  manifest.config_hash = config_hash(config);
  manifest.seed = config.seed;
  manifest.output_dir = final_dir;
  try {
    Stage stage(config, staging);
    dispatch(config, stage);
    stage.write_json("config.json", json::parse(serialize(config)));
    manifest.outputs = stage.outputs();
    manifest.outputs.push_back("manifest.json");
    manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    stage.write_json("manifest.json", {{"version", manifest.version},
                                       {"config_hash", manifest.config_hash},
                                       {"seed", manifest.seed},
                                       {"wall_seconds", manifest.wall_seconds},
                                       {"outputs", manifest.outputs},
                                       {"config", json::parse(serialize(config))}});
    fs::create_directories(final_dir);
    for (const auto& name : stage.outputs()) fs::rename(staging / name, final_dir / name);
    fs::remove_all(staging);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  return manifest;
}

}  // namespace rotor::toolkit
