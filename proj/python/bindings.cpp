// Python bindings for the rotorkit engines and the experiment toolkit.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rotorkit/classical2d.hpp"
#include "rotorkit/classical3d.hpp"
#include "rotorkit/errors.hpp"
#include "rotorkit/focal.hpp"
#include "rotorkit/pulse.hpp"
#include "rotorkit/pulse_opt.hpp"
#include "rotorkit/quantum2d.hpp"
#include "rotorkit/quantum3d.hpp"
#include "rotorkit/squeeze.hpp"
#include "rotorkit/toolkit.hpp"

namespace py = pybind11;
using namespace rotor;

namespace {

py::dict trace_to_dict(const SqueezeTrace& trace) {
  py::list rows;
  for (const auto& r : trace.rows) {
    py::dict d;
    d["k"] = r.k;
    d["tau"] = r.tau;
    d["delta_tau"] = r.delta_tau;
    d["factor"] = r.factor;
    d["u"] = r.u;
    d["w"] = r.w;
    rows.append(d);
  }
  py::dict out;
  out["strength"] = trace.strength;
  out["quantum"] = trace.quantum;
  out["rows"] = rows;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Focusing, rainbows and squeezing of kicked rotors";

  auto base = py::register_exception<RotorError>(m, "RotorError", PyExc_RuntimeError);
  py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
  py::register_exception<FlatObjective>(m, "FlatObjective", base.ptr());
  py::register_exception<MonotonicityViolation>(m, "MonotonicityViolation", base.ptr());
  py::register_exception<NoFocus>(m, "NoFocus", base.ptr());
  py::register_exception<StepSizeError>(m, "StepSizeError", base.ptr());
  py::register_exception<ContractError>(m, "ContractError", base.ptr());
  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  // Pulses
  py::class_<PulseEnvelope>(m, "PulseEnvelope")
      .def_static("gaussian", &PulseEnvelope::gaussian, py::arg("amplitude"), py::arg("width"),
                  py::arg("center") = 0.0)
      .def_static("delta", &PulseEnvelope::delta, py::arg("strength"), py::arg("at") = 0.0)
      .def_static("step", &PulseEnvelope::step, py::arg("level"), py::arg("start"), py::arg("stop"))
      .def_static("tabulated", &PulseEnvelope::tabulated, py::arg("times"), py::arg("values"))
      .def("value", &PulseEnvelope::value)
      .def("integral", py::overload_cast<>(&PulseEnvelope::integral, py::const_))
      .def("integral_between", py::overload_cast<double, double>(&PulseEnvelope::integral, py::const_))
      .def("peak", &PulseEnvelope::peak)
      .def("support", &PulseEnvelope::support)
      .def_property_readonly("is_delta", &PulseEnvelope::is_delta);

  py::class_<PulseSequence>(m, "PulseSequence")
      .def(py::init<>())
      .def_readwrite("strengths", &PulseSequence::strengths)
      .def_readwrite("delays", &PulseSequence::delays)
      .def("kick_times", &PulseSequence::kick_times)
      .def("__len__", &PulseSequence::size);

  // Quantum planar rotor
  py::class_<QuantumState2D>(m, "QuantumState2D")
      .def_readonly("tau", &QuantumState2D::tau)
      .def_readonly("n_max", &QuantumState2D::n_max)
      .def_readonly("truncation_safe", &QuantumState2D::truncation_safe)
      .def_readonly("coeffs", &QuantumState2D::coeffs)
      .def("__len__", &QuantumState2D::size);
  py::class_<KickOptions>(m, "KickOptions")
      .def(py::init<>())
      .def_readwrite("edge_tolerance", &KickOptions::edge_tolerance)
      .def_readwrite("auto_grow", &KickOptions::auto_grow);
  m.def("ground_state", &ground_state, py::arg("n_max") = 32);
  m.def("apply_kick",
        py::overload_cast<const QuantumState2D&, double, const KickOptions&>(&apply_kick),
        py::arg("state"), py::arg("strength"), py::arg_v("options", KickOptions{}, "KickOptions()"));
  m.def("free_evolve", py::overload_cast<const QuantumState2D&, double>(&free_evolve), py::arg("state"),
        py::arg("dtau"));
  m.def("orientation_factor", py::overload_cast<const QuantumState2D&>(&orientation_factor));
  m.def("angular_density",
        [](const QuantumState2D& s, const std::vector<double>& grid) { return angular_density(s, grid); });
  m.def("theta_grid", &theta_grid, py::arg("count"));
  m.def("norm_squared", py::overload_cast<const QuantumState2D&>(&norm_squared));

  // Classical planar rotor
  py::class_<ThermalSpec>(m, "ThermalSpec")
      .def(py::init([](double s) { return ThermalSpec{s}; }), py::arg("sigma_omega") = 0.0)
      .def_readwrite("sigma_omega", &ThermalSpec::sigma_omega);
  py::class_<ClassicalEnsemble2D>(m, "ClassicalEnsemble2D")
      .def_readonly("theta", &ClassicalEnsemble2D::theta)
      .def_readonly("omega", &ClassicalEnsemble2D::omega)
      .def("__len__", &ClassicalEnsemble2D::size);
  m.def("sample_uniform", &sample_uniform, py::arg("n"), py::arg("thermal"), py::arg("seed"));
  m.def("sample_stratified", &sample_stratified, py::arg("n"), py::arg("thermal"), py::arg("seed"));
  m.def("kick", &kick, py::arg("ensemble"), py::arg("strength"));
  m.def("drift", &drift, py::arg("ensemble"), py::arg("dtau"));
  m.def("localization_factor", &localization_factor);
  m.def("histogram", &histogram, py::arg("ensemble"), py::arg("bins"));
  m.def("caustic_angles", &caustic_angles, py::arg("tau"), py::arg("strength"));
  m.def("branch_density", &branch_density, py::arg("tau"), py::arg("strength"), py::arg("theta"));

  // Linear molecule
  py::class_<QuantumState3D>(m, "QuantumState3D")
      .def_readonly("tau", &QuantumState3D::tau)
      .def_readonly("j_max", &QuantumState3D::j_max)
      .def_readonly("truncation_safe", &QuantumState3D::truncation_safe)
      .def("__len__", &QuantumState3D::size);
  py::class_<PropagateOptions>(m, "PropagateOptions")
      .def(py::init<>())
      .def_readwrite("verify_step", &PropagateOptions::verify_step)
      .def_readwrite("step_tolerance", &PropagateOptions::step_tolerance);
  m.def("isotropic_ground_state", &isotropic_ground_state, py::arg("j_max") = 8, py::arg("tau") = 0.0);
  m.def("propagate", &propagate, py::arg("state"), py::arg("envelope"), py::arg("t0"), py::arg("t1"),
        py::arg("dt"), py::arg_v("options", PropagateOptions{}, "PropagateOptions()"));
  m.def("free_evolve_3d", py::overload_cast<const QuantumState3D&, double>(&free_evolve), py::arg("state"),
        py::arg("dtau"));
  m.def("alignment_factor", &alignment_factor);
  m.def("pole_density", &pole_density);
  m.def("polar_grid", &polar_grid, py::arg("count"));
  m.def("angular_density_3d",
        [](const QuantumState3D& s, const std::vector<double>& grid) { return angular_density_3d(s, grid); });
  py::class_<ClassicalEnsemble3D>(m, "ClassicalEnsemble3D").def("__len__", &ClassicalEnsemble3D::size);
  m.def("sample_isotropic", &sample_isotropic, py::arg("n"), py::arg("thermal"), py::arg("seed"));
  m.def("kick3d", &kick3d, py::arg("ensemble"), py::arg("strength"));
  m.def("drift3d", &drift3d, py::arg("ensemble"), py::arg("dtau"));
  m.def("polar_angle_histogram", &polar_angle_histogram, py::arg("ensemble"), py::arg("bins"));

  // Focusing
  py::class_<FocusReport>(m, "FocusReport")
      .def_readonly("focal_times", &FocusReport::focal_times)
      .def_readonly("slopes", &FocusReport::slopes)
      .def_readonly("steps", &FocusReport::steps)
      .def_readonly("rejected_steps", &FocusReport::rejected_steps);
  m.def("solve_linearized", &solve_linearized, py::arg("pulse"), py::arg("tau0"), py::arg("tau_end"),
        py::arg("tol") = 1e-10, py::arg("restoring_scale") = kDipoleRestoring, py::arg("theta0") = 1.0);

  // Squeezing
  m.def(
      "accumulate_quantum",
      [](double strength, int kicks) { return trace_to_dict(run_accumulative(QuantumEngine{}, strength, kicks)); },
      py::arg("strength"), py::arg("kicks"));
  m.def(
      "accumulate_classical",
      [](double strength, int kicks, double sigma_omega, std::size_t particles, std::uint64_t seed) {
        const auto ens = sample_stratified(particles, ThermalSpec{sigma_omega}, seed);
        return trace_to_dict(run_accumulative(ClassicalEngine(ens), strength, kicks));
      },
      py::arg("strength"), py::arg("kicks"), py::arg("sigma_omega") = 0.0, py::arg("particles") = 100000,
      py::arg("seed") = 1);

  // Delay optimization
  py::class_<ObjectiveSpec>(m, "ObjectiveSpec")
      .def(py::init<>())
      .def_readwrite("strength", &ObjectiveSpec::strength)
      .def_readwrite("thermal", &ObjectiveSpec::thermal)
      .def_readwrite("n_particles", &ObjectiveSpec::n_particles)
      .def_readwrite("seed", &ObjectiveSpec::seed);
  py::class_<OptimizerBudget>(m, "OptimizerBudget")
      .def(py::init<>())
      .def_readwrite("restarts", &OptimizerBudget::restarts)
      .def_readwrite("max_iterations", &OptimizerBudget::max_iterations);
  py::class_<OptimizationResult>(m, "OptimizationResult")
      .def_readonly("best_delays", &OptimizationResult::best_delays)
      .def_readonly("best_factor", &OptimizationResult::best_factor)
      .def_readonly("evaluations", &OptimizationResult::evaluations)
      .def_readonly("restart_factors", &OptimizationResult::restart_factors);
  m.def("default_objective", &default_objective, py::arg("strength"), py::arg("thermal"), py::arg("seed"));
  m.def(
      "evaluate_sequence",
      [](const std::vector<double>& delays, const ObjectiveSpec& spec) { return SequenceObjective(spec)(delays); },
      py::arg("delays"), py::arg("objective"));
  m.def(
      "optimize_delays",
      [](int n_kicks, const ObjectiveSpec& objective, const OptimizerBudget& budget) {
        return optimize_delays(n_kicks, objective, budget);
      },
      py::arg("n_kicks"), py::arg("objective"), py::arg_v("budget", OptimizerBudget{}, "OptimizerBudget()"));
  m.def("accumulative_delays", &accumulative_delays, py::arg("n_kicks"), py::arg("objective"));

  // Toolkit
  namespace tk = rotor::toolkit;
  m.def("scenario_names", [] {
    std::vector<std::string> names;
    for (const auto& s : tk::scenario_catalog()) names.push_back(s.name);
    return names;
  });
  m.def("scenario_defaults", [](const std::string& name) { return tk::serialize(tk::find_scenario(name).defaults); },
        py::arg("name"), "Default config of a catalog scenario as JSON text");
  m.def("validate_config", [](const std::string& text) { tk::validate(tk::parse_config(text)); }, py::arg("config"));
  m.def("config_hash", [](const std::string& text) { return tk::config_hash(tk::parse_config(text)); },
        py::arg("config"));
  m.def(
      "run",
      [](const std::string& text) {
        const auto manifest = tk::run(tk::parse_config(text));
        py::dict d;
        d["version"] = manifest.version;
        d["config_hash"] = manifest.config_hash;
        d["seed"] = manifest.seed;
        d["wall_seconds"] = manifest.wall_seconds;
        d["output_dir"] = manifest.output_dir.string();
        d["outputs"] = manifest.outputs;
        return d;
      },
      py::arg("config"), "Run a JSON experiment config; returns the manifest");
  m.attr("__version__") = tk::toolkit_version();
}
