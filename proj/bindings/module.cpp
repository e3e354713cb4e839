#include "bdris/baselines.hpp"
#include "bdris/channel.hpp"
#include "bdris/config.hpp"
#include "bdris/errors.hpp"
#include "bdris/linalg.hpp"
#include "bdris/model.hpp"
#include "bdris/optimizer.hpp"
#include "bdris/rng.hpp"
#include "bdris/selfcheck.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

namespace py = pybind11;
using namespace bdris;

namespace {

PhaseMode resolve_mode(const SystemConfig& cfg, const std::optional<std::string>& mode) {
    if (!mode)
        return cfg.resolution >= 2 ? PhaseMode::discrete : PhaseMode::continuous;
    if (*mode == "continuous")
        return PhaseMode::continuous;
    if (*mode == "discrete")
        return PhaseMode::discrete;
    throw py::value_error("mode must be 'continuous' or 'discrete'");
}

RunOptions make_options(const std::optional<ComplexMatrix>& initial_phi, bool collect_trace) {
    RunOptions opts;
    if (initial_phi)
        opts.initial_phi = *initial_phi;
    opts.collect_trace = collect_trace;
    return opts;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Reconfigurable-surface ISAC designer: C++ core";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<NumericalError>(m, "NumericalError");

    // linear algebra helpers
    m.def("kron", &kron, py::arg("a"), py::arg("b"));
    m.def("vec", &vec, py::arg("a"));
    m.def("unvec", &unvec, py::arg("v"), py::arg("rows"), py::arg("cols"));
    m.def("vech", &vech, py::arg("a"));
    m.def("duplication_matrix", &duplication_matrix, py::arg("n"));
    m.def("symmetric_from_vech", &symmetric_from_vech, py::arg("v"));
    m.def("nearest_unitary", &nearest_unitary, py::arg("x"));
    m.def("max_eigenvalue_hermitian", &max_eigenvalue_hermitian, py::arg("a"));

    // configuration
    py::class_<PenaltyConfig>(m, "PenaltyConfig")
        .def(py::init<>())
        .def_readwrite("rho0", &PenaltyConfig::rho0)
        .def_readwrite("rho1", &PenaltyConfig::rho1)
        .def_readwrite("rho2", &PenaltyConfig::rho2)
        .def_readwrite("eps_inner", &PenaltyConfig::eps_inner)
        .def_readwrite("eps_inner_latent", &PenaltyConfig::eps_inner_latent)
        .def_readwrite("eps_outer", &PenaltyConfig::eps_outer)
        .def_readwrite("max_inner_iters", &PenaltyConfig::max_inner_iters)
        .def_readwrite("max_outer_iters", &PenaltyConfig::max_outer_iters)
        .def_readwrite("ramp", &PenaltyConfig::ramp);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("n_tx", &SystemConfig::n_tx)
        .def_readwrite("n_users", &SystemConfig::n_users)
        .def_readwrite("ris_lx", &SystemConfig::ris_lx)
        .def_readwrite("ris_ly", &SystemConfig::ris_ly)
        .def_readwrite("fc_hz", &SystemConfig::fc_hz)
        .def_readwrite("resolution", &SystemConfig::resolution)
        .def_readwrite("beta", &SystemConfig::beta)
        .def_readwrite("sigma2_c_w", &SystemConfig::sigma2_c_w)
        .def_readwrite("sigma2_r_w", &SystemConfig::sigma2_r_w)
        .def_readwrite("p0", &SystemConfig::p0)
        .def_readwrite("alpha_rd", &SystemConfig::alpha_rd)
        .def_readwrite("alpha_ur", &SystemConfig::alpha_ur)
        .def_readwrite("alpha_ud", &SystemConfig::alpha_ud)
        .def_readwrite("pos_dfbs", &SystemConfig::pos_dfbs)
        .def_readwrite("pos_ris", &SystemConfig::pos_ris)
        .def_readwrite("pos_users", &SystemConfig::pos_users)
        .def_readwrite("pos_target", &SystemConfig::pos_target)
        .def_readwrite("tx_power_w", &SystemConfig::tx_power_w)
        .def_readwrite("seed", &SystemConfig::seed)
        .def_readwrite("penalty", &SystemConfig::penalty)
        .def_property_readonly("ris_elements", &SystemConfig::ris_elements)
        .def("validate", &SystemConfig::validate);

    py::class_<RunSpec>(m, "RunSpec")
        .def_readonly("config", &RunSpec::config)
        .def_readonly("architecture", &RunSpec::architecture)
        .def_readonly("trial", &RunSpec::trial);

    m.def(
        "load_config",
        [](const std::string& path, const std::vector<std::string>& overrides) {
            return load_run_spec(path, overrides);
        },
        py::arg("path"), py::arg("overrides") = std::vector<std::string>{});

    // channels
    py::class_<ChannelSet>(m, "ChannelSet")
        .def_readonly("f", &ChannelSet::f)
        .def_readonly("h", &ChannelSet::h)
        .def_readonly("g", &ChannelSet::g)
        .def_readonly("theta_h", &ChannelSet::theta_h)
        .def_readonly("theta_v", &ChannelSet::theta_v)
        .def_readonly("alpha_t", &ChannelSet::alpha_t)
        .def_readonly("precoder", &ChannelSet::precoder)
        .def_readonly("trial_index", &ChannelSet::trial_index);

    m.def("steering_vector", &steering_vector, py::arg("theta_h"), py::arg("theta_v"),
          py::arg("lx"), py::arg("ly"), py::arg("wavelength"), py::arg("spacing"));
    m.def("doa_from_positions", &doa_from_positions, py::arg("ris"), py::arg("target"));
    m.def("path_loss", &path_loss, py::arg("distance_m"), py::arg("exponent"), py::arg("p0"));
    m.def("sample_channels", &sample_channels, py::arg("config"), py::arg("trial") = 0);

    // model
    m.def("effective_channel", &effective_channel, py::arg("f"), py::arg("h"), py::arg("g"),
          py::arg("phi"));
    m.def("radar_matrix", &radar_matrix, py::arg("g"), py::arg("phi"), py::arg("a"),
          py::arg("alpha_t"));
    m.def("snr_c_trace", &snr_c_trace, py::arg("c"), py::arg("p"), py::arg("sigma2_c"));
    m.def("snr_r_trace", &snr_r_trace, py::arg("r"), py::arg("p"), py::arg("sigma2_r"));

    // solver results
    py::class_<TraceRow>(m, "TraceRow")
        .def_readonly("outer_iter", &TraceRow::outer_iter)
        .def_readonly("snr_t", &TraceRow::snr_t)
        .def_readonly("snr_c", &TraceRow::snr_c)
        .def_readonly("snr_r", &TraceRow::snr_r)
        .def_readonly("lagrangian", &TraceRow::lagrangian)
        .def_readonly("res_phi0", &TraceRow::res_phi0)
        .def_readonly("res_phi1", &TraceRow::res_phi1)
        .def_readonly("res_u", &TraceRow::res_u)
        .def_readonly("unitarity", &TraceRow::unitarity);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("phi", &RunResult::phi)
        .def_readonly("phi_relaxed", &RunResult::phi_relaxed)
        .def_readonly("alphabet_indices", &RunResult::alphabet_indices)
        .def_readonly("trace", &RunResult::trace)
        .def_readonly("converged", &RunResult::converged)
        .def_readonly("outer_iterations", &RunResult::outer_iterations)
        .def_readonly("unitarity_residual", &RunResult::unitarity_residual)
        .def_readonly("snr_c", &RunResult::snr_c)
        .def_readonly("snr_r", &RunResult::snr_r)
        .def_readonly("snr_t", &RunResult::snr_t);

    m.def(
        "design_bdris",
        [](const SystemConfig& cfg, const ChannelSet& ch, const std::optional<std::string>& mode,
           const std::optional<ComplexMatrix>& initial_phi, bool collect_trace) {
            return run_algorithm1(cfg, ch, resolve_mode(cfg, mode),
                                  make_options(initial_phi, collect_trace));
        },
        py::arg("config"), py::arg("channels"), py::arg("mode") = std::nullopt,
        py::arg("initial_phi") = std::nullopt, py::arg("collect_trace") = true);

    m.def(
        "design_dris",
        [](const SystemConfig& cfg, const ChannelSet& ch, const std::optional<std::string>& mode,
           const std::optional<ComplexMatrix>& initial_phi, bool collect_trace) {
            return dris_optimize(cfg, ch, resolve_mode(cfg, mode),
                                 make_options(initial_phi, collect_trace));
        },
        py::arg("config"), py::arg("channels"), py::arg("mode") = std::nullopt,
        py::arg("initial_phi") = std::nullopt, py::arg("collect_trace") = true);

    py::class_<SnrTriple>(m, "SnrTriple")
        .def_readonly("snr_c", &SnrTriple::snr_c)
        .def_readonly("snr_r", &SnrTriple::snr_r)
        .def_readonly("snr_t", &SnrTriple::snr_t);

    m.def("no_ris_snr", &no_ris_snr, py::arg("config"), py::arg("channels"));
    m.def("evaluate_surface", &evaluate_surface, py::arg("config"), py::arg("channels"),
          py::arg("phi"));
    m.def(
        "random_symmetric_unitary",
        [](int l, std::uint64_t seed, std::uint64_t trial) {
            auto rng = make_stream(seed, trial, StreamTag::init);
            return random_symmetric_unitary(l, rng);
        },
        py::arg("l"), py::arg("seed") = 1, py::arg("trial") = 0);

    // self checks
    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("pass_", &CheckResult::pass)
        .def_readonly("residual", &CheckResult::residual)
        .def_readonly("detail", &CheckResult::detail);
    m.def("run_selfchecks", &run_selfchecks, py::arg("inject_fault") = std::string{});
}
