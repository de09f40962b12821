#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "zsf/analysis.hpp"
#include "zsf/eigensolver.hpp"
#include "zsf/error.hpp"
#include "zsf/io.hpp"
#include "zsf/matcher.hpp"
#include "zsf/optimizer.hpp"
#include "zsf/pipeline.hpp"
#include "zsf/reconstruction.hpp"
#include "zsf/wkb.hpp"
#include "zsf/zeta.hpp"

namespace py = pybind11;
using namespace zsf;

namespace {

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

TargetSpectrum spectrum_of(const std::vector<double>& targets) {
    return {targets, 0};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Successive inverse-spectral fitting of the Riemann zeros";

    // Translators run in reverse registration order, so the base goes first.
    auto& error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<DataError>(m, "DataError", error.ptr());
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", error.ptr());

    py::class_<Grid>(m, "Grid")
        .def(py::init<double, std::size_t>(), py::arg("x_max"), py::arg("n_points"))
        .def_property_readonly("x_max", &Grid::x_max)
        .def_property_readonly("spacing", &Grid::spacing)
        .def_property_readonly("center", &Grid::center)
        .def("__len__", &Grid::size)
        .def("x", &Grid::x)
        .def_property_readonly("abscissae", [](const Grid& g) { return to_vector(g.abscissae()); })
        .def("__eq__", &Grid::operator==)
        .def("__repr__", [](const Grid& g) {
            return "Grid(x_max=" + std::to_string(g.x_max()) + ", n_points=" + std::to_string(g.size()) + ")";
        });

    py::class_<SampledPotential>(m, "Potential")
        .def(py::init([](const Grid& g, const std::vector<double>& v) { return SampledPotential(g, v); }),
             py::arg("grid"), py::arg("values"))
        .def_static("from_half", [](const Grid& g, const std::vector<double>& h) {
            return SampledPotential::from_half(g, h);
        })
        .def_static("constant", &SampledPotential::constant)
        .def_property_readonly("grid", &SampledPotential::grid)
        .def_property_readonly("values", [](const SampledPotential& v) { return to_vector(v.values()); })
        .def("at", &SampledPotential::at)
        .def("shifted", &SampledPotential::shifted)
        .def("__len__", &SampledPotential::size)
        .def("__getitem__", [](const SampledPotential& v, std::size_t i) {
            if (i >= v.size()) throw py::index_error();
            return v[i];
        })
        .def(py::self + py::self)
        .def(py::self - py::self);

    m.def("read_potential", [](const std::filesystem::path& p, const std::string& name) {
        return read_potential(p, name);
    }, py::arg("path"), py::arg("value_name") = "V");

    m.def("eigenvalues", [](const SampledPotential& v, std::size_t k) {
        return lowest_eigenvalues(build_hamiltonian(v), k);
    }, py::arg("potential"), py::arg("k"), py::call_guard<py::gil_scoped_release>(),
          "Lowest k eigenvalues of -d^2/dx^2 + V.");
    m.def("eigenpairs", [](const SampledPotential& v, std::size_t k) {
        std::vector<std::pair<double, std::vector<double>>> out;
        for (auto& p : lowest_eigenpairs(build_hamiltonian(v), k, v.grid().spacing())) {
            out.emplace_back(p.value, std::move(p.vector));
        }
        return out;
    }, py::arg("potential"), py::arg("k"), "Lowest k (eigenvalue, eigenvector) pairs, unit L2 norm.");
    m.def("count_below", [](const SampledPotential& v, double lambda) {
        return count_below(build_hamiltonian(v), lambda);
    });

    py::class_<ZeroTable>(m, "ZeroTable")
        .def(py::init<std::vector<double>>())
        .def("zero", &ZeroTable::zero, "1-based: zero(1) = 14.1347...")
        .def("__len__", &ZeroTable::size)
        .def_property_readonly("values", &ZeroTable::values);
    m.def("load_zeros", &load_zeros_file, py::arg("path") = RunConfig::default_zeros_path());
    m.def("counting_function", &counting_function);
    m.def("phase_rhs", &phase_rhs);
    m.def("lambert_w", &lambert_w);
    m.def("smooth_zero", &smooth_zero);
    m.def("smooth_zero_by_phase", &smooth_zero_by_phase);
    m.def("approximation_error", &approximation_error);

    m.def("ground_value", &ground_value);
    m.def("march", [](double e_max, double de, std::optional<std::function<double(double)>> phase,
                      std::optional<double> e_start) {
        if (phase.has_value() != e_start.has_value()) {
            throw ConfigError("phase and e_start must be given together");
        }
        const auto p = phase ? march_potential(e_max, de, *phase, *e_start) : march_potential(e_max, de);
        return p.points;
    }, py::arg("e_max"), py::arg("de"), py::arg("phase") = py::none(), py::arg("e_start") = py::none(),
          "Turning points (x0, E) of the marched half potential.");
    m.def("smooth_potential", &smooth_potential, py::arg("grid"), py::arg("e_max"), py::arg("de"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<OptimizerConfig>(m, "OptimizerConfig")
        .def(py::init<>())
        .def_readwrite("tol_abs", &OptimizerConfig::tol_abs)
        .def_readwrite("tol_rel", &OptimizerConfig::tol_rel)
        .def_readwrite("max_iter", &OptimizerConfig::max_iter)
        .def_readwrite("n_restart", &OptimizerConfig::n_restart)
        .def_readwrite("armijo_c", &OptimizerConfig::armijo_c)
        .def_readwrite("max_backtracks", &OptimizerConfig::max_backtracks)
        .def_readwrite("gradient_check_every", &OptimizerConfig::gradient_check_every);

    py::class_<OptimizerReport>(m, "OptimizerReport")
        .def_readonly("iterations", &OptimizerReport::iterations)
        .def_readonly("initial_objective", &OptimizerReport::initial_objective)
        .def_readonly("final_objective", &OptimizerReport::final_objective)
        .def_readonly("residuals", &OptimizerReport::residuals)
        .def_readonly("stalled", &OptimizerReport::stalled)
        .def_readonly("stop_reason", &OptimizerReport::stop_reason)
        .def_readonly("worst_gradient_check", &OptimizerReport::worst_gradient_check)
        .def("max_abs_residual", &OptimizerReport::max_abs_residual);

    m.def("objective", [](const SampledPotential& v, const std::vector<double>& t) {
        return objective(v, spectrum_of(t));
    }, py::arg("potential"), py::arg("targets"));
    m.def("gradient", [](const SampledPotential& v, const std::vector<double>& t) {
        return gradient(v, spectrum_of(t));
    }, py::arg("potential"), py::arg("targets"));
    m.def("refine", [](const SampledPotential& v, const std::vector<double>& t, const OptimizerConfig& c) {
        return refine(v, spectrum_of(t), c);
    }, py::arg("potential"), py::arg("targets"), py::arg("config") = OptimizerConfig{},
          py::call_guard<py::gil_scoped_release>());

    py::class_<MatchConfig>(m, "MatchConfig")
        .def(py::init<>())
        .def_readwrite("n_max", &MatchConfig::n_max)
        .def_readwrite("buffer", &MatchConfig::buffer)
        .def_readwrite("stage_tol", &MatchConfig::stage_tol)
        .def_readwrite("optimizer", &MatchConfig::optimizer);
    m.def("build_targets", [](std::size_t n, const ZeroTable& t, std::size_t buffer) {
        return build_targets(n, t, buffer).targets;
    });
    m.def("smooth_targets", [](const MatchConfig& c) { return smooth_targets(c).targets; });

    py::class_<StageRecord>(m, "StageRecord")
        .def_readonly("n", &StageRecord::n)
        .def_readonly("report", &StageRecord::report)
        .def_readonly("max_matched_residual", &StageRecord::max_matched_residual)
        .def_readonly("seconds", &StageRecord::seconds);
    py::class_<CorrectionProfile>(m, "Correction")
        .def(py::init<Grid, std::vector<double>, std::size_t>(), py::arg("grid"), py::arg("values"),
             py::arg("n"))
        .def_readonly("grid", &CorrectionProfile::grid)
        .def_readonly("values", &CorrectionProfile::values)
        .def_readonly("n", &CorrectionProfile::n);
    py::class_<MatchSequence>(m, "MatchSequence")
        .def_readonly("base", &MatchSequence::base)
        .def_readonly("potentials", &MatchSequence::potentials)
        .def_readonly("corrections", &MatchSequence::corrections)
        .def_readonly("stages", &MatchSequence::stages);
    m.def("match_sequence", [](const SampledPotential& v0, const ZeroTable& t, const MatchConfig& c) {
        return match_sequence(v0, t, c);
    }, py::arg("v0"), py::arg("table"), py::arg("config"), py::call_guard<py::gil_scoped_release>());

    py::class_<Extremum>(m, "Extremum")
        .def_readonly("x", &Extremum::x)
        .def_readonly("value", &Extremum::value);
    py::class_<OscillationSummary>(m, "OscillationSummary")
        .def_readonly("n", &OscillationSummary::n)
        .def_readonly("x_star", &OscillationSummary::x_star)
        .def_readonly("extrema", &OscillationSummary::extrema)
        .def_readonly("zero_crossings", &OscillationSummary::zero_crossings)
        .def_readonly("amplitude", &OscillationSummary::amplitude)
        .def_readonly("period_count", &OscillationSummary::period_count);
    m.def("summarize_oscillation", &summarize_oscillation);
    m.def("amplitude_law_residuals", &amplitude_law_residuals);

    py::class_<WavelengthSample>(m, "WavelengthSample")
        .def_readonly("x", &WavelengthSample::x)
        .def_readonly("wavelength", &WavelengthSample::wavelength)
        .def_readonly("left_crossing", &WavelengthSample::left_crossing)
        .def_readonly("right_crossing", &WavelengthSample::right_crossing);
    m.def("wavelength_zero_crossing", &wavelength_zero_crossing);
    m.def("wavelength_curvature", &wavelength_curvature);
    m.def("wkb_wavelength", &wkb_wavelength);
    m.def("wkb_wavelength_interval", &wkb_wavelength_interval);
    m.def("turning_point", &turning_point);

    py::enum_<Side>(m, "Side").value("left", Side::left).value("right", Side::right);
    py::class_<NormalizedTail>(m, "NormalizedTail")
        .def_readonly("offsets", &NormalizedTail::offsets)
        .def_readonly("values", &NormalizedTail::values);
    py::class_<TailTemplate>(m, "TailTemplate")
        .def_readonly("offsets", &TailTemplate::offsets)
        .def_readonly("values", &TailTemplate::values)
        .def_readonly("spread", &TailTemplate::spread);
    m.def("extract_tail", &extract_tail, py::arg("correction"), py::arg("summary"),
          py::arg("side") = Side::right);
    m.def("average_tails", &average_tails);
    m.def("tail_value", &tail_value);

    py::enum_<ShiftRule>(m, "ShiftRule").value("model", ShiftRule::model).value("fitted", ShiftRule::fitted);
    m.def("model_amplitude", &model_amplitude);
    m.def("model_shift", &model_shift);
    py::class_<Oscillation>(m, "Oscillation")
        .def_readonly("values", &Oscillation::values)
        .def_readonly("x_star", &Oscillation::x_star)
        .def_readonly("truncated_at_turning_point", &Oscillation::truncated_at_turning_point)
        .def_readonly("n", &Oscillation::n)
        .def_readonly("amplitude", &Oscillation::amplitude);
    m.def("reconstruct_oscillation", &reconstruct_oscillation, py::arg("n"), py::arg("base"),
          py::arg("zero"), py::arg("amplitude"), py::arg("shift"));
    m.def("attach_tails", &attach_tails);
    m.def("fit_shift", &fit_shift);

    py::class_<SpectrumRow>(m, "SpectrumRow")
        .def_readonly("n", &SpectrumRow::n)
        .def_readonly("target", &SpectrumRow::target)
        .def_readonly("eigenvalue", &SpectrumRow::eigenvalue)
        .def_readonly("residual", &SpectrumRow::residual);
    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("rows", &VerificationReport::rows)
        .def_readonly("max_abs_residual", &VerificationReport::max_abs_residual)
        .def_readonly("sup_norm_vs_direct", &VerificationReport::sup_norm_vs_direct)
        .def_readonly("max_abs_amplitude", &VerificationReport::max_abs_amplitude)
        .def_readonly("shifts", &VerificationReport::shifts)
        .def_readonly("x_stars", &VerificationReport::x_stars);
    py::class_<AssemblyResult>(m, "AssemblyResult")
        .def_readonly("potential", &AssemblyResult::potential)
        .def_readonly("corrections", &AssemblyResult::corrections)
        .def_readonly("report", &AssemblyResult::report);
    m.def("assemble_and_verify",
          [](const SampledPotential& v0, const TailTemplate& tail, ShiftRule rule,
             const std::vector<CorrectionProfile>& actual, const ZeroTable& table, std::size_t n,
             const std::optional<SampledPotential>& direct) {
              return assemble_and_verify(v0, {tail, rule, actual}, table, n, direct);
          },
          py::arg("v0"), py::arg("tail"), py::arg("shift_rule"), py::arg("actual"), py::arg("table"),
          py::arg("n_zeros"), py::arg("direct") = py::none(), py::call_guard<py::gil_scoped_release>());

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("x_max", &RunConfig::x_max)
        .def_readwrite("n_points", &RunConfig::n_points)
        .def_readwrite("de", &RunConfig::de)
        .def_readwrite("e_max_factor", &RunConfig::e_max_factor)
        .def_readwrite("n_max", &RunConfig::n_max)
        .def_readwrite("buffer", &RunConfig::buffer)
        .def_readwrite("stage_tol", &RunConfig::stage_tol)
        .def_readwrite("optimizer", &RunConfig::optimizer)
        .def_readwrite("zeros_path", &RunConfig::zeros_path)
        .def_readwrite("out_dir", &RunConfig::out_dir)
        .def_readwrite("shift_rule", &RunConfig::shift_rule)
        .def("validate", &RunConfig::validate)
        .def("apply_paper_scale", &RunConfig::apply_paper_scale)
        .def_property_readonly("grid", &RunConfig::grid)
        .def_property_readonly("resolved_out_dir", &RunConfig::resolved_out_dir)
        .def("to_json", [](const RunConfig& c) { return to_json(c).dump(2); })
        .def_static("from_json", [](const std::string& s) { return config_from_json(nlohmann::json::parse(s)); })
        .def("__eq__", &RunConfig::operator==);
    m.def("load_config", &load_config);
    m.def("save_config", &save_config);

    m.def("stage_names", &stage_names);
    m.def("run_stage", [](const std::string& stage, const RunConfig& c, bool force) {
        std::vector<py::dict> out;
        const auto outcomes = [&] {
            py::gil_scoped_release release;
            return run_stage(parse_stage(stage), c, force);
        }();
        for (const auto& o : outcomes) {
            py::dict d;
            d["stage"] = to_string(o.stage);
            d["skipped"] = o.skipped;
            d["files"] = o.files;
            out.push_back(std::move(d));
        }
        return out;
    }, py::arg("stage"), py::arg("config"), py::arg("force") = false);
    m.def("figure_ids", &figure_ids);
    m.def("emit_plot_data", &emit_plot_data, py::arg("figure_id"), py::arg("config"));
}
