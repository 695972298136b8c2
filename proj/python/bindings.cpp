#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "htc/cheeger.hpp"
#include "htc/cli.hpp"
#include "htc/constants.hpp"
#include "htc/errors.hpp"
#include "htc/experiments.hpp"
#include "htc/linalg.hpp"
#include "htc/measures.hpp"
#include "htc/montecarlo.hpp"
#include "htc/version.hpp"

namespace py = pybind11;

namespace {

py::object to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

// pybind11 holders cannot point to const, so Python sees a mutable-typed handle.
using MeasureHandle = std::shared_ptr<htc::Measure>;

MeasureHandle handle(htc::MeasurePtr p) { return std::const_pointer_cast<htc::Measure>(std::move(p)); }

MeasureHandle make_measure(const std::string& name, double lambda, double t, double alpha, double cheeger,
                             double lo, double hi) {
    if (name == "pareto") return handle(htc::pareto_measure({lambda}));
    if (name == "laplace") return handle(htc::laplace_measure(t));
    if (name == "extremal") return handle(htc::extremal_measure({alpha, cheeger}));
    if (name == "uniform") return handle(htc::uniform_measure(lo, hi));
    throw htc::DomainError("unknown measure '" + name + "'");
}

htc::SamplingConfig sampling(std::uint64_t samples, std::uint64_t seed, std::uint32_t batches) {
    htc::SamplingConfig s;
    s.samples = samples;
    s.seed = seed;
    s.batches = batches;
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Numerical checks of variance and concentration bounds for heavy-tailed product measures";
    m.attr("__version__") = htc::kVersion;

    py::register_exception<htc::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<htc::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<htc::Measure, MeasureHandle>(m, "Measure")
        .def_property_readonly("name", &htc::Measure::name)
        .def("density", &htc::Measure::density)
        .def("cdf", &htc::Measure::cdf)
        .def("survival", &htc::Measure::survival)
        .def("quantile", &htc::Measure::quantile)
        .def("analytic_cheeger", &htc::Measure::analytic_cheeger)
        .def("describe", [](const htc::Measure& mu) { return to_py(mu.describe()); })
        .def("sample", [](const MeasureHandle& mu, std::uint64_t seed, std::size_t count) {
            return htc::sample(*mu, seed, count);
        }, py::arg("seed"), py::arg("count"));

    m.def("measure", &make_measure, py::arg("name"), py::arg("lambda_") = 5.0, py::arg("t") = 1.0,
          py::arg("alpha") = 0.8, py::arg("cheeger") = 1.0, py::arg("lo") = 0.0, py::arg("hi") = 1.0);

    // constants
    m.def("pareto_C_lambda", [](double l) { return htc::pareto_C_lambda(l).value; });
    m.def("pareto_cheeger_bound", [](double l) { return htc::pareto_cheeger_bound(l).value; });
    m.def("C1", [](double a, double b, double I) { return htc::C1_theorem_constant(a, b, I).value; });
    m.def("C2", [](double a, double I) { return htc::C2_theorem_constant(a, I).value; });
    m.def("C3", [](double a, double I) { return htc::C3_theorem_constant(a, I).value; });
    m.def("constants_table", [](double alpha, std::optional<double> beta, std::optional<double> gamma, double cheeger,
                                std::optional<double> lambda) {
        htc::ConstantRequest r{alpha, beta, gamma, cheeger, lambda};
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& c : htc::constants_table(r)) rows.push_back(htc::to_json(c));
        return to_py(rows);
    }, py::arg("alpha") = 0.0, py::arg("beta") = py::none(), py::arg("gamma") = py::none(),
          py::arg("cheeger") = 1.0, py::arg("lambda_") = py::none());

    // cheeger
    m.def("half_line_scan", [](const MeasureHandle& mu, double alpha, int grid) {
        return to_py(htc::to_json(htc::half_line_scan(*mu, alpha, grid)));
    }, py::arg("measure"), py::arg("alpha"), py::arg("grid") = 4096);
    m.def("grid_bruteforce", [](const MeasureHandle& mu, double alpha, int cells) {
        return to_py(htc::to_json(htc::grid_bruteforce(*mu, alpha, cells)));
    }, py::arg("measure"), py::arg("alpha"), py::arg("cells") = 16);

    // montecarlo
    m.def("estimate", [](const MeasureHandle& mu, const std::string& fn, std::size_t n, std::uint64_t samples,
                         std::uint64_t seed, std::uint32_t batches, std::optional<double> grad_q) {
        htc::EstimationPlan plan;
        plan.measure = mu;
        plan.dimension = n;
        plan.function = htc::make_function(fn, n);
        plan.samples = samples;
        plan.seed = seed;
        plan.batches = batches;
        py::gil_scoped_release release;
        const auto pass = htc::run_pass(plan, grad_q, grad_q.has_value());
        py::gil_scoped_acquire acquire;
        nlohmann::json j{{"variance", htc::to_json(pass.variance)}};
        if (pass.gradient) j["gradient"] = htc::to_json(*pass.gradient);
        return to_py(j);
    }, py::arg("measure"), py::arg("fn"), py::arg("n"), py::arg("samples") = 100000, py::arg("seed") = 1,
          py::arg("batches") = 32, py::arg("grad_q") = py::none());
    m.def("scaling_fit", [](const std::vector<double>& dims, const std::vector<double>& vars) {
        return to_py(htc::to_json(htc::scaling_fit(dims, vars)));
    });

    // experiments
    m.def("verify_pareto", [](double lambda, std::vector<std::size_t> dims, std::uint64_t samples, std::uint64_t seed,
                              std::uint32_t batches, const std::string& fn) {
        htc::ParetoTheoremConfig c;
        c.lambda = lambda;
        c.dims = std::move(dims);
        c.function = fn;
        c.sampling = sampling(samples, seed, batches);
        py::gil_scoped_release release;
        auto out = htc::verify_pareto_theorem(c);
        py::gil_scoped_acquire acquire;
        return to_py(htc::to_json(out));
    }, py::arg("lambda_") = 5.0, py::arg("dims") = std::vector<std::size_t>{16, 64, 256, 1024},
          py::arg("samples") = 100000, py::arg("seed") = 1, py::arg("batches") = 32, py::arg("fn") = "max");
    m.def("verify_tails", [](const MeasureHandle& mu, double alpha, std::optional<double> cheeger,
                             std::vector<double> thresholds, std::uint64_t samples, std::uint64_t seed) {
        htc::TailBoundConfig c;
        c.measure = mu;
        c.alpha = alpha;
        c.cheeger = cheeger;
        c.thresholds = std::move(thresholds);
        c.sampling = sampling(samples, seed, 32);
        return to_py(htc::to_json(htc::verify_tail_bounds(c)));
    }, py::arg("measure"), py::arg("alpha"), py::arg("cheeger") = py::none(),
          py::arg("thresholds") = std::vector<double>{0.5, 1.0, 2.0, 4.0}, py::arg("samples") = 100000,
          py::arg("seed") = 1);
    m.def("tightness_report", [](double alpha, std::vector<double> ms) {
        htc::TightnessConfig c;
        c.alpha = alpha;
        c.ms = std::move(ms);
        return to_py(htc::to_json(htc::tightness_report(c)));
    }, py::arg("alpha") = 0.8, py::arg("ms") = std::vector<double>{2, 4, 8, 16, 32, 64, 128, 256});
    m.def("ramp_moments", [](double alpha, double mm) {
        const auto r = htc::ramp_moments(alpha, mm);
        return py::dict(py::arg("m") = r.m, py::arg("mean") = r.mean, py::arg("second") = r.second,
                        py::arg("variance") = r.variance, py::arg("grad_first") = r.grad_first,
                        py::arg("grad_second") = r.grad_second, py::arg("median") = r.median,
                        py::arg("abs_dev") = r.abs_dev);
    });

    // linalg
    m.def("eigenvalues", [](std::size_t order, std::vector<double> packed) {
        return htc::eigenvalues(htc::SymMatrix(order, std::move(packed)));
    }, py::arg("order"), py::arg("packed"));

    // cli
    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
            py::gil_scoped_release release;
            code = htc::cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    });
}
