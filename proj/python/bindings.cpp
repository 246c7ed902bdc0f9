#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lindley/calibration.hpp"
#include "lindley/error.hpp"
#include "lindley/model.hpp"
#include "lindley/montecarlo.hpp"
#include "lindley/numerics.hpp"
#include "lindley/priors.hpp"

namespace py = pybind11;
using namespace lindley;

PYBIND11_MODULE(_lindley, m) {
    m.doc() = "Point-null normal testing: Bayes factors, prior regimes, Type I calibration";

    auto base = py::register_exception<Error>(m, "LindleyError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());
    py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
    py::register_exception<UnsupportedSchemeError>(m, "UnsupportedSchemeError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    m.def("std_normal_pdf", &numerics::std_normal_pdf, py::arg("z"));
    m.def("std_normal_cdf", &numerics::std_normal_cdf, py::arg("z"));
    m.def("std_normal_quantile", &numerics::std_normal_quantile, py::arg("p"));

    m.def(
        "bayes_factor",
        [](double x, double sigma) {
            return model::bayes_factor(Observation(x), AlternativeSpread(sigma));
        },
        py::arg("x"), py::arg("sigma"));
    m.def(
        "marginal_alt",
        [](double x, double sigma) {
            return model::marginal_alt(Observation(x), AlternativeSpread(sigma));
        },
        py::arg("x"), py::arg("sigma"));
    m.def(
        "posterior_h0",
        [](double x, double sigma, double rho0) {
            return model::posterior_h0(Observation(x), AlternativeSpread(sigma), rho0);
        },
        py::arg("x"), py::arg("sigma"), py::arg("rho0"));
    m.def("kl_null_vs_alt", &model::kl_null_vs_alt, py::arg("theta"));
    m.def(
        "expected_kl", [](double sigma) { return model::expected_kl(AlternativeSpread(sigma)); },
        py::arg("sigma"));

    py::class_<PriorScheme>(m, "PriorScheme")
        .def_static("parse", &PriorScheme::parse, py::arg("spelling"))
        .def_static("fixed", &PriorScheme::fixed, py::arg("rho0"))
        .def_static("robert", &PriorScheme::robert)
        .def_static("kl", &PriorScheme::kl)
        .def_static(
            "table",
            [](std::vector<std::pair<double, double>> rows) {
                return PriorScheme::table(std::move(rows));
            },
            py::arg("rows"))
        .def_property_readonly("name", &PriorScheme::name)
        .def("__repr__", [](const PriorScheme& s) { return "PriorScheme('" + s.name() + "')"; });

    m.def("rho0", &priors::rho0, py::arg("scheme"), py::arg("sigma"));
    m.def("m_of_sigma", &priors::m_of_sigma, py::arg("scheme"), py::arg("sigma"));
    m.def("log_m_of_sigma", &priors::log_m_of_sigma, py::arg("scheme"), py::arg("sigma"));
    m.def(
        "classify_regime",
        [](const PriorScheme& s) {
            const auto ev = priors::classify_regime(s);
            py::dict d;
            d["case"] = ev.regime.case_label();
            d["regime"] = ev.regime.name();
            d["limit"] = ev.regime.kind == Regime::Kind::Finite ? py::cast(ev.regime.limit)
                                                                 : py::none();
            d["log_m_at_1e3"] = ev.log_m_mid;
            d["log_m_at_1e6"] = ev.log_m_far;
            d["m_at_1e6"] = ev.m_far;
            return d;
        },
        py::arg("scheme"));

    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("sigma_star", &CalibrationResult::sigma_star)
        .def_readonly("psi", &CalibrationResult::psi_at_sigma)
        .def_readonly("achieved_alpha", &CalibrationResult::achieved_alpha)
        .def_readonly("residual", &CalibrationResult::residual)
        .def_readonly("evaluations", &CalibrationResult::evaluations)
        .def_property_readonly("bracket", [](const CalibrationResult& r) {
            return py::make_tuple(r.bracket_used.lo, r.bracket_used.hi);
        });

    m.def("psi", &calibration::psi, py::arg("sigma"), py::arg("alpha_b"), py::arg("scheme"));
    m.def("type_i_error", &calibration::type_i_error, py::arg("sigma"), py::arg("alpha_b"),
          py::arg("scheme"));
    m.def(
        "solve_sigma",
        [](double alpha, double alpha_b, const PriorScheme& s) {
            return calibration::solve_sigma(CalibrationSpec(alpha, alpha_b, s));
        },
        py::arg("alpha"), py::arg("alpha_b"), py::arg("scheme"));
    m.def("positivity_bound", &calibration::positivity_bound, py::arg("alpha_b"),
          py::arg("scheme"));
    m.def("classical_threshold", &calibration::classical_threshold, py::arg("alpha"));
    m.def(
        "decide",
        [](double x, double sigma, double alpha_b, const PriorScheme& s) {
            const auto d = calibration::decide(Observation(x), sigma, alpha_b, s);
            py::dict out;
            out["reject"] = d.reject;
            out["via_posterior"] = d.via_posterior;
            out["via_threshold"] = d.via_threshold;
            out["posterior_h0"] = d.posterior_h0;
            out["psi"] = d.psi ? py::cast(*d.psi) : py::none();
            return out;
        },
        py::arg("x"), py::arg("sigma"), py::arg("alpha_b"), py::arg("scheme"));
    m.def("power_analytic", &calibration::power_analytic, py::arg("theta"), py::arg("sigma"),
          py::arg("alpha_b"), py::arg("scheme"));

    py::class_<MonteCarloReport>(m, "MonteCarloReport")
        .def_readonly("n", &MonteCarloReport::n)
        .def_readonly("seed", &MonteCarloReport::seed)
        .def_readonly("rejections", &MonteCarloReport::rejections)
        .def_readonly("threshold_rejections", &MonteCarloReport::threshold_rejections)
        .def_readonly("estimate", &MonteCarloReport::estimate)
        .def_readonly("std_error", &MonteCarloReport::std_error)
        .def_property_readonly("ci95",
                               [](const MonteCarloReport& r) {
                                   return py::make_tuple(r.ci95_lo, r.ci95_hi);
                               })
        .def_readonly("analytic_value", &MonteCarloReport::analytic_value)
        .def_readonly("within_3se", &MonteCarloReport::within_3se);

    m.def(
        "simulate",
        [](double sigma, double alpha_b, const PriorScheme& s, std::size_t n, std::uint64_t seed,
           double theta, unsigned workers) {
            SimulationPlan plan{n, seed, theta, sigma, alpha_b, s};
            py::gil_scoped_release release;
            return theta == 0.0 ? montecarlo::simulate_type_i(plan, workers)
                                : montecarlo::simulate_power(plan, workers);
        },
        py::arg("sigma"), py::arg("alpha_b"), py::arg("scheme"), py::arg("n") = 1'000'000,
        py::arg("seed") = 0, py::arg("theta") = 0.0, py::arg("workers") = 0);
}
