#include "cdois/analytic.hpp"
#include "cdois/config.hpp"
#include "cdois/errors.hpp"
#include "cdois/importance.hpp"
#include "cdois/mc.hpp"
#include "cdois/version.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cdois;

namespace {

py::dict simulate(const ModelParams& real, const std::optional<ModelParams>& altered,
                  const Contract& contract, const std::vector<Tranche>& tranches, std::int64_t n_paths,
                  std::uint64_t seed, int threads) {
    mc::SimConfig cfg;
    cfg.real = real;
    cfg.altered = altered.value_or(real);
    cfg.contract = contract;
    cfg.tranches = tranches;
    cfg.n_paths = n_paths;
    cfg.seed = seed;
    cfg.threads = threads;
    mc::SimResult res;
    {
        py::gil_scoped_release release;
        res = mc::run_simulation(cfg);
    }
    py::list rows;
    for (const auto& ts : res.tranches) {
        py::dict d;
        d["tranche"] = ts.tranche;
        d["def_mean"] = ts.def.mean();
        d["def_variance"] = ts.def.variance();
        d["def_se"] = ts.def.se();
        d["prem_mean"] = ts.prem.mean();
        d["prem_variance"] = ts.prem.variance();
        d["prem_se"] = ts.prem.se();
        rows.append(d);
    }
    py::dict out;
    out["tranches"] = rows;
    out["mean_weight"] = res.weight.mean;
    out["n_paths"] = res.n_paths;
    out["seed"] = res.seed;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "cdois native core";
    m.attr("__version__") = kEngineVersion;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<double, double>(), py::arg("rho"), py::arg("lam"))
        .def_static("from_mean_jump", &ModelParams::from_mean_jump, py::arg("rho"), py::arg("mu"))
        .def_property_readonly("rho", &ModelParams::rho)
        .def_property_readonly("lam", &ModelParams::lambda)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(rho=" + std::to_string(p.rho()) + ", lam=" + std::to_string(p.lambda()) + ")";
        });

    py::class_<Contract>(m, "Contract")
        .def(py::init<double, double, int>(), py::arg("maturity") = 5.0, py::arg("rate") = 0.0,
             py::arg("periods_per_year") = 4)
        .def_property_readonly("maturity", &Contract::maturity)
        .def_property_readonly("rate", &Contract::rate);

    py::class_<Tranche>(m, "Tranche")
        .def(py::init<double, double>(), py::arg("a"), py::arg("d"))
        .def_property_readonly("a", &Tranche::attach)
        .def_property_readonly("d", &Tranche::detach)
        .def("label", &Tranche::label)
        .def("__repr__", [](const Tranche& t) { return "Tranche(" + t.label() + ")"; });

    py::class_<analytic::TranchePrice>(m, "TranchePrice")
        .def_readonly("tranche", &analytic::TranchePrice::tranche)
        .def_readonly("def_pv", &analytic::TranchePrice::def_pv)
        .def_readonly("prem_pv_1bp", &analytic::TranchePrice::prem_pv_1bp)
        .def_property_readonly("spread_bp", &analytic::TranchePrice::spread_bp);

    py::class_<importance::VarianceReport>(m, "VarianceReport")
        .def_readonly("mean", &importance::VarianceReport::mean)
        .def_readonly("second_moment_weighted", &importance::VarianceReport::second_moment_weighted)
        .def_readonly("variance_altered", &importance::VarianceReport::variance_altered)
        .def_readonly("finite", &importance::VarianceReport::finite);

    m.def("standard_tranches", &standard_tranches);
    m.def(
        "price", [](const Tranche& t, const Contract& c, const ModelParams& p) { return analytic::price(t, c, p); },
        py::arg("tranche"), py::arg("contract"), py::arg("params"));
    m.def(
        "def_pv", [](const Tranche& t, const Contract& c, const ModelParams& p) { return analytic::def_pv(t, c, p); },
        py::arg("tranche"), py::arg("contract"), py::arg("params"));
    m.def(
        "prem_pv_1bp",
        [](const Tranche& t, const Contract& c, const ModelParams& p) { return analytic::prem_pv_1bp(t, c, p); },
        py::arg("tranche"), py::arg("contract"), py::arg("params"));
    m.def(
        "phi", [](double h, double m, double r, const ModelParams& p) { return analytic::phi(h, m, r, p); },
        py::arg("h"), py::arg("maturity"), py::arg("rate"), py::arg("params"));
    m.def(
        "phi0", [](double h, double m, const ModelParams& p) { return analytic::phi0(h, m, p); }, py::arg("h"),
        py::arg("maturity"), py::arg("params"));
    m.def(
        "variance_report",
        [](const Tranche& t, double maturity, const ModelParams& real, const ModelParams& alt) {
            return importance::variance_report(t, maturity, {real, alt});
        },
        py::arg("tranche"), py::arg("maturity"), py::arg("real"), py::arg("altered"));
    m.def(
        "is_finite_variance",
        [](const ModelParams& real, const ModelParams& alt) {
            return importance::phase_boundary({real, alt}).finite;
        },
        py::arg("real"), py::arg("altered"));
    m.def("simulate", &simulate, py::arg("real"), py::arg("altered") = std::nullopt,
          py::arg("contract") = Contract(5.0, 0.0, 4), py::arg("tranches") = standard_tranches(),
          py::arg("n_paths") = 100000, py::arg("seed") = 20240531, py::arg("threads") = 1);
    m.def(
        "canonical_config",
        [](const std::string& text) { return config::serialize_config(config::parse_config(text)); },
        py::arg("text"), "Parse a JSON run configuration and return its canonical form.");
}
