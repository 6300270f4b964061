#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <bit>
#include <sstream>
#include <string>
#include <vector>

#include "weaklab/ap_constants.hpp"
#include "weaklab/cli.hpp"
#include "weaklab/czd.hpp"
#include "weaklab/errors.hpp"
#include "weaklab/experiments.hpp"
#include "weaklab/maximal_ops.hpp"
#include "weaklab/report_json.hpp"
#include "weaklab/weak_norms.hpp"

namespace py = pybind11;
using namespace weaklab;

namespace {

// Reports cross the boundary as JSON text; the Python side parses them.
Grid grid_for(std::size_t cells, int J) {
    if (cells == 0 || !std::has_single_bit(cells)) throw ConfigError("cell count must be a power of two");
    return build_grid(J, std::countr_zero(cells) - J);
}

GridFunction function_of(std::vector<double> values, int J) {
    const Grid g = grid_for(values.size(), J);
    return GridFunction(g, std::move(values));
}

ConstantKind kind_of(const std::string& name, double p, double alpha, double beta) {
    if (name == "A1") return ConstantKind::a1();
    if (name == "Ap") return ConstantKind::ap(p);
    if (name == "AinfExp") return ConstantKind::ainf_exp();
    if (name == "AinfFW") return ConstantKind::ainf_fw();
    if (name == "Mixed") return ConstantKind::mixed(p, alpha, beta);
    throw UsageError("unknown constant kind '" + name + "'");
}

std::vector<double> as_vector(const GridFunction& f) { return {f.values().begin(), f.values().end()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def("weight_cells", [](const std::string& spec, int J, int L) {
        const GridWeight w = realize(parse_weight_spec(spec), build_grid(J, L));
        return py::make_tuple(w.cell_values(), w.cell_masses());
    }, py::arg("spec"), py::arg("J"), py::arg("L"));

    m.def("global_constant_json", [](const std::string& spec, int J, int L, const std::string& kind, double p,
                                     double alpha, double beta) {
        const ConstantKind k = kind_of(kind, p, alpha, beta);
        validate(k);
        return report::to_json(global_constant(realize(parse_weight_spec(spec), build_grid(J, L)), k)).dump();
    }, py::arg("spec"), py::arg("J"), py::arg("L"), py::arg("kind"), py::arg("p") = 2.0, py::arg("alpha") = 1.0,
          py::arg("beta") = 0.0);

    m.def("dyadic_maximal", [](std::vector<double> f, int J, bool signed_average) {
        return as_vector(dyadic_maximal(function_of(std::move(f), J),
                                        signed_average ? AverageMode::Signed : AverageMode::Absolute));
    }, py::arg("f"), py::arg("J") = 0, py::arg("signed_average") = false);

    m.def("uncentered_maximal", [](std::vector<double> f, int J) {
        return as_vector(uncentered_maximal(function_of(std::move(f), J)));
    }, py::arg("f"), py::arg("J") = 0);

    m.def("weak_l1_norm", [](const std::vector<double>& h, const std::vector<double>& mass) {
        const WeakNorm w = weak_l1_norm(h, mass);
        return py::make_tuple(w.value, w.t_star, w.levelset_mass);
    }, py::arg("h"), py::arg("mass"));

    m.def("mixed_ratio_json", [](std::vector<double> f, int J, const std::string& u, const std::string& v,
                                 const std::string& variant) {
        const GridFunction fn = function_of(std::move(f), J);
        const OperatorVariant op = variant == "M" ? OperatorVariant::Uncentered : OperatorVariant::Dyadic;
        return report::to_json(mixed_ratio(fn, realize(parse_weight_spec(u), fn.grid()),
                                           realize(parse_weight_spec(v), fn.grid()), op))
            .dump();
    }, py::arg("f"), py::arg("J"), py::arg("u"), py::arg("v"), py::arg("variant") = "Md");

    m.def("czd_json", [](std::vector<double> f, int J, const std::string& v, double height, double r) {
        const GridFunction fn = function_of(std::move(f), J);
        const GridWeight w = realize(parse_weight_spec(v), fn.grid());
        const CZDecomposition dec = cz_decompose(fn, w, height);
        report::Json j{{"decomposition", report::to_json(dec)}, {"verify", report::to_json(verify_cz(dec, w, r))}};
        return j.dump();
    }, py::arg("f"), py::arg("J"), py::arg("v"), py::arg("height"), py::arg("r") = 2.0);

    m.def("sharpness_a1_json", [](const std::vector<double>& deltas, int grid_L) {
        return report::to_json(sharpness_a1_sweep(deltas, grid_L)).dump();
    }, py::arg("deltas"), py::arg("grid_L") = 0);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"weaklab"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
