#include "weaklab/report_json.hpp"

#include <cmath>

namespace weaklab::report {

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

Json to_json(const Grid& g) { return Json{{"J", g.J}, {"L", g.L}, {"cells", g.cells()}}; }

Json to_json(const Cube& q) {
    return Json{{"level", q.level}, {"index", q.index}, {"left", q.left()}, {"right", q.right()}};
}

Json to_json(const ConstantReport& r) {
    Json levels = Json::array();
    for (const auto& row : r.per_level)
        levels.push_back(Json{{"level", row.level}, {"value", number(row.value)}, {"cube", to_json(row.cube)}});
    return Json{{"kind", to_string(r.kind)},
                {"value", number(r.value)},
                {"argmax", to_json(r.argmax)},
                {"per_level", levels},
                {"truncation", r.truncation_note()}};
}

Json to_json(const ReverseHolderReport& r) {
    return Json{{"a1", number(r.a1)},
                {"r", number(r.r)},
                {"epsilon", number(r.epsilon)},
                {"max_ratio", number(r.max_ratio)},
                {"worst", to_json(r.worst)},
                {"failures", r.failures},
                {"max_subset_ratio", number(r.max_subset_ratio)},
                {"subset_samples", r.subset_samples},
                {"subset_failures", r.subset_failures},
                {"passed", r.passed()}};
}

Json to_json(const DoublingReport& r) {
    return Json{{"p", r.p},
                {"constant", number(r.constant)},
                {"bound", number(r.bound)},
                {"max_ratio", number(r.max_ratio)},
                {"worst", to_json(r.worst)},
                {"clipped_cubes", r.clipped_cubes},
                {"passed", r.passed()},
                {"parent_max_ratio", number(r.parent_max_ratio)},
                {"parent_worst", to_json(r.parent_worst)},
                {"parent_passed", r.parent_passed()}};
}

Json to_json(const CZDecomposition& d) {
    Json cubes = Json::array();
    for (const auto& c : d.cubes())
        cubes.push_back(Json{{"level", c.cube.level}, {"index", c.cube.index}, {"avg", c.average.get_d()}});
    return Json{{"t", d.height()}, {"cubes", cubes}, {"truncated", d.truncated()}};
}

Json to_json(const CZVerification& v) {
    Json checks = Json::array();
    for (const auto& c : v.checks) {
        Json j{{"name", c.name}, {"passed", c.passed}, {"worst", number(c.worst)}, {"worst_at", c.worst_at}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        checks.push_back(j);
    }
    return Json{{"r", v.r},
                {"ar_constant", number(v.ar_constant)},
                {"bound", number(v.bound)},
                {"checks", checks},
                {"passed", v.passed()}};
}

Json to_json(const DominationReport& r) {
    return Json{{"violations", r.violations},
                {"max_excess", number(r.max_excess)},
                {"worst_cell", r.worst_cell},
                {"equality_everywhere", r.equality_everywhere},
                {"off_omega_exact_zero", r.off_omega_exact_zero},
                {"off_omega_float_max", number(r.off_omega_float_max)},
                {"passed", r.passed()}};
}

Json to_json(const WeakTypeReport& r) {
    return Json{{"variant", to_string(r.variant)},
                {"numerator", number(r.numerator)},
                {"t_star", number(r.t_star)},
                {"levelset_mass", number(r.levelset_mass)},
                {"denominator", number(r.denominator)},
                {"ratio", number(r.ratio)}};
}

Json to_json(const FitResult& f) {
    if (!f.valid) return nullptr;
    return Json{{"slope", number(f.slope)}, {"intercept", number(f.intercept)}, {"r2", number(f.r2)}};
}

Json to_json(const SweepRow& r) {
    Json j{{"delta", r.delta},
           {"alpha", r.alpha},
           {"numerator", number(r.numerator)},
           {"denominator", number(r.denominator)},
           {"ratio", number(r.ratio)},
           {"bound", number(r.bound)},
           {"slack", number(r.slack)},
           {"provenance", r.grid ? Json::array({"analytic", "grid"}) : Json::array({"analytic"})}};
    if (r.grid) {
        j["grid"] = to_json(*r.grid);
        j["grid"]["J"] = r.grid_J;
        j["grid"]["L"] = r.grid_L;
    }
    return j;
}

Json to_json(const A1Sweep& s) {
    Json rows = Json::array();
    for (const auto& r : s.rows) rows.push_back(to_json(r));
    return Json{{"rows", rows}, {"fit", to_json(s.fit)}};
}

Json to_json(const ProductSweep& s) {
    Json rows = Json::array();
    for (const auto& r : s.rows) rows.push_back(to_json(r));
    return Json{{"rows", rows},
                {"lower_constant", s.lower_constant},
                {"lower_bound_holds", s.lower_bound_holds},
                {"fit_alpha", to_json(s.fit_alpha)},
                {"fit_delta", to_json(s.fit_delta)}};
}

Json to_json(const ParameterAlgebra& a) {
    return Json{{"constant", number(a.constant)},
                {"p", a.p},
                {"m", number(a.m)},
                {"r", number(a.r)},
                {"r_dual", number(a.r_dual)},
                {"r_power", number(a.r_power)},
                {"r_bound_holds", a.r_bound_holds()},
                {"constant_power", number(a.constant_power)},
                {"constant_bound_holds", a.constant_bound_holds()}};
}

Json to_json(const BoundAudit& a) {
    Json rows = Json::array();
    for (const auto& r : a.rows)
        rows.push_back(Json{{"weight", r.weight},
                            {"function", r.function},
                            {"p", r.p},
                            {"fw_constant", number(r.fw_constant)},
                            {"ap_constant", number(r.ap_constant)},
                            {"bound", number(r.bound)},
                            {"measured", to_json(r.measured)},
                            {"normalized", number(r.normalized)}});
    return Json{{"rows", rows},
                {"envelope", number(a.envelope)},
                {"worst_weight", a.worst_weight},
                {"worst_function", a.worst_function}};
}

Json to_json(const MixedLemmaRow& r) {
    Json split = Json::array();
    for (const auto& [a, value] : r.split) split.push_back(Json{{"alpha", a}, {"value", number(value)}});
    return Json{{"p", r.p},
                {"ap", number(r.ap)},
                {"mixed", number(r.mixed)},
                {"jensen_failures", r.jensen_failures},
                {"chain_failures", r.chain_failures},
                {"global_chain", r.global_chain},
                {"split", split},
                {"split_monotone", r.split_monotone},
                {"passed", r.passed()}};
}

Json to_json(const DualIdentity& d) {
    return Json{{"r", d.r}, {"max_relative_error", number(d.max_relative_error)}, {"worst", to_json(d.worst)}};
}

Json to_json(const BuckleyReport& b) {
    return Json{{"p", b.p},
                {"ap", number(b.ap)},
                {"sigma_fw", number(b.sigma_fw)},
                {"bound", number(b.bound)},
                {"max_ratio", number(b.max_ratio)},
                {"worst_function", b.worst_function},
                {"normalized", number(b.normalized())}};
}

Json to_json(const PrincipalCubeRecord& r) {
    Json strata = Json::array();
    for (std::size_t i = 0; i < r.cubes.size(); ++i) {
        const auto& c = r.cubes[i];
        Json j{{"k", c.stratum}, {"level", c.cube.level}, {"index", c.cube.index}, {"gamma", c.in_gamma}};
        if (!r.generation_of.empty() && r.generation_of[i] >= 0) j["generation"] = r.generation_of[i];
        strata.push_back(j);
    }
    Json gens = Json::array();
    for (const auto& g : r.generations) gens.push_back(g);
    return Json{{"a", r.options.a},
                {"epsilon", number(r.epsilon)},
                {"delta", number(r.delta)},
                {"nu", number(r.nu)},
                {"v_a1", number(r.v_a1)},
                {"u_a1", number(r.u_a1)},
                {"floor", r.floor},
                {"top", r.top},
                {"reading", r.options.reading == ChainReading::GammaN ? "gamma_n" : "all_strata"},
                {"cubes", strata},
                {"generations", gens},
                {"generation_overlaps", r.generation_overlaps}};
}

Json to_json(const ChainReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back(Json{{"name", c.name},
                              {"passed", c.passed},
                              {"lhs", number(c.lhs)},
                              {"rhs", number(c.rhs)},
                              {"worst_ratio", number(c.worst_ratio)},
                              {"evaluated", c.evaluated},
                              {"failures", c.failures}});
    return Json{{"c_eps", number(r.c_eps)},
                {"c9", number(r.c9)},
                {"max_m", r.max_m},
                {"assembled", number(r.assembled)},
                {"power_product", number(r.power_product)},
                {"checks", checks},
                {"passed", r.passed()}};
}

}  // namespace weaklab::report
