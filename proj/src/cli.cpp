#include "weaklab/cli.hpp"

#include <CLI11.hpp>

#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "weaklab/ap_constants.hpp"
#include "weaklab/czd.hpp"
#include "weaklab/errors.hpp"
#include "weaklab/experiments.hpp"
#include "weaklab/maximal_ops.hpp"
#include "weaklab/parallel.hpp"
#include "weaklab/report_json.hpp"
#include "weaklab/sawyer_cubes.hpp"
#include "weaklab/weak_norms.hpp"

namespace weaklab::cli {

namespace {

using report::Json;
using report::number;

struct Common {
    int J = 0;
    int L = 8;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string format = "json";
};

Json envelope(const std::string& command) { return Json{{"schema", 1}, {"command", command}}; }

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

GridWeight weight_from(const std::string& text, const Grid& grid) { return realize(parse_weight_spec(text), grid); }

ConstantKind kind_from(const std::string& name, double p, double alpha, double beta) {
    if (name == "A1") return ConstantKind::a1();
    if (name == "Ap") return ConstantKind::ap(p);
    if (name == "AinfExp") return ConstantKind::ainf_exp();
    if (name == "AinfFW") return ConstantKind::ainf_fw();
    if (name == "Mixed") return ConstantKind::mixed(p, alpha, beta);
    throw UsageError("unknown constant kind '" + name + "'");
}

void add_common(CLI::App* sub, Common& c, bool grid = true) {
    if (grid) {
        sub->add_option("--J", c.J, "domain is [0, 2^J)")->check(CLI::Range(0, kMaxJ));
        sub->add_option("--L", c.L, "cell width 2^-L")->check(CLI::Range(0, kMaxL));
    }
    sub->add_option("--seed", c.seed, "seed for every random choice");
    sub->add_option("--threads", c.threads, "worker cap (0 = all cores)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void print_values_csv(std::ostream& out, std::span<const double> values) {
    for (double x : values) out << number(x).dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"weaklab: weighted weak-type laboratory on dyadic grids"};
    app.require_subcommand(1);
    Common common;
    std::function<int()> action;

    // constants
    std::string weight_spec, kind_name = "A1";
    double p = 2.0, alpha = 1.0, beta = 0.0;
    auto* constants = app.add_subcommand("constants", "global weight constant over every dyadic cube");
    constants->add_option("--weight", weight_spec, "weight spec")->required();
    constants->add_option("--kind", kind_name, "A1, Ap, AinfExp, AinfFW or Mixed")
        ->check(CLI::IsMember({"A1", "Ap", "AinfExp", "AinfFW", "Mixed"}));
    constants->add_option("--p", p, "exponent for Ap and Mixed");
    constants->add_option("--alpha", alpha, "Mixed: exponent on the A_p factor");
    constants->add_option("--beta", beta, "Mixed: exponent on the exponential A_inf factor");
    add_common(constants, common);
    constants->callback([&] {
        action = [&] {
            const Grid grid = build_grid(common.J, common.L);
            const ConstantKind kind = kind_from(kind_name, p, alpha, beta);
            validate(kind);
            const ConstantReport rep = global_constant(weight_from(weight_spec, grid), kind);
            if (common.format == "csv") {
                out << "level,value,cube_index\n";
                for (const auto& row : rep.per_level)
                    out << row.level << ',' << number(row.value).dump() << ',' << row.cube.index << '\n';
                return kExitOk;
            }
            Json j = envelope("constants");
            j["grid"] = report::to_json(grid);
            j["weight"] = weight_spec;
            j["report"] = report::to_json(rep);
            emit(out, j);
            return kExitOk;
        };
    });

    // maximal
    std::string f_path, variant = "dyadic", v_spec;
    bool signed_average = false;
    auto* maximal = app.add_subcommand("maximal", "maximal function of a function CSV");
    maximal->add_option("--f", f_path, "function CSV (2^{J+L} rows)")->required();
    maximal->add_option("--variant", variant, "dyadic, uncentered or weighted")
        ->check(CLI::IsMember({"dyadic", "uncentered", "weighted"}));
    maximal->add_option("--v", v_spec, "weight spec (weighted variant)");
    maximal->add_flag("--signed", signed_average, "dyadic: absolute value of signed averages");
    maximal->add_option("--J", common.J, "domain is [0, 2^J); L is inferred from the row count")
        ->check(CLI::Range(0, kMaxJ));
    maximal->add_option("--seed", common.seed, "unused; accepted for uniformity");
    maximal->add_option("--threads", common.threads, "worker cap");
    maximal->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    maximal->callback([&] {
        action = [&] {
            const GridFunction f = load_function_csv(f_path, common.J);
            Json j = envelope("maximal");
            j["grid"] = report::to_json(f.grid());
            j["variant"] = variant;
            std::vector<double> values;
            if (variant == "dyadic") {
                const GridFunction m = dyadic_maximal(f, signed_average ? AverageMode::Signed : AverageMode::Absolute);
                values.assign(m.values().begin(), m.values().end());
            } else if (variant == "uncentered") {
                const GridFunction m = uncentered_maximal(f);
                values.assign(m.values().begin(), m.values().end());
            } else {
                if (v_spec.empty()) throw UsageError("--variant weighted needs --v");
                const WeightedMaximal m = weighted_dyadic_maximal(f, weight_from(v_spec, f.grid()));
                values.assign(m.values.values().begin(), m.values.values().end());
                j["skipped_cubes"] = m.skipped_cubes;
            }
            if (common.format == "csv") {
                print_values_csv(out, values);
                return kExitOk;
            }
            Json vals = Json::array();
            for (double x : values) vals.push_back(number(x));
            j["values"] = vals;
            emit(out, j);
            return kExitOk;
        };
    });

    // czd
    double height = 1.0, r = 2.0;
    std::string g_out, b_out;
    auto* czd = app.add_subcommand("czd", "Calderon-Zygmund decomposition with respect to v dx");
    czd->add_option("--f", f_path, "function CSV")->required();
    czd->add_option("--v", v_spec, "weight spec")->required();
    czd->add_option("--height", height, "height t > 0")->required();
    czd->add_option("--r", r, "A_r exponent for the verification bounds");
    czd->add_option("--g-out", g_out, "write the good part as CSV");
    czd->add_option("--b-out", b_out, "write the bad part as CSV");
    czd->add_option("--J", common.J, "domain is [0, 2^J); L is inferred")->check(CLI::Range(0, kMaxJ));
    czd->add_option("--seed", common.seed, "unused; accepted for uniformity");
    czd->add_option("--threads", common.threads, "worker cap");
    czd->callback([&] {
        action = [&] {
            const GridFunction f = load_function_csv(f_path, common.J);
            const GridWeight v = weight_from(v_spec, f.grid());
            const CZDecomposition dec = cz_decompose(f, v, height);
            const CZVerification ver = verify_cz(dec, v, r);
            const DominationReport dom = pointwise_domination_check(f, v, dec);
            if (!g_out.empty()) save_function_csv(dec.good(), g_out);
            if (!b_out.empty()) save_function_csv(dec.bad(), b_out);
            Json j = envelope("czd");
            j["grid"] = report::to_json(f.grid());
            j["decomposition"] = report::to_json(dec);
            j["verify"] = report::to_json(ver);
            j["domination"] = report::to_json(dom);
            emit(out, j);
            return ver.passed() && dom.passed() ? kExitOk : kExitVerificationFailed;
        };
    });

    // weaknorm
    std::string u_spec, op_variant = "Md";
    auto* weaknorm = app.add_subcommand("weaknorm", "mixed weak-type ratio of M(fv)/v in L^{1,inf}(uv)");
    weaknorm->add_option("--f", f_path, "function CSV")->required();
    weaknorm->add_option("--u", u_spec, "weight spec")->required();
    weaknorm->add_option("--v", v_spec, "weight spec")->required();
    weaknorm->add_option("--variant", op_variant, "Md or M")->check(CLI::IsMember({"Md", "M"}));
    weaknorm->add_option("--J", common.J, "domain is [0, 2^J); L is inferred")->check(CLI::Range(0, kMaxJ));
    weaknorm->add_option("--seed", common.seed, "unused; accepted for uniformity");
    weaknorm->add_option("--threads", common.threads, "worker cap");
    weaknorm->callback([&] {
        action = [&] {
            const GridFunction f = load_function_csv(f_path, common.J);
            const WeakTypeReport rep =
                mixed_ratio(f, weight_from(u_spec, f.grid()), weight_from(v_spec, f.grid()),
                            op_variant == "Md" ? OperatorVariant::Dyadic : OperatorVariant::Uncentered);
            Json j = envelope("weaknorm");
            j["grid"] = report::to_json(f.grid());
            j["report"] = report::to_json(rep);
            emit(out, j);
            return kExitOk;
        };
    });

    // sharpness-a1
    std::vector<double> deltas, alphas;
    int grid_L = 0;
    auto* sharp_a1 = app.add_subcommand("sharpness-a1", "linear A_1 sharpness sweep over delta");
    sharp_a1->add_option("--deltas", deltas, "comma separated deltas in (0,1)")->required()->delimiter(',');
    sharp_a1->add_option("--grid-L", grid_L, "also measure rows with delta >= 1/2 on a grid with this L (0 = off)")
        ->check(CLI::Range(0, 18));
    add_common(sharp_a1, common, false);
    sharp_a1->callback([&] {
        action = [&] {
            const A1Sweep s = sharpness_a1_sweep(deltas, grid_L);
            if (common.format == "csv") {
                out << "delta,numerator,denominator,ratio,bound,slack,grid_ratio\n";
                for (const auto& row : s.rows)
                    out << row.delta << ',' << row.numerator << ',' << row.denominator << ',' << row.ratio << ','
                        << row.bound << ',' << row.slack << ',' << (row.grid ? number(row.grid->ratio).dump() : "")
                        << '\n';
                return kExitOk;
            }
            Json j = envelope("sharpness-a1");
            j["sweep"] = report::to_json(s);
            emit(out, j);
            return kExitOk;
        };
    });

    // sharpness-product
    auto* sharp_prod = app.add_subcommand("sharpness-product", "product A_1 sharpness sweep over (alpha, delta)");
    sharp_prod->add_option("--alphas", alphas, "comma separated alphas in (0,1]")->required()->delimiter(',');
    sharp_prod->add_option("--deltas", deltas, "comma separated deltas in (0,1)")->required()->delimiter(',');
    add_common(sharp_prod, common, false);
    sharp_prod->callback([&] {
        action = [&] {
            const ProductSweep s = sharpness_product_sweep(alphas, deltas);
            if (common.format == "csv") {
                out << "alpha,delta,numerator,denominator,ratio,bound,slack\n";
                for (const auto& row : s.rows)
                    out << row.alpha << ',' << row.delta << ',' << row.numerator << ',' << row.denominator << ','
                        << row.ratio << ',' << row.bound << ',' << row.slack << '\n';
                return s.lower_bound_holds ? kExitOk : kExitVerificationFailed;
            }
            Json j = envelope("sharpness-product");
            j["sweep"] = report::to_json(s);
            emit(out, j);
            return s.lower_bound_holds ? kExitOk : kExitVerificationFailed;
        };
    });

    // bound-audit
    std::string corpus_dir;
    double audit_p = 1.0;
    auto* audit = app.add_subcommand("bound-audit", "measured M_d mixed ratios against the A_inf/A_p bound shape");
    audit->add_option("--v", v_spec, "piecewise weight spec (const, step, csv or products of these)")->required();
    audit->add_option("--p", audit_p, "p >= 1")->required();
    audit->add_option("--corpus", corpus_dir, "directory of function CSVs (default: generated corpus)");
    add_common(audit, common);
    audit->callback([&] {
        action = [&] {
            const Grid grid = build_grid(common.J, common.L);
            std::vector<NamedWeight> ws{{v_spec, weight_from(v_spec, grid)}};
            const std::vector<CorpusEntry> corpus =
                corpus_dir.empty() ? make_corpus(grid, common.seed) : load_corpus(corpus_dir, common.J);
            for (const auto& e : corpus)
                if (!(e.f.grid() == grid)) throw UsageError("corpus function " + e.name + " is not on the --J/--L grid");
            const BoundAudit a = bound_audit(ws, audit_p, corpus);
            const ParameterAlgebra alg = parameter_algebra(a.rows.empty() ? 1.0 : a.rows.front().ap_constant, audit_p);
            const bool ok = alg.r_bound_holds() && alg.constant_bound_holds();
            if (common.format == "csv") {
                out << "function,ratio,bound,normalized\n";
                for (const auto& row : a.rows)
                    out << row.function << ',' << number(row.measured.ratio).dump() << ',' << number(row.bound).dump()
                        << ',' << number(row.normalized).dump() << '\n';
                return ok ? kExitOk : kExitVerificationFailed;
            }
            Json j = envelope("bound-audit");
            j["grid"] = report::to_json(grid);
            j["audit"] = report::to_json(a);
            j["parameter_algebra"] = report::to_json(alg);
            emit(out, j);
            return ok ? kExitOk : kExitVerificationFailed;
        };
    });

    // sawyer-verify
    std::string g_path, reading = "gamma";
    double base = 4.0, delta_frac = 0.5;
    auto* sawyer = app.add_subcommand("sawyer-verify", "principal cubes and the inequality chain for A_1 weights u, v");
    sawyer->add_option("--u", u_spec, "weight spec")->required();
    sawyer->add_option("--v", v_spec, "weight spec")->required();
    sawyer->add_option("--g", g_path, "function CSV")->required();
    sawyer->add_option("--a", base, "stratum base a > 2");
    sawyer->add_option("--delta-frac", delta_frac, "delta as a fraction of eps, in (0,1)");
    sawyer->add_option("--reading", reading, "side condition over gamma (Gamma_N) or all (every stratum cube)")
        ->check(CLI::IsMember({"gamma", "all"}));
    sawyer->add_option("--J", common.J, "domain is [0, 2^J); L is inferred")->check(CLI::Range(0, kMaxJ));
    sawyer->add_option("--seed", common.seed, "seed for the sampled subsets of the subset_decay check");
    sawyer->add_option("--threads", common.threads, "worker cap");
    sawyer->callback([&] {
        action = [&] {
            const GridFunction g = load_function_csv(g_path, common.J);
            const GridWeight u = weight_from(u_spec, g.grid());
            const GridWeight v = weight_from(v_spec, g.grid());
            SawyerOptions opt;
            opt.a = base;
            opt.delta_fraction = delta_frac;
            opt.reading = reading == "gamma" ? ChainReading::GammaN : ChainReading::AllStrata;
            opt.seed = common.seed;
            PrincipalCubeRecord rec = build_strata(g, v, opt);
            principal_cubes(rec, u);
            const ChainReport chain = verify_chain(rec, u, v, g);
            Json j = envelope("sawyer-verify");
            j["grid"] = report::to_json(g.grid());
            j["record"] = report::to_json(rec);
            j["chain"] = report::to_json(chain);
            emit(out, j);
            return chain.passed() ? kExitOk : kExitVerificationFailed;
        };
    });

    // lemma-check
    std::vector<double> p_grid;
    auto* lemma = app.add_subcommand("lemma-check", "mixed-constant chain and split monotonicity");
    lemma->add_option("--v", v_spec, "weight spec")->required();
    lemma->add_option("--p-grid", p_grid, "comma separated p > 1")->required()->delimiter(',');
    add_common(lemma, common);
    lemma->callback([&] {
        action = [&] {
            const Grid grid = build_grid(common.J, common.L);
            const std::vector<MixedLemmaRow> rows = mixed_lemma_check(weight_from(v_spec, grid), p_grid);
            bool ok = true;
            Json arr = Json::array();
            for (const auto& row : rows) {
                ok = ok && row.passed();
                arr.push_back(report::to_json(row));
            }
            Json j = envelope("lemma-check");
            j["grid"] = report::to_json(grid);
            j["rows"] = arr;
            j["passed"] = ok;
            emit(out, j);
            return ok ? kExitOk : kExitVerificationFailed;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    set_thread_limit(common.threads);
    try {
        return action ? action() : kExitUsage;
    } catch (const IngestError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace weaklab::cli
