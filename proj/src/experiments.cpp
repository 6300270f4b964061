#include "weaklab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "weaklab/ap_constants.hpp"
#include "weaklab/errors.hpp"
#include "weaklab/maximal_ops.hpp"

namespace weaklab {

namespace {

constexpr double kSlack = 1e-12;

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double gaussian(std::mt19937_64& rng) {
    const double u1 = 1.0 - unit_uniform(rng);  // (0, 1]
    const double u2 = unit_uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

FitResult fit_if_possible(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 3) return {};
    return scaling_fit(pts);
}

// chi_[0,1) scaled by c.
GridFunction unit_indicator(const Grid& grid, double c) {
    std::vector<double> vals(static_cast<std::size_t>(grid.cells()), 0.0);
    const auto unit_cells = std::min<std::int64_t>(grid.cells(), std::int64_t{1} << grid.L);
    std::fill_n(vals.begin(), unit_cells, c);
    return GridFunction(grid, std::move(vals));
}

int domain_exponent(double b) {
    int J = 0;
    while (std::ldexp(1.0, J) < b * (1.0 - 1e-12)) ++J;
    return J;
}

}  // namespace

FitResult scaling_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw ConfigError("scaling fit needs at least 3 points");
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) throw ConfigError("scaling fit needs positive coordinates");
        sx += std::log(x);
        sy += std::log(y);
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx, dy = std::log(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 1e-24)) throw ConfigError("scaling fit needs spread in x");
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (const auto& [x, y] : points) {
        const double e = std::log(y) - (fit.intercept + fit.slope * std::log(x));
        ss_res += e * e;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.valid = true;
    return fit;
}

SweepRow power_sharpness_grid_row(double delta, int L, OperatorVariant variant) {
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    const double b = std::pow(delta, -2.0 / delta);
    SweepRow row;
    row.delta = delta;
    row.numerator = std::pow(delta, -3.0);
    row.denominator = std::pow(delta, -2.0);
    row.ratio = 1.0 / delta;
    row.bound = 1.0 / delta;
    row.slack = row.bound / row.ratio;
    row.grid_J = domain_exponent(b);
    row.grid_L = L;
    const Grid grid = build_grid(row.grid_J, L);
    const GridWeight v = realize(power_weight(delta), grid);
    const GridWeight u = realize(constant_weight(1.0), grid);
    row.grid = mixed_ratio(unit_indicator(grid, 1.0 / delta), u, v, variant);
    return row;
}

A1Sweep sharpness_a1_sweep(std::span<const double> deltas, int grid_L) {
    A1Sweep out;
    std::vector<std::pair<double, double>> pts;
    for (double d : deltas) {
        if (!(d > 0.0 && d < 1.0)) throw ConfigError("delta must lie in (0, 1)");
        SweepRow row;
        if (grid_L > 0 && d >= 0.5) {
            row = power_sharpness_grid_row(d, grid_L);
        } else {
            row.delta = d;
            // v(0, b) = b^delta / delta with b = delta^{-2/delta}; int f v = 1/delta^2
            const double b = std::pow(d, -2.0 / d);
            row.numerator = std::pow(b, d) / d;
            row.denominator = 1.0 / (d * d);
            row.ratio = row.numerator / row.denominator;
            row.bound = 1.0 / d;
            row.slack = row.bound / row.ratio;
        }
        pts.emplace_back(1.0 / d, row.ratio);
        out.rows.push_back(std::move(row));
    }
    out.fit = fit_if_possible(pts);
    return out;
}

SweepRow product_sharpness_grid_row(double alpha, double delta, int L, OperatorVariant variant) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    const double b = std::pow(delta, -2.0 / delta);
    SweepRow row;
    row.alpha = alpha;
    row.delta = delta;
    row.numerator = (std::pow(b, delta) - 1.0) / delta;
    row.denominator = alpha / (delta * delta);
    row.ratio = row.numerator / row.denominator;
    row.bound = 1.0 / (alpha * delta);
    row.slack = row.bound / row.ratio;
    row.grid_J = domain_exponent(b);
    row.grid_L = L;
    const Grid grid = build_grid(row.grid_J, L);
    const GridWeight v = realize(power_weight(delta), grid);
    const GridWeight u = realize(step_weight(alpha), grid);
    row.grid = mixed_ratio(unit_indicator(grid, 1.0 / delta), u, v, variant);
    return row;
}

ProductSweep sharpness_product_sweep(std::span<const double> alphas, std::span<const double> deltas) {
    ProductSweep out;
    for (double a : alphas) {
        if (!(a > 0.0 && a <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
        for (double d : deltas) {
            if (!(d > 0.0 && d < 1.0)) throw ConfigError("delta must lie in (0, 1)");
            SweepRow row;
            row.alpha = a;
            row.delta = d;
            // uv(1, b) = (b^delta - 1)/delta; int f u v = alpha / delta^2
            const double b = std::pow(d, -2.0 / d);
            row.numerator = (std::pow(b, d) - 1.0) / d;
            row.denominator = a / (d * d);
            row.ratio = row.numerator / row.denominator;
            row.bound = 1.0 / (a * d);
            row.slack = row.bound / row.ratio;
            if (d <= 0.5 && row.ratio < out.lower_constant / (a * d)) out.lower_bound_holds = false;
            out.rows.push_back(row);
        }
    }
    if (!alphas.empty() && !deltas.empty()) {
        std::vector<std::pair<double, double>> by_alpha, by_delta;
        for (const auto& r : out.rows) {
            if (r.delta == deltas.front()) by_alpha.emplace_back(1.0 / r.alpha, r.ratio);
            if (r.alpha == alphas.front()) by_delta.emplace_back(1.0 / r.delta, r.ratio);
        }
        out.fit_alpha = fit_if_possible(by_alpha);
        out.fit_delta = fit_if_possible(by_delta);
    }
    return out;
}

bool ParameterAlgebra::constant_bound_holds() const { return constant_power <= std::exp(4.0); }

ParameterAlgebra parameter_algebra(double constant, double p) {
    if (!(constant >= 1.0)) throw ConfigError("weight constants are at least 1");
    if (!(p >= 1.0)) throw ConfigError("p must be at least 1");
    ParameterAlgebra out;
    out.constant = constant;
    out.p = p;
    out.m = std::max(p, std::log(std::numbers::e + constant));
    out.r = 1.0 + out.m;
    out.r_dual = 1.0 + 1.0 / out.m;
    out.r_power = std::pow(out.r, out.r_dual);
    out.constant_power = std::pow(constant, 2.0 * out.r_dual - 2.0);
    return out;
}

std::vector<CorpusEntry> make_corpus(const Grid& grid, std::uint64_t seed, int random_count) {
    std::vector<CorpusEntry> out;
    const auto n = static_cast<std::size_t>(grid.cells());
    for (int k = grid.min_level(); k <= grid.L; ++k) {
        const std::int64_t count = grid.cubes_on_level(k);
        std::vector<std::int64_t> picks{0};
        if (count > 1) picks.push_back(count / 2);
        for (std::int64_t m : picks) {
            std::vector<double> vals(n, 0.0);
            const CellRange r = cells_of(grid, Cube{k, m});
            std::fill(vals.begin() + r.begin, vals.begin() + r.end, 1.0);
            out.push_back({"indicator_k" + std::to_string(k) + "_m" + std::to_string(m), GridFunction(grid, vals)});
        }
    }
    for (std::size_t pos : {std::size_t{0}, n / 2, n - 1}) {
        std::vector<double> vals(n, 0.0);
        vals[pos] = 1.0;
        out.push_back({"spike_" + std::to_string(pos), GridFunction(grid, std::move(vals))});
    }
    out.push_back({"sharp_unit", unit_indicator(grid, 2.0)});
    std::mt19937_64 rng(seed);
    for (int s = 0; s < random_count; ++s) {
        std::vector<double> vals(n);
        for (double& x : vals) {
            const double keep = unit_uniform(rng);
            const double value = unit_uniform(rng);
            x = keep < 0.25 ? value : 0.0;
        }
        if (std::all_of(vals.begin(), vals.end(), [](double x) { return x == 0.0; })) vals[0] = 1.0;
        out.push_back({"random_" + std::to_string(s), GridFunction(grid, std::move(vals))});
    }
    return out;
}

std::vector<CorpusEntry> refine_corpus(const std::vector<CorpusEntry>& corpus, int new_L) {
    std::vector<CorpusEntry> out;
    out.reserve(corpus.size());
    for (const auto& e : corpus) out.push_back({e.name, refine(e.f, new_L)});
    return out;
}

std::vector<CorpusEntry> load_corpus(const std::string& dir, int J) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<CorpusEntry> out;
    for (const auto& f : files) out.push_back({f.stem().string(), load_function_csv(f, J)});
    if (out.empty()) throw IngestError("no .csv files in corpus directory " + dir, 0);
    return out;
}

GridWeight refine_weight(const GridWeight& w, int new_L) {
    if (!w.piecewise_constant()) throw ConfigError("only piecewise-constant weights refine by duplication");
    const Grid& g = w.grid();
    if (new_L < g.L) throw ConfigError("refinement cannot coarsen");
    const Grid fine = build_grid(g.J, new_L);
    const std::int64_t factor = std::int64_t{1} << (new_L - g.L);
    std::vector<double> c(static_cast<std::size_t>(fine.cells()));
    for (std::int64_t i = 0; i < fine.cells(); ++i) c[static_cast<std::size_t>(i)] = w.coefficients()[static_cast<std::size_t>(i / factor)];
    return GridWeight(fine, std::move(c), 0.0, w.exponents());
}

GridWeight random_piecewise_weight(const Grid& grid, std::uint64_t seed, double spread, int blocks) {
    const std::int64_t n = grid.cells();
    const std::int64_t nb = std::clamp<std::int64_t>(blocks, 1, n);
    std::mt19937_64 rng(seed);
    std::vector<double> block_values(static_cast<std::size_t>(nb));
    for (double& x : block_values) x = std::exp(spread * gaussian(rng));
    std::vector<double> c(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = block_values[static_cast<std::size_t>(i * nb / n)];
    return GridWeight(grid, std::move(c), 0.0);
}

std::vector<NamedWeight> audit_family(const Grid& grid, std::uint64_t seed) {
    std::vector<NamedWeight> out;
    for (double a : {0.5, 0.25, 0.125, 0.0625})
        out.push_back({to_string(step_weight(a)), realize(step_weight(a), grid)});
    int idx = 0;
    for (double spread : {0.5, 1.0, 1.5}) {
        for (int rep = 0; rep < 2; ++rep, ++idx) {
            const std::uint64_t s = seed * 1000003u + static_cast<std::uint64_t>(idx);
            out.push_back({"random:seed=" + std::to_string(s) + ",spread=" + std::to_string(spread).substr(0, 3),
                           random_piecewise_weight(grid, s, spread, 16)});
        }
    }
    return out;
}

BoundAudit bound_audit(std::span<const NamedWeight> weights, double p, std::span<const CorpusEntry> corpus) {
    if (!(p >= 1.0)) throw ConfigError("bound audit needs p >= 1");
    BoundAudit out;
    bool first = true;
    for (const auto& nw : weights) {
        const double fw = global_constant(nw.w, ConstantKind::ainf_fw()).value;
        const double ap = p == 1.0 ? global_constant(nw.w, ConstantKind::a1()).value
                                   : global_constant(nw.w, ConstantKind::ap(p)).value;
        const double bound = fw * std::max(p, std::log(std::numbers::e + ap));
        const GridWeight one = realize(constant_weight(1.0), nw.w.grid());
        for (const auto& e : corpus) {
            AuditRow row;
            row.weight = nw.name;
            row.function = e.name;
            row.p = p;
            row.fw_constant = fw;
            row.ap_constant = ap;
            row.bound = bound;
            row.measured = mixed_ratio(e.f, one, nw.w, OperatorVariant::Dyadic);
            row.normalized = row.measured.ratio / bound;
            if (first || row.normalized > out.envelope) {
                out.envelope = row.normalized;
                out.worst_weight = nw.name;
                out.worst_function = e.name;
                first = false;
            }
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

std::vector<MixedLemmaRow> mixed_lemma_check(const GridWeight& w0, std::span<const double> p_grid,
                                             std::span<const double> split_grid) {
    static constexpr double kDefaultSplit[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    if (split_grid.empty()) split_grid = kDefaultSplit;
    std::vector<MixedLemmaRow> out;
    for (double p : p_grid) {
        if (!(p > 1.0)) throw ConfigError("mixed lemma check needs p > 1");
        const GridWeight w = w0.has_dual(p) ? w0 : w0.with_exponents({{p}, {}});
        const double inv_p = 1.0 / p, inv_dual = 1.0 - 1.0 / p;
        MixedLemmaRow row;
        row.p = p;
        const Grid& grid = w.grid();
        for (int k = grid.min_level(); k <= grid.L; ++k) {
            for (std::int64_t m = 0; m < grid.cubes_on_level(k); ++m) {
                const Cube q{k, m};
                const double ap = ap_local(w, q, p);
                const double mixed = mixed_local(w, q, p, inv_p, inv_dual);
                if (ap < 1.0 - kSlack) ++row.jensen_failures;
                if (!(mixed <= ap * (1.0 + kSlack)) || !(ap <= std::pow(mixed, p) * (1.0 + kSlack))) ++row.chain_failures;
            }
        }
        row.ap = global_constant(w, ConstantKind::ap(p)).value;
        row.mixed = global_constant(w, ConstantKind::mixed(p, inv_p, inv_dual)).value;
        row.global_chain = row.mixed <= row.ap * (1.0 + kSlack) && row.ap <= std::pow(row.mixed, p) * (1.0 + kSlack);
        for (double a : split_grid) {
            const double value = global_constant(w, ConstantKind::mixed(p, a, 1.0 - a)).value;
            if (!row.split.empty() && value < row.split.back().second * (1.0 - kSlack)) row.split_monotone = false;
            row.split.emplace_back(a, value);
        }
        out.push_back(std::move(row));
    }
    return out;
}

DualIdentity dual_identity_check(const GridWeight& v0, double r) {
    if (!(r > 1.0)) throw ConfigError("dual identity needs r > 1");
    const double r_dual = r / (r - 1.0);
    const GridWeight v = v0.has_dual(r) ? v0 : v0.with_exponents({{r}, {}});
    const GridWeight sigma = v0.power(1.0 - r_dual, {{r_dual}, {}});
    DualIdentity out;
    out.r = r;
    const Grid& grid = v.grid();
    for (int k = grid.min_level(); k <= grid.L; ++k) {
        for (std::int64_t m = 0; m < grid.cubes_on_level(k); ++m) {
            const Cube q{k, m};
            const double lhs = ap_local(sigma, q, r_dual);
            const double rhs = std::pow(ap_local(v, q, r), r_dual - 1.0);
            if (std::isinf(lhs) && std::isinf(rhs)) continue;
            const double err = std::abs(lhs - rhs) / rhs;
            if (!(err <= out.max_relative_error)) {
                out.max_relative_error = err;
                out.worst = q;
            }
        }
    }
    return out;
}

BuckleyReport buckley_empirical(const GridWeight& v, double p, std::span<const CorpusEntry> corpus) {
    if (!(p > 1.0)) throw ConfigError("Buckley check needs p > 1");
    BuckleyReport out;
    out.p = p;
    const double p_dual = p / (p - 1.0);
    out.ap = global_constant(v, ConstantKind::ap(p)).value;
    out.sigma_fw = global_constant(v.power(1.0 - p_dual), ConstantKind::ainf_fw()).value;
    out.bound = p_dual * std::pow(out.ap, 1.0 / p) * std::pow(out.sigma_fw, 1.0 / p);
    for (const auto& e : corpus) {
        const double den = lp_norm(e.f, v, p);
        if (!(den > 0.0)) continue;
        const double ratio = lp_norm(uncentered_maximal(e.f), v, p) / den;
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.worst_function = e.name;
        }
    }
    return out;
}

}  // namespace weaklab
