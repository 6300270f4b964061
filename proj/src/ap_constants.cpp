#include "weaklab/ap_constants.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "weaklab/errors.hpp"
#include "weaklab/maximal_ops.hpp"
#include "weaklab/parallel.hpp"

namespace weaklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x^e with 0 * inf treated as "factor absent".
double factor(double x, double e) {
    if (e == 0.0) return 1.0;
    if (std::isinf(x)) return kInf;
    return std::pow(x, e);
}

// Copy of w with the dual exponent cached when the caller did not.
std::optional<GridWeight> with_dual(const GridWeight& w, const ConstantKind& kind) {
    if ((kind.tag == ConstantTag::Ap || kind.tag == ConstantTag::Mixed) && !w.has_dual(kind.p))
        return w.with_exponents({{kind.p}, {}});
    return std::nullopt;
}

bool better(double value, double best) {
    // NaN never wins; +inf beats everything finite.
    return value > best;
}

}  // namespace

void validate(const ConstantKind& kind) {
    if ((kind.tag == ConstantTag::Ap || kind.tag == ConstantTag::Mixed) && !(kind.p > 1.0))
        throw ConfigError("A_p constants need p > 1");
    if (kind.tag == ConstantTag::Mixed && (!(kind.alpha >= 0.0) || !(kind.beta >= 0.0)))
        throw ConfigError("mixed constant exponents must be nonnegative");
}

std::string to_string(const ConstantKind& kind) {
    std::ostringstream os;
    switch (kind.tag) {
        case ConstantTag::A1: return "A1";
        case ConstantTag::Ap: os << "Ap(p=" << kind.p << ")"; return os.str();
        case ConstantTag::AinfExp: return "AinfExp";
        case ConstantTag::AinfFW: return "AinfFW";
        case ConstantTag::Mixed:
            os << "Mixed(p=" << kind.p << ",alpha=" << kind.alpha << ",beta=" << kind.beta << ")";
            return os.str();
    }
    return "?";
}

double ap_local(const GridWeight& w, const Cube& q, double p) {
    const double dual = w.dual_mass(q, p);
    const double mass = w.mass(q);
    if (is_divergent(dual) || is_divergent(mass)) return kInf;
    const double len = q.length();
    return (mass / len) * std::pow(dual / len, p - 1.0);
}

double a1_local(const GridWeight& w, const Cube& q) {
    const double inf = w.ess_inf(q);
    const double mass = w.mass(q);
    if (!(inf > 0.0) || is_divergent(mass)) return kInf;
    return (mass / q.length()) / inf;
}

double ainf_exp_local(const GridWeight& w, const Cube& q) {
    const double mass = w.mass(q);
    const double logm = w.log_mass(q);
    if (is_divergent(mass) || !std::isfinite(logm)) return kInf;
    const double len = q.length();
    return (mass / len) * std::exp(-logm / len);
}

double ainf_fw_local(const GridWeight& w, const Cube& q) {
    if (!w.piecewise_constant())
        throw ConfigError("Fujii-Wilson constant needs a piecewise-constant weight; realize it as csv/step/const");
    const CellRange cells = cells_of(w.grid(), q);
    const auto coef = w.coefficients().subspan(static_cast<std::size_t>(cells.begin),
                                               static_cast<std::size_t>(cells.size()));
    const std::vector<double> m = uncentered_maximal_values(coef);
    double total = 0.0;
    for (double x : m) total += x;
    return total * w.grid().cell_width() / w.mass(q);
}

double mixed_local(const GridWeight& w, const Cube& q, double p, double alpha, double beta) {
    const double ap = alpha == 0.0 ? 1.0 : ap_local(w, q, p);
    const double ae = beta == 0.0 ? 1.0 : ainf_exp_local(w, q);
    return factor(ap, alpha) * factor(ae, beta);
}

double local_constant(const GridWeight& w, const Cube& q, const ConstantKind& kind) {
    switch (kind.tag) {
        case ConstantTag::A1: return a1_local(w, q);
        case ConstantTag::Ap: return ap_local(w, q, kind.p);
        case ConstantTag::AinfExp: return ainf_exp_local(w, q);
        case ConstantTag::AinfFW: return ainf_fw_local(w, q);
        case ConstantTag::Mixed: return mixed_local(w, q, kind.p, kind.alpha, kind.beta);
    }
    return kInf;
}

std::vector<double> local_constants(const GridWeight& w0, const ConstantKind& kind) {
    validate(kind);
    const std::optional<GridWeight> copy = with_dual(w0, kind);
    const GridWeight& w = copy ? *copy : w0;
    const Grid& grid = w.grid();
    std::vector<double> out(static_cast<std::size_t>(grid.total_cubes()));
    for (int k = grid.min_level(); k <= grid.L; ++k) {
        parallel_for(grid.cubes_on_level(k), [&](std::int64_t m) {
            const Cube q{k, m};
            out[node_index(grid, q)] = local_constant(w, q, kind);
        });
    }
    return out;
}

std::string ConstantReport::truncation_note() const {
    std::ostringstream os;
    os << "supremum over dyadic cubes of levels " << min_level << ".." << max_level << " only";
    return os.str();
}

ConstantReport global_constant(const GridWeight& w, const ConstantKind& kind) {
    const std::vector<double> values = local_constants(w, kind);
    const Grid& grid = w.grid();
    ConstantReport rep;
    rep.kind = kind;
    rep.min_level = grid.min_level();
    rep.max_level = grid.L;
    bool have = false;
    for (int k = grid.min_level(); k <= grid.L; ++k) {
        LevelMaximum row{k, 0.0, Cube{k, 0}};
        bool row_have = false;
        for (std::int64_t m = 0; m < grid.cubes_on_level(k); ++m) {
            const double x = values[node_index(grid, Cube{k, m})];
            if (!row_have || better(x, row.value)) {
                row.value = x;
                row.cube = Cube{k, m};
                row_have = true;
            }
        }
        if (!have || better(row.value, rep.value)) {
            rep.value = row.value;
            rep.argmax = row.cube;
            have = true;
        }
        rep.per_level.push_back(row);
    }
    return rep;
}

ReverseHolderReport reverse_holder_check(const GridWeight& w0, std::uint64_t seed, int subset_samples_per_cube) {
    ReverseHolderReport rep;
    rep.a1 = global_constant(w0, ConstantKind::a1()).value;
    if (!std::isfinite(rep.a1)) throw DomainError("reverse Hoelder check needs a finite A_1 constant");
    rep.r = 1.0 + 1.0 / (4.0 * rep.a1);
    rep.epsilon = 1.0 / (1.0 + 4.0 * rep.a1);
    const GridWeight w = w0.has_power(rep.r) ? w0 : w0.with_exponents({{}, {rep.r}});
    const Grid& grid = w.grid();
    const std::vector<double> masses = w.cell_masses();
    std::mt19937_64 rng(seed);
    bool first = true;

    for (int k = grid.min_level(); k <= grid.L; ++k) {
        for (std::int64_t m = 0; m < grid.cubes_on_level(k); ++m) {
            const Cube q{k, m};
            const double len = q.length();
            const double lhs = std::pow(w.power_mass(q, rep.r) / len, 1.0 / rep.r);
            const double rhs = 2.0 * w.mass(q) / len;
            const double ratio = lhs / rhs;
            if (first || ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.worst = q;
                first = false;
            }
            if (!(lhs <= rhs)) ++rep.failures;

            const CellRange cells = cells_of(grid, q);
            const double total = w.mass(q);
            auto check_subset = [&](double mass_e, std::int64_t count) {
                const double frac = static_cast<double>(count) / static_cast<double>(cells.size());
                const double r = (mass_e / total) / (2.0 * std::pow(frac, rep.epsilon));
                rep.max_subset_ratio = std::max(rep.max_subset_ratio, r);
                ++rep.subset_samples;
                if (!(r <= 1.0)) ++rep.subset_failures;
            };
            for (std::int64_t i = cells.begin; i < cells.end; ++i) check_subset(masses[static_cast<std::size_t>(i)], 1);
            if (cells.size() > 1) {
                for (int s = 0; s < subset_samples_per_cube; ++s) {
                    double mass_e = 0.0;
                    std::int64_t count = 0;
                    for (std::int64_t i = cells.begin; i < cells.end; ++i) {
                        if (rng() & 1u) {
                            mass_e += masses[static_cast<std::size_t>(i)];
                            ++count;
                        }
                    }
                    if (count > 0) check_subset(mass_e, count);
                }
            }
        }
    }
    return rep;
}

DoublingReport doubling_check(const GridWeight& v, double p) {
    DoublingReport rep;
    rep.p = p;
    rep.constant = p == 1.0 ? global_constant(v, ConstantKind::a1()).value
                            : global_constant(v, ConstantKind::ap(p)).value;
    rep.bound = std::pow(2.0, p) * rep.constant;
    const Grid& grid = v.grid();
    const double domain = grid.domain_length();
    bool first = true, first_parent = true;
    for (int k = grid.min_level(); k <= grid.L; ++k) {
        for (std::int64_t m = 0; m < grid.cubes_on_level(k); ++m) {
            const Cube q{k, m};
            const double half = q.length() / 2.0;
            const double a = q.left() - half;
            const double b = q.right() + half;
            if (a < 0.0 || b > domain) ++rep.clipped_cubes;
            const double ratio = v.integral(a, b) / v.mass(q);
            if (first || ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.worst = q;
                first = false;
            }
            if (k > grid.min_level()) {
                const double pr = v.mass(parent(grid, q)) / v.mass(q);
                if (first_parent || pr > rep.parent_max_ratio) {
                    rep.parent_max_ratio = pr;
                    rep.parent_worst = q;
                    first_parent = false;
                }
            }
        }
    }
    return rep;
}

}  // namespace weaklab
