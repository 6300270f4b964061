#include "weaklab/czd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "weaklab/ap_constants.hpp"
#include "weaklab/dyadic_tree.hpp"
#include "weaklab/errors.hpp"
#include "weaklab/maximal_ops.hpp"

namespace weaklab {

namespace {

constexpr double kSlack = 1e-12;

using ExactTree = DyadicTree<mpq_class>;

ExactTree exact_tree(const Grid& grid, const std::vector<mpq_class>& cells) {
    return ExactTree(grid, std::span<const mpq_class>(cells),
                     [](const mpq_class& a, const mpq_class& b) { return mpq_class(a + b); });
}

GridFunction to_function(const Grid& grid, const std::vector<mpq_class>& xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = xs[i].get_d();
    return GridFunction(grid, std::move(out));
}

}  // namespace

GridFunction CZDecomposition::good() const { return to_function(grid_, g_); }
GridFunction CZDecomposition::bad() const { return to_function(grid_, b_); }

GridFunction CZDecomposition::bad_part(std::size_t j) const {
    std::vector<double> out(b_.size(), 0.0);
    const CellRange cells = cells_of(grid_, cubes_.at(j).cube);
    for (std::int64_t i = cells.begin; i < cells.end; ++i)
        out[static_cast<std::size_t>(i)] = b_[static_cast<std::size_t>(i)].get_d();
    return GridFunction(grid_, std::move(out));
}

CZDecomposition cz_decompose(const GridFunction& f, const GridWeight& v, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("decomposition height must be positive and finite");
    const Grid& grid = f.grid();
    if (!(grid == v.grid())) throw ConfigError("function and weight live on different grids");
    const auto n = static_cast<std::size_t>(grid.cells());

    CZDecomposition dec;
    dec.grid_ = grid;
    dec.height_ = t;
    dec.f_.resize(n);
    dec.mass_.resize(n);
    std::vector<mpq_class> fm(n), absfm(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = v.cell_mass(static_cast<std::int64_t>(i));
        if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("weight mass must be positive and finite on every cell");
        dec.f_[i] = f.values()[i];
        dec.mass_[i] = m;
        fm[i] = dec.f_[i] * dec.mass_[i];
        absfm[i] = abs(fm[i]);
    }
    const ExactTree vmass = exact_tree(grid, dec.mass_);
    const ExactTree signed_sum = exact_tree(grid, fm);
    const ExactTree abs_sum = exact_tree(grid, absfm);
    const mpq_class height(t);

    // Top-down stopping time: descend until the |f| v-average first exceeds t.
    std::vector<Cube> stack{root(grid)};
    while (!stack.empty()) {
        const Cube q = stack.back();
        stack.pop_back();
        if (abs_sum[q] > height * vmass[q]) {
            dec.cubes_.push_back(CZCube{q, abs_sum[q] / vmass[q], signed_sum[q] / vmass[q], vmass[q]});
            continue;
        }
        if (q.level < grid.L) {
            stack.push_back(right_child(q));
            stack.push_back(left_child(q));
        }
    }
    dec.truncated_ = !dec.cubes_.empty() && dec.cubes_.front().cube == root(grid);

    dec.owner_.assign(n, -1);
    dec.g_ = dec.f_;
    dec.b_.assign(n, mpq_class(0));
    for (std::size_t j = 0; j < dec.cubes_.size(); ++j) {
        const CellRange cells = cells_of(grid, dec.cubes_[j].cube);
        for (std::int64_t i = cells.begin; i < cells.end; ++i) {
            const auto c = static_cast<std::size_t>(i);
            dec.owner_[c] = static_cast<std::int64_t>(j);
            dec.g_[c] = dec.cubes_[j].average;
            dec.b_[c] = dec.f_[c] - dec.cubes_[j].average;
        }
    }
    return dec;
}

bool CZVerification::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult& CZVerification::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("no check named " + name);
}

CZVerification verify_cz(const CZDecomposition& dec, const GridWeight& v, double r) {
    const Grid& grid = dec.grid();
    const double t = dec.height();
    const mpq_class height(t);
    CZVerification out;
    out.r = r;
    out.ar_constant = global_constant(v, ConstantKind::ap(r)).value;
    out.bound = std::pow(2.0, r) * out.ar_constant * t;
    const double ratio_bound = std::pow(2.0, r) * out.ar_constant;

    const ExactTree vmass = exact_tree(grid, dec.cell_masses_exact());
    std::vector<mpq_class> absfm(dec.f_exact().size());
    for (std::size_t i = 0; i < absfm.size(); ++i) absfm[i] = abs(dec.f_exact()[i] * dec.cell_masses_exact()[i]);
    const ExactTree abs_sum = exact_tree(grid, absfm);

    auto named = [](const char* name) {
        CheckResult c;
        c.name = name;
        return c;
    };
    CheckResult lower = named("lower_bound"), parent_route = named("parent_bound"), good = named("good_bound"),
                cancel = named("cancellation"), off = named("off_omega"), recon = named("reconstruction"),
                maximal = named("maximality"), disjoint_check = named("disjointness"),
                accounting = named("mass_accounting");

    const GridFunction b_double = dec.bad();
    for (std::size_t j = 0; j < dec.cubes().size(); ++j) {
        const CZCube& cz = dec.cubes()[j];
        const auto idx = static_cast<std::int64_t>(j);
        const double avg = cz.abs_average.get_d();

        // (i) t < a_j
        const double low = t / avg;
        if (!(cz.abs_average > height)) lower.passed = false;
        if (lower.worst_at < 0 || low > lower.worst) lower.worst = low, lower.worst_at = idx;

        // (ii) a_j <= (v(Q')/v(Q)) t <= 2^r [v]_{A_r} t
        if (!(cz.cube == root(grid))) {
            const Cube up = parent(grid, cz.cube);
            const mpq_class ratio = vmass[up] / cz.mass;
            const bool step = cz.abs_average <= ratio * height;
            const double rel = ratio.get_d() / ratio_bound;
            if (!step || rel > 1.0 + kSlack) parent_route.passed = false;
            if (parent_route.worst_at < 0 || rel > parent_route.worst) parent_route.worst = rel, parent_route.worst_at = idx;
            // maximality: the parent was not selected
            if (abs_sum[up] > height * vmass[up]) maximal.passed = false;
        } else {
            parent_route.detail = "root cube selected; no parent inside the domain";
        }

        // (iv) exact and floating cancellation on Q_j
        const CellRange cells = cells_of(grid, cz.cube);
        mpq_class exact_res(0);
        double float_res = 0.0, scale = 0.0;
        for (std::int64_t i = cells.begin; i < cells.end; ++i) {
            const auto c = static_cast<std::size_t>(i);
            exact_res += dec.bad_exact()[c] * dec.cell_masses_exact()[c];
            float_res += b_double[i] * v.cell_mass(i);
            scale += std::abs(dec.f_exact()[c].get_d()) * v.cell_mass(i);
        }
        const double rel = scale > 0.0 ? std::abs(float_res) / scale : std::abs(float_res);
        if (exact_res != 0 || rel > kSlack) cancel.passed = false;
        if (cancel.worst_at < 0 || rel > cancel.worst) cancel.worst = rel, cancel.worst_at = idx;
    }
    // Cubes come out of a left-to-right tree walk, so adjacent disjointness gives pairwise disjointness.
    for (std::size_t j = 1; j < dec.cubes().size(); ++j)
        if (!(dec.cubes()[j - 1].cube.right() <= dec.cubes()[j].cube.left())) disjoint_check.passed = false;

    mpq_class total_abs(0), omega_mass(0);
    for (std::int64_t i = 0; i < grid.cells(); ++i) {
        const auto c = static_cast<std::size_t>(i);
        total_abs += absfm[c];
        // (iii) g <= 2^r [v]_{A_r} t
        // A selected root has no parent to bound its average, so its cells are exempt.
        const bool root_owned = dec.in_omega(i) && dec.cubes()[static_cast<std::size_t>(dec.owner(i))].cube == root(grid);
        if (root_owned) {
            good.detail = "root cube selected; its average is not bounded";
        } else {
            const double gr = std::abs(dec.good_exact()[c].get_d()) / out.bound;
            if (gr > 1.0 + kSlack) good.passed = false;
            if (good.worst_at < 0 || gr > good.worst) good.worst = gr, good.worst_at = i;
        }
        // (v) |f| <= t off Omega
        if (!dec.in_omega(i)) {
            const double fr = std::abs(dec.f_exact()[c].get_d()) / t;
            if (abs(dec.f_exact()[c]) > height) off.passed = false;
            if (off.worst_at < 0 || fr > off.worst) off.worst = fr, off.worst_at = i;
        }
        if (dec.f_exact()[c] != dec.good_exact()[c] + dec.bad_exact()[c]) recon.passed = false, recon.worst_at = i;
    }
    for (const auto& cz : dec.cubes()) omega_mass += cz.mass;
    // sum_j v(Q_j) <= (1/t) int |f| v
    accounting.passed = omega_mass * height <= total_abs;
    accounting.worst = total_abs == 0 ? 0.0 : mpq_class(omega_mass * height / total_abs).get_d();

    out.checks = {lower, parent_route, good, cancel, off, recon, maximal, disjoint_check, accounting};
    return out;
}

DominationReport pointwise_domination_check(const GridFunction& f, const GridWeight& v, const CZDecomposition& dec) {
    const Grid& grid = f.grid();
    const auto n = static_cast<std::size_t>(grid.cells());
    const GridFunction g = dec.good();
    const GridFunction b = dec.bad();
    std::vector<double> fv(n), gv(n), bv(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = v.cell_value(static_cast<std::int64_t>(i));
        fv[i] = f.values()[i] * w;
        gv[i] = g.values()[i] * w;
        bv[i] = b.values()[i] * w;
    }
    const GridFunction mf = dyadic_maximal(GridFunction(grid, fv));
    const GridFunction mg = dyadic_maximal(GridFunction(grid, gv));
    const GridFunction mb = dyadic_maximal(GridFunction(grid, bv), AverageMode::Signed);

    DominationReport rep;
    rep.equality_everywhere = true;
    bool first = true;
    for (std::int64_t i = 0; i < grid.cells(); ++i) {
        const double lhs = mf[i];
        const double rhs = mg[i] + mb[i];
        const double excess = (lhs - rhs) / std::max(lhs, std::numeric_limits<double>::min());
        if (first || excess > rep.max_excess) rep.max_excess = excess, rep.worst_cell = i, first = false;
        if (lhs > rhs * (1.0 + kSlack)) ++rep.violations;
        if (lhs != rhs) rep.equality_everywhere = false;
        if (!dec.in_omega(i)) rep.off_omega_float_max = std::max(rep.off_omega_float_max, mb[i]);
    }

    // Exact: every ancestor of an off-Omega cell has int b v = 0.
    std::vector<mpq_class> bm(n);
    for (std::size_t i = 0; i < n; ++i) bm[i] = dec.bad_exact()[i] * dec.cell_masses_exact()[i];
    const ExactTree bsum = exact_tree(grid, bm);
    for (std::int64_t i = 0; i < grid.cells() && rep.off_omega_exact_zero; ++i) {
        if (dec.in_omega(i)) continue;
        for (int k = grid.min_level(); k <= grid.L; ++k)
            if (bsum[ancestor_at(cell_cube(grid, i), k)] != 0) {
                rep.off_omega_exact_zero = false;
                break;
            }
    }
    return rep;
}

}  // namespace weaklab
