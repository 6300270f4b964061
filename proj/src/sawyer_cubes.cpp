#include "weaklab/sawyer_cubes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "weaklab/ap_constants.hpp"
#include "weaklab/errors.hpp"
#include "weaklab/maximal_ops.hpp"

namespace weaklab {

namespace {

constexpr double kSlack = 1e-12;
constexpr int kMaxStrata = 4096;

bool within(double lhs, double rhs) { return lhs <= rhs * (1.0 + kSlack); }

double avg(const GridWeight& w, const Cube& q) { return w.mass(q) / q.length(); }

GridFunction abs_function(const GridFunction& g) {
    std::vector<double> out(g.values().begin(), g.values().end());
    for (double& x : out) x = std::abs(x);
    return GridFunction(g.grid(), std::move(out));
}

GridFunction weight_function(const GridWeight& v) { return GridFunction(v.grid(), v.cell_values()); }

// Strict ancestors of q from its parent up to (and including) level `stop`.
template <class F>
void for_ancestors(const Cube& q, int stop, F&& f) {
    for (int k = q.level - 1; k >= stop; --k) f(ancestor_at(q, k));
}

void accumulate(ChainCheck& c, double lhs, double rhs) {
    ++c.evaluated;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (c.evaluated == 1 || ratio > c.worst_ratio) c.worst_ratio = ratio;
    if (!within(lhs, rhs)) {
        ++c.failures;
        c.passed = false;
    }
}

ChainCheck named(const char* name) {
    ChainCheck c;
    c.name = name;
    return c;
}

}  // namespace

std::vector<std::size_t> PrincipalCubeRecord::principal() const {
    std::vector<std::size_t> out;
    for (const auto& gen : generations) out.insert(out.end(), gen.begin(), gen.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Cube> maximal_cover(const Grid& grid, const std::vector<bool>& cells) {
    std::vector<char> leaf(cells.begin(), cells.end());
    const DyadicTree<char> full(grid, std::span<const char>(leaf), [](char x, char y) { return char(x && y); });
    std::vector<Cube> out;
    std::vector<Cube> stack{root(grid)};
    while (!stack.empty()) {
        const Cube q = stack.back();
        stack.pop_back();
        if (full[q]) {
            out.push_back(q);
        } else if (q.level < grid.L) {
            stack.push_back(right_child(q));
            stack.push_back(left_child(q));
        }
    }
    return out;
}

std::vector<Cube> level_cubes(const GridFunction& md_v, const GridFunction& md_g, double a, int k) {
    const double height = std::pow(a, k);
    std::vector<bool> cells(static_cast<std::size_t>(md_v.size()));
    for (std::int64_t i = 0; i < md_v.size(); ++i)
        cells[static_cast<std::size_t>(i)] = md_v[i] > height && md_g[i] > height;
    return maximal_cover(md_v.grid(), cells);
}

std::vector<Cube> level_cubes(const GridFunction& g, const GridWeight& v, double a, int k) {
    return level_cubes(dyadic_maximal(weight_function(v)), dyadic_maximal(g), a, k);
}

std::vector<bool> gamma_filter(const std::vector<Cube>& cubes, const GridWeight& v, double a, int k, double v_a1,
                               SandwichReport* report) {
    const Grid& grid = v.grid();
    const double ceiling = std::pow(a, k + 1);
    const double floor_value = std::pow(a, k);
    std::vector<bool> out(cubes.size(), false);
    for (std::size_t c = 0; c < cubes.size(); ++c) {
        const CellRange cells = cells_of(grid, cubes[c]);
        for (std::int64_t i = cells.begin; i < cells.end && !out[c]; ++i) out[c] = v.cell_value(i) <= ceiling;
        if (!out[c] || report == nullptr) continue;
        // sandwich: a^k/[v] <= essinf v <= avg v <= [v] a^{k+1}
        const double inf = v.ess_inf(cubes[c]);
        const double mean = avg(v, cubes[c]);
        const double lower = (floor_value / v_a1) / inf;
        const double upper = mean / (v_a1 * ceiling);
        ++report->checked;
        report->worst_lower = std::max(report->worst_lower, lower);
        report->worst_upper = std::max(report->worst_upper, upper);
        if (!within(floor_value / v_a1, inf) || !(inf <= mean * (1.0 + kSlack)) || !within(mean, v_a1 * ceiling))
            ++report->failures;
    }
    return out;
}

PrincipalCubeRecord build_strata(const GridFunction& g, const GridWeight& v, const SawyerOptions& options) {
    if (!(options.a > 2.0)) throw ConfigError("stratum base a must exceed 2");
    if (!(options.delta_fraction > 0.0 && options.delta_fraction < 1.0))
        throw ConfigError("delta fraction must lie in (0, 1)");
    if (!(g.grid() == v.grid())) throw ConfigError("g and v live on different grids");

    PrincipalCubeRecord rec;
    rec.grid = g.grid();
    rec.options = options;
    rec.v_a1 = global_constant(v, ConstantKind::a1()).value;
    if (!std::isfinite(rec.v_a1)) throw DomainError("v must have a finite A_1 constant");
    rec.epsilon = 1.0 / (1.0 + 4.0 * rec.v_a1);
    rec.delta = options.delta_fraction * rec.epsilon;

    const GridFunction md_v = dyadic_maximal(weight_function(v));
    const GridFunction md_g = dyadic_maximal(abs_function(g));
    const std::vector<double> vals = v.cell_values();
    const double min_v = *std::min_element(vals.begin(), vals.end());
    const double a = options.a;

    // Smallest k with a^{k+1} >= min v.
    int k = static_cast<int>(std::ceil(std::log(min_v) / std::log(a))) - 1;
    while (std::pow(a, k) >= min_v) --k;
    while (std::pow(a, k + 1) < min_v) ++k;
    rec.floor = k;
    rec.top = k - 1;

    for (; ; ++k) {
        if (k - rec.floor > kMaxStrata) throw ConfigError("too many strata; rescale g or v");
        const std::vector<Cube> cubes = level_cubes(md_v, md_g, a, k);
        if (cubes.empty()) break;
        const std::vector<bool> flags = gamma_filter(cubes, v, a, k, rec.v_a1, &rec.sandwich);
        for (std::size_t c = 0; c < cubes.size(); ++c) {
            if (flags[c]) rec.gamma.push_back(rec.cubes.size());
            rec.cubes.push_back(StratumCube{k, cubes[c], flags[c]});
        }
        rec.top = k;
    }
    return rec;
}

void principal_cubes(PrincipalCubeRecord& rec, const GridWeight& u) {
    rec.u_a1 = global_constant(u, ConstantKind::a1()).value;
    if (!std::isfinite(rec.u_a1)) throw DomainError("u must have a finite A_1 constant");
    rec.nu = 1.0 / (1.0 + 4.0 * rec.u_a1);
    const double a = rec.options.a;
    const double delta = rec.delta;

    std::map<Cube, std::vector<std::size_t>> gamma_at, chain_at;
    for (std::size_t idx : rec.gamma) gamma_at[rec.cubes[idx].cube].push_back(idx);
    if (rec.options.reading == ChainReading::GammaN) {
        chain_at = gamma_at;
    } else {
        for (std::size_t idx = 0; idx < rec.cubes.size(); ++idx) chain_at[rec.cubes[idx].cube].push_back(idx);
    }

    rec.generations.clear();
    rec.generation_of.assign(rec.cubes.size(), -1);
    rec.selected_by.assign(rec.cubes.size(), -1);
    rec.container.assign(rec.cubes.size(), -1);
    rec.generation_overlaps = 0;

    std::vector<std::size_t> current;
    for (std::size_t idx : rec.gamma) {
        bool maximal = true;
        for_ancestors(rec.cubes[idx].cube, rec.grid.min_level(),
                      [&](const Cube& c) { maximal = maximal && !gamma_at.contains(c); });
        if (maximal) current.push_back(idx);
    }

    while (!current.empty()) {
        const int n = static_cast<int>(rec.generations.size());
        for (std::size_t idx : current) rec.generation_of[idx] = n;
        rec.generations.push_back(current);

        std::vector<std::size_t> next;
        std::vector<bool> queued(rec.cubes.size(), false);
        for (std::size_t s : current) {
            const StratumCube& top = rec.cubes[s];
            const double top_avg = avg(u, top.cube);
            for (std::size_t j : rec.gamma) {
                const StratumCube& cand = rec.cubes[j];
                if (cand.cube == top.cube || !nested_in(cand.cube, top.cube)) continue;
                // growth over the selecting cube
                if (!(avg(u, cand.cube) > std::pow(a, (cand.stratum - top.stratum) * delta) * top_avg)) continue;
                // no intermediate chain cube already grew that much
                bool ok = true;
                for_ancestors(cand.cube, top.cube.level, [&](const Cube& c) {
                    if (!ok) return;
                    auto it = chain_at.find(c);
                    if (it == chain_at.end()) return;
                    for (std::size_t l : it->second)
                        if (!(avg(u, c) <= std::pow(a, (rec.cubes[l].stratum - top.stratum) * delta) * top_avg)) ok = false;
                });
                if (!ok) continue;
                if (rec.generation_of[j] >= 0) {
                    ++rec.generation_overlaps;
                    continue;
                }
                if (!queued[j]) {
                    queued[j] = true;
                    rec.selected_by[j] = static_cast<std::int64_t>(s);
                    next.push_back(j);
                }
            }
        }
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }

    // Smallest principal cube containing each Gamma_N member.
    std::map<Cube, std::vector<std::size_t>> principal_at;
    for (std::size_t idx = 0; idx < rec.cubes.size(); ++idx)
        if (rec.generation_of[idx] >= 0) principal_at[rec.cubes[idx].cube].push_back(idx);
    for (std::size_t idx : rec.gamma) {
        const StratumCube& sc = rec.cubes[idx];
        for (int lev = sc.cube.level; lev >= rec.grid.min_level(); --lev) {
            auto it = principal_at.find(ancestor_at(sc.cube, lev));
            if (it == principal_at.end()) continue;
            std::int64_t pick = -1;
            for (std::size_t p : it->second)
                if (rec.cubes[p].stratum <= sc.stratum &&
                    (pick < 0 || rec.cubes[p].stratum > rec.cubes[static_cast<std::size_t>(pick)].stratum))
                    pick = static_cast<std::int64_t>(p);
            if (pick < 0) pick = static_cast<std::int64_t>(it->second.front());
            rec.container[idx] = pick;
            break;
        }
    }
}

double assembled_constant(double a, double v_a1, double u_a1, double delta_fraction, int m) {
    const double eps = 1.0 / (1.0 + 4.0 * v_a1);
    const double delta = delta_fraction * eps;
    const double nu = 1.0 / (1.0 + 4.0 * u_a1);
    const double first = std::pow(a, eps - delta) / (std::pow(a, eps - delta) - 1.0);
    const double last = std::pow(a, delta * nu) / (std::pow(a, delta * nu) - 1.0);
    return first * std::pow(2.0, 3.0 + nu) * std::pow(a, eps + 2.0) * std::pow(v_a1, 2.0 * eps + 2.0) *
           std::pow(u_a1, 2.0 * nu + 1.0) * last * (2.0 - std::pow(0.5, m));
}

bool ChainReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ChainCheck& c) { return c.passed; });
}

const ChainCheck& ChainReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("no chain check named " + name);
}

ChainReport verify_chain(const PrincipalCubeRecord& rec, const GridWeight& u, const GridWeight& v,
                         const GridFunction& g) {
    const Grid& grid = rec.grid;
    const double a = rec.options.a;
    const double V = rec.v_a1;
    const double U = rec.u_a1;
    const double eps = rec.epsilon;
    const double delta = rec.delta;
    const double nu = rec.nu;
    const auto ncell = static_cast<std::size_t>(grid.cells());
    const int strata = std::max(0, rec.top - rec.floor + 1);

    ChainReport rep;
    rep.c_eps = std::pow(a, 2.0 * eps - delta) / (std::pow(a, eps - delta) - 1.0) * 2.0 * std::pow(V, 2.0 * eps);
    rep.c9 = std::pow(2.0, 1.0 + nu) * std::pow(U, 2.0 * nu) * std::pow(a, delta * nu) / (std::pow(a, delta * nu) - 1.0);
    rep.power_product = std::pow(V, 4.0) * std::pow(U, 2.0);

    const GridFunction absg = abs_function(g);
    const GridFunction md_g = dyadic_maximal(absg);
    const std::vector<double> vval = v.cell_values();
    const std::vector<double> uval = u.cell_values();
    const GridWeight uv = product(u, v);
    auto weight_of = [&](const Cube& q) { return v.mass(q) * u.mass(q) / q.length(); };

    // The level set {M_d g > v} sits inside the Gamma cubes of the matching stratum.
    ChainCheck incl = named("levelset_inclusion"), levelset = named("levelset_bound");
    {
        std::vector<std::vector<bool>> covered(static_cast<std::size_t>(strata), std::vector<bool>(ncell, false));
        for (std::size_t idx : rec.gamma) {
            const CellRange cells = cells_of(grid, rec.cubes[idx].cube);
            auto& row = covered[static_cast<std::size_t>(rec.cubes[idx].stratum - rec.floor)];
            for (std::int64_t i = cells.begin; i < cells.end; ++i) row[static_cast<std::size_t>(i)] = true;
        }
        double lhs = 0.0;
        for (std::size_t i = 0; i < ncell; ++i) {
            const auto cell = static_cast<std::int64_t>(i);
            if (!(md_g[cell] > vval[i])) continue;
            lhs += uv.cell_mass(cell);
            int k = static_cast<int>(std::floor(std::log(vval[i]) / std::log(a)));
            while (std::pow(a, k) >= vval[i]) --k;
            while (std::pow(a, k + 1) < vval[i]) ++k;
            ++incl.evaluated;
            const bool in = k >= rec.floor && k <= rec.top && covered[static_cast<std::size_t>(k - rec.floor)][i];
            if (!in) {
                ++incl.failures;
                incl.passed = false;
            }
        }
        double rhs = 0.0;
        for (std::size_t idx : rec.gamma) rhs += weight_of(rec.cubes[idx].cube);
        rhs *= a * V;
        levelset.lhs = lhs;
        levelset.rhs = rhs;
        accumulate(levelset, lhs, rhs);
    }

    // Sandwich from the Gamma filter.
    ChainCheck sandwich = named("sandwich");
    sandwich.evaluated = rec.sandwich.checked;
    sandwich.failures = rec.sandwich.failures;
    sandwich.passed = rec.sandwich.passed();
    sandwich.worst_ratio = std::max(rec.sandwich.worst_lower, rec.sandwich.worst_upper);

    // v(E)/v(Q) <= 2 (|E|/|Q|)^eps on single cells and random unions inside Gamma_N cubes.
    ChainCheck decay = named("subset_decay");
    {
        std::mt19937_64 rng(rec.options.seed);
        for (std::size_t idx : rec.gamma) {
            const Cube& q = rec.cubes[idx].cube;
            const CellRange cells = cells_of(grid, q);
            const double total = v.mass(q);
            auto test = [&](double mass_e, std::int64_t count) {
                const double frac = static_cast<double>(count) / static_cast<double>(cells.size());
                accumulate(decay, mass_e / total, 2.0 * std::pow(frac, eps));
            };
            for (std::int64_t i = cells.begin; i < cells.end; ++i) test(v.cell_mass(i), 1);
            if (cells.size() < 2) continue;
            for (int s = 0; s < rec.options.subset_samples; ++s) {
                double mass_e = 0.0;
                std::int64_t count = 0;
                for (std::int64_t i = cells.begin; i < cells.end; ++i)
                    if (rng() & 1u) mass_e += v.cell_mass(i), ++count;
                if (count > 0) test(mass_e, count);
            }
        }
    }

    // Selection rule rechecked for every selected cube by a plain scan of Gamma_N.
    ChainCheck rule = named("selection_rule");
    for (std::size_t j = 0; j < rec.cubes.size(); ++j) {
        if (rec.selected_by[j] < 0) continue;
        const StratumCube& cand = rec.cubes[j];
        const StratumCube& top = rec.cubes[static_cast<std::size_t>(rec.selected_by[j])];
        const double top_avg = avg(u, top.cube);
        accumulate(rule, std::pow(a, (cand.stratum - top.stratum) * delta) * top_avg, avg(u, cand.cube) * (1.0 - kSlack));
        for (std::size_t l = 0; l < rec.cubes.size(); ++l) {
            const StratumCube& mid = rec.cubes[l];
            if (rec.options.reading == ChainReading::GammaN && !mid.in_gamma) continue;
            if (mid.cube == cand.cube || !nested_in(cand.cube, mid.cube) || !nested_in(mid.cube, top.cube)) continue;
            accumulate(rule, avg(u, mid.cube), std::pow(a, (mid.stratum - top.stratum) * delta) * top_avg);
        }
    }

    // Sparse domination of the Gamma_N sum, globally and per principal group.
    ChainCheck sparse = named("sparse_sum"), sparse_groups = named("sparse_groups");
    const std::vector<std::size_t> principal = rec.principal();
    {
        std::map<std::size_t, double> group;
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t idx : rec.gamma) {
            const double w = weight_of(rec.cubes[idx].cube);
            lhs += w;
            if (rec.container[idx] >= 0) group[static_cast<std::size_t>(rec.container[idx])] += w;
            else sparse_groups.passed = false, ++sparse_groups.failures;
        }
        for (std::size_t p : principal) rhs += weight_of(rec.cubes[p].cube);
        rhs *= rep.c_eps;
        sparse.lhs = lhs;
        sparse.rhs = rhs;
        accumulate(sparse, lhs, rhs);
        for (const auto& [p, sum] : group) accumulate(sparse_groups, sum, rep.c_eps * weight_of(rec.cubes[p].cube));
    }

    // J cubes per stratum: maximal cubes of {M_d g > a^k}.
    std::vector<std::vector<Cube>> jcubes(static_cast<std::size_t>(strata));
    std::vector<std::vector<std::int32_t>> jid(static_cast<std::size_t>(strata), std::vector<std::int32_t>(ncell, -1));
    for (int s = 0; s < strata; ++s) {
        const double height = std::pow(a, rec.floor + s);
        std::vector<bool> cells(ncell);
        for (std::size_t i = 0; i < ncell; ++i) cells[i] = md_g[static_cast<std::int64_t>(i)] > height;
        jcubes[static_cast<std::size_t>(s)] = maximal_cover(grid, cells);
        for (std::size_t c = 0; c < jcubes[static_cast<std::size_t>(s)].size(); ++c) {
            const CellRange r = cells_of(grid, jcubes[static_cast<std::size_t>(s)][c]);
            for (std::int64_t i = r.begin; i < r.end; ++i)
                jid[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] = static_cast<std::int32_t>(c);
        }
    }
    // Principal cubes grouped by (stratum, J cube).
    std::vector<std::map<std::int32_t, std::vector<std::size_t>>> pj(static_cast<std::size_t>(strata));
    for (std::size_t p : principal) {
        const auto s = static_cast<std::size_t>(rec.cubes[p].stratum - rec.floor);
        const std::int32_t j = jid[s][static_cast<std::size_t>(cells_of(grid, rec.cubes[p].cube).begin)];
        pj[s][j].push_back(p);
    }

    // Sum over Gamma_N <= C_eps a [v] int h |g|.
    ChainCheck hsum = named("h_integral");
    {
        double hg = 0.0;
        for (int s = 0; s < strata; ++s)
            for (const auto& [j, list] : pj[static_cast<std::size_t>(s)]) {
                const Cube& J = jcubes[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)];
                const CellRange r = cells_of(grid, J);
                double gmass = 0.0;
                for (std::int64_t i = r.begin; i < r.end; ++i) gmass += absg[i];
                gmass *= grid.cell_width();
                for (std::size_t p : list) hg += u.mass(rec.cubes[p].cube) / J.length() * gmass;
            }
        hsum.lhs = sparse.lhs;
        hsum.rhs = rep.c_eps * a * V * hg;
        accumulate(hsum, hsum.lhs, hsum.rhs);
    }

    // Per cell: the J cubes, their principal cubes, the doubling sequence k_m, block sums, growth and h(x).
    ChainCheck blocks = named("block_sum"), growth = named("growth_floor"), hb = named("h_bound");
    for (std::size_t i = 0; i < ncell; ++i) {
        int km = 0;
        int m = -1;
        double km_avg = 0.0;
        double block = 0.0;
        double h = 0.0;
        for (int s = 0; s < strata; ++s) {
            const std::int32_t j = jid[static_cast<std::size_t>(s)][i];
            if (j < 0) continue;
            auto it = pj[static_cast<std::size_t>(s)].find(j);
            if (it == pj[static_cast<std::size_t>(s)].end()) continue;
            const int l = rec.floor + s;
            const Cube& J = jcubes[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)];
            const double javg = avg(u, J);
            if (m < 0 || javg > 2.0 * km_avg) {
                if (m >= 0) accumulate(blocks, block, rep.c9);
                ++m;
                km = l;
                km_avg = javg;
                block = 0.0;
            }
            const double uj = u.mass(J);
            for (std::size_t p : it->second) {
                const Cube& I = rec.cubes[p].cube;
                block += u.mass(I) / uj;
                h += u.mass(I) / J.length();
                accumulate(growth, std::pow(a, (l - km) * delta) / (2.0 * U) * javg, avg(u, I) * (1.0 - kSlack));
            }
        }
        if (m < 0) continue;
        accumulate(blocks, block, rep.c9);
        rep.max_m = std::max(rep.max_m, m);
        accumulate(hb, h, 2.0 * rep.c9 * (2.0 - std::pow(0.5, m)) * U * uval[i]);
    }

    rep.assembled = assembled_constant(a, V, U, rec.options.delta_fraction, rep.max_m);
    rep.checks = {incl, levelset, sandwich, decay, rule, sparse, sparse_groups, hsum, blocks, growth, hb};
    return rep;
}

}  // namespace weaklab
