#include "weaklab/weak_norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "weaklab/errors.hpp"
#include "weaklab/maximal_ops.hpp"

namespace weaklab {

WeakNorm weak_l1_norm(std::span<const double> h, std::span<const double> cell_mass) {
    if (h.size() != cell_mass.size()) throw ConfigError("function and measure sizes differ");
    for (std::size_t i = 0; i < h.size(); ++i)
        if (h[i] < 0.0) throw DomainError("weak norm needs h >= 0 (cell " + std::to_string(i) + ")");

    std::vector<std::size_t> order(h.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h[a] > h[b]; });

    WeakNorm best;
    double cumulative = 0.0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        cumulative += cell_mass[order[pos]];
        const double s = h[order[pos]];
        const bool group_end = pos + 1 == order.size() || h[order[pos + 1]] != s;
        if (!group_end || s == 0.0) continue;
        const double value = s * cumulative;
        if (value > best.value) best = WeakNorm{value, s, cumulative};
    }
    return best;
}

WeakNorm weak_l1_norm(const GridFunction& h, const GridWeight& mu) {
    if (!(h.grid() == mu.grid())) throw ConfigError("function and measure live on different grids");
    const std::vector<double> m = mu.cell_masses();
    return weak_l1_norm(h.values(), m);
}

double lp_norm(const GridFunction& h, const GridWeight& mu, double p) {
    if (!(p >= 1.0)) throw ConfigError("L^p norm needs p >= 1");
    double total = 0.0;
    for (std::int64_t i = 0; i < h.size(); ++i) total += std::pow(std::abs(h[i]), p) * mu.cell_mass(i);
    return p == 1.0 ? total : std::pow(total, 1.0 / p);
}

double l1_norm(const GridFunction& h, const GridWeight& mu) { return lp_norm(h, mu, 1.0); }

std::string to_string(OperatorVariant v) { return v == OperatorVariant::Dyadic ? "Md" : "M"; }

GridFunction mixed_quotient(const GridFunction& f, const GridWeight& v, OperatorVariant variant) {
    const Grid& grid = f.grid();
    const auto n = static_cast<std::size_t>(grid.cells());
    std::vector<double> fv(n), rep(n);
    for (std::size_t i = 0; i < n; ++i) {
        rep[i] = v.cell_value(static_cast<std::int64_t>(i));
        if (!(rep[i] > 0.0)) throw DomainError("weight vanishes on cell " + std::to_string(i));
        fv[i] = f.values()[i] * rep[i];
    }
    const GridFunction m = variant == OperatorVariant::Dyadic ? dyadic_maximal(GridFunction(grid, std::move(fv)))
                                                              : uncentered_maximal(GridFunction(grid, std::move(fv)));
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = m.values()[i] / rep[i];
    return GridFunction(grid, std::move(h));
}

WeakTypeReport mixed_ratio(const GridFunction& f, const GridWeight& u, const GridWeight& v, OperatorVariant variant) {
    if (!(f.grid() == u.grid()) || !(f.grid() == v.grid())) throw ConfigError("inputs live on different grids");
    const GridWeight uv = product(u, v);
    const WeakNorm weak = weak_l1_norm(mixed_quotient(f, v, variant), uv);
    WeakTypeReport rep;
    rep.variant = variant;
    rep.numerator = weak.value;
    rep.t_star = weak.t_star;
    rep.levelset_mass = weak.levelset_mass;
    rep.denominator = l1_norm(f, uv);
    rep.ratio = rep.denominator > 0.0 ? rep.numerator / rep.denominator : 0.0;
    return rep;
}

}  // namespace weaklab
