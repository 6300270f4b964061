#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "weaklab/ap_constants.hpp"

namespace weaklab::testing {

namespace {

template <class F>
double simpson(F&& f, double lo, double hi, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (hi - lo) / intervals;
    long double s = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(lo + i * h);
    return static_cast<double>(s * h / 3.0L);
}

bool strictly_inside(const Cube& in, const Cube& out) {
    if (in.level <= out.level) return false;
    return (in.index >> (in.level - out.level)) == out.index;
}

bool inside(const Cube& in, const Cube& out) { return in == out || strictly_inside(in, out); }

std::vector<Cube> all_cubes(const Grid& grid) {
    std::vector<Cube> out;
    for (int k = -grid.J; k <= grid.L; ++k)
        for (std::int64_t m = 0; m < (std::int64_t{1} << (grid.J + k)); ++m) out.push_back({k, m});
    return out;
}

std::pair<std::int64_t, std::int64_t> span_of(const Grid& grid, const Cube& q) {
    const std::int64_t w = std::int64_t{1} << (grid.L - q.level);
    return {q.index * w, (q.index + 1) * w};
}

}  // namespace

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double quad_power(double a, double b, double t, int intervals) {
    int m = 1;
    if (t > -1.0) m = std::max(1, static_cast<int>(std::ceil(2.0 / (t + 1.0))));
    const double lo = std::pow(a, 1.0 / m), hi = std::pow(b, 1.0 / m);
    auto f = [&](double y) { return y == 0.0 ? 0.0 : m * std::pow(y, m * (t + 1.0) - 1.0); };
    return simpson(f, lo, hi, intervals);
}

double quad_log(double a, double b, int intervals) {
    auto f = [](double y) { return y == 0.0 ? 0.0 : 4.0 * y * std::log(y); };
    return simpson(f, std::sqrt(a), std::sqrt(b), intervals);
}

std::vector<double> cube_values(const GridWeight& w, const Cube& q) {
    const auto [lo, hi] = span_of(w.grid(), q);
    std::vector<double> out;
    for (std::int64_t i = lo; i < hi; ++i) out.push_back(w.cell_value(i));
    return out;
}

double direct_ap(std::span<const double> vals, double p) {
    long double s = 0, d = 0;
    for (double x : vals) {
        s += x;
        d += std::pow(static_cast<long double>(x), -1.0L / (p - 1.0L));
    }
    const long double n = vals.size();
    return static_cast<double>((s / n) * std::pow(d / n, static_cast<long double>(p) - 1.0L));
}

double direct_a1(std::span<const double> vals) {
    long double s = 0;
    for (double x : vals) s += x;
    return static_cast<double>(s / vals.size() / *std::min_element(vals.begin(), vals.end()));
}

double direct_aexp(std::span<const double> vals) {
    long double s = 0, l = 0;
    for (double x : vals) {
        s += x;
        l += std::log(static_cast<long double>(x));
    }
    const long double n = vals.size();
    return static_cast<double>((s / n) * std::exp(-l / n));
}

double direct_fw(std::span<const double> vals) {
    const std::size_t m = vals.size();
    std::vector<long double> best(m, 0.0L);
    for (std::size_t i = 0; i < m; ++i) {
        long double s = 0;
        for (std::size_t j = i; j < m; ++j) {
            s += vals[j];
            const long double avg = s / (j - i + 1);
            for (std::size_t c = i; c <= j; ++c) best[c] = std::max(best[c], avg);
        }
    }
    long double num = 0, den = 0;
    for (std::size_t c = 0; c < m; ++c) num += best[c], den += vals[c];
    return static_cast<double>(num / den);
}

double direct_global(const GridWeight& w, double (*local)(std::span<const double>)) {
    double best = 0.0;
    for (const Cube& q : all_cubes(w.grid())) best = std::max(best, local(cube_values(w, q)));
    return best;
}

double direct_global_ap(const GridWeight& w, double p) {
    double best = 0.0;
    for (const Cube& q : all_cubes(w.grid())) best = std::max(best, direct_ap(cube_values(w, q), p));
    return best;
}

std::vector<Cube> cz_scan(const GridFunction& f, const GridWeight& v, double t) {
    const Grid& grid = f.grid();
    const mpq_class height(t);
    std::map<Cube, bool> exceeds;
    for (const Cube& q : all_cubes(grid)) {
        const auto [lo, hi] = span_of(grid, q);
        mpq_class s(0), m(0);
        for (std::int64_t i = lo; i < hi; ++i) {
            const mpq_class mass(v.cell_mass(i));
            s += abs(mpq_class(f[i])) * mass;
            m += mass;
        }
        exceeds[q] = s > height * m;
    }
    std::vector<Cube> out;
    for (const Cube& q : all_cubes(grid)) {
        if (!exceeds[q]) continue;
        bool ancestor_exceeds = false;
        for (int k = q.level - 1; k >= -grid.J; --k)
            ancestor_exceeds = ancestor_exceeds || exceeds[Cube{k, q.index >> (q.level - k)}];
        if (!ancestor_exceeds) out.push_back(q);
    }
    std::sort(out.begin(), out.end(), [](const Cube& a, const Cube& b) { return a.left() < b.left(); });
    return out;
}

double threshold_weak_norm(std::span<const double> h, std::span<const double> mass, std::span<const double> thresholds) {
    double best = 0.0;
    for (double t : thresholds) {
        double m = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i)
            if (h[i] > t) m += mass[i];
        best = std::max(best, t * m);
    }
    return best;
}

PrincipalOracle principal_scan(const GridFunction& g, const GridWeight& u, const GridWeight& v, double a,
                               double delta_fraction, ChainReading reading) {
    const Grid& grid = g.grid();
    const std::int64_t n = grid.cells();
    const double v_a1 = direct_global(v, direct_a1);
    const double delta = delta_fraction / (1.0 + 4.0 * v_a1);

    // Dyadic maxima cell by cell over every ancestor.
    std::vector<double> mv(n), mg(n);
    for (std::int64_t i = 0; i < n; ++i) {
        double bv = 0, bg = 0;
        for (int k = -grid.J; k <= grid.L; ++k) {
            const Cube q{k, i >> (grid.L - k)};
            const auto [lo, hi] = span_of(grid, q);
            double sv = 0, sg = 0;
            for (std::int64_t c = lo; c < hi; ++c) sv += v.cell_value(c), sg += std::abs(g[c]);
            bv = std::max(bv, sv / (hi - lo));
            bg = std::max(bg, sg / (hi - lo));
        }
        mv[i] = bv;
        mg[i] = bg;
    }
    double min_v = v.cell_value(0);
    for (std::int64_t i = 0; i < n; ++i) min_v = std::min(min_v, v.cell_value(i));
    int k = -4000;
    while (std::pow(a, k + 1) < min_v) ++k;

    struct Pair {
        int k;
        Cube q;
        bool gamma;
    };
    std::vector<Pair> pairs;
    for (;; ++k) {
        const double h = std::pow(a, k);
        auto full = [&](const Cube& q) {
            const auto [lo, hi] = span_of(grid, q);
            for (std::int64_t c = lo; c < hi; ++c)
                if (!(mv[c] > h && mg[c] > h)) return false;
            return true;
        };
        bool any = false;
        for (const Cube& q : all_cubes(grid)) {
            if (!full(q)) continue;
            if (q.level > -grid.J && full(Cube{q.level - 1, q.index / 2})) continue;
            const auto [lo, hi] = span_of(grid, q);
            bool gamma = false;
            for (std::int64_t c = lo; c < hi; ++c) gamma = gamma || v.cell_value(c) <= std::pow(a, k + 1);
            pairs.push_back({k, q, gamma});
            any = true;
        }
        if (!any) break;
    }

    auto uavg = [&](const Cube& q) {
        const auto [lo, hi] = span_of(grid, q);
        double s = 0;
        for (std::int64_t c = lo; c < hi; ++c) s += u.cell_mass(c);
        return s / q.length();
    };

    PrincipalOracle out;
    std::vector<int> gen(pairs.size(), -1);
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!pairs[i].gamma) continue;
        out.gamma.insert({pairs[i].k, pairs[i].q.level, pairs[i].q.index});
        bool maximal = true;
        for (std::size_t j = 0; j < pairs.size(); ++j)
            if (pairs[j].gamma && strictly_inside(pairs[i].q, pairs[j].q)) maximal = false;
        if (maximal) current.push_back(i);
    }
    for (int n_gen = 0; !current.empty(); ++n_gen) {
        for (std::size_t i : current) gen[i] = n_gen;
        std::vector<std::size_t> next;
        for (std::size_t c = 0; c < pairs.size(); ++c) {
            if (!pairs[c].gamma || gen[c] >= 0) continue;
            bool chosen = false;
            for (std::size_t s : current) {
                if (!strictly_inside(pairs[c].q, pairs[s].q)) continue;
                const double top = uavg(pairs[s].q);
                if (!(uavg(pairs[c].q) > std::pow(a, (pairs[c].k - pairs[s].k) * delta) * top)) continue;
                bool ok = true;
                for (const Pair& mid : pairs) {
                    if (reading == ChainReading::GammaN && !mid.gamma) continue;
                    if (strictly_inside(pairs[c].q, mid.q) && inside(mid.q, pairs[s].q) &&
                        !(uavg(mid.q) <= std::pow(a, (mid.k - pairs[s].k) * delta) * top))
                        ok = false;
                }
                chosen = chosen || ok;
            }
            if (chosen) next.push_back(c);
        }
        current = next;
    }
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (gen[i] >= 0) out.principal.insert({pairs[i].k, pairs[i].q.level, pairs[i].q.index, gen[i]});
    return out;
}

GridWeight random_weight(const Grid& grid, std::mt19937_64& rng) {
    const std::int64_t n = grid.cells();
    const int max_shift = static_cast<int>(std::min<std::int64_t>(6, grid.J + grid.L));
    const std::int64_t blocks = std::int64_t{1} << static_cast<int>(uniform(rng, 0, max_shift + 1));
    const double spread = uniform(rng, 0.1, 1.5);
    std::vector<double> bv(static_cast<std::size_t>(std::min(blocks, n)));
    for (double& x : bv) {
        // Irwin-Hall approximation of a standard gaussian keeps the stream portable.
        double z = -6.0;
        for (int i = 0; i < 12; ++i) z += uniform(rng, 0, 1);
        x = std::exp(spread * z);
    }
    std::vector<double> c(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = bv[static_cast<std::size_t>(i * bv.size() / n)];
    return GridWeight(grid, std::move(c), 0.0);
}

GridWeight random_a1_weight(const Grid& grid, std::mt19937_64& rng, double max_a1) {
    const std::int64_t n = grid.cells();
    for (int attempt = 0;; ++attempt) {
        std::vector<double> c(static_cast<std::size_t>(n));
        const int family = static_cast<int>(uniform(rng, 0, 3));
        if (family == 0) {
            const GridWeight w = random_weight(grid, rng);
            for (std::int64_t i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = w.cell_value(i);
        } else if (family == 1) {
            // decreasing power profile sampled at cell midpoints, anchored at a random cell
            const double s = uniform(rng, -0.8, -0.05);
            const auto anchor = static_cast<std::int64_t>(uniform(rng, 0, static_cast<double>(n)));
            for (std::int64_t i = 0; i < n; ++i)
                c[static_cast<std::size_t>(i)] = std::pow(std::abs(static_cast<double>(i - anchor)) + 0.5, s);
        } else {
            // a dip of height alpha on a random dyadic cube
            const double alpha = uniform(rng, 0.05, 1.0);
            const int level = static_cast<int>(uniform(rng, -grid.J, grid.L + 1));
            const auto m = static_cast<std::int64_t>(uniform(rng, 0, static_cast<double>(std::int64_t{1} << (grid.J + level))));
            const auto [lo, hi] = span_of(grid, Cube{level, m});
            for (std::int64_t i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = (i >= lo && i < hi) ? alpha : 1.0;
        }
        GridWeight w(grid, std::move(c), 0.0);
        if (direct_global(w, direct_a1) <= max_a1) return w;
    }
}

GridFunction random_function(const Grid& grid, std::mt19937_64& rng, double density, bool allow_negative) {
    std::vector<double> vals(static_cast<std::size_t>(grid.cells()), 0.0);
    for (double& x : vals) {
        if (uniform(rng, 0, 1) >= density) continue;
        x = allow_negative ? uniform(rng, -1.0, 1.0) : uniform(rng, 0.0, 1.0);
    }
    return GridFunction(grid, std::move(vals));
}

}  // namespace weaklab::testing
