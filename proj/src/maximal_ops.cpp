#include "weaklab/maximal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace weaklab {

namespace {

std::vector<double> transformed(std::span<const double> v, AverageMode mode) {
    std::vector<double> out(v.begin(), v.end());
    if (mode == AverageMode::Absolute)
        for (double& x : out) x = std::abs(x);
    return out;
}

double cube_average(double sum, const Grid& grid, const Cube& q, AverageMode mode) {
    const double avg = std::ldexp(sum, -(grid.L - q.level));
    return mode == AverageMode::Signed ? std::abs(avg) : avg;
}

// Pairwise recursive sum; reproduces DyadicTree's summation order without the table.
double recursive_sum(std::span<const double> cells, const Grid& grid, const Cube& q) {
    if (q.level == grid.L) return cells[static_cast<std::size_t>(q.index)];
    return recursive_sum(cells, grid, left_child(q)) + recursive_sum(cells, grid, right_child(q));
}

void naive_uncentered(std::span<const double> a, std::vector<double>& out) {
    const std::size_t n = a.size();
    out.assign(n, 0.0);
    std::vector<double> avg(n + 1);
    for (std::size_t lo = 0; lo < n; ++lo) {
        double s = 0.0;
        for (std::size_t hi = lo + 1; hi <= n; ++hi) {
            s += a[hi - 1];
            avg[hi] = s / static_cast<double>(hi - lo);
        }
        double best = 0.0;
        for (std::size_t hi = n; hi > lo; --hi) {
            best = std::max(best, avg[hi]);
            out[hi - 1] = std::max(out[hi - 1], best);
        }
    }
}

// Divide and conquer over interval space. Prefix points P_j = (j, S_j); the
// average of cells [a, b) is the slope P_a -> P_b. Intervals crossing the
// midpoint are handled with hull tangents, the rest recursively.
class HullUncentered {
public:
    explicit HullUncentered(std::span<const double> a) : n_(a.size()), prefix_(a.size() + 1, 0.0L), out_(a.size(), 0.0) {
        for (std::size_t i = 0; i < n_; ++i) prefix_[i + 1] = prefix_[i] + static_cast<long double>(a[i]);
        for (std::size_t i = 0; i < n_; ++i) out_[i] = a[i];
    }

    std::vector<double> run() {
        if (n_ > 1) solve(0, n_);
        return std::move(out_);
    }

private:
    using Index = std::size_t;

    [[nodiscard]] long double slope(Index a, Index b) const {
        return (prefix_[b] - prefix_[a]) / static_cast<long double>(b - a);
    }

    // cross of (b - a) x (c - a) for prefix points
    [[nodiscard]] long double cross(Index a, Index b, Index c) const {
        const long double x1 = static_cast<long double>(b) - static_cast<long double>(a);
        const long double y1 = prefix_[b] - prefix_[a];
        const long double x2 = static_cast<long double>(c) - static_cast<long double>(a);
        const long double y2 = prefix_[c] - prefix_[a];
        return x1 * y2 - y1 * x2;
    }

    void solve(Index lo, Index hi) {
        if (hi - lo < 2) return;
        const Index mid = lo + (hi - lo) / 2;

        // Left cells: max over a <= i of the best slope from P_a to {P_b : b in [mid+1, hi]}.
        upper_.clear();
        for (Index b = mid + 1; b <= hi; ++b) {
            while (upper_.size() >= 2 && cross(upper_[upper_.size() - 2], upper_.back(), b) >= 0) upper_.pop_back();
            upper_.push_back(b);
        }
        long double run = 0.0L;
        for (Index a = lo; a < mid; ++a) {
            run = std::max(run, tangent_right(a));
            out_[a] = std::max(out_[a], static_cast<double>(run));
        }

        // Right cells: max over b > i of the best slope from {P_a : a in [lo, mid-1]} to P_b.
        lower_.clear();
        for (Index a = lo; a < mid; ++a) {
            while (lower_.size() >= 2 && cross(lower_[lower_.size() - 2], lower_.back(), a) <= 0) lower_.pop_back();
            lower_.push_back(a);
        }
        run = 0.0L;
        for (Index b = hi; b > mid; --b) {
            run = std::max(run, tangent_left(b));
            out_[b - 1] = std::max(out_[b - 1], static_cast<double>(run));
        }

        solve(lo, mid);
        solve(mid, hi);
    }

    // Slope along the upper hull seen from a point to its left is unimodal.
    [[nodiscard]] long double tangent_right(Index a) const {
        std::size_t l = 0, r = upper_.size() - 1;
        while (l < r) {
            const std::size_t m = (l + r) / 2;
            if (slope(a, upper_[m + 1]) > slope(a, upper_[m])) l = m + 1; else r = m;
        }
        return slope(a, upper_[l]);
    }

    [[nodiscard]] long double tangent_left(Index b) const {
        std::size_t l = 0, r = lower_.size() - 1;
        while (l < r) {
            const std::size_t m = (l + r) / 2;
            if (slope(lower_[m + 1], b) > slope(lower_[m], b)) l = m + 1; else r = m;
        }
        return slope(lower_[l], b);
    }

    std::size_t n_;
    std::vector<long double> prefix_;
    std::vector<double> out_;
    std::vector<Index> upper_;
    std::vector<Index> lower_;
};

}  // namespace

GridFunction dyadic_maximal(const GridFunction& f, AverageMode mode) {
    const Grid& grid = f.grid();
    const std::vector<double> cells = transformed(f.values(), mode);
    const DyadicTree<double> sums(grid, std::span<const double>(cells), std::plus<double>{});

    // running[m] holds the max over ancestors down to the current level
    std::vector<double> running{cube_average(sums[root(grid)], grid, root(grid), mode)};
    for (int k = grid.min_level() + 1; k <= grid.L; ++k) {
        std::vector<double> next(static_cast<std::size_t>(grid.cubes_on_level(k)));
        for (std::size_t m = 0; m < next.size(); ++m) {
            const Cube q{k, static_cast<std::int64_t>(m)};
            next[m] = std::max(running[m / 2], cube_average(sums[q], grid, q, mode));
        }
        running = std::move(next);
    }
    return GridFunction(grid, std::move(running));
}

std::vector<double> uncentered_maximal_values(std::span<const double> cells, UncenteredAlgorithm algorithm) {
    std::vector<double> a(cells.begin(), cells.end());
    for (double& x : a) x = std::abs(x);
    if (algorithm == UncenteredAlgorithm::Auto)
        algorithm = static_cast<std::int64_t>(a.size()) <= kNaiveUncenteredCeiling ? UncenteredAlgorithm::Naive
                                                                                  : UncenteredAlgorithm::Hull;
    if (algorithm == UncenteredAlgorithm::Hull) return HullUncentered(a).run();
    std::vector<double> out;
    naive_uncentered(a, out);
    return out;
}

GridFunction uncentered_maximal(const GridFunction& f, UncenteredAlgorithm algorithm) {
    return GridFunction(f.grid(), uncentered_maximal_values(f.values(), algorithm));
}

WeightedMaximal weighted_dyadic_maximal(const GridFunction& f, const GridWeight& v) {
    const Grid& grid = f.grid();
    const auto n = static_cast<std::size_t>(grid.cells());
    std::vector<double> fv(n);
    for (std::size_t i = 0; i < n; ++i) fv[i] = std::abs(f.values()[i]) * v.cell_mass(static_cast<std::int64_t>(i));
    const DyadicTree<double> num(grid, std::span<const double>(fv), std::plus<double>{});

    std::int64_t skipped = 0;
    auto ratio = [&](const Cube& q) {
        const double den = v.mass(q);
        if (!(den > 0.0) || !std::isfinite(den)) {
            ++skipped;
            return 0.0;
        }
        return num[q] / den;
    };
    std::vector<double> running{ratio(root(grid))};
    for (int k = grid.min_level() + 1; k <= grid.L; ++k) {
        std::vector<double> next(static_cast<std::size_t>(grid.cubes_on_level(k)));
        for (std::size_t m = 0; m < next.size(); ++m)
            next[m] = std::max(running[m / 2], ratio(Cube{k, static_cast<std::int64_t>(m)}));
        running = std::move(next);
    }
    return WeightedMaximal{GridFunction(grid, std::move(running)), skipped};
}

namespace oracle {

GridFunction dyadic_maximal(const GridFunction& f, AverageMode mode) {
    const Grid& grid = f.grid();
    const std::vector<double> cells = transformed(f.values(), mode);
    std::vector<double> out(cells.size(), 0.0);
    for (std::int64_t i = 0; i < grid.cells(); ++i) {
        double best = 0.0;
        bool first = true;
        for (int k = grid.min_level(); k <= grid.L; ++k) {
            const Cube q = ancestor_at(cell_cube(grid, i), k);
            const double avg = cube_average(recursive_sum(cells, grid, q), grid, q, mode);
            best = first ? avg : std::max(best, avg);
            first = false;
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return GridFunction(grid, std::move(out));
}

std::vector<double> uncentered_maximal_values(std::span<const double> cells) {
    const std::size_t n = cells.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t lo = 0; lo < n; ++lo) {
        for (std::size_t hi = lo + 1; hi <= n; ++hi) {
            double s = 0.0;
            for (std::size_t c = lo; c < hi; ++c) s += std::abs(cells[c]);
            const double avg = s / static_cast<double>(hi - lo);
            for (std::size_t i = lo; i < hi; ++i) out[i] = std::max(out[i], avg);
        }
    }
    return out;
}

GridFunction uncentered_maximal(const GridFunction& f) {
    return GridFunction(f.grid(), uncentered_maximal_values(f.values()));
}

WeightedMaximal weighted_dyadic_maximal(const GridFunction& f, const GridWeight& v) {
    const Grid& grid = f.grid();
    const auto n = static_cast<std::size_t>(grid.cells());
    std::vector<double> fv(n), vm(n);
    for (std::size_t i = 0; i < n; ++i) {
        vm[i] = v.cell_mass(static_cast<std::int64_t>(i));
        fv[i] = std::abs(f.values()[i]) * vm[i];
    }
    std::vector<double> out(n, 0.0);
    std::vector<bool> skipped(static_cast<std::size_t>(grid.total_cubes()), false);
    for (std::int64_t i = 0; i < grid.cells(); ++i) {
        double best = 0.0;
        for (int k = grid.min_level(); k <= grid.L; ++k) {
            const Cube q = ancestor_at(cell_cube(grid, i), k);
            const double den = recursive_sum(vm, grid, q);
            if (!(den > 0.0) || !std::isfinite(den)) {
                skipped[node_index(grid, q)] = true;
                continue;
            }
            best = std::max(best, recursive_sum(fv, grid, q) / den);
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return WeightedMaximal{GridFunction(grid, std::move(out)),
                           static_cast<std::int64_t>(std::count(skipped.begin(), skipped.end(), true))};
}

}  // namespace oracle

}  // namespace weaklab
