#include "weaklab/dyadic_grid.hpp"

#include <cmath>
#include <string>

#include "weaklab/errors.hpp"

namespace weaklab {

double Grid::cell_width() const { return std::ldexp(1.0, -L); }
double Grid::domain_length() const { return std::ldexp(1.0, J); }

double Cube::length() const { return std::ldexp(1.0, -level); }
double Cube::left() const { return std::ldexp(static_cast<double>(index), -level); }
double Cube::right() const { return std::ldexp(static_cast<double>(index + 1), -level); }

Grid build_grid(int J, int L) {
    if (J < 0 || J > kMaxJ || L < 0 || L > kMaxL || J + L > kMaxDepth) {
        throw ConfigError("grid parameters out of range: J=" + std::to_string(J) +
                          " L=" + std::to_string(L) + " (need 0<=J<=20, 0<=L<=20, J+L<=24)");
    }
    return Grid{J, L};
}

bool contains(const Grid& grid, const Cube& q) {
    return q.level >= grid.min_level() && q.level <= grid.max_level() && q.index >= 0 &&
           q.index < grid.cubes_on_level(q.level);
}

Cube root(const Grid& grid) { return Cube{-grid.J, 0}; }

Cube parent(const Grid& grid, const Cube& q) {
    if (q.level <= grid.min_level()) throw DomainError("the root cube has no parent");
    return Cube{q.level - 1, q.index / 2};
}

Cube sibling(const Cube& q) { return Cube{q.level, q.index ^ 1}; }
Cube left_child(const Cube& q) { return Cube{q.level + 1, 2 * q.index}; }
Cube right_child(const Cube& q) { return Cube{q.level + 1, 2 * q.index + 1}; }

Cube cell_cube(const Grid& grid, std::int64_t cell) { return Cube{grid.L, cell}; }

Cube ancestor_at(const Cube& q, int k) { return Cube{k, q.index >> (q.level - k)}; }

bool nested_in(const Cube& inner, const Cube& outer) {
    return inner.level >= outer.level && ancestor_at(inner, outer.level).index == outer.index;
}

bool disjoint(const Cube& a, const Cube& b) { return !nested_in(a, b) && !nested_in(b, a); }

std::vector<Cube> dyadic_cubes(const Grid& grid, int k) {
    if (k < grid.min_level() || k > grid.max_level())
        throw ConfigError("level " + std::to_string(k) + " outside [" +
                          std::to_string(grid.min_level()) + ", " + std::to_string(grid.max_level()) + "]");
    std::vector<Cube> out;
    const auto n = grid.cubes_on_level(k);
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t m = 0; m < n; ++m) out.push_back(Cube{k, m});
    return out;
}

CellRange cells_of(const Grid& grid, const Cube& q) {
    const int shift = grid.L - q.level;
    return CellRange{q.index << shift, (q.index + 1) << shift};
}

}  // namespace weaklab
