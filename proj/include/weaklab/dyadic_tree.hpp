#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "weaklab/dyadic_grid.hpp"

namespace weaklab {

// Per-cube aggregate of per-cell data, built bottom-up so that every node is
// exactly combine(left child, right child). Sums therefore satisfy
// value(parent) == value(Q) + value(sibling) bitwise.
template <class T>
class DyadicTree {
public:
    DyadicTree() = default;

    template <class Combine>
    DyadicTree(const Grid& grid, std::span<const T> cells, Combine combine)
        : grid_(grid), nodes_(static_cast<std::size_t>(grid.total_cubes())) {
        assert(static_cast<std::int64_t>(cells.size()) == grid.cells());
        const std::size_t base = static_cast<std::size_t>(grid.cells()) - 1;
        for (std::size_t i = 0; i < cells.size(); ++i) nodes_[base + i] = cells[i];
        for (int k = grid.L - 1; k >= -grid.J; --k) {
            const std::size_t off = (std::size_t{1} << (grid.J + k)) - 1;
            const std::size_t child_off = (std::size_t{1} << (grid.J + k + 1)) - 1;
            const std::size_t count = std::size_t{1} << (grid.J + k);
            for (std::size_t m = 0; m < count; ++m)
                nodes_[off + m] = combine(nodes_[child_off + 2 * m], nodes_[child_off + 2 * m + 1]);
        }
    }

    [[nodiscard]] const T& operator[](const Cube& q) const { return nodes_[node_index(grid_, q)]; }
    [[nodiscard]] const T& node(std::size_t i) const { return nodes_[i]; }
    [[nodiscard]] const Grid& grid() const { return grid_; }
    [[nodiscard]] bool empty() const { return nodes_.empty(); }

private:
    Grid grid_{};
    std::vector<T> nodes_;
};

}  // namespace weaklab
