#pragma once

#include <cstdint>
#include <vector>

namespace weaklab {

/// Dyadic partition of [0, 2^J) into 2^{J+L} cells of width 2^{-L}.
/// Cubes live on levels -J (the whole domain) through L (single cells).
struct Grid {
    int J = 0;
    int L = 0;

    [[nodiscard]] std::int64_t cells() const { return std::int64_t{1} << (J + L); }
    [[nodiscard]] double cell_width() const;
    [[nodiscard]] double domain_length() const;
    [[nodiscard]] int min_level() const { return -J; }
    [[nodiscard]] int max_level() const { return L; }
    [[nodiscard]] int level_count() const { return J + L + 1; }
    /// Number of cubes on level k: 2^{J+k}.
    [[nodiscard]] std::int64_t cubes_on_level(int k) const { return std::int64_t{1} << (J + k); }
    /// Total cubes over all levels, 2^{J+L+1} - 1.
    [[nodiscard]] std::int64_t total_cubes() const { return (std::int64_t{1} << (J + L + 1)) - 1; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Dyadic interval [m 2^{-k}, (m+1) 2^{-k}). Endpoints are exact in double
/// for every grid accepted by build_grid.
struct Cube {
    int level = 0;
    std::int64_t index = 0;

    [[nodiscard]] double length() const;
    [[nodiscard]] double left() const;
    [[nodiscard]] double right() const;

    friend bool operator==(const Cube&, const Cube&) = default;
    friend auto operator<=>(const Cube&, const Cube&) = default;
};

/// Half-open range of cell indices.
struct CellRange {
    std::int64_t begin = 0;
    std::int64_t end = 0;

    [[nodiscard]] std::int64_t size() const { return end - begin; }
    [[nodiscard]] bool contains(std::int64_t i) const { return begin <= i && i < end; }
    friend bool operator==(const CellRange&, const CellRange&) = default;
};

inline constexpr int kMaxJ = 20;
inline constexpr int kMaxL = 20;
inline constexpr int kMaxDepth = 24;

/// Throws ConfigError unless 0 <= J <= 20, 0 <= L <= 20 and J + L <= 24.
[[nodiscard]] Grid build_grid(int J, int L);

[[nodiscard]] bool contains(const Grid& grid, const Cube& q);
[[nodiscard]] Cube root(const Grid& grid);
/// Throws DomainError for the root cube.
[[nodiscard]] Cube parent(const Grid& grid, const Cube& q);
[[nodiscard]] Cube sibling(const Cube& q);
[[nodiscard]] Cube left_child(const Cube& q);
[[nodiscard]] Cube right_child(const Cube& q);
[[nodiscard]] Cube cell_cube(const Grid& grid, std::int64_t cell);
/// Level-k ancestor of q (k <= q.level).
[[nodiscard]] Cube ancestor_at(const Cube& q, int k);
/// outer contains inner (non-strict).
[[nodiscard]] bool nested_in(const Cube& inner, const Cube& outer);
[[nodiscard]] bool disjoint(const Cube& a, const Cube& b);

/// All 2^{J+k} cubes of level k, left to right. Throws ConfigError for k out of range.
[[nodiscard]] std::vector<Cube> dyadic_cubes(const Grid& grid, int k);
[[nodiscard]] CellRange cells_of(const Grid& grid, const Cube& q);

/// Position of q in a flat level-major array over all cubes (root first).
[[nodiscard]] inline std::size_t node_index(const Grid& grid, const Cube& q) {
    return (std::size_t{1} << (grid.J + q.level)) - 1 + static_cast<std::size_t>(q.index);
}

}  // namespace weaklab
