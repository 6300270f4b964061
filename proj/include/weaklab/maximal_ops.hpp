#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "weaklab/weight_model.hpp"

namespace weaklab {

/// Absolute: cube average of |f| (M_d). Signed: |cube average of f| (the
/// tilde variant, which sees cancellation).
enum class AverageMode { Absolute, Signed };

/// Dyadic maximal function over levels -J..L, one top-down pass.
[[nodiscard]] GridFunction dyadic_maximal(const GridFunction& f, AverageMode mode = AverageMode::Absolute);

enum class UncenteredAlgorithm {
    Auto,   ///< Naive up to kNaiveUncenteredCeiling cells, Hull above.
    Naive,  ///< O(N^2) sweep over all grid-endpoint intervals.
    Hull,   ///< O(N log^2 N) divide and conquer with convex-hull tangents.
};
inline constexpr std::int64_t kNaiveUncenteredCeiling = 4096;

/// Uncentered maximal function of a piecewise-constant |f|: per cell, the max
/// average over intervals with cell-boundary endpoints containing the cell.
[[nodiscard]] GridFunction uncentered_maximal(const GridFunction& f,
                                              UncenteredAlgorithm algorithm = UncenteredAlgorithm::Auto);
/// Same on a bare array of cell values (unit cells; averages are scale free).
[[nodiscard]] std::vector<double> uncentered_maximal_values(std::span<const double> cells,
                                                            UncenteredAlgorithm algorithm = UncenteredAlgorithm::Auto);

struct WeightedMaximal {
    GridFunction values;
    std::int64_t skipped_cubes = 0;  ///< cubes with zero v-mass
};

/// Dyadic maximal function w.r.t. v dx: max over ancestors of (int_Q |f| v) / v(Q).
[[nodiscard]] WeightedMaximal weighted_dyadic_maximal(const GridFunction& f, const GridWeight& v);

/// Exhaustive versions of the operators above. They share the summation order
/// of the fast paths (pairwise over the dyadic tree, left-to-right over
/// intervals) so results agree bitwise with the default algorithms.
namespace oracle {

[[nodiscard]] GridFunction dyadic_maximal(const GridFunction& f, AverageMode mode = AverageMode::Absolute);
[[nodiscard]] GridFunction uncentered_maximal(const GridFunction& f);
[[nodiscard]] std::vector<double> uncentered_maximal_values(std::span<const double> cells);
[[nodiscard]] WeightedMaximal weighted_dyadic_maximal(const GridFunction& f, const GridWeight& v);

}  // namespace oracle

}  // namespace weaklab
