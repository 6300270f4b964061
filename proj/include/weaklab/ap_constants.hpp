#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weaklab/weight_model.hpp"

namespace weaklab {

enum class ConstantTag { A1, Ap, AinfExp, AinfFW, Mixed };

struct ConstantKind {
    ConstantTag tag = ConstantTag::A1;
    double p = 2.0;      // Ap, Mixed
    double alpha = 1.0;  // Mixed: exponent on the A_p factor
    double beta = 0.0;   // Mixed: exponent on the exponential A_inf factor

    static ConstantKind a1() { return {ConstantTag::A1}; }
    static ConstantKind ap(double p) { return {ConstantTag::Ap, p}; }
    static ConstantKind ainf_exp() { return {ConstantTag::AinfExp}; }
    static ConstantKind ainf_fw() { return {ConstantTag::AinfFW}; }
    static ConstantKind mixed(double p, double alpha, double beta) { return {ConstantTag::Mixed, p, alpha, beta}; }
};

/// Throws ConfigError for p <= 1 (where needed) or negative mixed exponents.
void validate(const ConstantKind& kind);
[[nodiscard]] std::string to_string(const ConstantKind& kind);

// Local constants on one dyadic cube. A divergent ingredient gives +inf.
[[nodiscard]] double ap_local(const GridWeight& w, const Cube& q, double p);
[[nodiscard]] double a1_local(const GridWeight& w, const Cube& q);
[[nodiscard]] double ainf_exp_local(const GridWeight& w, const Cube& q);
/// (1/w(Q)) int_Q M(chi_Q w). Piecewise-constant weights only (ConfigError otherwise).
[[nodiscard]] double ainf_fw_local(const GridWeight& w, const Cube& q);
[[nodiscard]] double mixed_local(const GridWeight& w, const Cube& q, double p, double alpha, double beta);
[[nodiscard]] double local_constant(const GridWeight& w, const Cube& q, const ConstantKind& kind);

struct LevelMaximum {
    int level = 0;
    double value = 0.0;
    Cube cube;
};

struct ConstantReport {
    ConstantKind kind;
    double value = 0.0;
    Cube argmax;
    std::vector<LevelMaximum> per_level;  ///< one row per level, coarsest first
    int min_level = 0;
    int max_level = 0;

    [[nodiscard]] std::string truncation_note() const;
};

/// Supremum over every dyadic cube of the grid. Ties go to the coarsest level,
/// then the leftmost cube. Missing dual exponents are cached on a private copy.
[[nodiscard]] ConstantReport global_constant(const GridWeight& w, const ConstantKind& kind);

/// Local constants of every cube in node order (see node_index).
[[nodiscard]] std::vector<double> local_constants(const GridWeight& w, const ConstantKind& kind);

struct ReverseHolderReport {
    double a1 = 0.0;
    double r = 0.0;        ///< 1 + 1/(4 [w]_A1)
    double epsilon = 0.0;  ///< 1 / (1 + 4 [w]_A1)
    double max_ratio = 0.0;  ///< max over Q of (avg w^r)^{1/r} / (2 avg w)
    Cube worst;
    std::int64_t failures = 0;
    double max_subset_ratio = 0.0;  ///< max of (w(E)/w(Q)) / (2 (|E|/|Q|)^eps)
    std::int64_t subset_samples = 0;
    std::int64_t subset_failures = 0;

    [[nodiscard]] bool passed() const { return failures == 0 && subset_failures == 0; }
};

/// Checks the A_1 reverse Hoelder inequality on every dyadic cube and its
/// consequence w(E)/w(Q) <= 2 (|E|/|Q|)^eps on E = each single cell of Q plus
/// subset_samples_per_cube random cell unions.
[[nodiscard]] ReverseHolderReport reverse_holder_check(const GridWeight& w, std::uint64_t seed = 0,
                                                       int subset_samples_per_cube = 64);

struct DoublingReport {
    double p = 1.0;
    double constant = 0.0;  ///< [v]_{A_p} ([v]_{A_1} for p = 1)
    double bound = 0.0;     ///< 2^p [v]_{A_p}
    double max_ratio = 0.0; ///< max v(2Q)/v(Q), 2Q clipped to the domain
    Cube worst;
    std::int64_t clipped_cubes = 0;
    double parent_max_ratio = 0.0;  ///< max v(parent Q)/v(Q)
    Cube parent_worst;

    [[nodiscard]] bool passed() const { return max_ratio <= bound * (1.0 + 1e-12); }
    [[nodiscard]] bool parent_passed() const { return parent_max_ratio <= bound * (1.0 + 1e-12); }
};

[[nodiscard]] DoublingReport doubling_check(const GridWeight& v, double p);

}  // namespace weaklab
