#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "weaklab/weak_norms.hpp"
#include "weaklab/weight_model.hpp"

namespace weaklab {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool valid = false;  ///< false when too few points were available
};

/// Least squares line through (log x, log y). Needs >= 3 points with positive
/// coordinates and distinct x (ConfigError otherwise).
[[nodiscard]] FitResult scaling_fit(std::span<const std::pair<double, double>> points);

struct SweepRow {
    double delta = 0.0;
    double alpha = 1.0;
    double numerator = 0.0;    ///< analytic lower bound for the weak norm
    double denominator = 0.0;  ///< analytic L^1 norm
    double ratio = 0.0;
    double bound = 0.0;        ///< upper-bound expression with c = 1
    double slack = 0.0;        ///< bound / ratio
    std::optional<WeakTypeReport> grid;  ///< measured on a grid when feasible
    int grid_J = 0;
    int grid_L = 0;
};

struct A1Sweep {
    std::vector<SweepRow> rows;
    FitResult fit;  ///< log ratio against log(1/delta), analytic rows
};

/// Weak-norm lower bound for v = x^{delta-1}, f = (1/delta) chi_(0,1):
/// numerator delta^{-3}, denominator delta^{-2}. Grid rows for delta >= 1/2
/// when grid_L > 0.
[[nodiscard]] A1Sweep sharpness_a1_sweep(std::span<const double> deltas, int grid_L = 0);

/// Same construction measured on a grid with J = ceil(log2 delta^{-2/delta}).
[[nodiscard]] SweepRow power_sharpness_grid_row(double delta, int L, OperatorVariant variant = OperatorVariant::Uncentered);

struct ProductSweep {
    std::vector<SweepRow> rows;
    double lower_constant = 0.5;  ///< c in ratio >= c / (alpha delta)
    bool lower_bound_holds = true;  ///< over rows with delta <= 1/2
    FitResult fit_alpha;  ///< slope in 1/alpha at the first delta
    FitResult fit_delta;  ///< slope in 1/delta at the first alpha
};

/// u = alpha chi_(0,1) + chi elsewhere, v = x^{delta-1}: numerator
/// (delta^{-2} - 1)/delta, denominator alpha/delta^2.
[[nodiscard]] ProductSweep sharpness_product_sweep(std::span<const double> alphas, std::span<const double> deltas);
[[nodiscard]] SweepRow product_sharpness_grid_row(double alpha, double delta, int L,
                                           OperatorVariant variant = OperatorVariant::Uncentered);

struct ParameterAlgebra {
    double constant = 0.0;  ///< [v]_{A_p}
    double p = 1.0;
    double m = 0.0;         ///< max{p, log(e + [v])}
    double r = 0.0;         ///< 1 + m
    double r_dual = 0.0;    ///< 1 + 1/m
    double r_power = 0.0;   ///< r^{r'}
    double constant_power = 0.0;  ///< [v]^{2r' - 2}
    [[nodiscard]] bool r_bound_holds() const { return r_power <= 4.0 * m; }
    [[nodiscard]] bool constant_bound_holds() const;  ///< <= e^4
};

[[nodiscard]] ParameterAlgebra parameter_algebra(double constant, double p);

/// Named test function (indicators, spikes, the sharpness family, random).
struct CorpusEntry {
    std::string name;
    GridFunction f;
};

/// Indicators of the leftmost and a middle cube on every level, single-cell
/// spikes at three positions, chi_[0,1) scaled by 2, and `random_count`
/// seeded random nonnegative functions.
[[nodiscard]] std::vector<CorpusEntry> make_corpus(const Grid& grid, std::uint64_t seed = 0, int random_count = 32);
[[nodiscard]] std::vector<CorpusEntry> refine_corpus(const std::vector<CorpusEntry>& corpus, int new_L);
/// Every *.csv in a directory, sorted by file name; L inferred with the given J.
[[nodiscard]] std::vector<CorpusEntry> load_corpus(const std::string& dir, int J);

/// Piecewise-constant weight on a finer grid (each cell split 2^{new_L - L} ways).
[[nodiscard]] GridWeight refine_weight(const GridWeight& w, int new_L);

/// Seeded piecewise weight exp(spread * gaussian) with `blocks` constant blocks.
[[nodiscard]] GridWeight random_piecewise_weight(const Grid& grid, std::uint64_t seed, double spread, int blocks);

struct AuditRow {
    std::string weight;
    std::string function;
    double p = 1.0;
    double fw_constant = 0.0;  ///< [v]_{A_inf}^W
    double ap_constant = 0.0;  ///< [v]_{A_p} ([v]_{A_1} at p = 1)
    double bound = 0.0;        ///< fw * max{p, log(e + ap)}
    WeakTypeReport measured;   ///< M_d, u = 1
    double normalized = 0.0;   ///< ratio / bound
};

struct BoundAudit {
    std::vector<AuditRow> rows;
    double envelope = 0.0;  ///< max normalized ratio
    std::string worst_weight;
    std::string worst_function;
};

struct NamedWeight {
    std::string name;
    GridWeight w;
};

[[nodiscard]] BoundAudit bound_audit(std::span<const NamedWeight> weights, double p,
                                     std::span<const CorpusEntry> corpus);

/// Step weights and seeded random piecewise weights on a grid.
[[nodiscard]] std::vector<NamedWeight> audit_family(const Grid& grid, std::uint64_t seed = 0);

struct MixedLemmaRow {
    double p = 2.0;
    double ap = 0.0;     ///< [w]_{A_p}
    double mixed = 0.0;  ///< [w]_{(A_p)^{1/p}(A_inf^exp)^{1/p'}}
    std::int64_t jensen_failures = 0;  ///< cubes with A_p(w;Q) < 1
    std::int64_t chain_failures = 0;   ///< cubes violating mixed <= A_p <= mixed^p
    bool global_chain = true;
    bool split_monotone = true;        ///< [w]_{(A_p)^a (A_inf^exp)^{1-a}} nondecreasing in a
    std::vector<std::pair<double, double>> split;  ///< (a, constant)
    [[nodiscard]] bool passed() const {
        return jensen_failures == 0 && chain_failures == 0 && global_chain && split_monotone;
    }
};

[[nodiscard]] std::vector<MixedLemmaRow> mixed_lemma_check(const GridWeight& w, std::span<const double> p_grid,
                                                           std::span<const double> split_grid = {});

struct DualIdentity {
    double r = 2.0;
    double max_relative_error = 0.0;  ///< over cubes, |A_{r'}(sigma;Q) - A_r(v;Q)^{r'-1}| / A_r(v;Q)^{r'-1}
    Cube worst;
};

/// sigma = v^{1-r'} satisfies A_{r'}(sigma;Q) = A_r(v;Q)^{r'-1} on every cube.
[[nodiscard]] DualIdentity dual_identity_check(const GridWeight& v, double r);

struct BuckleyReport {
    double p = 2.0;
    double ap = 0.0;         ///< [v]_{A_p}
    double sigma_fw = 0.0;   ///< [v^{1-p'}]_{A_inf}^W
    double bound = 0.0;      ///< p' [v]^{1/p} [sigma]^{1/p}
    double max_ratio = 0.0;  ///< max ||M f||_{L^p(v)} / ||f||_{L^p(v)}
    std::string worst_function;
    [[nodiscard]] double normalized() const { return max_ratio / bound; }
};

[[nodiscard]] BuckleyReport buckley_empirical(const GridWeight& v, double p, std::span<const CorpusEntry> corpus);

}  // namespace weaklab
