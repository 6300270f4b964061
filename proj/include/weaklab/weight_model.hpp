#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "weaklab/dyadic_grid.hpp"
#include "weaklab/dyadic_tree.hpp"
#include "weaklab/weight_spec.hpp"

namespace weaklab {

/// Sentinel for a divergent integral; downstream constants become +inf.
inline constexpr double kDivergent = std::numeric_limits<double>::infinity();
[[nodiscard]] inline bool is_divergent(double x) { return x == kDivergent; }

/// Exponent tables to precompute at realization: dual masses int w^{1-p'} for
/// each p in dual_p, power masses int w^r for each r in power_r.
struct ExponentSet {
    std::vector<double> dual_p;
    std::vector<double> power_r;
};

/// Exact per-cell integrals of a weight on a grid.
///
/// Every supported weight is c_i * x^s on cell i with a common exponent s
/// (s = 0 for piecewise-constant weights), so each table entry is a closed
/// form. Cube queries read pairwise dyadic sums and are O(1).
class GridWeight {
public:
    GridWeight(const Grid& grid, std::vector<double> coefficients, double exponent,
               const ExponentSet& exponents = {});

    [[nodiscard]] const Grid& grid() const { return grid_; }
    [[nodiscard]] double exponent() const { return exponent_; }
    [[nodiscard]] bool piecewise_constant() const { return exponent_ == 0.0; }
    [[nodiscard]] std::span<const double> coefficients() const { return coef_; }
    [[nodiscard]] const ExponentSet& exponents() const { return exponents_; }

    [[nodiscard]] double cell_mass(std::int64_t i) const;
    [[nodiscard]] double cell_ess_inf(std::int64_t i) const;
    /// Cell representative: mass / width (the exact value for piecewise weights).
    [[nodiscard]] double cell_value(std::int64_t i) const;
    [[nodiscard]] std::vector<double> cell_masses() const;
    [[nodiscard]] std::vector<double> cell_values() const;

    [[nodiscard]] double mass(const Cube& q) const { return mass_[q]; }
    [[nodiscard]] double ess_inf(const Cube& q) const { return essinf_[q]; }
    [[nodiscard]] double log_mass(const Cube& q) const { return log_[q]; }
    /// int_Q w^{1-p'}; throws UncachedExponentError unless p was requested.
    [[nodiscard]] double dual_mass(const Cube& q, double p) const;
    /// int_Q w^r; throws UncachedExponentError unless r was requested.
    [[nodiscard]] double power_mass(const Cube& q, double r) const;
    [[nodiscard]] bool has_dual(double p) const { return dual_.contains(p); }
    [[nodiscard]] bool has_power(double r) const { return power_.contains(r); }

    /// Exact int_a^b w for 0 <= a <= b <= domain length (partial cells allowed).
    [[nodiscard]] double integral(double a, double b) const;

    /// Same weight with additional exponent tables.
    [[nodiscard]] GridWeight with_exponents(const ExponentSet& extra) const;
    /// The weight w^q (e.g. the dual weight w^{1-p'}).
    [[nodiscard]] GridWeight power(double q, const ExponentSet& exponents = {}) const;

private:
    [[nodiscard]] DyadicTree<double> sum_tree(const std::vector<double>& cells) const;
    [[nodiscard]] std::vector<double> cell_power_masses(double q) const;

    Grid grid_;
    std::vector<double> coef_;
    double exponent_;
    ExponentSet exponents_;
    std::vector<double> cell_mass_;
    std::vector<double> cell_essinf_;
    DyadicTree<double> mass_;
    DyadicTree<double> essinf_;
    DyadicTree<double> log_;
    std::map<double, DyadicTree<double>> dual_;
    std::map<double, DyadicTree<double>> power_;
};

/// Realizes an analytic or file-backed spec on the grid.
[[nodiscard]] GridWeight realize(const WeightSpec& spec, const Grid& grid, const ExponentSet& exponents = {});

/// Pointwise product u*v, exact within the monomial class.
[[nodiscard]] GridWeight product(const GridWeight& u, const GridWeight& v, const ExponentSet& exponents = {});

/// int_a^b x^t dx for 0 <= a < b; kDivergent when the integral diverges at 0.
[[nodiscard]] double power_integral(double a, double b, double t);
/// int_a^b log x dx for 0 <= a < b.
[[nodiscard]] double log_integral(double a, double b);

/// Piecewise-constant function on the grid (f, g, b, h, ...).
class GridFunction {
public:
    GridFunction(const Grid& grid, std::vector<double> values);
    static GridFunction zeros(const Grid& grid);
    static GridFunction constant(const Grid& grid, double c);

    [[nodiscard]] const Grid& grid() const { return grid_; }
    [[nodiscard]] std::span<const double> values() const& { return values_; }
    // Temporaries hand over their storage so range-for over a result stays valid.
    [[nodiscard]] std::vector<double> values() && { return std::move(values_); }
    [[nodiscard]] std::vector<double>& mutable_values() { return values_; }
    [[nodiscard]] double operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Same function on a grid with larger L (each cell split into 2^{dL} equal cells).
[[nodiscard]] GridFunction refine(const GridFunction& f, int new_L);

/// Weight CSV: one positive decimal per line, grid.cells() lines.
[[nodiscard]] GridWeight load_weight_csv(const std::filesystem::path& path, const Grid& grid,
                                         const ExponentSet& exponents = {});
[[nodiscard]] std::vector<double> read_weight_values(const std::filesystem::path& path, const Grid& grid);
/// Writes cell representatives in shortest round-trip form.
void save_weight_csv(const GridWeight& w, const std::filesystem::path& path);

/// Function CSV: one finite decimal per line.
[[nodiscard]] GridFunction load_function_csv(const std::filesystem::path& path, const Grid& grid);
/// Infers L from the row count (must be 2^{J+L}).
[[nodiscard]] GridFunction load_function_csv(const std::filesystem::path& path, int J);
void save_function_csv(const GridFunction& f, const std::filesystem::path& path);

}  // namespace weaklab
