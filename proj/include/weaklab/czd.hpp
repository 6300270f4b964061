#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "weaklab/weight_model.hpp"

namespace weaklab {

struct CZCube {
    Cube cube;
    mpq_class abs_average;  ///< (int_Q |f| v) / v(Q), the selection quantity
    mpq_class average;      ///< (int_Q f v) / v(Q), the value of g on Q
    mpq_class mass;         ///< v(Q)
};

/// Decomposition f = g + sum_j b_j at height t with respect to v dx, in exact
/// rational arithmetic over the double inputs.
class CZDecomposition {
public:
    [[nodiscard]] const Grid& grid() const { return grid_; }
    [[nodiscard]] double height() const { return height_; }
    [[nodiscard]] const std::vector<CZCube>& cubes() const { return cubes_; }
    /// The root cube itself exceeded the height; the finite domain cut the stopping time short.
    [[nodiscard]] bool truncated() const { return truncated_; }
    /// Index into cubes() of the selected cube containing the cell, or -1 off Omega.
    [[nodiscard]] std::int64_t owner(std::int64_t cell) const { return owner_[static_cast<std::size_t>(cell)]; }
    [[nodiscard]] bool in_omega(std::int64_t cell) const { return owner(cell) >= 0; }

    [[nodiscard]] const std::vector<mpq_class>& f_exact() const { return f_; }
    [[nodiscard]] const std::vector<mpq_class>& good_exact() const { return g_; }
    /// sum_j b_j cell-wise; the b_j have disjoint supports.
    [[nodiscard]] const std::vector<mpq_class>& bad_exact() const { return b_; }
    [[nodiscard]] const std::vector<mpq_class>& cell_masses_exact() const { return mass_; }

    [[nodiscard]] GridFunction good() const;
    [[nodiscard]] GridFunction bad() const;
    /// b_j alone (zero outside cube j).
    [[nodiscard]] GridFunction bad_part(std::size_t j) const;

private:
    friend CZDecomposition cz_decompose(const GridFunction& f, const GridWeight& v, double t);

    Grid grid_;
    double height_ = 0.0;
    bool truncated_ = false;
    std::vector<CZCube> cubes_;
    std::vector<std::int64_t> owner_;
    std::vector<mpq_class> f_, g_, b_, mass_;
};

/// Stopping-time selection of the maximal dyadic cubes whose v-average of |f|
/// exceeds t. Throws ConfigError for t <= 0 or a zero-mass cube.
[[nodiscard]] CZDecomposition cz_decompose(const GridFunction& f, const GridWeight& v, double t);

struct CheckResult {
    std::string name;
    bool passed = true;
    double worst = 0.0;        ///< check-specific measure (ratio to bound, residual, ...)
    std::int64_t worst_at = -1;  ///< cube or cell index of the worst offender
    std::string detail;
};

struct CZVerification {
    double r = 0.0;
    double ar_constant = 0.0;  ///< [v]_{A_r}
    double bound = 0.0;        ///< 2^r [v]_{A_r} t
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] const CheckResult& check(const std::string& name) const;
};

/// Checks lower_bound, parent_bound, good_bound, cancellation, off_omega,
/// plus reconstruction, maximality, disjointness and mass_accounting.
/// Float cancellation uses |int b_j v| <= 1e-12 int_{Q_j} |f| v on the double
/// export; the exact rational residual must vanish.
[[nodiscard]] CZVerification verify_cz(const CZDecomposition& dec, const GridWeight& v, double r);

struct DominationReport {
    std::int64_t violations = 0;
    double max_excess = 0.0;  ///< max of (lhs - rhs) / max(lhs, tiny), negative when strict
    std::int64_t worst_cell = -1;
    bool equality_everywhere = false;  ///< lhs == rhs on every cell (expected when b = 0)
    bool off_omega_exact_zero = true;  ///< every ancestor sum of b v over an off-Omega cell is exactly 0
    double off_omega_float_max = 0.0;  ///< max over off-Omega cells of tilde-M_d(bv) in double
    [[nodiscard]] bool passed() const { return violations == 0 && off_omega_exact_zero; }
};

/// M_d(fv) <= M_d(gv) + tilde-M_d(bv) cell-wise (1e-12 relative slack), and
/// tilde-M_d(bv) = 0 off Omega.
[[nodiscard]] DominationReport pointwise_domination_check(const GridFunction& f, const GridWeight& v,
                                                          const CZDecomposition& dec);

}  // namespace weaklab
