#pragma once

#include <span>
#include <string>
#include <vector>

#include "weaklab/weight_model.hpp"

namespace weaklab {

struct WeakNorm {
    double value = 0.0;           ///< sup_t t mu({h > t})
    double t_star = 0.0;          ///< cell value at which the sup is approached from below
    double levelset_mass = 0.0;   ///< mu({h >= t_star})
};

/// Weak L^1 quasi-norm of a nonnegative piecewise-constant h against per-cell
/// masses. Throws DomainError on negative h.
[[nodiscard]] WeakNorm weak_l1_norm(std::span<const double> h, std::span<const double> cell_mass);
[[nodiscard]] WeakNorm weak_l1_norm(const GridFunction& h, const GridWeight& mu);

[[nodiscard]] double l1_norm(const GridFunction& h, const GridWeight& mu);
[[nodiscard]] double lp_norm(const GridFunction& h, const GridWeight& mu, double p);

enum class OperatorVariant { Dyadic, Uncentered };
[[nodiscard]] std::string to_string(OperatorVariant v);

struct WeakTypeReport {
    OperatorVariant variant = OperatorVariant::Dyadic;
    double numerator = 0.0;    ///< || M(f v) / v ||_{L^{1,inf}(u v)}
    double t_star = 0.0;
    double levelset_mass = 0.0;
    double denominator = 0.0;  ///< int |f| u v
    double ratio = 0.0;
};

/// Quotient M(f v)/v with v's cell representative, measured in L^{1,inf}(u v)
/// and divided by ||f||_{L^1(u v)}.
[[nodiscard]] WeakTypeReport mixed_ratio(const GridFunction& f, const GridWeight& u, const GridWeight& v,
                                         OperatorVariant variant);

/// The quotient h = M(f v)/v itself.
[[nodiscard]] GridFunction mixed_quotient(const GridFunction& f, const GridWeight& v, OperatorVariant variant);

}  // namespace weaklab
