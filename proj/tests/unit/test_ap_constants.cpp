#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "weaklab/ap_constants.hpp"
#include "weaklab/errors.hpp"
#include "weaklab/parallel.hpp"

using namespace weaklab;
namespace wt = weaklab::testing;

namespace {

GridWeight two_halves(double left, double right) {
    return GridWeight(build_grid(0, 1), {left, right}, 0.0, {{2.0, 10.0, 100.0, 1000.0}, {}});
}

std::vector<Cube> all_cubes(const Grid& g) {
    std::vector<Cube> out;
    for (int k = g.min_level(); k <= g.L; ++k)
        for (const Cube& q : dyadic_cubes(g, k)) out.push_back(q);
    return out;
}

}  // namespace

TEST(ApLocal, Examples) {
    const Grid g = build_grid(1, 4);
    const GridWeight one = realize(constant_weight(1.0), g, {{1.5, 2.0, 7.0}, {}});
    for (const Cube& q : all_cubes(g))
        for (double p : {1.5, 2.0, 7.0}) EXPECT_EQ(ap_local(one, q, p), 1.0);

    const GridWeight w = two_halves(1.0, 4.0);
    const double expect = (5.0 / 2.0) * (5.0 / 8.0);
    EXPECT_DOUBLE_EQ(ap_local(w, Cube{0, 0}, 2.0), 25.0 / 16.0);
    const std::vector<double> vals{1.0, 4.0};
    EXPECT_DOUBLE_EQ(wt::direct_ap(vals, 2.0), expect);
}

TEST(ApLocal, DivergentIsInfinite) {
    // Powers of x^{-0.9} whose dual integrand is x^t with t <= -1 near the origin.
    const Grid g = build_grid(0, 4);
    const GridWeight v = realize(power_weight(0.1), g);
    const GridWeight sigma = v.power(-1.0, {{2.0}, {}});  // x^{0.9}: dual exponent -1 → x^{-0.9}, finite
    EXPECT_TRUE(std::isfinite(ap_local(sigma, root(g), 2.0)));
    const GridWeight s2 = v.power(-2.0, {{1.5}, {}});  // x^{1.8}, dual exponent -2 → x^{-3.6}: divergent
    EXPECT_TRUE(std::isinf(ap_local(s2, root(g), 1.5)));
    EXPECT_TRUE(std::isinf(ap_local(s2, cell_cube(g, 0), 1.5)));
    EXPECT_TRUE(std::isfinite(ap_local(s2, cell_cube(g, 1), 1.5)));
    EXPECT_TRUE(std::isinf(global_constant(s2, ConstantKind::ap(1.5)).value));
    // quadrature blow-up: the truncated integral grows without bound as the cut approaches 0
    EXPECT_GT(wt::quad_power(1e-6, 1.0 / 16.0, -3.6), 1e15);
}

TEST(A1Local, Examples) {
    const Grid g = build_grid(1, 6);
    const GridWeight c = realize(constant_weight(2.5), g);
    for (const Cube& q : all_cubes(g)) EXPECT_EQ(a1_local(c, q), 1.0);

    for (double delta : {0.25, 0.5, 0.75}) {
        const GridWeight v = realize(power_weight(delta), g);
        for (int k = g.min_level(); k <= g.L; ++k)
            EXPECT_NEAR(a1_local(v, Cube{k, 0}), 1.0 / delta, 1e-12 / delta);
    }
    for (double alpha : {0.125, 0.5, 1.0}) {
        const GridWeight u = realize(step_weight(alpha), g);
        EXPECT_DOUBLE_EQ(a1_local(u, root(g)), (alpha + 1.0) / (2.0 * alpha));
    }
}

TEST(AinfExpLocal, Examples) {
    const Grid g = build_grid(0, 3);
    const GridWeight c = realize(constant_weight(7.0), g);
    for (const Cube& q : all_cubes(g)) EXPECT_NEAR(ainf_exp_local(c, q), 1.0, 1e-15);

    const double e2 = std::exp(2.0);
    const GridWeight w = two_halves(1.0, e2);
    EXPECT_NEAR(ainf_exp_local(w, Cube{0, 0}), (1.0 + e2) / (2.0 * std::exp(1.0)), 1e-14);

    // A_p decreases toward the exponential constant as p grows
    const GridWeight w2 = two_halves(1.0, 50.0);
    const double lim = ainf_exp_local(w2, Cube{0, 0});
    double prev = INFINITY;
    for (double p : {10.0, 100.0, 1000.0}) {
        const double a = ap_local(w2, Cube{0, 0}, p);
        EXPECT_GE(a, lim);
        EXPECT_LT(a, prev);
        prev = a;
    }
    EXPECT_NEAR(prev, lim, 2e-3 * lim);
}

TEST(AinfFwLocal, Examples) {
    const Grid g = build_grid(1, 4);
    const GridWeight c = realize(constant_weight(3.0), g);
    for (const Cube& q : all_cubes(g)) EXPECT_NEAR(ainf_fw_local(c, q), 1.0, 1e-15);

    const GridWeight w = two_halves(1.0, 0.01);
    const std::vector<double> vals{1.0, 0.01};
    EXPECT_EQ(ainf_fw_local(w, Cube{0, 0}), wt::direct_fw(vals));
    // M(chi_Q w) = 1 on the left, max(0.505, 0.01) on the right: (1 + 0.505) / 1.01
    EXPECT_NEAR(ainf_fw_local(w, Cube{0, 0}), 1.505 / 1.01, 1e-15);

    EXPECT_THROW((void)ainf_fw_local(realize(power_weight(0.5), g), root(g)), ConfigError);

    std::mt19937_64 rng(21);
    const Grid g2 = build_grid(0, 6);
    for (int trial = 0; trial < 10; ++trial) {
        const GridWeight r = wt::random_weight(g2, rng);
        for (const Cube& q : all_cubes(g2)) {
            const double fast = ainf_fw_local(r, q);
            EXPECT_GE(fast, 1.0 - 1e-12);
            EXPECT_NEAR(fast, wt::direct_fw(wt::cube_values(r, q)), 1e-12 * fast);
        }
    }
}

TEST(MixedLocal, ReducesAndChains) {
    std::mt19937_64 rng(23);
    const Grid g = build_grid(1, 5);
    for (int trial = 0; trial < 10; ++trial) {
        for (double p : {1.5, 2.0, 3.0}) {
            const GridWeight w = wt::random_weight(g, rng).with_exponents({{p}, {}});
            const double pd = p / (p - 1.0);
            for (const Cube& q : all_cubes(g)) {
                EXPECT_EQ(mixed_local(w, q, p, 1.0, 0.0), ap_local(w, q, p));
                EXPECT_EQ(mixed_local(w, q, p, 0.0, 1.0), ainf_exp_local(w, q));
                const double mixed = mixed_local(w, q, p, 1.0 / p, 1.0 / pd);
                const double ap = ap_local(w, q, p);
                EXPECT_LE(mixed, ap * (1 + 1e-12));
                EXPECT_LE(ap, std::pow(mixed, p) * (1 + 1e-12));
            }
        }
    }
}

TEST(Global, IdentityWeightAndTieBreak) {
    const Grid g = build_grid(2, 4);
    const GridWeight one = realize(constant_weight(1.0), g);
    for (const ConstantKind& kind : {ConstantKind::a1(), ConstantKind::ap(2.0), ConstantKind::ainf_exp(),
                                     ConstantKind::ainf_fw(), ConstantKind::mixed(3.0, 0.5, 0.5)}) {
        const ConstantReport r = global_constant(one, kind);
        EXPECT_NEAR(r.value, 1.0, 1e-15) << to_string(kind);
        if (kind.tag != ConstantTag::AinfExp && kind.tag != ConstantTag::AinfFW) {
            EXPECT_EQ(r.argmax, root(g)) << to_string(kind);
        }
        EXPECT_EQ(static_cast<int>(r.per_level.size()), g.level_count());
    }
}

TEST(Global, ValueIsMaxOfPerLevelTable) {
    std::mt19937_64 rng(29);
    const Grid g = build_grid(1, 5);
    for (int trial = 0; trial < 5; ++trial) {
        const GridWeight w = wt::random_weight(g, rng);
        const ConstantReport r = global_constant(w, ConstantKind::ap(2.0));
        double best = 0;
        for (const auto& row : r.per_level) best = std::max(best, row.value);
        EXPECT_EQ(best, r.value);
        EXPECT_GE(r.value, 1.0);
        EXPECT_NEAR(r.value, wt::direct_global_ap(w, 2.0), 1e-12 * r.value);
        EXPECT_NEAR(global_constant(w, ConstantKind::a1()).value, wt::direct_global(w, wt::direct_a1), 1e-12 * r.value);
        const double aexp = global_constant(w, ConstantKind::ainf_exp()).value;
        EXPECT_NEAR(aexp, wt::direct_global(w, wt::direct_aexp), 1e-12 * aexp);
        EXPECT_NE(r.truncation_note().find("-1..5"), std::string::npos);
    }
}

TEST(Global, PowerA1AtLeastInverseDelta) {
    const Grid g = build_grid(0, 12);
    const ConstantReport r = global_constant(realize(power_weight(0.5), g), ConstantKind::a1());
    EXPECT_GE(r.value, 2.0 - 1e-12);
    RecordProperty("power_half_grid_a1", std::to_string(r.value));
}

TEST(Global, MonotoneInPAndAboveExponential) {
    std::mt19937_64 rng(31);
    const Grid g = build_grid(1, 5);
    for (int trial = 0; trial < 10; ++trial) {
        const GridWeight w = wt::random_weight(g, rng);
        double prev = INFINITY;
        const double aexp = global_constant(w, ConstantKind::ainf_exp()).value;
        for (double p : {1.1, 1.5, 2.0, 3.0, 5.0, 10.0}) {
            const double a = global_constant(w, ConstantKind::ap(p)).value;
            EXPECT_LE(a, prev * (1 + 1e-12));
            EXPECT_GE(a, aexp * (1 - 1e-12));
            prev = a;
        }
    }
}

TEST(Global, ThreadCountDoesNotChangeResults) {
    std::mt19937_64 rng(37);
    const GridWeight w = wt::random_weight(build_grid(1, 8), rng);
    set_thread_limit(1);
    const ConstantReport a = global_constant(w, ConstantKind::ainf_fw());
    set_thread_limit(4);
    const ConstantReport b = global_constant(w, ConstantKind::ainf_fw());
    set_thread_limit(0);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.argmax, b.argmax);
}

TEST(Validate, Kinds) {
    EXPECT_THROW(validate(ConstantKind::ap(1.0)), ConfigError);
    EXPECT_THROW(validate(ConstantKind::mixed(2.0, -1.0, 0.0)), ConfigError);
    EXPECT_NO_THROW(validate(ConstantKind::a1()));
}

TEST(ReverseHolder, Examples) {
    const Grid g = build_grid(1, 5);
    const ReverseHolderReport one = reverse_holder_check(realize(constant_weight(1.0), g));
    EXPECT_NEAR(one.max_ratio, 0.5, 1e-15);
    EXPECT_TRUE(one.passed());

    const ReverseHolderReport step = reverse_holder_check(realize(step_weight(0.25), build_grid(2, 6)));
    EXPECT_TRUE(step.passed());
    EXPECT_GT(step.subset_samples, 0);

    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const GridWeight w = wt::random_a1_weight(build_grid(1, 6), rng, 10.0);
        const ReverseHolderReport r = reverse_holder_check(w, static_cast<std::uint64_t>(trial));
        EXPECT_TRUE(r.passed()) << r.max_ratio << " " << r.max_subset_ratio;
        EXPECT_EQ(r.r, 1.0 + 1.0 / (4.0 * r.a1));
    }
}

TEST(Doubling, Examples) {
    const Grid g = build_grid(2, 5);
    const DoublingReport one = doubling_check(realize(constant_weight(1.0), g), 1.0);
    EXPECT_GT(one.clipped_cubes, 0);
    EXPECT_LE(one.max_ratio, 2.0 + 1e-12);
    EXPECT_TRUE(one.passed());
    for (double p : {1.5, 2.0}) EXPECT_TRUE(doubling_check(realize(constant_weight(1.0), g), p).passed());

    const DoublingReport step = doubling_check(realize(step_weight(0.125), g), 1.0);
    EXPECT_TRUE(step.passed()) << step.max_ratio << " vs " << step.bound;
    EXPECT_TRUE(step.parent_passed());

    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const GridWeight w = wt::random_weight(g, rng);
        EXPECT_TRUE(doubling_check(w, 2.0).parent_passed());
    }
}
