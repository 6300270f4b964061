#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weaklab/weight_model.hpp"

namespace weaklab {

/// Which cubes the maximality side condition of the principal-cube induction
/// ranges over: only Gamma_N members (literal), or every stratum cube I_i^l
/// with l >= N whether or not it passed the Gamma filter.
enum class ChainReading { GammaN, AllStrata };

struct SawyerOptions {
    double a = 4.0;
    double delta_fraction = 0.5;  ///< delta = delta_fraction * eps
    ChainReading reading = ChainReading::GammaN;
    std::uint64_t seed = 0;
    int subset_samples = 16;  ///< random cell unions per cube for the subset_decay check
};

struct StratumCube {
    int stratum = 0;  ///< k in Omega_k
    Cube cube;
    bool in_gamma = false;
};

struct SandwichReport {
    std::int64_t checked = 0;
    std::int64_t failures = 0;
    double worst_lower = 0.0;  ///< max of (a^k/[v]) / essinf v; <= 1 required
    double worst_upper = 0.0;  ///< max of avg v / ([v] a^{k+1}); <= 1 required
    [[nodiscard]] bool passed() const { return failures == 0; }
};

/// Strata, Gamma filter and principal cubes.
struct PrincipalCubeRecord {
    Grid grid;
    SawyerOptions options;
    double v_a1 = 0.0;
    double u_a1 = 0.0;
    double epsilon = 0.0;  ///< 1/(1 + 4 [v]_A1)
    double delta = 0.0;
    double nu = 0.0;       ///< 1/(1 + 4 [u]_A1)
    int floor = 0;         ///< N: lowest stratum that can meet the Gamma filter
    int top = -1;          ///< highest nonempty stratum (top < floor when none)

    std::vector<StratumCube> cubes;  ///< all I_j^k for floor <= k <= top, by (k, index)
    std::vector<std::size_t> gamma;  ///< indices into cubes forming Gamma_N
    SandwichReport sandwich;          ///< over Gamma_N

    std::vector<std::vector<std::size_t>> generations;  ///< G_0, G_1, ...
    std::vector<int> generation_of;             ///< per cube index, -1 when not principal
    std::vector<std::int64_t> selected_by;      ///< principal cube that selected it (-1 for G_0)
    std::vector<std::int64_t> container;        ///< per Gamma_N member: smallest principal cube containing it
    std::int64_t generation_overlaps = 0;       ///< pairs qualifying again in a later generation

    [[nodiscard]] std::vector<std::size_t> principal() const;
};

/// Maximal dyadic cubes of the cell set {M_d v > a^k} and {M_d g > a^k}.
[[nodiscard]] std::vector<Cube> level_cubes(const GridFunction& md_v, const GridFunction& md_g, double a, int k);
[[nodiscard]] std::vector<Cube> level_cubes(const GridFunction& g, const GridWeight& v, double a, int k);

/// Maximal dyadic cubes covering a cell predicate.
[[nodiscard]] std::vector<Cube> maximal_cover(const Grid& grid, const std::vector<bool>& cells);

/// Gamma membership: the cube has a cell with v <= a^{k+1}. Flagged cubes get
/// the sandwich a^k/[v] <= essinf v <= avg v <= [v] a^{k+1} checked against v_a1 and accumulated into report.
[[nodiscard]] std::vector<bool> gamma_filter(const std::vector<Cube>& cubes, const GridWeight& v, double a, int k,
                                             double v_a1, SandwichReport* report = nullptr);

/// Strata and Gamma_N for g (taken in absolute value) and v.
[[nodiscard]] PrincipalCubeRecord build_strata(const GridFunction& g, const GridWeight& v,
                                               const SawyerOptions& options = {});
/// Runs the generation induction and fills generations, principal containers.
void principal_cubes(PrincipalCubeRecord& record, const GridWeight& u);

struct ChainCheck {
    std::string name;
    bool passed = true;
    double lhs = 0.0;
    double rhs = 0.0;
    double worst_ratio = 0.0;  ///< max lhs/rhs over the individual instances
    std::int64_t evaluated = 0;
    std::int64_t failures = 0;
};

struct ChainReport {
    double c_eps = 0.0;
    double c9 = 0.0;
    int max_m = 0;             ///< largest index of the doubling sequence k_m over cells
    double assembled = 0.0;    ///< product of the tracked constants
    double power_product = 0.0;  ///< [v]^4 [u]^2
    std::vector<ChainCheck> checks;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] const ChainCheck& check(const std::string& name) const;
};

/// Evaluates both sides of every link in the chain: levelset_inclusion,
/// levelset_bound, sandwich, subset_decay, selection_rule, sparse_sum,
/// sparse_groups, h_integral, block_sum, growth_floor, h_bound.
[[nodiscard]] ChainReport verify_chain(const PrincipalCubeRecord& record, const GridWeight& u, const GridWeight& v,
                                       const GridFunction& g);

/// The assembled constant as a function of the A_1 constants, with the
/// finite-sequence factor 2 - 2^{-m}.
[[nodiscard]] double assembled_constant(double a, double v_a1, double u_a1, double delta_fraction, int m);

}  // namespace weaklab
