#pragma once

/**
 * @file reduce.hpp
 * @brief Over-approximating complexity reduction: binary relaxation, convex hull / union of
 * two constrained zonotopes, lifting, parallel-generator merging and constraint elimination.
 */

#include "hzreach/hybrid_zonotope.hpp"

#include <vector>

namespace hzreach
{

enum class RelaxOrder
{
    First, ///< leading binary columns
    Last,  ///< trailing (most recently introduced) binary columns
};

enum class HausdorffMethod
{
    LpRange,       ///< LP range of the eliminated factor
    IntervalRange, ///< interval bound from the pivot row only; cheaper, looser
};

struct ReductionPolicy
{
    Eigen::Index n_g = 0; ///< constraint eliminations requested
    Eigen::Index n_b = 0; ///< binary generators to relax
    bool relax = true;
    bool merge = true;
    bool eliminate = true;
    RelaxOrder order = RelaxOrder::Last;
    HausdorffMethod method = HausdorffMethod::LpRange;

    /// Whether any stage can change the set.
    bool active() const noexcept { return (relax && n_b > 0) || merge || (eliminate && n_g > 0); }
};

/// Moves k binary columns of (Gb, Ab) to the end of (Gc, Ac). Throws ContractError if k > n_b.
HybridZonotope relax_binaries(const HybridZonotope& Z, Eigen::Index k, RelaxOrder order = RelaxOrder::First);

/**
 * conv(Z ∪ W) as a constrained zonotope. Generator columns: [Gz, Gw, (cz - cw)/2, slack];
 * the slack block has 2(ngz + ngw) columns.
 */
ConstrainedZonotope conv_hull_two_cz(const ConstrainedZonotope& Z, const ConstrainedZonotope& W);

/// Z ∪ W with a single binary generator (cz - cw)/2; continuous columns [Gz, Gw, slack].
HybridZonotope union_two_cz(const ConstrainedZonotope& Z, const ConstrainedZonotope& W);

/// z in Z iff (z, 0) in lift(Z). Dimension n + n_c, no constraints.
HybridZonotope lift(const HybridZonotope& Z);

/// Inverse of lift: the trailing rows of a constraint-free set become equality constraints.
HybridZonotope unlift(const HybridZonotope& lifted, Eigen::Index n);

/// Sums continuous generators whose lifted columns are parallel (|cos| >= 1 - tol). Set unchanged.
HybridZonotope merge_parallel_generators(const HybridZonotope& Z, double tol = 1e-9);

/// Solves constraint row r for factor c and drops both. Result contains Z.
HybridZonotope eliminate_constraint(const HybridZonotope& Z, Eigen::Index r, Eigen::Index c);

/// Largest |xi_c[c]| over Z with binaries relaxed and the box on xi_c[c] dropped.
double eliminated_factor_range(const HybridZonotope& Z, Eigen::Index c, HausdorffMethod method,
                               Eigen::Index r = -1);

/**
 * Score ||Gc[:, c]||_2 * max(0, range - 1) for eliminating factor c through row r.
 * Zero when the elimination cannot enlarge the set.
 */
double hausdorff_error_estimate(const HybridZonotope& Z, Eigen::Index r, Eigen::Index c,
                                HausdorffMethod method = HausdorffMethod::LpRange);

struct EliminationChoice
{
    Eigen::Index r = -1;
    Eigen::Index c = -1;
    double score = 0.0;
    double range = 0.0;
};

/// Argmin of the estimate over admissible pivots (|Ac[r,c]| >= 1e-10). r = -1 when there is none.
EliminationChoice choose_elimination(const HybridZonotope& Z, HausdorffMethod method = HausdorffMethod::LpRange);

/// Relax, merge, then eliminate min(n_c, n_g) constraints by smallest estimated error.
HybridZonotope reduce_complexity(const HybridZonotope& Z, const ReductionPolicy& policy);

} // namespace hzreach
