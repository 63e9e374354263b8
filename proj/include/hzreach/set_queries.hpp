#pragma once

/**
 * @file set_queries.hpp
 * @brief Solver-backed queries on hybrid zonotopes: emptiness, membership, bounds,
 * branch enumeration and sampling.
 */

#include "hzreach/hybrid_zonotope.hpp"
#include "hzreach/milp.hpp"

#include <cstdint>
#include <vector>

namespace hzreach
{

/// Optimum values within this band of 1 count as nonempty (boundary case).
inline constexpr double kEmptinessBand = 1e-9;

/// Raw optimum of the emptiness program (+inf when infeasible).
double emptiness_optimum(const HybridZonotope& Z, const MilpOptions& opts = {});

bool is_empty(const HybridZonotope& Z, const MilpOptions& opts = {});

bool contains_point(const HybridZonotope& Z, const Point& x, double tol = 1e-6);

struct SupportResult
{
    double value = 0.0;
    Point argument;   ///< a point of Z attaining the value
    Vector xi_c;
    Vector xi_b;
};

/// Minimum or maximum of d'x over Z. Throws EmptySetError when Z is empty.
SupportResult support(const HybridZonotope& Z, const Vector& d, bool maximize);

/// [min d'x, max d'x] over Z. Throws EmptySetError when Z is empty.
Interval bounds(const HybridZonotope& Z, const Vector& d);

/// bounds() along each coordinate axis.
std::vector<Interval> interval_hull(const HybridZonotope& Z);

/// Binary pattern in {-1,1}^nb and the constrained zonotope it selects.
struct Branch
{
    Vector xi_b;
    ConstrainedZonotope set;
};

/**
 * The nonempty constrained zonotopes whose union is Z, one per feasible binary pattern,
 * in counting order of beta = (xi_b + 1)/2 with bit i for binary i.
 * Throws CapacityError when 2^nb > cap.
 */
std::vector<Branch> enumerate_branches(const HybridZonotope& Z, std::uint64_t cap = 4096);
std::vector<ConstrainedZonotope> enumerate_cz(const HybridZonotope& Z, std::uint64_t cap = 4096);

/// A member of Z together with factors that produce it.
struct Sample
{
    Point x;
    Vector xi_c;
    Vector xi_b;
};

/**
 * Deterministic pseudo-random members of Z. Binary patterns are drawn uniformly and
 * tested by LP; continuous factors come from projected rejection sampling in the
 * factor box, falling back to random convex combinations of LP vertices of the branch.
 * Throws EmptySetError when Z is empty.
 */
std::vector<Sample> sample_members(const HybridZonotope& Z, std::size_t count, std::uint64_t seed);
std::vector<Point> sample_points(const HybridZonotope& Z, std::size_t count, std::uint64_t seed);

} // namespace hzreach
