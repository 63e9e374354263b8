#pragma once

/**
 * @file oracle.hpp
 * @brief Brute-force references for testing: simulation, pattern enumeration, sampled hulls.
 *
 * Apart from contains_point, nothing here uses the set operations it is meant to check;
 * enumeration oracles go straight to solve_lp.
 */

#include "hzreach/hybrid_zonotope.hpp"
#include "hzreach/milp.hpp"
#include "hzreach/nn.hpp"
#include "hzreach/reach.hpp"

#include <cstdint>
#include <vector>

namespace hzreach::oracle
{

struct Trajectory
{
    std::vector<Point> states;
};

Trajectory simulate(const LinearSystem& sys, const NeuralNetwork& net, const Point& x0, std::size_t T);

/// Factor-grid and random points of a constraint-free set; `per_axis` grid values per continuous factor.
std::vector<Point> grid_points(const HybridZonotope& X0, std::size_t per_axis, std::size_t random_count,
                               std::uint64_t seed);

struct InclusionReport
{
    std::size_t checked = 0;
    std::size_t violations = 0;
    /// Largest infinity-norm distance from a simulated state to its reach set (0 when none failed).
    double max_residual = 0.0;
    std::vector<Point> violating_states;
};

/// Simulates every initial point and checks x_t ∈ R_t for all t with contains_point.
InclusionReport grid_inclusion_check(const std::vector<Point>& initial_points, const LinearSystem& sys,
                                     const NeuralNetwork& net, const ReachResult& result, double tol = 1e-6);

/// min ||x - z||_inf over z in Z, by MILP. +inf when Z is empty.
double membership_distance(const HybridZonotope& Z, const Point& x);

/// max_p d'p over the sample for each direction.
std::vector<double> sampled_hull_support(const std::vector<Point>& points, const std::vector<Vector>& directions);

/// max_{a in A} min_{b in B} ||a - b||_2.
double directed_hausdorff(const std::vector<Point>& A, const std::vector<Point>& B);
double sampled_hausdorff(const std::vector<Point>& A, const std::vector<Point>& B);

/// Unit vectors at equal angles in the plane of coordinates (i, j) of R^n.
std::vector<Vector> planar_directions(Eigen::Index n, std::size_t count, Eigen::Index i = 0, Eigen::Index j = 1);

/// Minimum over all 2^nb binary patterns of the per-pattern LP min ||xi_c||_inf; +inf if all infeasible.
double enumeration_emptiness_optimum(const HybridZonotope& Z);
bool enumeration_is_empty(const HybridZonotope& Z);

/// True when some CZ of R and some CZ of O share a point (one LP per pattern pair).
bool enumeration_intersects(const HybridZonotope& R, const HybridZonotope& O);

/// Minimum over all fixings of the binary variables of the LP value; +inf when all infeasible.
double min_over_leaves(const MilpProblem& p);

} // namespace hzreach::oracle
