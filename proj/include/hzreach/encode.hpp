#pragma once

/**
 * @file encode.hpp
 * @brief Turns hybrid-zonotope questions into MilpProblems.
 *
 * Binary factors xi_b in {-1,1} are encoded as beta in {0,1} with xi_b = 2*beta - 1.
 * No big-M constants are used; every encoding is equality + box form.
 */

#include "hzreach/hybrid_zonotope.hpp"
#include "hzreach/milp.hpp"

namespace hzreach
{

/// Where the factors of the encoded set live inside an assignment vector.
struct FactorLayout
{
    Eigen::Index xi_c_offset = 0;
    Eigen::Index n_g = 0;
    Eigen::Index beta_offset = 0;
    Eigen::Index n_b = 0;

    Vector xi_c(const Vector& assignment) const { return assignment.segment(xi_c_offset, n_g); }
    /// Binary factors in {-1,1}.
    Vector xi_b(const Vector& assignment) const
    {
        return (2.0 * assignment.segment(beta_offset, n_b).array() - 1.0).matrix();
    }
};

struct EncodedMilp
{
    MilpProblem problem;
    FactorLayout layout;
    /// Multiply the solver's objective value by this to recover the quantity asked for
    /// (-1 for maximization encoded as minimization).
    double value_sign = 1.0;
};

enum class Sense
{
    Minimize,
    Maximize,
};

/// min t s.t. -t <= xi_c <= t, Ac xi_c + Ab (2 beta - 1) = b. Z is nonempty iff optimum <= 1.
EncodedMilp encode_emptiness(const HybridZonotope& Z);

/// Optimize d'(c + Gc xi_c + Gb (2 beta - 1)) over |xi_c| <= 1 and the constraints.
EncodedMilp encode_support(const HybridZonotope& Z, const Vector& d, Sense sense);

/// Pure feasibility: x = c + Gc xi_c + Gb xi_b with constraints, both within tol.
EncodedMilp encode_membership(const HybridZonotope& Z, const Point& x, double tol = 0.0);

/// The emptiness program of R ∩ O. The layout covers all factors of the intersection;
/// R's factors are its leading blocks.
EncodedMilp encode_avoidance(const HybridZonotope& R, const HybridZonotope& O);

} // namespace hzreach
