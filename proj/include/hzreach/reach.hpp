#pragma once

/**
 * @file reach.hpp
 * @brief Exact closed-loop images x+ = A_d x + B_d pi(x) of hybrid zonotopes and horizon recursion.
 */

#include "hzreach/hybrid_zonotope.hpp"
#include "hzreach/nn.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hzreach
{

struct ReductionPolicy;

struct LinearSystem
{
    Matrix A_d;
    Matrix B_d;

    /// Throws ShapeError unless A_d is square and B_d has matching rows.
    void validate() const;
    Eigen::Index state_dim() const noexcept { return A_d.rows(); }
    Eigen::Index input_dim() const noexcept { return B_d.cols(); }
};

struct G1G2
{
    Matrix G1;
    Matrix G2;
};

/**
 * Generator alignment for the closed-loop image: repeats the split pattern
 * log2(nb_pi + 1) - log2(nb + 1) times. Throws StructuralError when that is not a
 * nonnegative integer.
 */
G1G2 compute_g1_g2(const Matrix& Gc, const Matrix& Gb, Eigen::Index nb_pi);

struct StepTrace
{
    HybridZonotope set;
    /// Factors of set map to factors of the input set through this.
    FactorMap factors;
    std::vector<LayerRecord> layers;
    /// True when the doubling alignment was used; false when an empty branch forced the traced one.
    bool doubling_alignment = true;
};

StepTrace closed_loop_step_traced(const HybridZonotope& Z, const LinearSystem& sys, const NeuralNetwork& net,
                                  BoundsMode mode);

HybridZonotope closed_loop_step(const HybridZonotope& Z, const LinearSystem& sys, const NeuralNetwork& net,
                                BoundsMode mode);

/// Parent factors (xi_c, xi_b) of the input set for a feasible assignment of the image.
struct Preimage
{
    Point x;
    Vector xi_c;
    Vector xi_b;
};

/**
 * Recovers x in Z with A_d x + B_d pi(x) equal to the point encoded by (xi_c, xi_b) in the
 * image. Throws ContractError when the assignment violates the image's constraints by more than tol.
 */
Preimage decode_preimage(const StepTrace& step, const HybridZonotope& Z, const Vector& xi_c, const Vector& xi_b,
                         double tol = 1e-6);

struct StepLog
{
    std::size_t t = 0;
    Complexity complexity;
    Complexity before_reduction;
    Eigen::Index crossings = 0;
    Eigen::Index empty_branches = 0;
    bool reduced = false;
    double seconds = 0.0;
};

struct ReachOptions
{
    BoundsMode mode = BoundsMode::Exact;
    /// Largest n_b allowed on an unreduced set; CapacityError beyond it.
    Eigen::Index max_binaries = 24;
    /// Drop all-zero generator columns between steps.
    bool prune = true;
};

struct ReachResult
{
    std::vector<HybridZonotope> sets; ///< R_0 .. R_T
    std::vector<StepLog> log;         ///< entry t describes R_t
    /// For t >= 1: how the factors of the unreduced R_t map to R_{t-1}. Empty once reduction ran.
    std::vector<std::optional<StepTrace>> traces;
    /// Continuous columns of the traced step output kept by pruning (empty means none pruned).
    std::vector<std::vector<Eigen::Index>> kept_continuous;

    std::size_t horizon() const noexcept { return sets.empty() ? 0 : sets.size() - 1; }
};

ReachResult reach_horizon(const HybridZonotope& X0, const LinearSystem& sys, const NeuralNetwork& net,
                          std::size_t T, const ReductionPolicy* reduction, const ReachOptions& opts = {});

/**
 * Walks a feasible assignment of R_t back to a factor assignment of X0 through the stored traces.
 * Returns the states x_0 .. x_t. Throws ContractError if a step was reduced.
 */
std::vector<Point> decode_chain(const ReachResult& result, std::size_t t, const Vector& xi_c, const Vector& xi_b,
                                double tol = 1e-6);

} // namespace hzreach
