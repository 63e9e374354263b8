#pragma once

/**
 * @file verify.hpp
 * @brief Unsafe-set avoidance over a reach horizon, one emptiness MILP per step.
 */

#include "hzreach/hybrid_zonotope.hpp"
#include "hzreach/milp.hpp"
#include "hzreach/reach.hpp"

#include <optional>
#include <vector>

namespace hzreach
{

enum class StepStatus
{
    Safe,
    Unsafe,
    Boundary,      ///< optimum within 1e-9 of 1; counted as unsafe overall
    Indeterminate, ///< solver limit hit
};

const char* to_string(StepStatus s);

struct StepVerdict
{
    std::size_t t = 0;
    StepStatus status = StepStatus::Indeterminate;
    /// Emptiness optimum of R_t ∩ O. When the search stopped early this is the bound that decided it;
    /// +inf when the intersection has no feasible factors at all.
    double optimum = kInf;
    bool optimum_exact = false;
    std::optional<Point> witness;
    /// Factors of R_t producing the witness.
    Vector witness_xi_c;
    Vector witness_xi_b;
    std::int64_t nodes = 0;
};

struct Verdict
{
    std::vector<StepVerdict> steps;
    StepStatus overall = StepStatus::Safe;
};

struct VerifyOptions
{
    bool parallel = true;
    MilpOptions milp;
};

/// Decides each R_t ∩ O, t = 1..T. Step 0 (the initial set) is not checked.
Verdict check_avoidance(const ReachResult& result, const HybridZonotope& O, const VerifyOptions& opts = {});

/// Single-set form of the same decision.
StepVerdict check_step(const HybridZonotope& R, const HybridZonotope& O, std::size_t t = 0,
                       const MilpOptions& milp = {});

} // namespace hzreach
