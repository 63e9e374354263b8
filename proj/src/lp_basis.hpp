#pragma once

#include "hzreach/milp.hpp"

#include <cstdint>
#include <vector>

namespace hzreach
{

/// Final simplex basis, reusable as a starting point after bound changes.
struct LpBasis
{
    std::vector<Eigen::Index> basic;
    std::vector<std::uint8_t> state; // per column of [A, artificials]
    std::vector<double> sign;
};

MilpSolution solve_lp_with_bounds(const MilpProblem& p, const Vector& lower, const Vector& upper,
                                  const MilpOptions& opts, const LpBasis* start = nullptr,
                                  LpBasis* final_basis = nullptr);

} // namespace hzreach
