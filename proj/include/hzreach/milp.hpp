#pragma once

/**
 * @file milp.hpp
 * @brief LP core (bounded-variable revised simplex) and branch-and-bound MILP engine.
 *
 * Problems are in equality + box form:
 *   min  objective' x + objective_offset
 *   s.t. A x = rhs,  lower <= x <= upper,  x_j in {0,1} where binary[j].
 */

#include "hzreach/hybrid_zonotope.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace hzreach
{

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct MilpProblem
{
    Vector objective;
    double objective_offset = 0.0;
    Matrix A;
    Vector rhs;
    Vector lower;
    Vector upper;
    std::vector<bool> binary;
    /// Optional variable names for LP text dumps.
    std::vector<std::string> names;

    Eigen::Index num_vars() const noexcept { return objective.size(); }
    Eigen::Index num_rows() const noexcept { return rhs.size(); }
    std::size_t num_binaries() const;

    /// Throws ShapeError / ContractError when the data are inconsistent.
    void validate() const;
};

enum class SolveStatus
{
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    /// Early stop: an incumbent at or below `MilpOptions::stop_below` was found.
    Feasible,
};

const char* to_string(SolveStatus s);

struct MilpSolution
{
    SolveStatus status = SolveStatus::Infeasible;
    double value = kInf;     ///< objective of the returned assignment (incl. offset)
    Vector assignment;       ///< primal point, binaries exactly 0/1
    double gap = kInf;       ///< value - bound, 0 for a proven optimum
    double bound = -kInf;    ///< proven lower bound on the optimum (>= cutoff when pruned out)
    Vector duals;            ///< row duals (pure LPs only)
    double dual_value = -kInf; ///< dual objective (pure LPs only)
    std::int64_t iterations = 0;
    std::int64_t nodes = 0;
};

struct MilpOptions
{
    std::int64_t max_pivots = 100000;   ///< per LP solve
    std::int64_t max_nodes = 1000000;
    std::int64_t degenerate_before_bland = 500;
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    double integrality_tol = 1e-6;
    double abs_gap = 1e-8;
    double rel_gap = 1e-6;
    /// Nodes whose relaxation bound exceeds this are pruned; nothing below it means Infeasible.
    double cutoff = kInf;
    /// Stop at the first incumbent with value <= stop_below (status Feasible).
    double stop_below = -kInf;
};

/// Solves a problem with no binaries (binary mask ignored if `relax` is set).
MilpSolution solve_lp(const MilpProblem& p, const MilpOptions& opts = {});

/// Best-bound branch and bound over the LP relaxation. Lowest-index fractional binary,
/// down branch first; deterministic.
MilpSolution solve_milp(const MilpProblem& p, const MilpOptions& opts = {});

/// Engine seam so an external backend can replace the built-in solver.
class MilpEngine
{
public:
    virtual ~MilpEngine() = default;
    virtual MilpSolution solve(const MilpProblem& p, const MilpOptions& opts) const = 0;
    virtual std::string name() const = 0;
};

class BranchAndBoundEngine final : public MilpEngine
{
public:
    MilpSolution solve(const MilpProblem& p, const MilpOptions& opts) const override { return solve_milp(p, opts); }
    std::string name() const override { return "builtin-bnb"; }
};

/// Process-wide engine used by the set queries; defaults to BranchAndBoundEngine.
const MilpEngine& default_engine();
/// Replaces the process-wide engine (nullptr restores the built-in one). Not thread-safe.
void set_default_engine(const MilpEngine* engine);

/// Writes the problem in CPLEX LP text format.
void write_lp_text(const MilpProblem& p, std::ostream& os);

} // namespace hzreach
