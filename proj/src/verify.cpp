#include "hzreach/verify.hpp"

#include "hzreach/encode.hpp"
#include "hzreach/errors.hpp"
#include "hzreach/set_queries.hpp"

#include <future>

namespace hzreach
{

const char* to_string(StepStatus s)
{
    switch (s)
    {
    case StepStatus::Safe: return "SAFE";
    case StepStatus::Unsafe: return "UNSAFE";
    case StepStatus::Boundary: return "BOUNDARY";
    case StepStatus::Indeterminate: return "INDETERMINATE";
    }
    return "UNKNOWN";
}

StepVerdict check_step(const HybridZonotope& R, const HybridZonotope& O, std::size_t t, const MilpOptions& milp)
{
    if (R.dim() != O.dim())
        throw ShapeError("check_avoidance: unsafe set dimension differs from the reach set");
    const auto enc = encode_avoidance(R, O);
    MilpOptions o = milp;
    // Stop as soon as the threshold is decided either way.
    o.cutoff = 1.0 + kEmptinessBand;
    o.stop_below = 1.0 - kEmptinessBand;
    const auto sol = default_engine().solve(enc.problem, o);

    StepVerdict v;
    v.t = t;
    v.nodes = sol.nodes;
    switch (sol.status)
    {
    case SolveStatus::IterationLimit:
    case SolveStatus::Unbounded:
        v.status = StepStatus::Indeterminate;
        v.optimum = sol.bound;
        return v;
    case SolveStatus::Infeasible:
        v.status = StepStatus::Safe;
        v.optimum = sol.bound; // +inf, or the smallest bound pruned by the cutoff
        v.optimum_exact = !std::isfinite(sol.bound);
        return v;
    case SolveStatus::Feasible:
    case SolveStatus::Optimal:
        break;
    }
    v.optimum = sol.value;
    v.optimum_exact = sol.status == SolveStatus::Optimal;
    if (sol.value < 1.0 - kEmptinessBand)
        v.status = StepStatus::Unsafe;
    else if (sol.value <= 1.0 + kEmptinessBand)
        v.status = StepStatus::Boundary;
    else
        v.status = StepStatus::Safe;
    if (v.status != StepStatus::Safe)
    {
        // R's factors lead the intersection's factor blocks.
        const Vector xc = enc.layout.xi_c(sol.assignment);
        const Vector xb = enc.layout.xi_b(sol.assignment);
        v.witness_xi_c = xc.head(R.num_continuous());
        v.witness_xi_b = xb.head(R.num_binary());
        v.witness = R.evaluate(v.witness_xi_c, v.witness_xi_b);
    }
    return v;
}

Verdict check_avoidance(const ReachResult& result, const HybridZonotope& O, const VerifyOptions& opts)
{
    if (result.sets.size() < 2)
        throw ContractError("check_avoidance: reach result has no steps");
    Verdict out;
    const auto T = result.sets.size() - 1;
    if (opts.parallel)
    {
        std::vector<std::future<StepVerdict>> jobs;
        for (std::size_t t = 1; t <= T; ++t)
            jobs.push_back(std::async(std::launch::async, [&, t] { return check_step(result.sets[t], O, t, opts.milp); }));
        for (auto& j : jobs)
            out.steps.push_back(j.get());
    }
    else
    {
        for (std::size_t t = 1; t <= T; ++t)
            out.steps.push_back(check_step(result.sets[t], O, t, opts.milp));
    }
    bool indeterminate = false, unsafe = false;
    for (const auto& s : out.steps)
    {
        indeterminate = indeterminate || s.status == StepStatus::Indeterminate;
        unsafe = unsafe || s.status == StepStatus::Unsafe || s.status == StepStatus::Boundary;
    }
    out.overall = unsafe ? StepStatus::Unsafe : indeterminate ? StepStatus::Indeterminate : StepStatus::Safe;
    return out;
}

} // namespace hzreach
