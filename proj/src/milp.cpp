#include "hzreach/milp.hpp"

#include "hzreach/errors.hpp"
#include "lp_basis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>
#include <queue>

namespace hzreach
{

std::size_t MilpProblem::num_binaries() const
{
    return static_cast<std::size_t>(std::count(binary.begin(), binary.end(), true));
}

void MilpProblem::validate() const
{
    const auto n = num_vars();
    if (A.cols() != n || A.rows() != rhs.size() || lower.size() != n || upper.size() != n)
        throw ShapeError("MilpProblem: inconsistent dimensions");
    if (!binary.empty() && static_cast<Eigen::Index>(binary.size()) != n)
        throw ShapeError("MilpProblem: binary mask length must equal variable count");
    if (!objective.allFinite() || !A.allFinite() || !rhs.allFinite() || !std::isfinite(objective_offset))
        throw ContractError("MilpProblem: non-finite problem data");
    for (Eigen::Index j = 0; j < n; ++j)
    {
        if (std::isnan(lower(j)) || std::isnan(upper(j)))
            throw ContractError("MilpProblem: NaN bound");
        if (lower(j) > upper(j))
            throw ContractError("MilpProblem: lower bound above upper bound");
        if (!binary.empty() && binary[static_cast<std::size_t>(j)] && (lower(j) < 0.0 || upper(j) > 1.0))
            throw ContractError("MilpProblem: binary variable bounds must lie within [0,1]");
    }
}

const char* to_string(SolveStatus s)
{
    switch (s)
    {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::Feasible: return "feasible";
    }
    return "unknown";
}

namespace
{

struct Node
{
    double bound;
    int depth;
    std::int64_t seq;
    std::vector<std::int8_t> fix; // per binary slot: -1 free, 0, 1
    std::shared_ptr<const LpBasis> parent; // optimal basis of the parent relaxation
};

struct NodeOrder
{
    // std::priority_queue pops the "largest"; invert so the smallest bound comes first,
    // then the deepest node, then the oldest.
    bool operator()(const Node& a, const Node& b) const
    {
        if (a.bound != b.bound)
            return a.bound > b.bound;
        if (a.depth != b.depth)
            return a.depth < b.depth;
        return a.seq > b.seq;
    }
};

} // namespace

MilpSolution solve_milp(const MilpProblem& p, const MilpOptions& opts)
{
    p.validate();
    std::vector<Eigen::Index> bin_idx;
    for (std::size_t j = 0; j < p.binary.size(); ++j)
        if (p.binary[j])
            bin_idx.push_back(static_cast<Eigen::Index>(j));

    MilpSolution result;
    if (bin_idx.empty())
    {
        result = solve_lp_with_bounds(p, p.lower, p.upper, opts);
        result.nodes = 1;
        if (result.status == SolveStatus::Optimal && result.value > opts.cutoff)
        {
            result.bound = result.value;
            result.status = SolveStatus::Infeasible;
        }
        else if (result.status == SolveStatus::Optimal && result.value <= opts.stop_below)
            result.status = SolveStatus::Feasible;
        return result;
    }

    double incumbent = kInf;
    Vector incumbent_x;
    double pruned_bound = kInf; // smallest bound among nodes pruned by the cutoff
    std::int64_t seq = 0;
    std::int64_t pivots = 0;
    std::int64_t nodes = 0;

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{-kInf, 0, seq++, std::vector<std::int8_t>(bin_idx.size(), -1), nullptr});

    auto gap_threshold = [&](double inc) { return std::max(opts.abs_gap, opts.rel_gap * std::abs(inc)); };

    auto finish = [&](SolveStatus st) {
        result.status = st;
        result.iterations = pivots;
        result.nodes = nodes;
        double best_open = open.empty() ? kInf : open.top().bound;
        if (std::isfinite(incumbent))
        {
            result.value = incumbent;
            result.assignment = incumbent_x;
            result.bound = std::min({incumbent, best_open, pruned_bound});
            result.gap = std::max(0.0, incumbent - result.bound);
        }
        else
        {
            result.bound = std::min(best_open, pruned_bound);
        }
        return result;
    };

    Vector lo = p.lower, hi = p.upper;
    while (!open.empty())
    {
        if (std::isfinite(incumbent) && open.top().bound >= incumbent - gap_threshold(incumbent))
            break;
        if (nodes >= opts.max_nodes)
            return finish(SolveStatus::IterationLimit);

        Node node = open.top();
        open.pop();
        ++nodes;

        lo = p.lower;
        hi = p.upper;
        for (std::size_t k = 0; k < bin_idx.size(); ++k)
        {
            if (node.fix[k] >= 0)
                lo(bin_idx[k]) = hi(bin_idx[k]) = node.fix[k];
        }
        auto basis = std::make_shared<LpBasis>();
        MilpSolution lp = solve_lp_with_bounds(p, lo, hi, opts, node.parent.get(), basis.get());
        pivots += lp.iterations;
        if (lp.status == SolveStatus::IterationLimit)
            return finish(SolveStatus::IterationLimit);
        if (lp.status == SolveStatus::Infeasible)
            continue;
        if (lp.status == SolveStatus::Unbounded)
        {
            // An unbounded relaxation with integral-feasible rays: report it as such.
            result = MilpSolution{};
            result.status = SolveStatus::Unbounded;
            result.value = -kInf;
            result.nodes = nodes;
            result.iterations = pivots;
            return result;
        }
        const double bound = lp.value;
        if (bound > opts.cutoff)
        {
            pruned_bound = std::min(pruned_bound, bound);
            continue;
        }
        if (std::isfinite(incumbent) && bound >= incumbent - gap_threshold(incumbent))
            continue;

        std::size_t branch = bin_idx.size();
        for (std::size_t k = 0; k < bin_idx.size(); ++k)
        {
            const double v = lp.assignment(bin_idx[k]);
            if (std::min(v, 1.0 - v) > opts.integrality_tol)
            {
                branch = k;
                break;
            }
        }

        if (branch == bin_idx.size())
        {
            // Integral within tolerance: re-solve with binaries pinned for an exact assignment.
            bool exact = true;
            for (std::size_t k = 0; k < bin_idx.size(); ++k)
            {
                const double v = lp.assignment(bin_idx[k]);
                const double r = std::round(v);
                lo(bin_idx[k]) = hi(bin_idx[k]) = r;
                exact = exact && v == r;
            }
            MilpSolution leaf = lp;
            if (!exact)
            {
                leaf = solve_lp_with_bounds(p, lo, hi, opts, basis.get());
                pivots += leaf.iterations;
                if (leaf.status == SolveStatus::IterationLimit)
                    return finish(SolveStatus::IterationLimit);
                if (leaf.status != SolveStatus::Optimal)
                    continue;
            }
            if (leaf.value > opts.cutoff)
            {
                pruned_bound = std::min(pruned_bound, leaf.value);
                continue;
            }
            if (leaf.value < incumbent)
            {
                incumbent = leaf.value;
                incumbent_x = leaf.assignment;
                if (incumbent <= opts.stop_below)
                    return finish(SolveStatus::Feasible);
            }
            continue;
        }

        Node down{bound, node.depth + 1, seq++, node.fix, basis};
        down.fix[branch] = 0;
        Node up{bound, node.depth + 1, seq++, std::move(node.fix), basis};
        up.fix[branch] = 1;
        open.push(std::move(down));
        open.push(std::move(up));
    }

    if (!std::isfinite(incumbent))
        return finish(SolveStatus::Infeasible);
    return finish(SolveStatus::Optimal);
}

namespace
{

class DefaultEngineHolder
{
public:
    static const MilpEngine*& current()
    {
        static const MilpEngine* engine = nullptr;
        return engine;
    }
};

} // namespace

const MilpEngine& default_engine()
{
    static const BranchAndBoundEngine builtin;
    const MilpEngine* e = DefaultEngineHolder::current();
    return e ? *e : builtin;
}

void set_default_engine(const MilpEngine* engine)
{
    DefaultEngineHolder::current() = engine;
}

void write_lp_text(const MilpProblem& p, std::ostream& os)
{
    auto name = [&](Eigen::Index j) {
        if (static_cast<std::size_t>(j) < p.names.size() && !p.names[static_cast<std::size_t>(j)].empty())
            return p.names[static_cast<std::size_t>(j)];
        return "x" + std::to_string(j);
    };
    auto term = [&](double coef, Eigen::Index j, bool first) {
        if (coef >= 0.0)
            os << (first ? "" : " + ") << coef << ' ' << name(j);
        else
            os << (first ? "- " : " - ") << -coef << ' ' << name(j);
    };
    const auto old_precision = os.precision(17);

    os << "\\ objective offset " << p.objective_offset << "\nMinimize\n obj:";
    bool first = true;
    for (Eigen::Index j = 0; j < p.num_vars(); ++j)
    {
        if (p.objective(j) == 0.0)
            continue;
        os << ' ';
        term(p.objective(j), j, first);
        first = false;
    }
    if (first)
        os << " 0 " << name(0);
    os << "\nSubject To\n";
    for (Eigen::Index i = 0; i < p.num_rows(); ++i)
    {
        os << " c" << i << ":";
        first = true;
        for (Eigen::Index j = 0; j < p.num_vars(); ++j)
        {
            if (p.A(i, j) == 0.0)
                continue;
            os << ' ';
            term(p.A(i, j), j, first);
            first = false;
        }
        if (first)
            os << " 0 " << name(0);
        os << " = " << p.rhs(i) << '\n';
    }
    os << "Bounds\n";
    for (Eigen::Index j = 0; j < p.num_vars(); ++j)
    {
        const bool lo_inf = !std::isfinite(p.lower(j));
        const bool hi_inf = !std::isfinite(p.upper(j));
        if (lo_inf && hi_inf)
            os << ' ' << name(j) << " free\n";
        else
        {
            os << ' ';
            if (lo_inf)
                os << "-inf";
            else
                os << p.lower(j);
            os << " <= " << name(j) << " <= ";
            if (hi_inf)
                os << "+inf";
            else
                os << p.upper(j);
            os << '\n';
        }
    }
    if (p.num_binaries() > 0)
    {
        os << "Binaries\n";
        for (std::size_t j = 0; j < p.binary.size(); ++j)
            if (p.binary[j])
                os << ' ' << name(static_cast<Eigen::Index>(j)) << '\n';
    }
    os << "End\n";
    os.precision(old_precision);
}

} // namespace hzreach
