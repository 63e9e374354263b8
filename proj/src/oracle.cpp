#include "hzreach/oracle.hpp"

#include "hzreach/errors.hpp"
#include "hzreach/set_queries.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace hzreach::oracle
{

Trajectory simulate(const LinearSystem& sys, const NeuralNetwork& net, const Point& x0, std::size_t T)
{
    sys.validate();
    if (x0.size() != sys.state_dim())
        throw ShapeError("simulate: initial state dimension mismatch");
    Trajectory tr;
    tr.states.push_back(x0);
    for (std::size_t t = 0; t < T; ++t)
    {
        const Point& x = tr.states.back();
        tr.states.push_back(sys.A_d * x + sys.B_d * net.evaluate(x));
    }
    return tr;
}

namespace
{

// All {-1,1}^nb patterns in counting order.
Vector pattern(std::uint64_t bits, Eigen::Index nb)
{
    Vector p(nb);
    for (Eigen::Index i = 0; i < nb; ++i)
        p(i) = ((bits >> i) & 1U) ? 1.0 : -1.0;
    return p;
}

std::uint64_t pattern_count(Eigen::Index nb)
{
    if (nb > 30)
        throw CapacityError("oracle: too many binary factors to enumerate");
    return std::uint64_t{1} << nb;
}

} // namespace

std::vector<Point> grid_points(const HybridZonotope& X0, std::size_t per_axis, std::size_t random_count,
                               std::uint64_t seed)
{
    if (X0.num_constraints() != 0)
        throw ContractError("grid_points: initial set must be free of constraints");
    const auto ng = X0.num_continuous(), nb = X0.num_binary();
    std::vector<Point> pts;
    std::vector<double> axis;
    for (std::size_t k = 0; k < per_axis; ++k)
        axis.push_back(per_axis == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(per_axis - 1));
    std::size_t grid = axis.empty() ? 0 : 1;
    for (Eigen::Index i = 0; i < ng; ++i)
        grid *= axis.size();
    for (std::uint64_t bits = 0; bits < pattern_count(nb); ++bits)
    {
        const Vector xb = pattern(bits, nb);
        for (std::size_t g = 0; g < grid; ++g)
        {
            Vector xc(ng);
            std::size_t rest = g;
            for (Eigen::Index i = 0; i < ng; ++i)
            {
                xc(i) = axis[rest % axis.size()];
                rest /= axis.size();
            }
            pts.push_back(X0.evaluate(xc, xb));
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t k = 0; k < random_count; ++k)
    {
        Vector xc(ng), xb(nb);
        for (Eigen::Index i = 0; i < ng; ++i)
            xc(i) = u(rng);
        for (Eigen::Index i = 0; i < nb; ++i)
            xb(i) = (rng() & 1U) ? 1.0 : -1.0;
        pts.push_back(X0.evaluate(xc, xb));
    }
    return pts;
}

InclusionReport grid_inclusion_check(const std::vector<Point>& initial_points, const LinearSystem& sys,
                                     const NeuralNetwork& net, const ReachResult& result, double tol)
{
    InclusionReport rep;
    const auto T = result.horizon();
    for (const auto& x0 : initial_points)
    {
        const auto tr = simulate(sys, net, x0, T);
        for (std::size_t t = 0; t <= T; ++t)
        {
            ++rep.checked;
            if (contains_point(result.sets[t], tr.states[t], tol))
                continue;
            ++rep.violations;
            rep.violating_states.push_back(tr.states[t]);
            rep.max_residual = std::max(rep.max_residual, membership_distance(result.sets[t], tr.states[t]));
        }
    }
    return rep;
}

double membership_distance(const HybridZonotope& Z, const Point& x)
{
    if (x.size() != Z.dim())
        throw ShapeError("membership_distance: dimension mismatch");
    const auto n = Z.dim(), ng = Z.num_continuous(), nb = Z.num_binary(), nc = Z.num_constraints();
    // Variables [xi_c | beta | e | t]; min t with -t <= e <= t via two slack blocks folded into bounds-free rows.
    const Eigen::Index e0 = ng + nb, t = e0 + n, s0 = t + 1, nv = s0 + 2 * n;
    MilpProblem p;
    p.objective = Vector::Zero(nv);
    p.objective(t) = 1.0;
    p.A = Matrix::Zero(nc + 3 * n, nv);
    p.rhs = Vector::Zero(nc + 3 * n);
    const Vector ones = Vector::Ones(nb);
    p.A.block(0, 0, nc, ng) = Z.Ac();
    p.A.block(0, ng, nc, nb) = 2.0 * Z.Ab();
    p.rhs.head(nc) = Z.b() + Z.Ab() * ones;
    p.A.block(nc, 0, n, ng) = Z.Gc();
    p.A.block(nc, ng, n, nb) = 2.0 * Z.Gb();
    p.A.block(nc, e0, n, n) = Matrix::Identity(n, n);
    p.rhs.segment(nc, n) = x - Z.c() + Z.Gb() * ones;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        // e_i - t + s = 0 and -e_i - t + s' = 0, s, s' >= 0
        p.A(nc + n + i, e0 + i) = 1.0;
        p.A(nc + n + i, t) = -1.0;
        p.A(nc + n + i, s0 + i) = 1.0;
        p.A(nc + 2 * n + i, e0 + i) = -1.0;
        p.A(nc + 2 * n + i, t) = -1.0;
        p.A(nc + 2 * n + i, s0 + n + i) = 1.0;
    }
    p.lower = Vector::Constant(nv, -1.0);
    p.upper = Vector::Constant(nv, 1.0);
    p.lower.segment(e0, n).setConstant(-kInf);
    p.upper.segment(e0, n).setConstant(kInf);
    p.lower(t) = 0.0;
    p.upper(t) = kInf;
    p.lower.tail(2 * n).setZero();
    p.upper.tail(2 * n).setConstant(kInf);
    p.binary.assign(static_cast<std::size_t>(nv), false);
    for (Eigen::Index i = 0; i < nb; ++i)
    {
        p.binary[static_cast<std::size_t>(ng + i)] = true;
        p.lower(ng + i) = 0.0;
    }
    const auto s = solve_milp(p);
    return s.status == SolveStatus::Optimal ? s.value : kInf;
}

std::vector<double> sampled_hull_support(const std::vector<Point>& points, const std::vector<Vector>& directions)
{
    if (points.empty())
        throw ContractError("sampled_hull_support: no points");
    std::vector<double> out;
    for (const auto& d : directions)
    {
        double best = -kInf;
        for (const auto& p : points)
            best = std::max(best, d.dot(p));
        out.push_back(best);
    }
    return out;
}

double directed_hausdorff(const std::vector<Point>& A, const std::vector<Point>& B)
{
    if (A.empty() || B.empty())
        throw ContractError("sampled_hausdorff: empty sample set");
    double worst = 0.0;
    for (const auto& a : A)
    {
        double best = kInf;
        for (const auto& b : B)
        {
            best = std::min(best, (a - b).squaredNorm());
            if (best <= worst)
                break;
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

double sampled_hausdorff(const std::vector<Point>& A, const std::vector<Point>& B)
{
    return std::max(directed_hausdorff(A, B), directed_hausdorff(B, A));
}

std::vector<Vector> planar_directions(Eigen::Index n, std::size_t count, Eigen::Index i, Eigen::Index j)
{
    std::vector<Vector> out;
    for (std::size_t k = 0; k < count; ++k)
    {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
        Vector d = Vector::Zero(n);
        d(i) = std::cos(th);
        d(j) = std::sin(th);
        out.push_back(d);
    }
    return out;
}

double enumeration_emptiness_optimum(const HybridZonotope& Z)
{
    const auto ng = Z.num_continuous(), nb = Z.num_binary(), nc = Z.num_constraints();
    if (nc == 0)
        return 0.0;
    // Per pattern: min t s.t. Ac xi = b - Ab xi_b, xi - t + s+ = 0, -xi - t + s- = 0.
    const Eigen::Index nv = 1 + 3 * ng;
    MilpProblem p;
    p.objective = Vector::Zero(nv);
    p.objective(0) = 1.0;
    p.A = Matrix::Zero(nc + 2 * ng, nv);
    p.A.block(0, 1, nc, ng) = Z.Ac();
    for (Eigen::Index i = 0; i < ng; ++i)
    {
        p.A(nc + i, 1 + i) = 1.0;
        p.A(nc + i, 0) = -1.0;
        p.A(nc + i, 1 + ng + i) = 1.0;
        p.A(nc + ng + i, 1 + i) = -1.0;
        p.A(nc + ng + i, 0) = -1.0;
        p.A(nc + ng + i, 1 + 2 * ng + i) = 1.0;
    }
    p.lower = Vector::Zero(nv);
    p.upper = Vector::Constant(nv, kInf);
    p.lower.segment(1, ng).setConstant(-kInf);
    double best = kInf;
    for (std::uint64_t bits = 0; bits < pattern_count(nb); ++bits)
    {
        p.rhs = Vector::Zero(nc + 2 * ng);
        p.rhs.head(nc) = Z.b() - Z.Ab() * pattern(bits, nb);
        const auto s = solve_lp(p);
        if (s.status == SolveStatus::Optimal)
            best = std::min(best, s.value);
    }
    return best;
}

bool enumeration_is_empty(const HybridZonotope& Z)
{
    return enumeration_emptiness_optimum(Z) > 1.0 + 1e-9;
}

bool enumeration_intersects(const HybridZonotope& R, const HybridZonotope& O)
{
    if (R.dim() != O.dim())
        throw ShapeError("enumeration_intersects: dimension mismatch");
    const auto n = R.dim();
    const auto ngr = R.num_continuous(), ngo = O.num_continuous();
    const auto ncr = R.num_constraints(), nco = O.num_constraints();
    // Variables [xi_R | xi_O] in [-1,1]; rows: R constraints, O constraints, point equality.
    MilpProblem p;
    p.objective = Vector::Zero(ngr + ngo);
    p.A = Matrix::Zero(ncr + nco + n, ngr + ngo);
    p.A.block(0, 0, ncr, ngr) = R.Ac();
    p.A.block(ncr, ngr, nco, ngo) = O.Ac();
    p.A.block(ncr + nco, 0, n, ngr) = R.Gc();
    p.A.block(ncr + nco, ngr, n, ngo) = -O.Gc();
    p.lower = Vector::Constant(ngr + ngo, -1.0);
    p.upper = Vector::Constant(ngr + ngo, 1.0);
    for (std::uint64_t br = 0; br < pattern_count(R.num_binary()); ++br)
    {
        const Vector pr = pattern(br, R.num_binary());
        for (std::uint64_t bo = 0; bo < pattern_count(O.num_binary()); ++bo)
        {
            const Vector po = pattern(bo, O.num_binary());
            p.rhs.resize(ncr + nco + n);
            p.rhs << R.b() - R.Ab() * pr, O.b() - O.Ab() * po, O.c() + O.Gb() * po - R.c() - R.Gb() * pr;
            if (solve_lp(p).status == SolveStatus::Optimal)
                return true;
        }
    }
    return false;
}

double min_over_leaves(const MilpProblem& p)
{
    std::vector<Eigen::Index> bins;
    for (std::size_t j = 0; j < p.binary.size(); ++j)
        if (p.binary[j])
            bins.push_back(static_cast<Eigen::Index>(j));
    double best = kInf;
    for (std::uint64_t bits = 0; bits < pattern_count(static_cast<Eigen::Index>(bins.size())); ++bits)
    {
        MilpProblem q = p;
        q.binary.clear();
        bool ok = true;
        for (std::size_t k = 0; k < bins.size(); ++k)
        {
            const double v = ((bits >> k) & 1U) ? 1.0 : 0.0;
            ok = ok && p.lower(bins[k]) <= v && v <= p.upper(bins[k]);
            q.lower(bins[k]) = q.upper(bins[k]) = v;
        }
        if (!ok)
            continue;
        const auto s = solve_lp(q);
        if (s.status == SolveStatus::Optimal)
            best = std::min(best, s.value);
    }
    return best;
}

} // namespace hzreach::oracle
