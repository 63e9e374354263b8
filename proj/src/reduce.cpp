#include "hzreach/reduce.hpp"

#include "hzreach/errors.hpp"
#include "hzreach/milp.hpp"

#include <cmath>
#include <string>

namespace hzreach
{

HybridZonotope relax_binaries(const HybridZonotope& Z, Eigen::Index k, RelaxOrder order)
{
    const auto nb = Z.num_binary();
    if (k < 0 || k > nb)
        throw ContractError("relax_binaries: k = " + std::to_string(k) + " outside [0, " + std::to_string(nb) + "]");
    if (k == 0)
        return Z;
    const Eigen::Index first = order == RelaxOrder::First ? 0 : nb - k;
    const Eigen::Index keep0 = order == RelaxOrder::First ? k : 0;
    const auto n = Z.dim();
    const auto nc = Z.num_constraints();
    const auto ng = Z.num_continuous();

    Matrix Gc(n, ng + k), Ac(nc, ng + k);
    Gc << Z.Gc(), Z.Gb().middleCols(first, k);
    Ac << Z.Ac(), Z.Ab().middleCols(first, k);
    return HybridZonotope(Z.c(), Gc, Z.Gb().middleCols(keep0, nb - k), Ac, Z.Ab().middleCols(keep0, nb - k), Z.b());
}

ConstrainedZonotope conv_hull_two_cz(const ConstrainedZonotope& Z, const ConstrainedZonotope& W)
{
    if (Z.dim() != W.dim())
        throw ShapeError("conv_hull_two_cz: dimension mismatch");
    const auto n = Z.dim();
    const auto ngz = Z.G.cols(), ngw = W.G.cols();
    const auto ncz = Z.A.rows(), ncw = W.A.rows();
    const auto n3 = 2 * (ngz + ngw);
    const auto ng = ngz + ngw + 1 + n3;
    const auto lam = ngz + ngw;

    Matrix G = Matrix::Zero(n, ng);
    G.leftCols(ngz) = Z.G;
    G.middleCols(ngz, ngw) = W.G;
    G.col(lam) = (Z.c - W.c) / 2.0;

    Matrix A = Matrix::Zero(ncz + ncw + n3, ng);
    A.topLeftCorner(ncz, ngz) = Z.A;
    A.block(0, lam, ncz, 1) = -Z.b / 2.0;
    A.block(ncz, ngz, ncw, ngw) = W.A;
    A.block(ncz, lam, ncw, 1) = W.b / 2.0;
    const auto r0 = ncz + ncw;
    // Rows: [xi_z; -xi_z; xi_w; -xi_w] + lambda column + identity slack.
    A.block(r0, 0, ngz, ngz) = Matrix::Identity(ngz, ngz);
    A.block(r0 + ngz, 0, ngz, ngz) = -Matrix::Identity(ngz, ngz);
    A.block(r0 + 2 * ngz, ngz, ngw, ngw) = Matrix::Identity(ngw, ngw);
    A.block(r0 + 2 * ngz + ngw, ngz, ngw, ngw) = -Matrix::Identity(ngw, ngw);
    A.block(r0, lam, 2 * ngz, 1).setConstant(-0.5);
    A.block(r0 + 2 * ngz, lam, 2 * ngw, 1).setConstant(0.5);
    A.block(r0, lam + 1, n3, n3) = Matrix::Identity(n3, n3);

    Vector b(ncz + ncw + n3);
    b << Z.b / 2.0, W.b / 2.0, Vector::Constant(n3, -0.5);
    return ConstrainedZonotope((Z.c + W.c) / 2.0, G, A, b);
}

HybridZonotope union_two_cz(const ConstrainedZonotope& Z, const ConstrainedZonotope& W)
{
    if (Z.dim() != W.dim())
        throw ShapeError("union_two_cz: dimension mismatch");
    const auto n = Z.dim();
    const auto ngz = Z.G.cols(), ngw = W.G.cols();
    const auto ncz = Z.A.rows(), ncw = W.A.rows();
    const auto n3 = 2 * (ngz + ngw);
    const auto ng = ngz + ngw + n3;
    const auto nc = ncz + ncw + n3;

    Matrix Gc = Matrix::Zero(n, ng);
    Gc.leftCols(ngz) = Z.G;
    Gc.middleCols(ngz, ngw) = W.G;
    const Matrix Gb = (Z.c - W.c) / 2.0;

    Matrix Ac = Matrix::Zero(nc, ng);
    Ac.topLeftCorner(ncz, ngz) = Z.A;
    Ac.block(ncz, ngz, ncw, ngw) = W.A;
    const auto r0 = ncz + ncw;
    Ac.block(r0, 0, ngz, ngz) = Matrix::Identity(ngz, ngz);
    Ac.block(r0 + ngz, 0, ngz, ngz) = -Matrix::Identity(ngz, ngz);
    Ac.block(r0 + 2 * ngz, ngz, ngw, ngw) = Matrix::Identity(ngw, ngw);
    Ac.block(r0 + 2 * ngz + ngw, ngz, ngw, ngw) = -Matrix::Identity(ngw, ngw);
    Ac.block(r0, ngz + ngw, n3, n3) = Matrix::Identity(n3, n3);

    Matrix Ab(nc, 1);
    Ab << -Z.b / 2.0, W.b / 2.0, Vector::Constant(2 * ngz, -0.5), Vector::Constant(2 * ngw, 0.5);
    Vector b(nc);
    b << Z.b / 2.0, W.b / 2.0, Vector::Constant(n3, -0.5);
    return HybridZonotope((Z.c + W.c) / 2.0, Gc, Gb, Ac, Ab, b);
}

HybridZonotope lift(const HybridZonotope& Z)
{
    const auto n = Z.dim();
    const auto nc = Z.num_constraints();
    Vector c(n + nc);
    c << Z.c(), -Z.b();
    Matrix Gc(n + nc, Z.num_continuous()), Gb(n + nc, Z.num_binary());
    Gc << Z.Gc(), Z.Ac();
    Gb << Z.Gb(), Z.Ab();
    return HybridZonotope(c, Gc, Gb, Matrix(0, Gc.cols()), Matrix(0, Gb.cols()), Vector(0));
}

HybridZonotope unlift(const HybridZonotope& lifted, Eigen::Index n)
{
    if (lifted.num_constraints() != 0)
        throw ContractError("unlift: lifted set must have no constraints");
    if (n < 0 || n > lifted.dim())
        throw ShapeError("unlift: dimension out of range");
    const auto nc = lifted.dim() - n;
    return HybridZonotope(lifted.c().head(n), lifted.Gc().topRows(n), lifted.Gb().topRows(n),
                          lifted.Gc().bottomRows(nc), lifted.Gb().bottomRows(nc), -lifted.c().tail(nc));
}

HybridZonotope merge_parallel_generators(const HybridZonotope& Z, double tol)
{
    const auto L = lift(Z);
    const Matrix& G = L.Gc();
    const auto ng = G.cols();
    const Vector norms = G.colwise().norm().transpose();
    Matrix U = G;
    for (Eigen::Index j = 0; j < ng; ++j)
        if (norms(j) > 0.0)
            U.col(j) /= norms(j);
    const Matrix cosines = U.transpose() * U;

    std::vector<bool> used(static_cast<std::size_t>(ng), false);
    std::vector<Vector> merged;
    for (Eigen::Index j = 0; j < ng; ++j)
    {
        if (used[static_cast<std::size_t>(j)] || norms(j) == 0.0)
            continue;
        Vector g = G.col(j);
        for (Eigen::Index k = j + 1; k < ng; ++k)
        {
            if (used[static_cast<std::size_t>(k)] || norms(k) == 0.0)
                continue;
            const double cs = cosines(j, k);
            if (std::abs(cs) >= 1.0 - tol)
            {
                g += (cs < 0.0 ? -1.0 : 1.0) * G.col(k);
                used[static_cast<std::size_t>(k)] = true;
            }
        }
        merged.push_back(std::move(g));
    }
    if (static_cast<Eigen::Index>(merged.size()) == ng)
        return Z;
    Matrix Gm(L.dim(), static_cast<Eigen::Index>(merged.size()));
    for (std::size_t j = 0; j < merged.size(); ++j)
        Gm.col(static_cast<Eigen::Index>(j)) = merged[j];
    const HybridZonotope reduced(L.c(), Gm, L.Gb(), Matrix(0, Gm.cols()), Matrix(0, L.num_binary()), Vector(0));
    return unlift(reduced, Z.dim());
}

namespace
{

constexpr double kMinPivot = 1e-10;

void check_pivot(const HybridZonotope& Z, Eigen::Index r, Eigen::Index c)
{
    if (r < 0 || r >= Z.num_constraints() || c < 0 || c >= Z.num_continuous())
        throw ShapeError("eliminate_constraint: (r, c) out of range");
    const double a = Z.Ac()(r, c);
    if (a == 0.0)
        throw PivotError("eliminate_constraint: zero pivot at (" + std::to_string(r) + ", " + std::to_string(c) + ")");
    if (std::abs(a) < kMinPivot)
        throw ConditioningError("eliminate_constraint: pivot magnitude below 1e-10");
}

std::vector<Eigen::Index> all_but(Eigen::Index n, Eigen::Index skip)
{
    std::vector<Eigen::Index> idx;
    idx.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        if (i != skip)
            idx.push_back(i);
    return idx;
}

// |xi_c| <= (|b_r| + sum_{j != c} |Ac[r, j]| + sum |Ab[r, :]|) / |Ac[r, c]|
double interval_range(const HybridZonotope& Z, Eigen::Index r, Eigen::Index c)
{
    const double a = std::abs(Z.Ac()(r, c));
    double s = std::abs(Z.b()(r)) + Z.Ac().row(r).cwiseAbs().sum() - a;
    if (Z.num_binary() > 0)
        s += Z.Ab().row(r).cwiseAbs().sum();
    return s / a;
}

double lp_range(const HybridZonotope& Z, Eigen::Index c)
{
    const auto ng = Z.num_continuous(), nb = Z.num_binary();
    MilpProblem p;
    p.A.resize(Z.num_constraints(), ng + nb);
    p.A << Z.Ac(), Z.Ab();
    p.rhs = Z.b();
    p.lower = Vector::Constant(ng + nb, -1.0);
    p.upper = Vector::Constant(ng + nb, 1.0);
    p.lower(c) = -kInf;
    p.upper(c) = kInf;
    double range = 0.0;
    for (double sign : {1.0, -1.0})
    {
        p.objective = Vector::Zero(ng + nb);
        p.objective(c) = -sign;
        const auto s = solve_lp(p);
        if (s.status == SolveStatus::Infeasible)
            return 0.0;
        if (s.status == SolveStatus::Unbounded)
            return kInf;
        if (s.status != SolveStatus::Optimal)
            throw SolverLimitError("eliminated_factor_range: LP did not converge");
        range = std::max(range, std::abs(s.value));
    }
    return range;
}

double excess(double range)
{
    return range > 1.0 + 1e-9 ? range - 1.0 : 0.0;
}

double score_of(const HybridZonotope& Z, Eigen::Index c, double range)
{
    const double e = excess(range);
    if (e == 0.0)
        return 0.0;
    const double g = Z.Gc().col(c).norm();
    return g == 0.0 ? 0.0 : g * e;
}

} // namespace

HybridZonotope eliminate_constraint(const HybridZonotope& Z, Eigen::Index r, Eigen::Index c)
{
    check_pivot(Z, r, c);
    const double a = Z.Ac()(r, c);
    const Vector gcol = Z.Gc().col(c) / a;
    const Vector acol = Z.Ac().col(c) / a;
    const double br = Z.b()(r);

    const Vector cn = Z.c() + gcol * br;
    Matrix Gc = Z.Gc() - gcol * Z.Ac().row(r);
    Matrix Gb = Z.Gb() - gcol * Z.Ab().row(r);
    Matrix Ac = Z.Ac() - acol * Z.Ac().row(r);
    Matrix Ab = Z.Ab() - acol * Z.Ab().row(r);
    Vector b = Z.b() - acol * br;

    const auto cols = all_but(Z.num_continuous(), c);
    const auto rows = all_but(Z.num_constraints(), r);
    return HybridZonotope(cn, Gc(Eigen::all, cols), Gb, Ac(rows, cols),
                          Ab(rows, Eigen::all), b(rows));
}

double eliminated_factor_range(const HybridZonotope& Z, Eigen::Index c, HausdorffMethod method, Eigen::Index r)
{
    if (c < 0 || c >= Z.num_continuous())
        throw ShapeError("eliminated_factor_range: column out of range");
    if (method == HausdorffMethod::IntervalRange)
    {
        if (r < 0)
            throw ContractError("eliminated_factor_range: interval method needs a pivot row");
        return interval_range(Z, r, c);
    }
    // The LP bound never exceeds the interval bound of any admissible row.
    for (Eigen::Index i = 0; i < Z.num_constraints(); ++i)
        if (std::abs(Z.Ac()(i, c)) >= kMinPivot && interval_range(Z, i, c) <= 1.0)
            return interval_range(Z, i, c);
    return lp_range(Z, c);
}

double hausdorff_error_estimate(const HybridZonotope& Z, Eigen::Index r, Eigen::Index c, HausdorffMethod method)
{
    check_pivot(Z, r, c);
    return score_of(Z, c, eliminated_factor_range(Z, c, method, r));
}

EliminationChoice choose_elimination(const HybridZonotope& Z, HausdorffMethod method)
{
    EliminationChoice best;
    double best_excess = kInf;
    auto better = [&](double score, double ex) {
        return best.r < 0 || score < best.score || (score == best.score && ex < best_excess);
    };
    const auto& A = Z.Ac();
    for (Eigen::Index c = 0; c < Z.num_continuous(); ++c)
    {
        // Largest admissible pivot in this column; its range does not depend on the row for LpRange.
        Eigen::Index rbest = -1;
        for (Eigen::Index r = 0; r < Z.num_constraints(); ++r)
            if (std::abs(A(r, c)) >= kMinPivot && (rbest < 0 || std::abs(A(r, c)) > std::abs(A(rbest, c))))
                rbest = r;
        if (rbest < 0)
            continue;
        if (method == HausdorffMethod::LpRange)
        {
            const double range = eliminated_factor_range(Z, c, method);
            const double score = score_of(Z, c, range);
            if (better(score, excess(range)))
            {
                best = {rbest, c, score, range};
                best_excess = excess(range);
            }
        }
        else
        {
            for (Eigen::Index r = 0; r < Z.num_constraints(); ++r)
            {
                if (std::abs(A(r, c)) < kMinPivot)
                    continue;
                const double range = interval_range(Z, r, c);
                const double score = score_of(Z, c, range);
                if (better(score, excess(range)))
                {
                    best = {r, c, score, range};
                    best_excess = excess(range);
                }
            }
        }
        // Nothing beats a lossless elimination; the scan order makes the choice deterministic.
        if (best.r >= 0 && best_excess == 0.0)
            break;
    }
    return best;
}

HybridZonotope reduce_complexity(const HybridZonotope& Z, const ReductionPolicy& policy)
{
    if (policy.n_g < 0 || policy.n_b < 0)
        throw ContractError("reduce_complexity: negative reduction counts");
    if (policy.relax && policy.n_b > Z.num_binary())
        throw ContractError("reduce_complexity: n_b = " + std::to_string(policy.n_b) + " exceeds the set's " +
                            std::to_string(Z.num_binary()) + " binary generators");
    HybridZonotope R = policy.relax ? relax_binaries(Z, policy.n_b, policy.order) : Z;
    if (policy.merge)
        R = merge_parallel_generators(R);
    if (policy.eliminate)
    {
        const auto iters = std::min(R.num_constraints(), policy.n_g);
        for (Eigen::Index i = 0; i < iters; ++i)
        {
            const auto pick = choose_elimination(R, policy.method);
            if (pick.r < 0)
                break;
            R = eliminate_constraint(R, pick.r, pick.c);
        }
    }
    return R;
}

} // namespace hzreach
