#include "hzreach/set_queries.hpp"

#include "hzreach/encode.hpp"
#include "hzreach/errors.hpp"

#include <Eigen/QR>

#include <cmath>
#include <map>
#include <optional>
#include <random>

namespace hzreach
{

double emptiness_optimum(const HybridZonotope& Z, const MilpOptions& opts)
{
    const auto enc = encode_emptiness(Z);
    const auto sol = default_engine().solve(enc.problem, opts);
    if (sol.status == SolveStatus::IterationLimit)
        throw SolverLimitError("emptiness_optimum: solver iteration limit");
    if (sol.status == SolveStatus::Infeasible)
        return kInf;
    return sol.value;
}

bool is_empty(const HybridZonotope& Z, const MilpOptions& opts)
{
    if (Z.num_constraints() == 0)
        return false;
    MilpOptions o = opts;
    o.cutoff = 1.0 + kEmptinessBand;
    o.stop_below = 1.0 + kEmptinessBand;
    const auto enc = encode_emptiness(Z);
    const auto sol = default_engine().solve(enc.problem, o);
    if (sol.status == SolveStatus::IterationLimit)
        throw SolverLimitError("is_empty: solver iteration limit");
    return sol.status == SolveStatus::Infeasible;
}

bool contains_point(const HybridZonotope& Z, const Point& x, double tol)
{
    if (x.size() != Z.dim())
        throw ShapeError("contains_point: point dimension mismatch");
    const auto hull = generator_interval_hull(Z);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!hull[static_cast<std::size_t>(i)].contains(x(i), tol))
            return false;
    MilpOptions o;
    o.stop_below = kInf;
    const auto enc = encode_membership(Z, x, tol);
    const auto sol = default_engine().solve(enc.problem, o);
    if (sol.status == SolveStatus::IterationLimit)
        throw SolverLimitError("contains_point: solver iteration limit");
    return sol.status == SolveStatus::Optimal || sol.status == SolveStatus::Feasible;
}

SupportResult support(const HybridZonotope& Z, const Vector& d, bool maximize)
{
    const auto enc = encode_support(Z, d, maximize ? Sense::Maximize : Sense::Minimize);
    const auto sol = default_engine().solve(enc.problem, {});
    if (sol.status == SolveStatus::Infeasible)
        throw EmptySetError("support: set is empty");
    if (sol.status != SolveStatus::Optimal)
        throw SolverLimitError(std::string("support: solver returned ") + to_string(sol.status));
    SupportResult r;
    r.value = enc.value_sign * sol.value;
    r.xi_c = enc.layout.xi_c(sol.assignment);
    r.xi_b = enc.layout.xi_b(sol.assignment);
    r.argument = Z.evaluate(r.xi_c, r.xi_b);
    return r;
}

Interval bounds(const HybridZonotope& Z, const Vector& d)
{
    const auto lo = support(Z, d, false);
    const auto hi = support(Z, d, true);
    return {lo.value, hi.value};
}

std::vector<Interval> interval_hull(const HybridZonotope& Z)
{
    std::vector<Interval> out;
    out.reserve(static_cast<std::size_t>(Z.dim()));
    for (Eigen::Index i = 0; i < Z.dim(); ++i)
        out.push_back(bounds(Z, Vector::Unit(Z.dim(), i)));
    return out;
}

namespace
{

/// LP over one branch: optimize obj' xi_c with |xi_c| <= 1, Ac xi_c = rhs.
MilpSolution branch_lp(const Matrix& Ac, const Vector& rhs, const Vector& obj)
{
    MilpProblem p;
    p.objective = obj;
    p.A = Ac;
    p.rhs = rhs;
    p.lower = Vector::Constant(Ac.cols(), -1.0);
    p.upper = Vector::Constant(Ac.cols(), 1.0);
    return solve_lp(p);
}

Vector pattern_from_bits(std::uint64_t bits, Eigen::Index nb)
{
    Vector xi(nb);
    for (Eigen::Index i = 0; i < nb; ++i)
        xi(i) = ((bits >> i) & 1U) ? 1.0 : -1.0;
    return xi;
}

} // namespace

std::vector<Branch> enumerate_branches(const HybridZonotope& Z, std::uint64_t cap)
{
    const auto nb = Z.num_binary();
    if (nb >= 63 || (std::uint64_t{1} << nb) > cap)
        throw CapacityError("enumerate_cz: 2^" + std::to_string(nb) + " binary patterns exceed the cap of " +
                            std::to_string(cap) + "; reduce binary generators first");
    std::vector<Branch> out;
    const std::uint64_t count = std::uint64_t{1} << nb;
    for (std::uint64_t bits = 0; bits < count; ++bits)
    {
        const Vector xi_b = pattern_from_bits(bits, nb);
        const Vector rhs = Z.b() - Z.Ab() * xi_b;
        if (Z.num_constraints() > 0)
        {
            const auto lp = branch_lp(Z.Ac(), rhs, Vector::Zero(Z.num_continuous()));
            if (lp.status == SolveStatus::Infeasible)
                continue;
            if (lp.status != SolveStatus::Optimal)
                throw SolverLimitError("enumerate_cz: branch feasibility LP failed");
        }
        out.push_back(Branch{xi_b, ConstrainedZonotope(Z.c() + Z.Gb() * xi_b, Z.Gc(), Z.Ac(), rhs)});
    }
    return out;
}

std::vector<ConstrainedZonotope> enumerate_cz(const HybridZonotope& Z, std::uint64_t cap)
{
    std::vector<ConstrainedZonotope> out;
    for (auto& br : enumerate_branches(Z, cap))
        out.push_back(std::move(br.set));
    return out;
}

namespace
{

class MemberSampler
{
public:
    MemberSampler(const HybridZonotope& Z, std::uint64_t seed) : Z_(Z), rng_(seed)
    {
        if (Z_.num_constraints() > 0 && Z_.num_continuous() > 0)
        {
            // Orthonormal basis of ker(Ac) for projecting box samples onto the constraint plane.
            Eigen::FullPivLU<Matrix> lu(Z_.Ac());
            lu.setThreshold(1e-10);
            const Matrix K = lu.kernel();
            if (lu.rank() < Z_.num_continuous() && K.cols() > 0)
            {
                Eigen::HouseholderQR<Matrix> qr(K);
                kernel_ = qr.householderQ() * Matrix::Identity(K.rows(), K.cols());
            }
            else
            {
                kernel_ = Matrix::Zero(Z_.num_continuous(), 0);
            }
        }
    }

    Sample draw()
    {
        BranchData& br = pick_branch();
        Vector xi_c = draw_continuous(br);
        return Sample{Z_.evaluate(xi_c, br.xi_b), std::move(xi_c), br.xi_b};
    }

private:
    struct BranchData
    {
        Vector xi_b;
        Vector rhs;
        std::vector<Vector> vertices;
        Vector anchor;
        int rejection_failures = 0;
    };

    BranchData& pick_branch()
    {
        const auto nb = Z_.num_binary();
        if (nb == 0)
        {
            auto br = branch_for_pattern(Vector(0));
            if (!br)
                throw EmptySetError("sample_points: set is empty");
            return br->get();
        }
        const int attempts = known_.empty() ? 50 : 4;
        for (int attempt = 0; attempt < attempts; ++attempt)
        {
            Vector xi_b(nb);
            for (Eigen::Index i = 0; i < nb; ++i)
                xi_b(i) = (rng_() & 1U) ? 1.0 : -1.0;
            if (auto br = branch_for_pattern(xi_b))
                return br->get();
        }
        // Sparse feasible patterns: reuse MILP-discovered branches once enough are known.
        if (known_.size() >= kMaxDiscovered)
        {
            std::uniform_int_distribution<std::size_t> pick(0, known_.size() - 1);
            return *known_[pick(rng_)];
        }
        // Ask the MILP for a member extremal in a random direction.
        Vector d(Z_.dim());
        std::normal_distribution<double> normal;
        for (Eigen::Index i = 0; i < d.size(); ++i)
            d(i) = normal(rng_);
        const auto enc = encode_support(Z_, d, Sense::Maximize);
        MilpOptions o;
        o.stop_below = kInf;
        const auto sol = default_engine().solve(enc.problem, o);
        if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::Feasible)
            throw SolverLimitError("sample_points: could not find a feasible binary pattern");
        const Vector xi_b = enc.layout.xi_b(sol.assignment);
        auto br = branch_for_pattern(xi_b);
        if (!br)
            throw SolverLimitError("sample_points: MILP pattern failed branch LP");
        return br->get();
    }

    std::optional<std::reference_wrapper<BranchData>> branch_for_pattern(const Vector& xi_b)
    {
        std::vector<int> key(static_cast<std::size_t>(xi_b.size()));
        for (Eigen::Index i = 0; i < xi_b.size(); ++i)
            key[static_cast<std::size_t>(i)] = xi_b(i) > 0 ? 1 : 0;
        auto it = cache_.find(key);
        const bool inserted = it == cache_.end();
        if (inserted)
            it = cache_.emplace(key, build_branch(xi_b)).first;
        if (!it->second)
            return std::nullopt;
        if (inserted)
            known_.push_back(&*it->second);
        return std::ref(*it->second);
    }

    std::optional<BranchData> build_branch(const Vector& xi_b)
    {
        BranchData br;
        br.xi_b = xi_b;
        br.rhs = Z_.b() - Z_.Ab() * xi_b;
        const auto ng = Z_.num_continuous();
        if (Z_.num_constraints() == 0)
            return br;
        if (ng == 0)
        {
            if (br.rhs.cwiseAbs().maxCoeff() > 1e-9)
                return std::nullopt;
            br.vertices.push_back(Vector(0));
            br.anchor = Vector(0);
            return br;
        }
        std::vector<Vector> objectives;
        for (Eigen::Index i = 0; i < Z_.dim(); ++i)
        {
            objectives.push_back(Z_.Gc().row(i).transpose());
            objectives.push_back(-Z_.Gc().row(i).transpose());
        }
        std::normal_distribution<double> normal;
        const Eigen::Index random_dirs = 2 * Z_.dim() + 4;
        for (Eigen::Index k = 0; k < random_dirs; ++k)
        {
            Vector d(Z_.dim());
            for (Eigen::Index i = 0; i < d.size(); ++i)
                d(i) = normal(rng_);
            objectives.push_back(Z_.Gc().transpose() * d);
        }
        for (int k = 0; k < 4; ++k)
        {
            Vector w(ng);
            for (Eigen::Index i = 0; i < ng; ++i)
                w(i) = normal(rng_);
            objectives.push_back(w);
        }
        for (const auto& obj : objectives)
        {
            const auto lp = branch_lp(Z_.Ac(), br.rhs, obj);
            if (lp.status == SolveStatus::Infeasible)
                return std::nullopt;
            if (lp.status != SolveStatus::Optimal)
                throw SolverLimitError("sample_points: branch LP failed");
            br.vertices.push_back(lp.assignment);
        }
        br.anchor = Vector::Zero(ng);
        for (const auto& v : br.vertices)
            br.anchor += v;
        br.anchor /= static_cast<double>(br.vertices.size());
        return br;
    }

    Vector draw_continuous(BranchData& br)
    {
        const auto ng = Z_.num_continuous();
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        if (Z_.num_constraints() == 0)
        {
            Vector xi(ng);
            for (Eigen::Index i = 0; i < ng; ++i)
                xi(i) = unit(rng_);
            return xi;
        }
        if (ng == 0)
            return Vector(0);

        // Projected rejection: uniform box point moved onto the constraint plane.
        if (br.rejection_failures < 3 && kernel_.cols() > 0)
        {
            for (int attempt = 0; attempt < 100; ++attempt)
            {
                Vector u(ng);
                for (Eigen::Index i = 0; i < ng; ++i)
                    u(i) = unit(rng_);
                const Vector xi = br.anchor + kernel_ * (kernel_.transpose() * (u - br.anchor));
                if (xi.cwiseAbs().maxCoeff() <= 1.0)
                    return xi;
            }
            ++br.rejection_failures;
        }

        // Random convex combination of branch vertices; occasionally a bare vertex.
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> pick(0, br.vertices.size() - 1);
        if (u01(rng_) < 0.1)
            return br.vertices[pick(rng_)];
        std::gamma_distribution<double> gamma(1.0, 1.0);
        Vector xi = Vector::Zero(ng);
        double total = 0.0;
        for (const auto& v : br.vertices)
        {
            const double w = gamma(rng_);
            xi += w * v;
            total += w;
        }
        xi /= total;
        return xi.cwiseMax(-1.0).cwiseMin(1.0);
    }

    const HybridZonotope& Z_;
    std::mt19937_64 rng_;
    Matrix kernel_;
    static constexpr std::size_t kMaxDiscovered = 16;
    std::map<std::vector<int>, std::optional<BranchData>> cache_;
    std::vector<BranchData*> known_;
};

} // namespace

std::vector<Sample> sample_members(const HybridZonotope& Z, std::size_t count, std::uint64_t seed)
{
    if (is_empty(Z))
        throw EmptySetError("sample_points: set is empty");
    MemberSampler sampler(Z, seed);
    std::vector<Sample> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        out.push_back(sampler.draw());
    return out;
}

std::vector<Point> sample_points(const HybridZonotope& Z, std::size_t count, std::uint64_t seed)
{
    std::vector<Point> out;
    out.reserve(count);
    for (auto& s : sample_members(Z, count, seed))
        out.push_back(std::move(s.x));
    return out;
}

} // namespace hzreach
