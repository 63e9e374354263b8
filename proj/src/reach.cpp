#include "hzreach/reach.hpp"

#include "hzreach/errors.hpp"
#include "hzreach/reduce.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace hzreach
{

void LinearSystem::validate() const
{
    if (A_d.rows() != A_d.cols())
        throw ShapeError("LinearSystem: A_d must be square");
    if (B_d.rows() != A_d.rows())
        throw ShapeError("LinearSystem: B_d rows must equal state dimension");
    if (!A_d.allFinite() || !B_d.allFinite())
        throw ContractError("LinearSystem: non-finite entries");
}

G1G2 compute_g1_g2(const Matrix& Gc, const Matrix& Gb, Eigen::Index nb_pi)
{
    if (Gc.rows() != Gb.rows())
        throw ShapeError("compute_g1_g2: Gc and Gb row counts differ");
    const auto nb = Gb.cols();
    const double ratio = static_cast<double>(nb_pi + 1) / static_cast<double>(nb + 1);
    const double kf = std::log2(ratio);
    const auto k = static_cast<long>(std::llround(kf));
    if (nb_pi < nb || std::abs(kf - static_cast<double>(k)) > 1e-12 ||
        ((static_cast<long long>(nb) + 1) << k) != static_cast<long long>(nb_pi) + 1)
        throw StructuralError("compute_g1_g2: (nb_pi + 1)/(nb + 1) = " + std::to_string(ratio) +
                              " is not a power of two");

    const auto n = Gc.rows();
    Matrix G1 = Gc;
    Matrix G2 = Gb;
    for (long it = 0; it < k; ++it)
    {
        Matrix a(n, G1.cols() + 1);
        a << G1, Matrix::Zero(n, 1);
        Matrix g1(n, 2 * a.cols());
        g1 << a, a;
        Matrix g2(n, 2 * G2.cols());
        g2 << G2, G2;
        const auto m = 2 * (g1.cols() + g2.cols());
        G1.resize(n, g1.cols() + m);
        G1 << g1, Matrix::Zero(n, m);
        G2.resize(n, g2.cols() + 1);
        G2 << g2, Matrix::Zero(n, 1);
    }
    return {G1, G2};
}

StepTrace closed_loop_step_traced(const HybridZonotope& Z, const LinearSystem& sys, const NeuralNetwork& net,
                                  BoundsMode mode)
{
    sys.validate();
    if (sys.state_dim() != Z.dim())
        throw ShapeError("closed_loop_step: A_d dimension differs from set dimension");
    if (net.input_dim() != Z.dim() || net.output_dim() != sys.input_dim())
        throw ShapeError("closed_loop_step: network dimensions do not match the system");

    auto pi = network_reach_traced(Z, net, mode);
    const auto& P = pi.set;
    Matrix G1, G2;
    Vector shifted_c;
    const bool doubling = pi.empty_branches() == 0;
    if (doubling)
    {
        auto g = compute_g1_g2(Z.Gc(), Z.Gb(), P.num_binary());
        G1 = std::move(g.G1);
        G2 = std::move(g.G2);
        const double ratio = static_cast<double>(P.num_binary() + 1) / static_cast<double>(Z.num_binary() + 1);
        shifted_c = Z.c() + (ratio - 1.0) * (Z.Gb() * Vector::Ones(Z.num_binary()));
    }
    else
    {
        G1 = Z.Gc() * pi.factors.Sc;
        G2 = Z.Gb() * pi.factors.Sb;
        shifted_c = Z.c() + Z.Gb() * pi.factors.s0;
    }
    if (G1.cols() != P.num_continuous() || G2.cols() != P.num_binary())
        throw StructuralError("closed_loop_step: alignment widths differ from the network output");

    HybridZonotope cl(sys.A_d * shifted_c + sys.B_d * P.c(), sys.A_d * G1 + sys.B_d * P.Gc(),
                      sys.A_d * G2 + sys.B_d * P.Gb(), P.Ac(), P.Ab(), P.b());
    return {std::move(cl), std::move(pi.factors), std::move(pi.layers), doubling};
}

HybridZonotope closed_loop_step(const HybridZonotope& Z, const LinearSystem& sys, const NeuralNetwork& net,
                                BoundsMode mode)
{
    return closed_loop_step_traced(Z, sys, net, mode).set;
}

Preimage decode_preimage(const StepTrace& step, const HybridZonotope& Z, const Vector& xi_c, const Vector& xi_b,
                         double tol)
{
    if (xi_c.size() != step.set.num_continuous() || xi_b.size() != step.set.num_binary())
        throw ShapeError("decode_preimage: assignment size differs from the image's factor counts");
    if (step.factors.Sc.rows() != Z.num_continuous() || step.factors.Sb.rows() != Z.num_binary())
        throw ShapeError("decode_preimage: factor map does not belong to this input set");
    const double res = step.set.factor_residual(xi_c, xi_b);
    if (!(res <= tol))
        throw ContractError("decode_preimage: assignment infeasible for the image (residual " +
                            std::to_string(res) + ")");
    Preimage p;
    p.xi_c = step.factors.parent_xi_c(xi_c);
    p.xi_b = step.factors.parent_xi_b(xi_b);
    p.x = Z.evaluate(p.xi_c, p.xi_b);
    return p;
}

namespace
{

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Continuous columns zero in both Gc and Ac.
std::vector<Eigen::Index> nonzero_continuous(const HybridZonotope& Z)
{
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < Z.num_continuous(); ++j)
    {
        const bool zero = Z.Gc().col(j).isZero(0.0) && (Z.num_constraints() == 0 || Z.Ac().col(j).isZero(0.0));
        if (!zero)
            keep.push_back(j);
    }
    return keep;
}

HybridZonotope keep_continuous(const HybridZonotope& Z, const std::vector<Eigen::Index>& keep)
{
    return HybridZonotope(Z.c(), Z.Gc()(Eigen::all, keep), Z.Gb(),
                          Z.Ac()(Eigen::all, keep), Z.Ab(), Z.b());
}

} // namespace

ReachResult reach_horizon(const HybridZonotope& X0, const LinearSystem& sys, const NeuralNetwork& net,
                          std::size_t T, const ReductionPolicy* reduction, const ReachOptions& opts)
{
    if (T < 1)
        throw ContractError("reach_horizon: T must be at least 1");
    sys.validate();
    ReachResult out;
    out.sets.push_back(X0);
    out.log.push_back(StepLog{0, X0.complexity(), X0.complexity(), 0, 0, false, 0.0});
    out.traces.emplace_back();
    out.kept_continuous.emplace_back();

    for (std::size_t t = 1; t <= T; ++t)
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto step = closed_loop_step_traced(out.sets.back(), sys, net, opts.mode);
        StepLog log;
        log.t = t;
        for (const auto& L : step.layers)
        {
            log.crossings += L.crossing;
            log.empty_branches += L.empty_branches;
        }
        log.before_reduction = step.set.complexity();

        HybridZonotope next = step.set;
        std::vector<Eigen::Index> kept;
        if (opts.prune)
        {
            kept = nonzero_continuous(next);
            if (static_cast<Eigen::Index>(kept.size()) == next.num_continuous())
                kept.clear();
            else
                next = keep_continuous(next, kept);
        }
        const bool reduce_now = reduction != nullptr && reduction->active();
        if (reduce_now)
        {
            next = reduce_complexity(next, *reduction);
            log.reduced = true;
        }
        if (next.num_binary() > opts.max_binaries)
            throw CapacityError("reach_horizon: n_b = " + std::to_string(next.num_binary()) + " at step " +
                                std::to_string(t) + " exceeds the budget of " +
                                std::to_string(opts.max_binaries) + "; enable reduction");
        log.complexity = next.complexity();
        log.seconds = seconds_since(t0);
        out.sets.push_back(std::move(next));
        out.log.push_back(log);
        if (reduce_now)
            out.traces.emplace_back();
        else
            out.traces.emplace_back(std::move(step));
        out.kept_continuous.push_back(std::move(kept));
    }
    return out;
}

std::vector<Point> decode_chain(const ReachResult& result, std::size_t t, const Vector& xi_c, const Vector& xi_b,
                                double tol)
{
    if (t >= result.sets.size())
        throw ContractError("decode_chain: step out of range");
    std::vector<Point> states(t + 1);
    Vector c = xi_c, b = xi_b;
    if (!(result.sets[t].factor_residual(c, b) <= tol))
        throw ContractError("decode_chain: assignment infeasible for R_t");
    states[t] = result.sets[t].evaluate(c, b);
    for (std::size_t s = t; s >= 1; --s)
    {
        const auto& tr = result.traces[s];
        if (!tr)
            throw ContractError("decode_chain: step " + std::to_string(s) + " was reduced; no exact preimage");
        const auto& kept = result.kept_continuous[s];
        if (!kept.empty())
        {
            Vector full = Vector::Zero(tr->set.num_continuous());
            for (std::size_t j = 0; j < kept.size(); ++j)
                full(kept[j]) = c(static_cast<Eigen::Index>(j));
            c = std::move(full);
        }
        const auto pre = decode_preimage(*tr, result.sets[s - 1], c, b, tol);
        states[s - 1] = pre.x;
        c = pre.xi_c;
        b = pre.xi_b;
    }
    return states;
}

} // namespace hzreach
