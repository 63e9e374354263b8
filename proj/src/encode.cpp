#include "hzreach/encode.hpp"

#include "hzreach/errors.hpp"

#include <string>

namespace hzreach
{

namespace
{

void name_factors(MilpProblem& p, const FactorLayout& L)
{
    p.names.resize(static_cast<std::size_t>(p.num_vars()));
    for (Eigen::Index i = 0; i < L.n_g; ++i)
        p.names[static_cast<std::size_t>(L.xi_c_offset + i)] = "xc" + std::to_string(i);
    for (Eigen::Index i = 0; i < L.n_b; ++i)
        p.names[static_cast<std::size_t>(L.beta_offset + i)] = "b" + std::to_string(i);
}

void mark_binaries(MilpProblem& p, const FactorLayout& L)
{
    p.binary.assign(static_cast<std::size_t>(p.num_vars()), false);
    for (Eigen::Index i = 0; i < L.n_b; ++i)
    {
        p.binary[static_cast<std::size_t>(L.beta_offset + i)] = true;
        p.lower(L.beta_offset + i) = 0.0;
        p.upper(L.beta_offset + i) = 1.0;
    }
}

} // namespace

EncodedMilp encode_emptiness(const HybridZonotope& Z)
{
    const auto ng = Z.num_continuous();
    const auto nb = Z.num_binary();
    const auto nc = Z.num_constraints();
    // Variables: [t | xi_c | beta | s_plus | s_minus].
    const Eigen::Index t = 0;
    FactorLayout L{1, ng, 1 + ng, nb};
    const Eigen::Index sp = 1 + ng + nb;
    const Eigen::Index sm = sp + ng;
    const Eigen::Index nvars = sm + ng;

    EncodedMilp out;
    out.layout = L;
    MilpProblem& p = out.problem;
    p.objective = Vector::Zero(nvars);
    p.objective(t) = 1.0;
    p.A = Matrix::Zero(nc + 2 * ng, nvars);
    p.rhs = Vector::Zero(nc + 2 * ng);
    p.lower = Vector::Constant(nvars, -kInf);
    p.upper = Vector::Constant(nvars, kInf);
    p.lower(t) = 0.0;
    p.lower.segment(sp, 2 * ng).setZero();

    p.A.block(0, L.xi_c_offset, nc, ng) = Z.Ac();
    p.A.block(0, L.beta_offset, nc, nb) = 2.0 * Z.Ab();
    p.rhs.head(nc) = Z.b() + Z.Ab() * Vector::Ones(nb);
    for (Eigen::Index i = 0; i < ng; ++i)
    {
        // xi_i - t + s+_i = 0 and -xi_i - t + s-_i = 0
        p.A(nc + i, L.xi_c_offset + i) = 1.0;
        p.A(nc + i, t) = -1.0;
        p.A(nc + i, sp + i) = 1.0;
        p.A(nc + ng + i, L.xi_c_offset + i) = -1.0;
        p.A(nc + ng + i, t) = -1.0;
        p.A(nc + ng + i, sm + i) = 1.0;
    }
    mark_binaries(p, L);
    name_factors(p, L);
    p.names[static_cast<std::size_t>(t)] = "t";
    for (Eigen::Index i = 0; i < ng; ++i)
    {
        p.names[static_cast<std::size_t>(sp + i)] = "sp" + std::to_string(i);
        p.names[static_cast<std::size_t>(sm + i)] = "sm" + std::to_string(i);
    }
    return out;
}

EncodedMilp encode_support(const HybridZonotope& Z, const Vector& d, Sense sense)
{
    if (d.size() != Z.dim())
        throw ShapeError("encode_support: direction length must equal set dimension");
    if (!d.allFinite())
        throw ContractError("encode_support: non-finite direction");
    const auto ng = Z.num_continuous();
    const auto nb = Z.num_binary();
    const auto nc = Z.num_constraints();
    FactorLayout L{0, ng, ng, nb};

    EncodedMilp out;
    out.layout = L;
    out.value_sign = sense == Sense::Minimize ? 1.0 : -1.0;
    MilpProblem& p = out.problem;
    const Eigen::Index nvars = ng + nb;
    p.objective.resize(nvars);
    p.objective.head(ng) = out.value_sign * (Z.Gc().transpose() * d);
    p.objective.tail(nb) = out.value_sign * 2.0 * (Z.Gb().transpose() * d);
    p.objective_offset = out.value_sign * d.dot(Z.c() - Z.Gb() * Vector::Ones(nb));
    p.A.resize(nc, nvars);
    p.A << Z.Ac(), 2.0 * Z.Ab();
    p.rhs = Z.b() + Z.Ab() * Vector::Ones(nb);
    p.lower = Vector::Constant(nvars, -1.0);
    p.upper = Vector::Constant(nvars, 1.0);
    mark_binaries(p, L);
    name_factors(p, L);
    return out;
}

EncodedMilp encode_membership(const HybridZonotope& Z, const Point& x, double tol)
{
    if (x.size() != Z.dim())
        throw ShapeError("encode_membership: point dimension mismatch");
    const auto n = Z.dim();
    const auto ng = Z.num_continuous();
    const auto nb = Z.num_binary();
    const auto nc = Z.num_constraints();
    // Variables: [xi_c | beta | e], one residual slack per row bounded by tol.
    FactorLayout L{0, ng, ng, nb};
    const Eigen::Index e0 = ng + nb;
    const Eigen::Index rows = nc + n;
    const Eigen::Index nvars = e0 + rows;

    EncodedMilp out;
    out.layout = L;
    MilpProblem& p = out.problem;
    p.objective = Vector::Zero(nvars);
    p.A = Matrix::Zero(rows, nvars);
    const Vector ones = Vector::Ones(nb);
    p.A.block(0, 0, nc, ng) = Z.Ac();
    p.A.block(0, ng, nc, nb) = 2.0 * Z.Ab();
    p.A.block(nc, 0, n, ng) = Z.Gc();
    p.A.block(nc, ng, n, nb) = 2.0 * Z.Gb();
    p.A.block(0, e0, rows, rows) = Matrix::Identity(rows, rows);
    p.rhs.resize(rows);
    p.rhs << Z.b() + Z.Ab() * ones, x - Z.c() + Z.Gb() * ones;
    p.lower = Vector::Constant(nvars, -1.0 - tol);
    p.upper = Vector::Constant(nvars, 1.0 + tol);
    p.lower.tail(rows).setConstant(-tol);
    p.upper.tail(rows).setConstant(tol);
    mark_binaries(p, L);
    name_factors(p, L);
    return out;
}

EncodedMilp encode_avoidance(const HybridZonotope& R, const HybridZonotope& O)
{
    if (R.dim() != O.dim())
        throw ShapeError("encode_avoidance: dimension mismatch");
    return encode_emptiness(intersect(R, O));
}

} // namespace hzreach
