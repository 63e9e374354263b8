#include "hzreach/nn.hpp"

#include "hzreach/encode.hpp"
#include "hzreach/errors.hpp"
#include "hzreach/milp.hpp"
#include "hzreach/set_queries.hpp"

#include <cmath>
#include <string>

namespace hzreach
{

NeuralNetwork::NeuralNetwork(std::vector<Layer> layers) : layers_(std::move(layers))
{
    if (layers_.empty())
        throw ShapeError("NeuralNetwork: at least one layer required");
    for (std::size_t k = 0; k < layers_.size(); ++k)
    {
        const auto& L = layers_[k];
        if (L.W.rows() != L.v.size())
            throw ShapeError("NeuralNetwork: layer " + std::to_string(k) + " bias length differs from W rows");
        if (k > 0 && L.W.cols() != layers_[k - 1].W.rows())
            throw ShapeError("NeuralNetwork: layer " + std::to_string(k) + " input does not match previous output");
        if (!L.W.allFinite() || !L.v.allFinite())
            throw ContractError("NeuralNetwork: layer " + std::to_string(k) + " has non-finite weights");
    }
}

Eigen::Index NeuralNetwork::input_dim() const
{
    return layers_.empty() ? 0 : layers_.front().W.cols();
}

Eigen::Index NeuralNetwork::output_dim() const
{
    return layers_.empty() ? 0 : layers_.back().W.rows();
}

Eigen::Index NeuralNetwork::num_hidden_neurons() const
{
    Eigen::Index n = 0;
    for (std::size_t k = 0; k + 1 < layers_.size(); ++k)
        n += layers_[k].W.rows();
    return n;
}

Vector NeuralNetwork::evaluate(const Vector& x) const
{
    if (x.size() != input_dim())
        throw ShapeError("NeuralNetwork::evaluate: input dimension mismatch");
    Vector y = x;
    for (std::size_t k = 0; k < layers_.size(); ++k)
    {
        y = layers_[k].W * y + layers_[k].v;
        if (k + 1 < layers_.size())
            y = y.cwiseMax(0.0);
    }
    return y;
}

NeuronBounds neuron_bounds(const HybridZonotope& R, BoundsMode mode)
{
    const auto n = R.dim();
    NeuronBounds nb{Vector(n), Vector(n)};
    if (mode == BoundsMode::Fast || R.num_constraints() == 0)
    {
        // Without constraints the generator hull is exact as well.
        const auto hull = generator_interval_hull(R);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            nb.lb(i) = hull[static_cast<std::size_t>(i)].lo;
            nb.ub(i) = hull[static_cast<std::size_t>(i)].hi;
        }
        return nb;
    }
    // The solver's proven bound, not the incumbent, keeps the interval sound.
    auto solve = [&](const Vector& d, Sense s) {
        const auto enc = encode_support(R, d, s);
        const auto sol = default_engine().solve(enc.problem, {});
        if (sol.status == SolveStatus::Infeasible)
            throw EmptySetError("neuron_bounds: set is empty");
        if (sol.status != SolveStatus::Optimal)
            throw SolverLimitError(std::string("neuron_bounds: solver returned ") + to_string(sol.status));
        return enc.value_sign * sol.bound;
    };
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const Vector e = Vector::Unit(n, i);
        nb.lb(i) = solve(e, Sense::Minimize);
        nb.ub(i) = solve(e, Sense::Maximize);
        if (nb.lb(i) > nb.ub(i))
            nb.lb(i) = nb.ub(i) = 0.5 * (nb.lb(i) + nb.ub(i));
    }
    return nb;
}

FactorMap FactorMap::identity(const HybridZonotope& Z)
{
    return {Matrix::Identity(Z.num_continuous(), Z.num_continuous()),
            Matrix::Identity(Z.num_binary(), Z.num_binary()), Vector::Zero(Z.num_binary())};
}

Eigen::Index TracedReach::empty_branches() const
{
    Eigen::Index e = 0;
    for (const auto& L : layers)
        e += L.empty_branches;
    return e;
}

namespace
{

Matrix zeroing_map(Eigen::Index n, Eigen::Index i)
{
    Matrix E = Matrix::Identity(n, n);
    E(i, i) = 0.0;
    return E;
}

Matrix append_zero_cols(const Matrix& M, Eigen::Index k)
{
    Matrix out = Matrix::Zero(M.rows(), M.cols() + k);
    out.leftCols(M.cols()) = M;
    return out;
}

struct StepOut
{
    HybridZonotope set;
    ReluCase which;
};

// Shared by step_relu and the traced propagation. When fm is given it is updated in place.
StepOut step_relu_impl(const HybridZonotope& R, Eigen::Index i, double lb, double ub, bool check_empty,
                       FactorMap* fm)
{
    if (i < 0 || i >= R.dim())
        throw ShapeError("step_relu: neuron index out of range");
    if (!(lb <= ub))
        throw ContractError("step_relu: lb must not exceed ub");
    const auto n = R.dim();
    if (lb >= -kReluTol)
        return {R, ReluCase::Skipped};
    const Matrix E = zeroing_map(n, i);
    if (ub <= kReluTol)
        return {affine_map(R, E), ReluCase::Zeroed};

    const Vector e = Vector::Unit(n, i);
    const auto upper = intersect_halfspace(R, -e, 0.0);
    const auto lower = intersect_halfspace(R, e, 0.0);
    if (fm)
        fm->Sc = append_zero_cols(fm->Sc, 1);

    const bool upper_empty = check_empty && is_empty(upper);
    const bool lower_empty = check_empty && is_empty(lower);
    if (upper_empty && lower_empty)
        throw EmptySetError("step_relu: input set is empty");
    if (lower_empty)
        return {upper, ReluCase::OnlyUpper};
    if (upper_empty)
        return {affine_map(lower, E), ReluCase::OnlyLower};

    auto joined = union_of(upper, affine_map(lower, E));
    if (fm)
    {
        // Inactive branch: continuous factors pinned to 0, binaries to -1.
        Matrix Sc = Matrix::Zero(fm->Sc.rows(), joined.num_continuous());
        Sc.leftCols(fm->Sc.cols()) = fm->Sc;
        Sc.middleCols(fm->Sc.cols(), fm->Sc.cols()) = fm->Sc;
        Matrix Sb = Matrix::Zero(fm->Sb.rows(), joined.num_binary());
        Sb.leftCols(fm->Sb.cols()) = fm->Sb;
        Sb.middleCols(fm->Sb.cols(), fm->Sb.cols()) = fm->Sb;
        fm->s0 += fm->Sb * Vector::Ones(fm->Sb.cols());
        fm->Sc = std::move(Sc);
        fm->Sb = std::move(Sb);
    }
    return {std::move(joined), ReluCase::Split};
}

HybridZonotope layer_impl(const HybridZonotope& Z, const Matrix& W, const Vector& v, BoundsMode mode, bool relu,
                          FactorMap* fm, LayerRecord* rec)
{
    if (W.cols() != Z.dim())
        throw ShapeError("layer_reach: W columns must equal set dimension");
    auto R = affine_map(Z, W, v);
    if (rec)
        rec->nb_in = Z.num_binary();
    if (relu)
    {
        const auto nb = neuron_bounds(R, mode);
        // Exact bounds are attained, so both halves of a crossing neuron are nonempty.
        const bool check_empty = mode == BoundsMode::Fast;
        for (Eigen::Index i = 0; i < R.dim(); ++i)
        {
            auto out = step_relu_impl(R, i, nb.lb(i), nb.ub(i), check_empty, fm);
            R = std::move(out.set);
            if (!rec)
                continue;
            switch (out.which)
            {
            case ReluCase::Skipped: break;
            case ReluCase::Zeroed: ++rec->inactive; break;
            case ReluCase::Split: ++rec->crossing; break;
            case ReluCase::OnlyUpper:
            case ReluCase::OnlyLower:
                ++rec->crossing;
                ++rec->empty_branches;
                break;
            }
        }
    }
    if (rec)
    {
        rec->nb_out = R.num_binary();
        rec->complexity = R.complexity();
    }
    return R;
}

} // namespace

HybridZonotope step_relu(const HybridZonotope& R, Eigen::Index i, double lb, double ub)
{
    return step_relu_impl(R, i, lb, ub, true, nullptr).set;
}

HybridZonotope layer_reach(const HybridZonotope& Z, const Matrix& W, const Vector& v, BoundsMode mode, bool relu)
{
    return layer_impl(Z, W, v, mode, relu, nullptr, nullptr);
}

HybridZonotope network_reach(const HybridZonotope& Z, const NeuralNetwork& net, BoundsMode mode)
{
    return network_reach_traced(Z, net, mode).set;
}

TracedReach network_reach_traced(const HybridZonotope& Z, const NeuralNetwork& net, BoundsMode mode)
{
    if (net.num_layers() == 0)
        throw ShapeError("network_reach: empty network");
    if (net.input_dim() != Z.dim())
        throw ShapeError("network_reach: input dimension mismatch");
    TracedReach out{Z, FactorMap::identity(Z), {}};
    const auto& layers = net.layers();
    for (std::size_t k = 0; k < layers.size(); ++k)
    {
        LayerRecord rec;
        rec.layer = k;
        out.set = layer_impl(out.set, layers[k].W, layers[k].v, mode, k + 1 < layers.size(), &out.factors, &rec);
        out.layers.push_back(rec);
    }
    return out;
}

} // namespace hzreach
