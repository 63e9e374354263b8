#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include "hzreach/errors.hpp"

#include <cmath>

using namespace hztest;

namespace
{
Vector relu(Vector x) { return x.cwiseMax(0.0); }

// Random net whose pre-activations at the image of `anchor` are N(0, spread) so that
// only a handful of neurons straddle zero on a small input set.
NeuralNetwork anchored_net(std::mt19937_64& rng, const std::vector<Eigen::Index>& widths, const Vector& anchor,
                           double spread)
{
    std::vector<Layer> layers;
    Vector a = anchor;
    for (std::size_t k = 0; k + 1 < widths.size(); ++k)
    {
        Layer L;
        L.W = random_matrix(rng, widths[k + 1], widths[k], std::sqrt(2.0 / widths[k]));
        L.v = -L.W * a + random_matrix(rng, widths[k + 1], 1, spread);
        a = L.W * a + L.v;
        if (k + 2 < widths.size())
            a = relu(a);
        layers.push_back(L);
    }
    return NeuralNetwork(layers);
}

// Crossing count by plain interval arithmetic over the box hull; an upper bound on the exact count.
Eigen::Index interval_crossings(const NeuralNetwork& net, Vector lo, Vector hi)
{
    Eigen::Index count = 0;
    for (std::size_t k = 0; k + 1 < net.num_layers(); ++k)
    {
        const auto& L = net.layers()[k];
        const Matrix Wp = L.W.cwiseMax(0.0), Wn = L.W.cwiseMin(0.0);
        const Vector l = Wp * lo + Wn * hi + L.v, h = Wp * hi + Wn * lo + L.v;
        for (Eigen::Index i = 0; i < l.size(); ++i)
            count += (l(i) < 0.0 && h(i) > 0.0) ? 1 : 0;
        lo = l.cwiseMax(0.0);
        hi = h.cwiseMax(0.0);
    }
    return count;
}

std::size_t pointwise_misses(const HybridZonotope& X, const NeuralNetwork& net, const HybridZonotope& Y,
                             std::size_t count, std::uint64_t seed)
{
    std::size_t miss = 0;
    for (const auto& x : sample_points(X, count, seed))
        if (!contains_point(Y, net.evaluate(x)))
            ++miss;
    return miss;
}
} // namespace

TEST_CASE("network construction and evaluation")
{
    Layer a{(Matrix(2, 1) << 1, -1).finished(), Vector::Zero(2)};
    Layer b{Matrix::Ones(1, 2), Vector::Constant(1, 0.5)};
    const NeuralNetwork net({a, b});
    CHECK(net.input_dim() == 1);
    CHECK(net.output_dim() == 1);
    CHECK(net.num_hidden_neurons() == 2);
    CHECK(net.evaluate(Vector::Constant(1, 3.0))(0) == doctest::Approx(3.5));
    CHECK(net.evaluate(Vector::Constant(1, -2.0))(0) == doctest::Approx(2.5));
    Layer bad{Matrix::Ones(1, 3), Vector::Zero(1)};
    CHECK_THROWS_AS(NeuralNetwork({a, bad}), ShapeError);
}

TEST_CASE("step_relu zeroes a nonpositive coordinate")
{
    const auto R = box2(-2, -1, 0, 1);
    const auto Y = step_relu(R, 0, -2, -1);
    for (const auto& y : sample_points(Y, 200, 1))
        CHECK(y(0) == 0.0);
    CHECK(Y.num_binary() == R.num_binary());
}

TEST_CASE("step_relu on a crossing coordinate is the pointwise image")
{
    const auto R = box2(-1, 1, -1, 1);
    const auto Y = step_relu(R, 0, -1, 1);
    CHECK(Y.num_binary() == R.num_binary() + 1);
    for (const auto& x : sample_points(R, 1000, 2))
    {
        Vector y = x;
        y(0) = std::max(0.0, x(0));
        CHECK(contains_point(Y, y));
    }
    // every output point has a preimage: x0 >= 0 keeps it, x0 = 0 comes from some x0 <= 0
    for (const auto& y : sample_points(Y, 1000, 3))
    {
        CHECK(y(0) >= -1e-9);
        CHECK(std::abs(y(1)) <= 1.0 + 1e-9);
        CHECK(y(0) <= 1.0 + 1e-9);
    }
    CHECK_THROWS_AS(step_relu(R, 0, 1, -1), ContractError);
}

TEST_CASE("step_relu skips an active coordinate")
{
    const auto R = box2(0.5, 1, -1, 1);
    CHECK(step_relu(R, 0, 0.5, 1).same_representation(R));
}

TEST_CASE("step_relu with an empty half keeps one branch")
{
    // the only points with x0 < 0 are cut away by the constraint, so the lower half is empty
    const auto R = intersect_halfspace(box2(-1, 1, -1, 1), (Vector(2) << -1, 0).finished(), -0.2);
    const auto Y = step_relu(R, 0, -1, 1);
    CHECK(Y.num_binary() == R.num_binary());
    CHECK(mutually_contained(R, Y, 200, 4));
}

TEST_CASE("layer_reach with all neurons active equals the affine map")
{
    const auto Z = box2(1, 2, 1, 2);
    const Matrix W = (Matrix(2, 2) << 1, 0.5, 0.2, 1).finished();
    const Vector v = Vector::Constant(2, 0.1);
    const auto Y = layer_reach(Z, W, v, BoundsMode::Exact);
    CHECK(Y.same_representation(affine_map(Z, W, v)));
}

TEST_CASE("layer_reach with all neurons inactive gives the origin")
{
    const auto Z = box2(1, 2, 1, 2);
    const auto Y = layer_reach(Z, -Matrix::Identity(2, 2), Vector::Zero(2), BoundsMode::Exact);
    for (const auto& y : sample_points(Y, 100, 5))
        CHECK(y.isZero());
}

TEST_CASE("layer_reach with one crossing neuron")
{
    const auto Z = box2(1, 2, -1, 1);
    const Matrix W = Matrix::Identity(2, 2);
    const auto Y = layer_reach(Z, W, Vector::Zero(2), BoundsMode::Exact);
    CHECK(Y.num_binary() == Z.num_binary() + 1);
    NeuralNetwork net({Layer{W, Vector::Zero(2)}, Layer{Matrix::Identity(2, 2), Vector::Zero(2)}});
    CHECK(pointwise_misses(Z, net, Y, 1000, 6) == 0);
}

TEST_CASE("single affine layer equals affine_map")
{
    const auto Z = example_zh();
    const Matrix W = (Matrix(1, 2) << 2, -1).finished();
    const NeuralNetwork net({Layer{W, Vector::Constant(1, 3.0)}});
    CHECK(network_reach(Z, net, BoundsMode::Exact).same_representation(affine_map(Z, W, Vector::Constant(1, 3.0))));
}

TEST_CASE("identity ReLU net on a nonnegative set")
{
    const auto Z = box2(0, 1, 0.5, 2);
    const NeuralNetwork net({Layer{Matrix::Identity(2, 2), Vector::Zero(2)},
                             Layer{Matrix::Identity(2, 2), Vector::Zero(2)}});
    CHECK(mutually_contained(Z, network_reach(Z, net, BoundsMode::Exact), 300, 7));
}

TEST_CASE("random 2-10-5-1 net on the initial set")
{
    std::mt19937_64 rng(2103);
    const auto X0 = di_initial_set();
    const auto net = anchored_net(rng, {2, 10, 5, 1}, X0.c(), 3.0);
    for (auto mode : {BoundsMode::Exact, BoundsMode::Fast})
    {
        const auto tr = network_reach_traced(X0, net, mode);
        Eigen::Index crossings = 0;
        for (const auto& L : tr.layers)
            crossings += L.crossing;
        CHECK(crossings >= 1);
        CHECK(crossings <= 3);
        CHECK(pointwise_misses(X0, net, tr.set, 1000, 8) == 0);

        // backward: output factors map to an input point whose image is the output point
        for (const auto& s : sample_members(tr.set, 300, 9))
        {
            const Vector pc = tr.factors.parent_xi_c(s.xi_c);
            const Vector pb = tr.factors.parent_xi_b(s.xi_b);
            CHECK(X0.factor_residual(pc, pb) <= 1e-6);
            const Point x = X0.evaluate(pc, pb);
            CHECK((net.evaluate(x) - s.x).cwiseAbs().maxCoeff() <= 1e-6);
        }
    }
}

TEST_CASE("binary growth law per layer")
{
    std::mt19937_64 rng(88);
    int tried = 0, splits = 0;
    while (tried < 12)
    {
        const auto X = affine_map(random_hz(rng, 2, 3, 1, 0), 0.15 * Matrix::Identity(2, 2));
        const auto net = anchored_net(rng, {2, 6, 4, 1}, X.c(), 1.0);
        const auto hull = generator_interval_hull(X);
        const Vector lo = (Vector(2) << hull[0].lo, hull[1].lo).finished();
        const Vector hi = (Vector(2) << hull[0].hi, hull[1].hi).finished();
        const auto ic = interval_crossings(net, lo, hi);
        if (ic == 0 || ic > 2)
            continue;
        ++tried;
        for (auto mode : {BoundsMode::Exact, BoundsMode::Fast})
        {
            const auto tr = network_reach_traced(X, net, mode);
            for (const auto& L : tr.layers)
            {
                const auto split = L.crossing - L.empty_branches;
                splits += static_cast<int>(split);
                CHECK(L.nb_out + 1 == (Eigen::Index(1) << split) * (L.nb_in + 1));
                const double order = double(L.complexity.n_g + L.complexity.n_b - L.complexity.n_c) /
                                     double(L.complexity.n);
                CHECK(L.complexity.order == doctest::Approx(order));
            }
            CHECK(tr.layers.back().nb_out == tr.set.num_binary());
            CHECK(tr.layers.back().complexity.n_g == tr.set.num_continuous());
            CHECK(tr.layers.back().complexity.n_c == tr.set.num_constraints());
        }
    }
    CHECK(splits > 0);
}

TEST_CASE("fast bounds contain exact bounds")
{
    std::mt19937_64 rng(15);
    for (int k = 0; k < 20; ++k)
    {
        const auto Z = random_hz(rng, 3, 4, 2, 2, 0.8);
        if (is_empty(Z))
            continue;
        const auto e = neuron_bounds(Z, BoundsMode::Exact);
        const auto f = neuron_bounds(Z, BoundsMode::Fast);
        for (Eigen::Index i = 0; i < 3; ++i)
        {
            CHECK(f.lb(i) <= e.lb(i) + 1e-9);
            CHECK(f.ub(i) >= e.ub(i) - 1e-9);
        }
        for (const auto& p : sample_points(Z, 100, k))
            for (Eigen::Index i = 0; i < 3; ++i)
            {
                CHECK(p(i) >= e.lb(i) - 1e-7);
                CHECK(p(i) <= e.ub(i) + 1e-7);
            }
    }
}

TEST_CASE("fixture networks load and are exact on the initial set")
{
    const auto net = di_network();
    CHECK(net.input_dim() == 2);
    CHECK(net.output_dim() == 1);
    const auto X0 = di_initial_set();
    const auto Y = network_reach(X0, net, BoundsMode::Exact);
    CHECK(pointwise_misses(X0, net, Y, 1000, 10) == 0);
}
