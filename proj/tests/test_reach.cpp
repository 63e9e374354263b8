#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include "hzreach/errors.hpp"
#include "hzreach/oracle.hpp"
#include "hzreach/reduce.hpp"

#include <cmath>

using namespace hztest;

namespace
{
LinearSystem lateral_system()
{
    LinearSystem s;
    s.A_d = (Matrix(4, 4) << 0, 1, 5, 0, //
             0, -5, 0, -9.5,             //
             0, 0, 0, 1,                 //
             0, 0.05, 0, -2.8)
                .finished();
    s.B_d = (Matrix(4, 1) << 0, 25, 0, 50).finished();
    return s;
}

HybridZonotope lateral_initial_set()
{
    Vector lo(4), hi(4);
    lo << 0.1, -0.9, 0.05, 0.05;
    hi << 0.9, -0.1, 0.15, 0.15;
    return HybridZonotope::box(lo, hi);
}

Vector step_point(const LinearSystem& sys, const NeuralNetwork& net, const Vector& x)
{
    return sys.A_d * x + sys.B_d * net.evaluate(x);
}

// A one-hidden-layer net that is affine on the positive quadrant region used below.
NeuralNetwork positive_net()
{
    Layer a{(Matrix(3, 2) << 1, 0.5, 0.2, 1, 0.3, 0.3).finished(), (Vector(3) << 0.5, 0.1, 0.2).finished()};
    Layer b{(Matrix(1, 3) << 0.4, -0.3, 0.2).finished(), Vector::Constant(1, -0.1)};
    return NeuralNetwork({a, b});
}
} // namespace

TEST_CASE("compute_g1_g2 without crossings is the identity")
{
    std::mt19937_64 rng(1);
    const Matrix Gc = random_matrix(rng, 2, 3), Gb = random_matrix(rng, 2, 2);
    const auto g = compute_g1_g2(Gc, Gb, 2);
    CHECK(g.G1 == Gc);
    CHECK(g.G2 == Gb);
}

TEST_CASE("compute_g1_g2 for one crossing, traced by hand")
{
    std::mt19937_64 rng(2);
    const Matrix Gc = random_matrix(rng, 2, 2);
    const auto g = compute_g1_g2(Gc, Matrix(2, 0), 1);
    // [Gc 0 Gc 0 | 0_{2x12}] and a single zero binary column
    REQUIRE(g.G1.cols() == 18);
    CHECK(g.G1.leftCols(2) == Gc);
    CHECK(g.G1.col(2).isZero());
    CHECK(g.G1.middleCols(3, 2) == Gc);
    CHECK(g.G1.rightCols(13).isZero());
    REQUIRE(g.G2.cols() == 1);
    CHECK(g.G2.isZero());

    // the same counts come out of an actual single-crossing ReLU
    const auto Z = HybridZonotope::zonotope(Vector::Zero(2), Gc);
    const auto Y = step_relu(Z, 0, -1, 1);
    CHECK(Y.num_continuous() == g.G1.cols());
    CHECK(Y.num_binary() == g.G2.cols());
}

TEST_CASE("compute_g1_g2 rejects a non power-of-two ratio")
{
    CHECK_THROWS_AS(compute_g1_g2(Matrix::Zero(2, 1), Matrix(2, 0), 2), StructuralError);
    CHECK_THROWS_AS(compute_g1_g2(Matrix::Zero(2, 1), Matrix::Zero(2, 2), 4), StructuralError);
    CHECK_NOTHROW(compute_g1_g2(Matrix::Zero(2, 1), Matrix::Zero(2, 2), 11));
}

TEST_CASE("compute_g1_g2 widths match network_reach on random sets")
{
    std::mt19937_64 rng(77);
    int checked = 0, grew = 0;
    for (int k = 0; k < 100; ++k)
    {
        const auto Z = affine_map(random_hz(rng, 2, 2, 1, 0), 0.3 * Matrix::Identity(2, 2));
        Layer a{random_matrix(rng, 2, 2), Vector::Zero(2)};
        a.v = -a.W * Z.c() + random_matrix(rng, 2, 1, 0.3);
        Layer b{random_matrix(rng, 1, 2), Vector::Zero(1)};
        const NeuralNetwork net({a, b});
        const auto tr = network_reach_traced(Z, net, BoundsMode::Exact);
        if (tr.empty_branches() > 0)
            continue;
        const auto g = compute_g1_g2(Z.Gc(), Z.Gb(), tr.set.num_binary());
        CHECK(g.G1.cols() == tr.set.num_continuous());
        CHECK(g.G2.cols() == tr.set.num_binary());
        // the alignment reproduces the factor map: G1 = Gc Sc and G2 = Gb Sb
        CHECK((g.G1 - Z.Gc() * tr.factors.Sc).cwiseAbs().maxCoeff() <= 1e-12);
        if (g.G2.size() > 0)
            CHECK((g.G2 - Z.Gb() * tr.factors.Sb).cwiseAbs().maxCoeff() <= 1e-12);
        ++checked;
        grew += tr.set.num_binary() > Z.num_binary() ? 1 : 0;
    }
    CHECK(checked >= 50);
    CHECK(grew >= 10);
}

TEST_CASE("closed loop with B_d = 0 is the plant map")
{
    auto sys = di_system();
    sys.B_d.setZero();
    const auto X0 = di_initial_set();
    const auto net = di_network();
    const auto step = closed_loop_step_traced(X0, sys, net, BoundsMode::Exact);
    CHECK(mutually_contained(step.set, affine_map(X0, sys.A_d), 300, 1));
    for (const auto& s : sample_members(step.set, 100, 2))
    {
        const auto pre = decode_preimage(step, X0, s.xi_c, s.xi_b);
        CHECK((sys.A_d * pre.x - s.x).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(contains_point(X0, pre.x));
    }
}

TEST_CASE("closed loop with a fully active network is affine")
{
    const auto sys = di_system();
    const auto Z = box2(1, 2, 1, 2);
    const auto net = positive_net();
    const auto tr = network_reach_traced(Z, net, BoundsMode::Exact);
    REQUIRE(tr.layers.front().crossing == 0);
    const auto& L0 = net.layers()[0];
    const auto& L1 = net.layers()[1];
    const Matrix Wbar = L1.W * L0.W;
    const Vector vbar = L1.W * L0.v + L1.v;
    const auto expected = affine_map(Z, sys.A_d + sys.B_d * Wbar, sys.B_d * vbar);
    const auto step = closed_loop_step_traced(Z, sys, net, BoundsMode::Exact);
    CHECK(mutually_contained(step.set, expected, 300, 3));
    for (const auto& s : sample_members(step.set, 100, 4))
    {
        const auto pre = decode_preimage(step, Z, s.xi_c, s.xi_b);
        CHECK(((sys.A_d + sys.B_d * Wbar) * pre.x + sys.B_d * vbar - s.x).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("closed loop on the double integrator")
{
    const auto sys = di_system();
    const auto X0 = di_initial_set();
    const auto net = di_network();
    const auto step = closed_loop_step_traced(X0, sys, net, BoundsMode::Exact);
    for (const auto& x : sample_points(X0, 1000, 5))
        CHECK(contains_point(step.set, step_point(sys, net, x)));

    // backward inclusion: assignments of the image decode to preimages that map onto them
    for (const auto& s : sample_members(step.set, 100, 6))
    {
        const auto pre = decode_preimage(step, X0, s.xi_c, s.xi_b);
        CHECK(X0.factor_residual(pre.xi_c, pre.xi_b) <= 1e-9);
        CHECK((step_point(sys, net, pre.x) - s.x).cwiseAbs().maxCoeff() <= 1e-6);
    }

    // constraints are inherited from the network image unchanged
    const auto P = network_reach(X0, net, BoundsMode::Exact);
    CHECK(step.set.Ac() == P.Ac());
    CHECK(step.set.Ab() == P.Ab());
    CHECK(step.set.b() == P.b());
    CHECK(closed_loop_step(X0, sys, net, BoundsMode::Exact).same_representation(step.set));
}

TEST_CASE("decode_preimage rejects infeasible assignments")
{
    const auto sys = di_system();
    const auto X0 = di_initial_set();
    const auto step = closed_loop_step_traced(X0, sys, di_network(), BoundsMode::Exact);
    Vector xc = Vector::Constant(step.set.num_continuous(), 0.9);
    Vector xb = Vector::Ones(step.set.num_binary());
    CHECK_THROWS_AS(decode_preimage(step, X0, xc, xb), ContractError);
    CHECK_THROWS_AS(decode_preimage(step, X0, Vector::Zero(1), xb), ShapeError);
}

TEST_CASE("closed loop image is inside the Minkowski baseline")
{
    const auto sys = di_system();
    const auto X0 = di_initial_set();
    const auto net = di_network();
    const auto exact = closed_loop_step(X0, sys, net, BoundsMode::Exact);
    const auto baseline = minkowski_sum(affine_map(X0, sys.A_d),
                                        affine_map(network_reach(X0, net, BoundsMode::Exact), sys.B_d));
    CHECK(count_outside(exact, baseline, 500, 7) == 0);
}

TEST_CASE("reach_horizon with T = 1 is one closed-loop step")
{
    const auto sys = di_system();
    const auto X0 = di_initial_set();
    const auto net = di_network();
    ReachOptions o;
    o.prune = false;
    const auto r = reach_horizon(X0, sys, net, 1, nullptr, o);
    REQUIRE(r.horizon() == 1);
    CHECK(r.sets[1].same_representation(closed_loop_step(X0, sys, net, BoundsMode::Exact)));
    const auto pruned = reach_horizon(X0, sys, net, 1, nullptr);
    CHECK(mutually_contained(pruned.sets[1], r.sets[1], 200, 8));
}

TEST_CASE("double integrator over two steps")
{
    const auto sys = di_system();
    const auto X0 = di_initial_set();
    const auto net = di_network();
    const auto r = reach_horizon(X0, sys, net, 2, nullptr);
    REQUIRE(r.sets.size() == 3);

    const auto pts = oracle::grid_points(X0, 5, 150, 9);
    const auto rep = oracle::grid_inclusion_check(pts, sys, net, r);
    CHECK(rep.checked == 3 * pts.size());
    CHECK(rep.violations == 0);

    for (std::size_t t = 0; t <= 2; ++t)
    {
        const auto c = r.sets[t].complexity();
        CHECK(r.log[t].complexity.n_g == c.n_g);
        CHECK(r.log[t].complexity.n_b == c.n_b);
        CHECK(r.log[t].complexity.n_c == c.n_c);
        CHECK(r.log[t].complexity.order == doctest::Approx(c.order));
    }
    for (std::size_t t = 1; t <= 2; ++t)
    {
        const auto split = r.log[t].crossings - r.log[t].empty_branches;
        CHECK(r.sets[t].num_binary() + 1 == (Eigen::Index(1) << split) * (r.sets[t - 1].num_binary() + 1));
    }

    // backward: feasible assignments of R_t decode to trajectories starting in X0
    for (std::size_t t = 1; t <= 2; ++t)
        for (const auto& s : sample_members(r.sets[t], 100, 10 + t))
        {
            const auto chain = decode_chain(r, t, s.xi_c, s.xi_b);
            REQUIRE(chain.size() == t + 1);
            CHECK(contains_point(X0, chain[0]));
            for (std::size_t k = 0; k < t; ++k)
                CHECK((step_point(sys, net, chain[k]) - chain[k + 1]).cwiseAbs().maxCoeff() <= 1e-6);
            CHECK((chain[t] - s.x).cwiseAbs().maxCoeff() <= 1e-9);
        }
}

TEST_CASE("lateral system, one step")
{
    const auto sys = lateral_system();
    const auto X0 = lateral_initial_set();
    const auto net = io::load_network(fixture("lateral_net.json"));
    const auto r = reach_horizon(X0, sys, net, 1, nullptr);
    const auto pts = oracle::grid_points(X0, 3, 100, 11);
    const auto rep = oracle::grid_inclusion_check(pts, sys, net, r);
    CHECK(rep.violations == 0);
    CHECK(r.log[1].crossings >= 1);
    for (const auto& s : sample_members(r.sets[1], 50, 12))
    {
        const auto chain = decode_chain(r, 1, s.xi_c, s.xi_b);
        CHECK(contains_point(X0, chain[0]));
        CHECK((step_point(sys, net, chain[0]) - s.x).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("binary budget")
{
    ReachOptions o;
    o.max_binaries = 2;
    CHECK_THROWS_AS(reach_horizon(di_initial_set(), di_system(), di_network(), 2, nullptr, o), CapacityError);
}

TEST_CASE("reduction between steps keeps forward inclusion")
{
    const auto sys = di_system();
    const auto X0 = di_initial_set();
    const auto net = di_network();
    ReductionPolicy pol;
    pol.n_g = 4;
    pol.n_b = 2;
    const auto r = reach_horizon(X0, sys, net, 2, &pol);
    CHECK(r.log[1].reduced);
    CHECK(r.log[1].complexity.n_b < r.log[1].before_reduction.n_b);
    const auto rep = oracle::grid_inclusion_check(oracle::grid_points(X0, 4, 50, 13), sys, net, r);
    CHECK(rep.violations == 0);
    CHECK_THROWS_AS(decode_chain(r, 1, Vector::Zero(r.sets[1].num_continuous()), Vector::Zero(r.sets[1].num_binary())),
                    ContractError);
}

TEST_CASE("dimension checks")
{
    auto sys = di_system();
    CHECK_THROWS_AS(closed_loop_step(lateral_initial_set(), sys, di_network(), BoundsMode::Exact), ShapeError);
    LinearSystem bad;
    bad.A_d = Matrix::Identity(2, 3);
    bad.B_d = Matrix::Zero(2, 1);
    CHECK_THROWS_AS(bad.validate(), ShapeError);
}
