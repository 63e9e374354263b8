#pragma once
// Shared fixtures for the test executables.

#include "hzreach/hybrid_zonotope.hpp"
#include "hzreach/io.hpp"
#include "hzreach/nn.hpp"
#include "hzreach/reach.hpp"
#include "hzreach/set_queries.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace hztest
{
using namespace hzreach;

inline std::filesystem::path fixture(const std::string& name)
{
    return std::filesystem::path(HZ_FIXTURES) / name;
}

// The printed two-branch example set in R^2.
inline HybridZonotope example_zh()
{
    Vector c(2);
    c << 0.25, 2.25;
    Matrix Gc(2, 8);
    Gc << -1, 1, 0, 0, -0.5, 1, 0, 0, //
        -1, -1, 0, 0, -1, -0.5, 0, 0;
    Matrix Gb(2, 1);
    Gb << -0.75, -0.75;
    Matrix Ac(4, 8);
    Ac << 1, 0, 1, 0, 0, 0, 0, 0, //
        0, 1, 0, 1, 0, 0, 0, 0,   //
        0, 0, 0, 0, 1, 0, 1, 0,   //
        0, 0, 0, 0, 0, 1, 0, 1;
    Matrix Ab(4, 1);
    Ab << 1, 1, -1, -1;
    Vector b = Vector::Ones(4);
    return HybridZonotope(c, Gc, Gb, Ac, Ab, b);
}

inline LinearSystem di_system()
{
    LinearSystem s;
    s.A_d = (Matrix(2, 2) << 1, 1, 0, 1).finished();
    s.B_d = (Matrix(2, 1) << 0.5, 1).finished();
    return s;
}

inline HybridZonotope di_initial_set()
{
    Vector c(2);
    c << 2.5, 0.0;
    Matrix Gc = 0.2 * Matrix::Identity(2, 2);
    Matrix Gb(2, 1);
    Gb << 0.25, 0.0;
    return HybridZonotope(c, Gc, Gb, Matrix(0, 2), Matrix(0, 1), Vector(0));
}

inline NeuralNetwork di_network() { return io::load_network(fixture("double_integrator_net.json")); }

inline HybridZonotope box2(double x0, double x1, double y0, double y1)
{
    return HybridZonotope::box((Vector(2) << x0, y0).finished(), (Vector(2) << x1, y1).finished());
}

inline HybridZonotope interval(double lo, double hi)
{
    return HybridZonotope::box(Vector::Constant(1, lo), Vector::Constant(1, hi));
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0)
{
    std::normal_distribution<double> nd(0.0, scale);
    Matrix M(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j)
            M(i, j) = nd(rng);
    return M;
}

// Random hybrid zonotope. The right-hand side comes from a factor point drawn from a
// slightly enlarged box, so both empty and nonempty instances occur.
inline HybridZonotope random_hz(std::mt19937_64& rng, Eigen::Index n, Eigen::Index ng, Eigen::Index nb,
                                Eigen::Index nc, double spread = 1.4)
{
    std::uniform_real_distribution<double> ud(-spread, spread);
    std::bernoulli_distribution coin(0.5);
    Vector c = random_matrix(rng, n, 1);
    Matrix Gc = random_matrix(rng, n, ng);
    Matrix Gb = random_matrix(rng, n, nb, 0.7);
    Matrix Ac = random_matrix(rng, nc, ng);
    Matrix Ab = random_matrix(rng, nc, nb, 0.5);
    Vector xc(ng), xb(nb);
    for (Eigen::Index i = 0; i < ng; ++i)
        xc(i) = ud(rng);
    for (Eigen::Index i = 0; i < nb; ++i)
        xb(i) = coin(rng) ? 1.0 : -1.0;
    Vector b = Ac * xc + Ab * xb;
    return HybridZonotope(c, Gc, Gb, Ac, Ab, b);
}

// Random nonempty constrained zonotope: b is produced by an interior factor point.
inline ConstrainedZonotope random_cz(std::mt19937_64& rng, Eigen::Index n, Eigen::Index ng, Eigen::Index nc)
{
    std::uniform_real_distribution<double> ud(-0.8, 0.8);
    Vector c = random_matrix(rng, n, 1, 2.0);
    Matrix G = random_matrix(rng, n, ng);
    Matrix A = random_matrix(rng, nc, ng);
    Vector x(ng);
    for (Eigen::Index i = 0; i < ng; ++i)
        x(i) = ud(rng);
    return ConstrainedZonotope(c, G, A, A * x);
}

// Number of sampled points of A that are not members of B.
inline std::size_t count_outside(const HybridZonotope& A, const HybridZonotope& B, std::size_t count,
                                 std::uint64_t seed, double tol = 1e-6)
{
    std::size_t bad = 0;
    for (const auto& p : sample_points(A, count, seed))
        if (!contains_point(B, p, tol))
            ++bad;
    return bad;
}

inline bool mutually_contained(const HybridZonotope& A, const HybridZonotope& B, std::size_t count,
                               std::uint64_t seed, double tol = 1e-6)
{
    return count_outside(A, B, count, seed, tol) == 0 && count_outside(B, A, count, seed + 1, tol) == 0;
}

} // namespace hztest
