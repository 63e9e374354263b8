#pragma once

/**
 * @file hybrid_zonotope.hpp
 * @brief Hybrid zonotope data model and the closed set operations on it.
 *
 * A hybrid zonotope is
 *   Z = { c + Gc*xi_c + Gb*xi_b | Ac*xi_c + Ab*xi_b = b, xi_c in [-1,1]^ng, xi_b in {-1,1}^nb }.
 * Constrained zonotopes (nb = 0) and zonotopes (nb = nc = 0) are the same type.
 * Values are immutable after construction.
 */

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace hzreach
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

struct Interval
{
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

/// Complexity metadata of a hybrid zonotope.
struct Complexity
{
    Eigen::Index n = 0;
    Eigen::Index n_g = 0;
    Eigen::Index n_b = 0;
    Eigen::Index n_c = 0;
    double order = 0.0; ///< (n_g + n_b - n_c) / n, 0 for n = 0
};

class HybridZonotope
{
public:
    /// Empty-dimension point set {()}.
    HybridZonotope();

    /// Throws ShapeError on inconsistent dimensions and ContractError on non-finite entries.
    HybridZonotope(Vector c, Matrix Gc, Matrix Gb, Matrix Ac, Matrix Ab, Vector b);

    static HybridZonotope point(const Vector& c);
    static HybridZonotope zonotope(const Vector& c, const Matrix& G);
    static HybridZonotope constrained(const Vector& c, const Matrix& G, const Matrix& A, const Vector& b);
    /// Axis-aligned box [lo, hi] as a zonotope.
    static HybridZonotope box(const Vector& lo, const Vector& hi);

    const Vector& c() const noexcept { return c_; }
    const Matrix& Gc() const noexcept { return Gc_; }
    const Matrix& Gb() const noexcept { return Gb_; }
    const Matrix& Ac() const noexcept { return Ac_; }
    const Matrix& Ab() const noexcept { return Ab_; }
    const Vector& b() const noexcept { return b_; }

    Eigen::Index dim() const noexcept { return c_.size(); }
    Eigen::Index num_continuous() const noexcept { return Gc_.cols(); }
    Eigen::Index num_binary() const noexcept { return Gb_.cols(); }
    Eigen::Index num_constraints() const noexcept { return b_.size(); }

    double order() const;
    Complexity complexity() const;

    bool is_constrained_zonotope() const noexcept { return num_binary() == 0; }
    bool is_zonotope() const noexcept { return num_binary() == 0 && num_constraints() == 0; }

    /// Point c + Gc*xi_c + Gb*xi_b for a factor assignment (no feasibility check).
    Point evaluate(const Vector& xi_c, const Vector& xi_b) const;

    /// Largest violation of the box, binary and equality conditions by a factor assignment.
    double factor_residual(const Vector& xi_c, const Vector& xi_b) const;

    /// Exact entrywise equality of all six matrices.
    bool same_representation(const HybridZonotope& other) const;

private:
    Vector c_;
    Matrix Gc_;
    Matrix Gb_;
    Matrix Ac_;
    Matrix Ab_;
    Vector b_;
};

/// Convex special case; converts losslessly to a hybrid zonotope with nb = 0.
struct ConstrainedZonotope
{
    Vector c;
    Matrix G;
    Matrix A;
    Vector b;

    ConstrainedZonotope() = default;
    /// Validates shapes and finiteness like HybridZonotope.
    ConstrainedZonotope(Vector c, Matrix G, Matrix A, Vector b);

    Eigen::Index dim() const noexcept { return c.size(); }
    HybridZonotope to_hybrid() const;
    /// Throws ContractError when Z has binary generators.
    static ConstrainedZonotope from_hybrid(const HybridZonotope& Z);
};

// ---------------------------------------------------------------------------
// Closed set operations. All are pure and return new values.
// ---------------------------------------------------------------------------

/// {R x + t : x in Z}. t may be empty, meaning zero.
HybridZonotope affine_map(const HybridZonotope& Z, const Matrix& R, const Vector& t = Vector());

/// Z ∩ Y via the block construction with n extra equality rows.
HybridZonotope intersect(const HybridZonotope& Z, const HybridZonotope& Y);

/**
 * Z ∩ {x : h'x <= f}. Adds one continuous generator and one constraint row.
 * When the halfspace misses the interval hull of Z entirely the result carries an
 * infeasible row (0 = 1) with the same shape, so callers can rely on the dimensions.
 */
HybridZonotope intersect_halfspace(const HybridZonotope& Z, const Vector& h, double f);

/// Z ∪ W with one extra binary generator. Z is selected by the new binary at +1, W at -1.
HybridZonotope union_of(const HybridZonotope& Z, const HybridZonotope& W);

/// {z + w : z in Z, w in W}.
HybridZonotope minkowski_sum(const HybridZonotope& Z, const HybridZonotope& W);

/// Drops generator columns that are zero in both G and A. The set is unchanged.
HybridZonotope prune_zero_columns(const HybridZonotope& Z);

/// Interval hull ignoring constraints: c ± (|Gc| + |Gb|) 1, per coordinate.
std::vector<Interval> generator_interval_hull(const HybridZonotope& Z);

} // namespace hzreach
