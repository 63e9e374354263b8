#include "hzreach/hybrid_zonotope.hpp"

#include "hzreach/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hzreach
{

namespace
{

void require_finite(const Eigen::Ref<const Matrix>& M, const char* name)
{
    if (!M.allFinite())
        throw ContractError(std::string("HybridZonotope: non-finite entry in ") + name);
}

Matrix block_diag(const Matrix& A, const Matrix& B)
{
    Matrix out = Matrix::Zero(A.rows() + B.rows(), A.cols() + B.cols());
    out.topLeftCorner(A.rows(), A.cols()) = A;
    out.bottomRightCorner(B.rows(), B.cols()) = B;
    return out;
}

Matrix hcat(const Matrix& A, const Matrix& B)
{
    Matrix out(A.rows(), A.cols() + B.cols());
    out << A, B;
    return out;
}

} // namespace

HybridZonotope::HybridZonotope() = default;

HybridZonotope::HybridZonotope(Vector c, Matrix Gc, Matrix Gb, Matrix Ac, Matrix Ab, Vector b)
    : c_(std::move(c)), Gc_(std::move(Gc)), Gb_(std::move(Gb)), Ac_(std::move(Ac)), Ab_(std::move(Ab)),
      b_(std::move(b))
{
    const auto n = c_.size();
    const auto nc = b_.size();
    // A default-constructed 0x0 matrix stands for "no columns" / "no rows".
    auto normalize = [](Matrix& M, Eigen::Index rows, Eigen::Index cols_if_no_rows) {
        if (M.rows() == 0 && M.cols() == 0)
            M.resize(rows, rows == 0 ? cols_if_no_rows : 0);
    };
    normalize(Gc_, n, Ac_.cols());
    normalize(Gb_, n, Ab_.cols());
    normalize(Ac_, nc, Gc_.cols());
    normalize(Ab_, nc, Gb_.cols());

    if (Gc_.rows() != n || Gb_.rows() != n)
        throw ShapeError("HybridZonotope: generator row count must equal dimension");
    if (Ac_.rows() != nc || Ab_.rows() != nc)
        throw ShapeError("HybridZonotope: constraint row count must equal length of b");
    if (Ac_.cols() != Gc_.cols())
        throw ShapeError("HybridZonotope: Gc and Ac column counts differ");
    if (Ab_.cols() != Gb_.cols())
        throw ShapeError("HybridZonotope: Gb and Ab column counts differ");

    require_finite(c_, "c");
    require_finite(Gc_, "Gc");
    require_finite(Gb_, "Gb");
    require_finite(Ac_, "Ac");
    require_finite(Ab_, "Ab");
    require_finite(b_, "b");
}

HybridZonotope HybridZonotope::point(const Vector& c)
{
    return HybridZonotope(c, Matrix(c.size(), 0), Matrix(c.size(), 0), Matrix(0, 0), Matrix(0, 0), Vector(0));
}

HybridZonotope HybridZonotope::zonotope(const Vector& c, const Matrix& G)
{
    return HybridZonotope(c, G, Matrix(c.size(), 0), Matrix(0, G.cols()), Matrix(0, 0), Vector(0));
}

HybridZonotope HybridZonotope::constrained(const Vector& c, const Matrix& G, const Matrix& A, const Vector& b)
{
    return HybridZonotope(c, G, Matrix(c.size(), 0), A, Matrix(b.size(), 0), b);
}

HybridZonotope HybridZonotope::box(const Vector& lo, const Vector& hi)
{
    if (lo.size() != hi.size())
        throw ShapeError("box: bound vectors differ in length");
    if ((hi.array() < lo.array()).any())
        throw ContractError("box: lower bound exceeds upper bound");
    const Vector half = 0.5 * (hi - lo);
    return zonotope(0.5 * (hi + lo), half.asDiagonal().toDenseMatrix());
}

double HybridZonotope::order() const
{
    if (dim() == 0)
        return 0.0;
    return static_cast<double>(num_continuous() + num_binary() - num_constraints()) / static_cast<double>(dim());
}

Complexity HybridZonotope::complexity() const
{
    return {dim(), num_continuous(), num_binary(), num_constraints(), order()};
}

Point HybridZonotope::evaluate(const Vector& xi_c, const Vector& xi_b) const
{
    if (xi_c.size() != num_continuous() || xi_b.size() != num_binary())
        throw ShapeError("evaluate: factor length mismatch");
    return c_ + Gc_ * xi_c + Gb_ * xi_b;
}

double HybridZonotope::factor_residual(const Vector& xi_c, const Vector& xi_b) const
{
    if (xi_c.size() != num_continuous() || xi_b.size() != num_binary())
        throw ShapeError("factor_residual: factor length mismatch");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < xi_c.size(); ++i)
        worst = std::max(worst, std::abs(xi_c(i)) - 1.0);
    for (Eigen::Index i = 0; i < xi_b.size(); ++i)
        worst = std::max(worst, std::abs(std::abs(xi_b(i)) - 1.0));
    if (num_constraints() > 0)
        worst = std::max(worst, (Ac_ * xi_c + Ab_ * xi_b - b_).cwiseAbs().maxCoeff());
    return worst;
}

bool HybridZonotope::same_representation(const HybridZonotope& o) const
{
    auto same = [](const Matrix& a, const Matrix& b) {
        return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
    };
    return same(c_, o.c_) && same(Gc_, o.Gc_) && same(Gb_, o.Gb_) && same(Ac_, o.Ac_) && same(Ab_, o.Ab_) &&
           same(b_, o.b_);
}

ConstrainedZonotope::ConstrainedZonotope(Vector c_in, Matrix G_in, Matrix A_in, Vector b_in)
{
    const HybridZonotope check(c_in, G_in, Matrix(c_in.size(), 0), A_in, Matrix(b_in.size(), 0), b_in);
    c = check.c();
    G = check.Gc();
    A = check.Ac();
    b = check.b();
}

HybridZonotope ConstrainedZonotope::to_hybrid() const
{
    return HybridZonotope::constrained(c, G, A, b);
}

ConstrainedZonotope ConstrainedZonotope::from_hybrid(const HybridZonotope& Z)
{
    if (Z.num_binary() != 0)
        throw ContractError("ConstrainedZonotope::from_hybrid: set has binary generators");
    return ConstrainedZonotope(Z.c(), Z.Gc(), Z.Ac(), Z.b());
}

HybridZonotope affine_map(const HybridZonotope& Z, const Matrix& R, const Vector& t)
{
    if (R.cols() != Z.dim())
        throw ShapeError("affine_map: R column count must equal set dimension");
    Vector shift = t.size() == 0 ? Vector::Zero(R.rows()) : t;
    if (shift.size() != R.rows())
        throw ShapeError("affine_map: translation length must equal R row count");
    return HybridZonotope(R * Z.c() + shift, R * Z.Gc(), R * Z.Gb(), Z.Ac(), Z.Ab(), Z.b());
}

HybridZonotope intersect(const HybridZonotope& Z, const HybridZonotope& Y)
{
    if (Z.dim() != Y.dim())
        throw ShapeError("intersect: dimension mismatch");
    const auto n = Z.dim();
    const auto ngz = Z.num_continuous(), ngy = Y.num_continuous();
    const auto nbz = Z.num_binary(), nby = Y.num_binary();
    const auto ncz = Z.num_constraints(), ncy = Y.num_constraints();

    Matrix Gc = Matrix::Zero(n, ngz + ngy);
    Gc.leftCols(ngz) = Z.Gc();
    Matrix Gb = Matrix::Zero(n, nbz + nby);
    Gb.leftCols(nbz) = Z.Gb();

    Matrix Ac = Matrix::Zero(ncz + ncy + n, ngz + ngy);
    Ac.topLeftCorner(ncz, ngz) = Z.Ac();
    Ac.block(ncz, ngz, ncy, ngy) = Y.Ac();
    Ac.block(ncz + ncy, 0, n, ngz) = Z.Gc();
    Ac.block(ncz + ncy, ngz, n, ngy) = -Y.Gc();

    Matrix Ab = Matrix::Zero(ncz + ncy + n, nbz + nby);
    Ab.topLeftCorner(ncz, nbz) = Z.Ab();
    Ab.block(ncz, nbz, ncy, nby) = Y.Ab();
    Ab.block(ncz + ncy, 0, n, nbz) = Z.Gb();
    Ab.block(ncz + ncy, nbz, n, nby) = -Y.Gb();

    Vector b(ncz + ncy + n);
    b << Z.b(), Y.b(), Y.c() - Z.c();
    return HybridZonotope(Z.c(), std::move(Gc), std::move(Gb), std::move(Ac), std::move(Ab), std::move(b));
}

HybridZonotope intersect_halfspace(const HybridZonotope& Z, const Vector& h, double f)
{
    if (h.size() != Z.dim())
        throw ShapeError("intersect_halfspace: normal length must equal set dimension");
    if (h.isZero(0.0))
        throw DegenerateInputError("intersect_halfspace: zero normal vector");
    if (!std::isfinite(f))
        throw ContractError("intersect_halfspace: non-finite offset");

    const auto n = Z.dim();
    const auto ng = Z.num_continuous();
    const auto nc = Z.num_constraints();
    const Eigen::RowVectorXd hGc = h.transpose() * Z.Gc();
    const Eigen::RowVectorXd hGb = h.transpose() * Z.Gb();
    const double hc = h.dot(Z.c());
    const double dm = hGc.cwiseAbs().sum() + hGb.cwiseAbs().sum() + f - hc;

    Matrix Gc = Matrix::Zero(n, ng + 1);
    Gc.leftCols(ng) = Z.Gc();
    Matrix Ac = Matrix::Zero(nc + 1, ng + 1);
    Ac.topLeftCorner(nc, ng) = Z.Ac();
    Matrix Ab(nc + 1, Z.num_binary());
    Vector b(nc + 1);
    b.head(nc) = Z.b();
    if (dm >= 0.0)
    {
        Ac.block(nc, 0, 1, ng) = hGc;
        Ac(nc, ng) = dm / 2.0;
        Ab << Z.Ab(), hGb;
        b(nc) = f - hc - dm / 2.0;
    }
    else
    {
        // h'x >= h'c - sum|h'G| > f on all of Z: the intersection is empty.
        Ab << Z.Ab(), Eigen::RowVectorXd::Zero(Z.num_binary());
        b(nc) = 1.0;
    }
    return HybridZonotope(Z.c(), std::move(Gc), Z.Gb(), std::move(Ac), std::move(Ab), std::move(b));
}

HybridZonotope union_of(const HybridZonotope& Z, const HybridZonotope& W)
{
    if (Z.dim() != W.dim())
        throw ShapeError("union: dimension mismatch");
    const auto n = Z.dim();
    const auto ngz = Z.num_continuous(), ngw = W.num_continuous();
    const auto nbz = Z.num_binary(), nbw = W.num_binary();
    const auto ncz = Z.num_constraints(), ncw = W.num_constraints();

    const Vector onesz = Vector::Ones(nbz), onesw = Vector::Ones(nbw);
    const Vector gz = Z.Gb() * onesz + W.c(); // G_z^b 1 + c_w
    const Vector gw = W.Gb() * onesw + Z.c(); // G_w^b 1 + c_z
    const Vector G_hat = (gw - gz) / 2.0;
    const Vector c_hat = (gw + gz) / 2.0;
    const Vector Az_hat = (-(Z.Ab() * onesz) - Z.b()) / 2.0;
    const Vector Aw_hat = (W.Ab() * onesw + W.b()) / 2.0;
    const Vector bz_hat = (-(Z.Ab() * onesz) + Z.b()) / 2.0;
    const Vector bw_hat = (-(W.Ab() * onesw) + W.b()) / 2.0;

    const auto n3 = 2 * ngz + 2 * ngw + 2 * nbz + 2 * nbw; // rows of the switching block
    const auto ng = ngz + ngw + n3;
    const auto nb = nbz + nbw + 1;
    const auto nc = ncz + ncw + n3;

    Matrix Gc = Matrix::Zero(n, ng);
    Gc.leftCols(ngz) = Z.Gc();
    Gc.middleCols(ngz, ngw) = W.Gc();
    Matrix Gb(n, nb);
    Gb << Z.Gb(), W.Gb(), G_hat;

    Matrix Ac = Matrix::Zero(nc, ng);
    Ac.topLeftCorner(ncz, ngz) = Z.Ac();
    Ac.block(ncz, ngz, ncw, ngw) = W.Ac();
    Matrix Ab = Matrix::Zero(nc, nb);
    Ab.topLeftCorner(ncz, nbz) = Z.Ab();
    Ab.block(0, nb - 1, ncz, 1) = Az_hat;
    Ab.block(ncz, nbz, ncw, nbw) = W.Ab();
    Ab.block(ncz, nb - 1, ncw, 1) = Aw_hat;
    Vector b(nc);
    b.head(ncz) = bz_hat;
    b.segment(ncz, ncw) = bw_hat;

    // Switching block: rows grouped as [ξz; -ξz; ξw; -ξw; ξzb; -ξzb; ξwb; -ξwb] with one slack each.
    const auto r0 = ncz + ncw;
    const auto slack0 = ngz + ngw;
    Ac.block(r0, slack0, n3, n3) = Matrix::Identity(n3, n3);
    Eigen::Index r = r0;
    auto fill_rows = [&](Eigen::Index count, auto&& body) {
        for (Eigen::Index k = 0; k < count; ++k, ++r)
            body(k, r);
    };
    fill_rows(ngz, [&](Eigen::Index k, Eigen::Index row) {
        Ac(row, k) = 1.0;
        Ab(row, nb - 1) = 0.5;
        b(row) = 0.5;
    });
    fill_rows(ngz, [&](Eigen::Index k, Eigen::Index row) {
        Ac(row, k) = -1.0;
        Ab(row, nb - 1) = 0.5;
        b(row) = 0.5;
    });
    fill_rows(ngw, [&](Eigen::Index k, Eigen::Index row) {
        Ac(row, ngz + k) = 1.0;
        Ab(row, nb - 1) = -0.5;
        b(row) = 0.5;
    });
    fill_rows(ngw, [&](Eigen::Index k, Eigen::Index row) {
        Ac(row, ngz + k) = -1.0;
        Ab(row, nb - 1) = -0.5;
        b(row) = 0.5;
    });
    fill_rows(nbz, [&](Eigen::Index k, Eigen::Index row) {
        Ab(row, k) = 0.5;
        Ab(row, nb - 1) = 0.5;
        b(row) = 0.0;
    });
    fill_rows(nbz, [&](Eigen::Index k, Eigen::Index row) {
        Ab(row, k) = -0.5;
        Ab(row, nb - 1) = 0.5;
        b(row) = 1.0;
    });
    fill_rows(nbw, [&](Eigen::Index k, Eigen::Index row) {
        Ab(row, nbz + k) = 0.5;
        Ab(row, nb - 1) = -0.5;
        b(row) = 0.0;
    });
    fill_rows(nbw, [&](Eigen::Index k, Eigen::Index row) {
        Ab(row, nbz + k) = -0.5;
        Ab(row, nb - 1) = -0.5;
        b(row) = 1.0;
    });

    return HybridZonotope(c_hat, std::move(Gc), std::move(Gb), std::move(Ac), std::move(Ab), std::move(b));
}

HybridZonotope minkowski_sum(const HybridZonotope& Z, const HybridZonotope& W)
{
    if (Z.dim() != W.dim())
        throw ShapeError("minkowski_sum: dimension mismatch");
    Vector b(Z.num_constraints() + W.num_constraints());
    b << Z.b(), W.b();
    return HybridZonotope(Z.c() + W.c(), hcat(Z.Gc(), W.Gc()), hcat(Z.Gb(), W.Gb()), block_diag(Z.Ac(), W.Ac()),
                          block_diag(Z.Ab(), W.Ab()), std::move(b));
}

HybridZonotope prune_zero_columns(const HybridZonotope& Z)
{
    auto keep = [](const Matrix& G, const Matrix& A) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < G.cols(); ++j)
            if (!G.col(j).isZero(0.0) || !A.col(j).isZero(0.0))
                idx.push_back(j);
        return idx;
    };
    const auto kc = keep(Z.Gc(), Z.Ac());
    const auto kb = keep(Z.Gb(), Z.Ab());
    if (static_cast<Eigen::Index>(kc.size()) == Z.num_continuous() &&
        static_cast<Eigen::Index>(kb.size()) == Z.num_binary())
        return Z;
    // A dropped binary column is zero everywhere, so its sign never mattered.
    const auto all_rows = Eigen::all;
    return HybridZonotope(Z.c(), Z.Gc()(all_rows, kc), Z.Gb()(all_rows, kb), Z.Ac()(all_rows, kc),
                          Z.Ab()(all_rows, kb), Z.b());
}

std::vector<Interval> generator_interval_hull(const HybridZonotope& Z)
{
    std::vector<Interval> out(static_cast<std::size_t>(Z.dim()));
    for (Eigen::Index i = 0; i < Z.dim(); ++i)
    {
        const double r = Z.Gc().row(i).cwiseAbs().sum() + Z.Gb().row(i).cwiseAbs().sum();
        out[static_cast<std::size_t>(i)] = {Z.c()(i) - r, Z.c()(i) + r};
    }
    return out;
}

} // namespace hzreach
