// Bounded-variable revised simplex with an explicit dense basis inverse.
//
// Phase 1 starts from a crash basis of singleton columns, with a signed artificial in
// every row the crash could not cover, and minimizes the artificial sum. Phase 2 fixes
// the artificials at zero and minimizes the real objective. Dantzig pricing switches to
// Bland's rule after a run of degenerate pivots.
//
// A warm start reuses a previous optimal basis under new bounds. That basis stays dual
// feasible, so a dual simplex pass restores primal feasibility before phase 2 resumes.

#include "hzreach/errors.hpp"
#include "hzreach/milp.hpp"
#include "lp_basis.hpp"

#include <Eigen/LU>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace hzreach
{

namespace
{

enum class NonbasicState : std::uint8_t
{
    Basic,
    AtLower,
    AtUpper,
    FreeZero,
};

constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 64;

class BoundedSimplex
{
public:
    BoundedSimplex(const MilpProblem& p, const Vector& lower, const Vector& upper, const MilpOptions& opts)
        : opts_(opts), m_(p.num_rows()), n_(p.num_vars()), A_(p.A.sparseView()), rhs_(p.rhs)
    {
        const auto total = n_ + m_;
        lo_.resize(total);
        hi_.resize(total);
        lo_.head(n_) = lower;
        hi_.head(n_) = upper;
        lo_.tail(m_).setZero();
        hi_.tail(m_).setConstant(kInf);
        cost_real_ = Vector::Zero(total);
        cost_real_.head(n_) = p.objective;
        x_ = Vector::Zero(total);
        state_.assign(static_cast<std::size_t>(total), NonbasicState::AtLower);
        pos_.assign(static_cast<std::size_t>(total), -1);
        sign_.assign(static_cast<std::size_t>(m_), 1.0);
        basis_.resize(static_cast<std::size_t>(m_));
        A_.makeCompressed();
    }

    MilpSolution run(const LpBasis* start)
    {
        MilpSolution out;
        for (Eigen::Index j = 0; j < n_; ++j)
        {
            if (lo_(j) > hi_(j) + opts_.feasibility_tol)
            {
                out.status = SolveStatus::Infeasible;
                return out;
            }
        }
        if (start != nullptr && load_basis(*start))
        {
            const auto dual = dual_iterate();
            if (dual == Outcome::Optimal)
                return phase2();
            if (dual == Outcome::Unbounded)
            {
                // dual unbounded: no primal point fits the new bounds
                out.status = SolveStatus::Infeasible;
                out.bound = kInf;
                out.iterations = pivots_;
                return out;
            }
            if (pivots_ >= opts_.max_pivots)
            {
                out.status = SolveStatus::IterationLimit;
                out.iterations = pivots_;
                return out;
            }
            reset_for_cold_start();
        }
        initialize_basis();

        // Phase 1.
        cost_ = Vector::Zero(n_ + m_);
        cost_.tail(m_).setOnes();
        const auto phase1 = iterate();
        out.iterations = pivots_;
        if (phase1 == Outcome::Limit)
        {
            out.status = SolveStatus::IterationLimit;
            return out;
        }
        refactor();
        const double infeas = x_.tail(m_).sum();
        const double scale = 1.0 + (m_ > 0 ? rhs_.cwiseAbs().maxCoeff() : 0.0);
        if (infeas > 1e-8 * scale)
        {
            out.status = SolveStatus::Infeasible;
            out.bound = kInf;
            return out;
        }

        // Phase 2: artificials are pinned at zero.
        for (Eigen::Index i = 0; i < m_; ++i)
        {
            const auto j = n_ + i;
            hi_(j) = 0.0;
            if (state_[static_cast<std::size_t>(j)] != NonbasicState::Basic)
            {
                x_(j) = 0.0;
                state_[static_cast<std::size_t>(j)] = NonbasicState::AtLower;
            }
        }
        return phase2();
    }

    LpBasis basis() const
    {
        LpBasis b;
        b.basic = basis_;
        b.state.reserve(state_.size());
        for (auto st : state_)
            b.state.push_back(static_cast<std::uint8_t>(st));
        b.sign = sign_;
        return b;
    }

private:
    enum class Outcome
    {
        Optimal,
        Unbounded,
        Limit,
    };

    MilpSolution phase2()
    {
        MilpSolution out;
        cost_ = cost_real_;
        bland_ = false;
        degenerate_run_ = 0;
        const auto outcome = iterate();
        out.iterations = pivots_;
        if (outcome == Outcome::Limit)
        {
            out.status = SolveStatus::IterationLimit;
            return out;
        }
        if (outcome == Outcome::Unbounded)
        {
            out.status = SolveStatus::Unbounded;
            out.value = -kInf;
            return out;
        }
        refactor();

        out.status = SolveStatus::Optimal;
        out.assignment = x_.head(n_);
        // Snap nonbasic variables and clip basic drift onto the box.
        for (Eigen::Index j = 0; j < n_; ++j)
            out.assignment(j) = std::clamp(out.assignment(j), lo_(j), hi_(j));
        out.value = cost_real_.head(n_).dot(out.assignment);

        const Vector y = dual_prices();
        out.duals = y;
        double dual = m_ > 0 ? y.dot(rhs_) : 0.0;
        const Vector d = reduced_costs(y);
        for (Eigen::Index j = 0; j < n_ + m_; ++j)
            if (state_[static_cast<std::size_t>(j)] != NonbasicState::Basic)
                dual += d(j) * x_(j);
        out.dual_value = dual;
        out.bound = out.value;
        out.gap = 0.0;
        return out;
    }

    // Install a stored basis with nonbasic columns on their (new) bounds. Fails when a
    // bound it needs is infinite, the basis is singular, or reduced costs have the wrong sign.
    bool load_basis(const LpBasis& b)
    {
        const auto total = n_ + m_;
        if (static_cast<Eigen::Index>(b.state.size()) != total || static_cast<Eigen::Index>(b.basic.size()) != m_)
            return false;
        sign_ = b.sign;
        basis_ = b.basic;
        hi_.tail(m_).setZero();
        std::fill(pos_.begin(), pos_.end(), -1);
        for (Eigen::Index j = 0; j < total; ++j)
        {
            auto st = static_cast<NonbasicState>(b.state[static_cast<std::size_t>(j)]);
            if (st != NonbasicState::Basic)
            {
                const bool lo_ok = std::isfinite(lo_(j));
                const bool hi_ok = std::isfinite(hi_(j));
                if (st == NonbasicState::AtUpper && !hi_ok)
                    st = lo_ok ? NonbasicState::AtLower : NonbasicState::FreeZero;
                if (st == NonbasicState::AtLower && !lo_ok)
                    st = hi_ok ? NonbasicState::AtUpper : NonbasicState::FreeZero;
                if (st == NonbasicState::FreeZero && (lo_ok || hi_ok))
                    return false;
                x_(j) = st == NonbasicState::AtLower ? lo_(j) : st == NonbasicState::AtUpper ? hi_(j) : 0.0;
            }
            state_[static_cast<std::size_t>(j)] = st;
        }
        for (Eigen::Index i = 0; i < m_; ++i)
        {
            const auto j = basis_[static_cast<std::size_t>(i)];
            if (j < 0 || j >= total || state_[static_cast<std::size_t>(j)] != NonbasicState::Basic)
                return false;
            pos_[static_cast<std::size_t>(j)] = static_cast<int>(i);
        }
        refactor();
        if (!Binv_.allFinite())
            return false;
        cost_ = cost_real_;
        const Vector d = reduced_costs(dual_prices());
        const double dtol = 10.0 * opts_.optimality_tol;
        for (Eigen::Index j = 0; j < total; ++j)
        {
            const auto st = state_[static_cast<std::size_t>(j)];
            if (st == NonbasicState::Basic || lo_(j) == hi_(j))
                continue;
            if ((st == NonbasicState::AtLower && d(j) < -dtol) || (st == NonbasicState::AtUpper && d(j) > dtol) ||
                (st == NonbasicState::FreeZero && std::abs(d(j)) > dtol))
                return false;
        }
        return true;
    }

    void reset_for_cold_start()
    {
        hi_.tail(m_).setConstant(kInf);
        x_.setZero();
        std::fill(state_.begin(), state_.end(), NonbasicState::AtLower);
        std::fill(pos_.begin(), pos_.end(), -1);
        std::fill(sign_.begin(), sign_.end(), 1.0);
        bland_ = false;
        degenerate_run_ = 0;
    }

    // Dual simplex on the real costs. Optimal means primal feasible, Unbounded means the
    // dual ray proves primal infeasibility, Limit means give up and start cold.
    Outcome dual_iterate()
    {
        const double ftol = opts_.feasibility_tol;
        const std::int64_t budget = pivots_ + std::max<std::int64_t>(200, 4 * (n_ + m_));
        Vector y = m_ > 0 ? dual_prices() : Vector();
        while (true)
        {
            if (pivots_ >= opts_.max_pivots || pivots_ >= budget)
                return Outcome::Limit;
            if (since_refactor_ >= kRefactorEvery)
            {
                refactor();
                y = dual_prices();
            }

            // Leaving row: largest bound violation.
            Eigen::Index r = -1;
            double worst = ftol;
            for (Eigen::Index i = 0; i < m_; ++i)
            {
                const auto bj = basis_[static_cast<std::size_t>(i)];
                const double v = std::max(lo_(bj) - x_(bj), x_(bj) - hi_(bj));
                if (v > worst)
                {
                    worst = v;
                    r = i;
                }
            }
            if (r < 0)
                return Outcome::Optimal;
            const auto leaving = basis_[static_cast<std::size_t>(r)];
            const bool to_lower = x_(leaving) < lo_(leaving);
            const double target = to_lower ? lo_(leaving) : hi_(leaving);

            const Vector d = reduced_costs(y);
            const Eigen::RowVectorXd brow = Binv_.row(r);
            Eigen::Index enter = -1;
            double best_ratio = kInf;
            double enter_alpha = 0.0;
            for (Eigen::Index j = 0; j < n_ + m_; ++j)
            {
                const auto st = state_[static_cast<std::size_t>(j)];
                if (st == NonbasicState::Basic || lo_(j) == hi_(j))
                    continue;
                double alpha = 0.0;
                if (j < n_)
                {
                    for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
                        alpha += brow(it.row()) * it.value();
                }
                else
                {
                    alpha = brow(j - n_) * sign_[static_cast<std::size_t>(j - n_)];
                }
                if (std::abs(alpha) < kPivotTol)
                    continue;
                // x_leaving moves by -theta * alpha; theta's sign is fixed by the nonbasic state.
                const bool up_ok = st != NonbasicState::AtUpper;
                const bool down_ok = st != NonbasicState::AtLower;
                const bool need_up = to_lower ? alpha < 0.0 : alpha > 0.0;
                if ((need_up && !up_ok) || (!need_up && !down_ok))
                    continue;
                const double ratio = std::abs(d(j)) / std::abs(alpha);
                if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && std::abs(alpha) > std::abs(enter_alpha)))
                {
                    best_ratio = ratio;
                    enter = j;
                    enter_alpha = alpha;
                }
            }
            if (enter < 0)
                return Outcome::Unbounded;

            const Vector w = binv_times_column(enter);
            if (std::abs(w(r)) < kPivotTol)
                return Outcome::Limit;
            const double theta = (x_(leaving) - target) / w(r);
            ++pivots_;
            x_(enter) += theta;
            for (Eigen::Index i = 0; i < m_; ++i)
                x_(basis_[static_cast<std::size_t>(i)]) -= theta * w(i);
            x_(leaving) = target;
            state_[static_cast<std::size_t>(leaving)] = to_lower ? NonbasicState::AtLower : NonbasicState::AtUpper;
            pos_[static_cast<std::size_t>(leaving)] = -1;
            basis_[static_cast<std::size_t>(r)] = enter;
            pos_[static_cast<std::size_t>(enter)] = static_cast<int>(r);
            state_[static_cast<std::size_t>(enter)] = NonbasicState::Basic;

            const Eigen::RowVectorXd pivot_row = Binv_.row(r) / w(r);
            y += d(enter) * pivot_row.transpose();
            Binv_.noalias() -= w * pivot_row;
            Binv_.row(r) = pivot_row;
            ++since_refactor_;
        }
    }

    void initialize_basis()
    {
        for (Eigen::Index j = 0; j < n_; ++j)
        {
            auto& st = state_[static_cast<std::size_t>(j)];
            if (std::isfinite(lo_(j)))
            {
                x_(j) = lo_(j);
                st = NonbasicState::AtLower;
            }
            else if (std::isfinite(hi_(j)))
            {
                x_(j) = hi_(j);
                st = NonbasicState::AtUpper;
            }
            else
            {
                x_(j) = 0.0;
                st = NonbasicState::FreeZero;
            }
        }
        Vector r = rhs_;
        if (n_ > 0)
            r -= A_ * x_.head(n_);

        // Crash: a column with a single nonzero in row i starts basic there when the value
        // it must take to close the row lies within its bounds. Otherwise the row's artificial is basic.
        std::vector<Eigen::Index> crash(static_cast<std::size_t>(m_), -1);
        std::vector<double> crash_pivot(static_cast<std::size_t>(m_), 0.0);
        for (Eigen::Index j = 0; j < n_; ++j)
        {
            Eigen::SparseMatrix<double>::InnerIterator it(A_, j);
            if (!it)
                continue;
            const auto row = it.row();
            const double a = it.value();
            if (++it || std::abs(a) < 1e-6 || crash[static_cast<std::size_t>(row)] >= 0)
                continue;
            const double v = x_(j) + r(row) / a;
            if (v < lo_(j) - 1e-12 || v > hi_(j) + 1e-12)
                continue;
            crash[static_cast<std::size_t>(row)] = j;
            crash_pivot[static_cast<std::size_t>(row)] = a;
            r(row) = 0.0;
            x_(j) = v;
        }

        Binv_ = Matrix::Zero(m_, m_);
        for (Eigen::Index i = 0; i < m_; ++i)
        {
            const auto j = n_ + i;
            sign_[static_cast<std::size_t>(i)] = r(i) >= 0.0 ? 1.0 : -1.0;
            const auto cj = crash[static_cast<std::size_t>(i)];
            if (cj >= 0)
            {
                x_(j) = 0.0;
                state_[static_cast<std::size_t>(j)] = NonbasicState::AtLower;
                basis_[static_cast<std::size_t>(i)] = cj;
                pos_[static_cast<std::size_t>(cj)] = static_cast<int>(i);
                state_[static_cast<std::size_t>(cj)] = NonbasicState::Basic;
                Binv_(i, i) = 1.0 / crash_pivot[static_cast<std::size_t>(i)];
                continue;
            }
            x_(j) = std::abs(r(i));
            basis_[static_cast<std::size_t>(i)] = j;
            pos_[static_cast<std::size_t>(j)] = static_cast<int>(i);
            state_[static_cast<std::size_t>(j)] = NonbasicState::Basic;
            Binv_(i, i) = sign_[static_cast<std::size_t>(i)];
        }
        since_refactor_ = 0;
    }

    /// Dense column j of [A, diag(sign)].
    Vector column(Eigen::Index j) const
    {
        Vector col = Vector::Zero(m_);
        if (j < n_)
        {
            for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
                col(it.row()) = it.value();
        }
        else
        {
            col(j - n_) = sign_[static_cast<std::size_t>(j - n_)];
        }
        return col;
    }

    Vector binv_times_column(Eigen::Index j) const
    {
        if (j >= n_)
            return Binv_.col(j - n_) * sign_[static_cast<std::size_t>(j - n_)];
        Vector w = Vector::Zero(m_);
        for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
            w.noalias() += it.value() * Binv_.col(it.row());
        return w;
    }

    Vector dual_prices() const
    {
        Vector cb(m_);
        for (Eigen::Index i = 0; i < m_; ++i)
            cb(i) = cost_(basis_[static_cast<std::size_t>(i)]);
        return Binv_.transpose() * cb;
    }

    Vector reduced_costs(const Vector& y) const
    {
        Vector d(n_ + m_);
        if (n_ > 0)
            d.head(n_) = cost_.head(n_) - A_.transpose() * y;
        for (Eigen::Index i = 0; i < m_; ++i)
            d(n_ + i) = cost_(n_ + i) - sign_[static_cast<std::size_t>(i)] * y(i);
        return d;
    }

    void refactor()
    {
        if (m_ == 0)
            return;
        std::vector<Eigen::Triplet<double>> trip;
        for (Eigen::Index i = 0; i < m_; ++i)
        {
            const auto j = basis_[static_cast<std::size_t>(i)];
            if (j < n_)
            {
                for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
                    trip.emplace_back(it.row(), i, it.value());
            }
            else
            {
                trip.emplace_back(j - n_, i, sign_[static_cast<std::size_t>(j - n_)]);
            }
        }
        Eigen::SparseMatrix<double> B(m_, m_);
        B.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(B);
        if (lu.info() == Eigen::Success)
        {
            Matrix I = Matrix::Identity(m_, m_);
            Binv_ = lu.solve(I);
        }
        else
        {
            Binv_ = Eigen::PartialPivLU<Matrix>(Matrix(B)).inverse();
        }
        since_refactor_ = 0;
        recompute_basic_values();
    }

    void recompute_basic_values()
    {
        Vector r = rhs_;
        for (Eigen::Index j = 0; j < n_ + m_; ++j)
        {
            if (state_[static_cast<std::size_t>(j)] == NonbasicState::Basic || x_(j) == 0.0)
                continue;
            if (j < n_)
            {
                for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
                    r(it.row()) -= it.value() * x_(j);
            }
            else
            {
                r(j - n_) -= sign_[static_cast<std::size_t>(j - n_)] * x_(j);
            }
        }
        const Vector xb = Binv_ * r;
        for (Eigen::Index i = 0; i < m_; ++i)
            x_(basis_[static_cast<std::size_t>(i)]) = xb(i);
    }

    Outcome iterate()
    {
        const double dtol = opts_.optimality_tol;
        Vector y;
        bool y_valid = false;
        while (true)
        {
            if (pivots_ >= opts_.max_pivots)
                return Outcome::Limit;
            if (since_refactor_ >= kRefactorEvery)
            {
                refactor();
                y_valid = false;
            }
            if (!y_valid)
            {
                y = m_ > 0 ? dual_prices() : Vector();
                y_valid = true;
            }
            const Vector d = reduced_costs(y);

            // Pricing.
            Eigen::Index enter = -1;
            double enter_dir = 0.0;
            double best = 0.0;
            for (Eigen::Index j = 0; j < n_ + m_; ++j)
            {
                const auto st = state_[static_cast<std::size_t>(j)];
                if (st == NonbasicState::Basic || lo_(j) == hi_(j))
                    continue;
                double dir = 0.0;
                if (st == NonbasicState::AtLower && d(j) < -dtol)
                    dir = 1.0;
                else if (st == NonbasicState::AtUpper && d(j) > dtol)
                    dir = -1.0;
                else if (st == NonbasicState::FreeZero && std::abs(d(j)) > dtol)
                    dir = d(j) < 0.0 ? 1.0 : -1.0;
                if (dir == 0.0)
                    continue;
                if (bland_)
                {
                    enter = j;
                    enter_dir = dir;
                    break;
                }
                if (std::abs(d(j)) > best)
                {
                    best = std::abs(d(j));
                    enter = j;
                    enter_dir = dir;
                }
            }
            if (enter < 0)
                return Outcome::Optimal;

            const Vector w = binv_times_column(enter);

            // Ratio test. The entering variable's own span competes as a bound flip.
            double theta = hi_(enter) - lo_(enter);
            if (!std::isfinite(theta))
                theta = kInf;
            Eigen::Index leave_row = -1;
            bool leave_to_upper = false;
            double leave_alpha = 0.0;
            for (Eigen::Index i = 0; i < m_; ++i)
            {
                const double alpha = w(i) * enter_dir;
                const auto bj = basis_[static_cast<std::size_t>(i)];
                double t = kInf;
                bool to_upper = false;
                if (alpha > kPivotTol && std::isfinite(lo_(bj)))
                    t = std::max(0.0, (x_(bj) - lo_(bj)) / alpha);
                else if (alpha < -kPivotTol && std::isfinite(hi_(bj)))
                {
                    t = std::max(0.0, (hi_(bj) - x_(bj)) / -alpha);
                    to_upper = true;
                }
                if (!std::isfinite(t))
                    continue;
                bool take = false;
                if (t < theta - 1e-12)
                    take = true;
                else if (t <= theta + 1e-12 && leave_row >= 0)
                {
                    // Ties: Bland picks the lowest variable index, otherwise the largest pivot.
                    if (bland_)
                        take = bj < basis_[static_cast<std::size_t>(leave_row)];
                    else
                        take = std::abs(alpha) > std::abs(leave_alpha);
                }
                if (take)
                {
                    theta = t;
                    leave_row = i;
                    leave_to_upper = to_upper;
                    leave_alpha = alpha;
                }
            }
            if (!std::isfinite(theta))
                return Outcome::Unbounded;

            ++pivots_;
            if (theta <= 1e-12)
            {
                if (++degenerate_run_ >= opts_.degenerate_before_bland)
                    bland_ = true;
            }
            else
            {
                degenerate_run_ = 0;
            }

            // Move along the edge.
            x_(enter) += enter_dir * theta;
            for (Eigen::Index i = 0; i < m_; ++i)
                x_(basis_[static_cast<std::size_t>(i)]) -= theta * enter_dir * w(i);

            if (leave_row < 0)
            {
                // Bound flip, basis unchanged.
                auto& st = state_[static_cast<std::size_t>(enter)];
                if (enter_dir > 0.0)
                {
                    x_(enter) = hi_(enter);
                    st = NonbasicState::AtUpper;
                }
                else
                {
                    x_(enter) = lo_(enter);
                    st = NonbasicState::AtLower;
                }
                continue;
            }

            const auto leaving = basis_[static_cast<std::size_t>(leave_row)];
            x_(leaving) = leave_to_upper ? hi_(leaving) : lo_(leaving);
            state_[static_cast<std::size_t>(leaving)] =
                leave_to_upper ? NonbasicState::AtUpper : NonbasicState::AtLower;
            pos_[static_cast<std::size_t>(leaving)] = -1;
            basis_[static_cast<std::size_t>(leave_row)] = enter;
            pos_[static_cast<std::size_t>(enter)] = static_cast<int>(leave_row);
            state_[static_cast<std::size_t>(enter)] = NonbasicState::Basic;

            const Eigen::RowVectorXd pivot_row = Binv_.row(leave_row) / w(leave_row);
            y += d(enter) * pivot_row.transpose();
            Binv_.noalias() -= w * pivot_row;
            Binv_.row(leave_row) = pivot_row;
            ++since_refactor_;
        }
    }

    const MilpOptions& opts_;
    Eigen::Index m_;
    Eigen::Index n_;
    Eigen::SparseMatrix<double> A_;
    Vector rhs_;
    Vector lo_;
    Vector hi_;
    Vector cost_;
    Vector cost_real_;
    Vector x_;
    std::vector<NonbasicState> state_;
    std::vector<int> pos_;
    std::vector<double> sign_;
    std::vector<Eigen::Index> basis_;
    Matrix Binv_;
    int since_refactor_ = 0;
    std::int64_t pivots_ = 0;
    std::int64_t degenerate_run_ = 0;
    bool bland_ = false;
};

} // namespace

MilpSolution solve_lp_with_bounds(const MilpProblem& p, const Vector& lower, const Vector& upper,
                                  const MilpOptions& opts, const LpBasis* start, LpBasis* final_basis)
{
    BoundedSimplex lp(p, lower, upper, opts);
    auto sol = lp.run(start);
    if (final_basis != nullptr && sol.status == SolveStatus::Optimal)
        *final_basis = lp.basis();
    if (sol.status == SolveStatus::Optimal)
    {
        sol.value += p.objective_offset;
        sol.bound = sol.value;
        sol.dual_value += p.objective_offset;
    }
    return sol;
}

MilpSolution solve_lp(const MilpProblem& p, const MilpOptions& opts)
{
    p.validate();
    return solve_lp_with_bounds(p, p.lower, p.upper, opts);
}

} // namespace hzreach
