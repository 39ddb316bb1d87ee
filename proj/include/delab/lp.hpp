#pragma once

// Dense two-phase simplex for the small linear programs of the edge
// certifier (a handful of variables, a few dozen constraints). Bland's rule
// throughout, so it terminates on degenerate vertices.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "delab/errors.hpp"

namespace delab {

/// maximize objective . x  subject to  le_rows x <= le_rhs,
/// eq_rows x == eq_rhs,  lower <= x <= upper  (lower finite, upper may be inf).
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<std::vector<double>> le_rows;
    std::vector<double> le_rhs;
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    std::vector<double> lower;
    std::vector<double> upper;

    explicit LinearProgram(std::size_t n = 0)
        : num_vars(n), objective(n, 0.0), lower(n, 0.0), upper(n, std::numeric_limits<double>::infinity()) {}

    void add_le(std::vector<double> row, double rhs) {
        le_rows.push_back(std::move(row));
        le_rhs.push_back(rhs);
    }
    void add_eq(std::vector<double> row, double rhs) {
        eq_rows.push_back(std::move(row));
        eq_rhs.push_back(rhs);
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double value = 0.0;
};

namespace detail {

class Tableau {
  public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

    double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    [[nodiscard]] double rhs(std::size_t r) const { return at(r, cols_); }
    std::size_t& basis(std::size_t r) { return basis_[r]; }
    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
        }
        basis_[pr] = pc;
    }

    void drop_row(std::size_t r) {
        a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)),
                 a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols_ + 1)));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        --rows_;
    }

    // Maximizes cost . z over columns flagged in `allowed`. Returns false when
    // the problem is unbounded. Pivots smaller than pivot_tol are skipped; they
    // amplify rounding enough to break the equality rows.
    bool maximize(const std::vector<double>& cost, const std::vector<char>& allowed, double eps,
                  double pivot_tol = 1e-9) {
        for (std::size_t iter = 0; iter < 100000; ++iter) {
            std::size_t enter = cols_;
            for (std::size_t c = 0; c < cols_ && enter == cols_; ++c) {
                if (!allowed[c]) continue;
                double reduced = cost[c];
                for (std::size_t r = 0; r < rows_; ++r) reduced -= cost[basis_[r]] * at(r, c);
                if (reduced > eps) enter = c;
            }
            if (enter == cols_) return true;
            std::size_t leave = rows_;
            double best = 0.0;
            for (std::size_t r = 0; r < rows_; ++r) {
                const double a = at(r, enter);
                if (a <= pivot_tol) continue;
                const double ratio = rhs(r) / a;
                if (leave == rows_ || ratio < best - eps || (ratio <= best + eps && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == rows_) return false;
            pivot(leave, enter);
        }
        throw DegeneracyError("simplex: iteration limit reached");
    }

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> a_;
    std::vector<std::size_t> basis_;
};

} // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp, double eps = 1e-12) {
    const std::size_t n = lp.num_vars;
    // Shift to y = x - lower >= 0; finite upper bounds become extra <= rows.
    std::vector<std::vector<double>> le = lp.le_rows;
    std::vector<double> le_b;
    for (std::size_t r = 0; r < le.size(); ++r) {
        double b = lp.le_rhs[r];
        for (std::size_t k = 0; k < n; ++k) b -= le[r][k] * lp.lower[k];
        le_b.push_back(b);
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(lp.upper[k])) continue;
        std::vector<double> row(n, 0.0);
        row[k] = 1.0;
        le.push_back(std::move(row));
        le_b.push_back(lp.upper[k] - lp.lower[k]);
    }
    std::vector<double> eq_b;
    for (std::size_t r = 0; r < lp.eq_rows.size(); ++r) {
        double b = lp.eq_rhs[r];
        for (std::size_t k = 0; k < n; ++k) b -= lp.eq_rows[r][k] * lp.lower[k];
        eq_b.push_back(b);
    }

    const std::size_t n_le = le.size();
    const std::size_t n_eq = lp.eq_rows.size();
    std::size_t n_art = n_eq;
    for (double b : le_b)
        if (b < 0.0) ++n_art;
    const std::size_t slack0 = n;
    const std::size_t art0 = n + n_le;
    const std::size_t cols = n + n_le + n_art;
    detail::Tableau t(n_le + n_eq, cols);

    std::size_t art = art0;
    for (std::size_t r = 0; r < n_le; ++r) {
        const double sign = le_b[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < n; ++k) t.at(r, k) = sign * le[r][k];
        t.at(r, slack0 + r) = sign;
        t.rhs(r) = sign * le_b[r];
        if (sign < 0.0) {
            t.at(r, art) = 1.0;
            t.basis(r) = art++;
        } else {
            t.basis(r) = slack0 + r;
        }
    }
    for (std::size_t e = 0; e < n_eq; ++e) {
        const std::size_t r = n_le + e;
        const double sign = eq_b[e] < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < n; ++k) t.at(r, k) = sign * lp.eq_rows[e][k];
        t.rhs(r) = sign * eq_b[e];
        t.at(r, art) = 1.0;
        t.basis(r) = art++;
    }

    LpSolution sol;
    std::vector<char> allowed(cols, 1);
    if (n_art > 0) {
        std::vector<double> phase1(cols, 0.0);
        for (std::size_t c = art0; c < cols; ++c) phase1[c] = -1.0;
        t.maximize(phase1, allowed, eps);
        double infeas = 0.0;
        for (std::size_t r = 0; r < t.rows(); ++r)
            if (t.basis(r) >= art0) infeas += t.rhs(r);
        if (infeas > 1e-9) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        for (std::size_t r = 0; r < t.rows();) {
            if (t.basis(r) < art0) {
                ++r;
                continue;
            }
            std::size_t pc = art0;
            double best = 1e-9;
            for (std::size_t c = 0; c < art0; ++c)
                if (std::fabs(t.at(r, c)) > best) {
                    pc = c;
                    best = std::fabs(t.at(r, c));
                }
            if (pc == art0) {
                t.drop_row(r);
            } else {
                t.pivot(r, pc);
                ++r;
            }
        }
        for (std::size_t c = art0; c < cols; ++c) allowed[c] = 0;
    }

    std::vector<double> cost(cols, 0.0);
    for (std::size_t k = 0; k < n; ++k) cost[k] = lp.objective[k];
    if (!t.maximize(cost, allowed, eps)) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.x = lp.lower;
    for (std::size_t r = 0; r < t.rows(); ++r)
        if (t.basis(r) < n) sol.x[t.basis(r)] += t.rhs(r);
    sol.value = 0.0;
    for (std::size_t k = 0; k < n; ++k) sol.value += lp.objective[k] * sol.x[k];
    return sol;
}

} // namespace delab
