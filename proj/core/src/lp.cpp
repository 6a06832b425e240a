#include "scalekit/lp.hpp"

#include <algorithm>

#include "scalekit/errors.hpp"

namespace scalekit {

namespace {

// Full-tableau simplex state. rows_ holds B^{-1}[A | b]; cost_ holds the
// reduced costs and (negated) objective in the last slot.
class Tableau {
public:
    Tableau(std::vector<std::vector<Rational>> rows, std::vector<int> basis, int num_cols)
        : rows_(std::move(rows)), basis_(std::move(basis)), num_cols_(num_cols) {}

    int num_rows() const { return static_cast<int>(rows_.size()); }
    int num_cols() const { return num_cols_; }
    const std::vector<int>& basis() const { return basis_; }
    Rational rhs(int i) const { return rows_[i][num_cols_]; }
    const Rational& at(int i, int j) const { return rows_[i][j]; }

    void set_costs(const std::vector<Rational>& c) {
        cost_.assign(num_cols_ + 1, Rational(0));
        for (int j = 0; j < num_cols_; ++j) cost_[j] = j < static_cast<int>(c.size()) ? c[j] : Rational(0);
        for (int i = 0; i < num_rows(); ++i) {
            const Rational cb = basis_[i] < static_cast<int>(c.size()) ? c[basis_[i]] : Rational(0);
            if (cb == 0) continue;
            for (int j = 0; j <= num_cols_; ++j) cost_[j] -= cb * rows_[i][j];
        }
    }

    Rational objective() const { return cost_[num_cols_] * -1; }

    // Bland's rule; returns Optimal or Unbounded. allowed(j) gates columns.
    template <typename Allowed>
    SimplexStatus run(const Allowed& allowed) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < num_cols_; ++j)
                if (allowed(j) && cost_[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return SimplexStatus::Optimal;

            int leave = -1;
            Rational best_ratio;
            for (int i = 0; i < num_rows(); ++i) {
                if (rows_[i][enter] <= 0) continue;
                Rational ratio = rows_[i][num_cols_] / rows_[i][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return SimplexStatus::Unbounded;
            pivot(leave, enter);
        }
    }

    void pivot(int row, int col) {
        const Rational p = rows_[row][col];
        for (int j = 0; j <= num_cols_; ++j) rows_[row][j] /= p;
        for (int i = 0; i < num_rows(); ++i) {
            if (i == row || rows_[i][col] == 0) continue;
            const Rational f = rows_[i][col];
            for (int j = 0; j <= num_cols_; ++j) rows_[i][j] -= f * rows_[row][j];
        }
        if (!cost_.empty() && cost_[col] != 0) {
            const Rational f = cost_[col];
            for (int j = 0; j <= num_cols_; ++j) cost_[j] -= f * rows_[row][j];
        }
        basis_[row] = col;
    }

    void drop_row(int row) {
        rows_.erase(rows_.begin() + row);
        basis_.erase(basis_.begin() + row);
    }

    std::vector<Rational> solution(int n) const {
        std::vector<Rational> x(n, Rational(0));
        for (int i = 0; i < num_rows(); ++i)
            if (basis_[i] < n) x[basis_[i]] = rows_[i][num_cols_];
        return x;
    }

private:
    std::vector<std::vector<Rational>> rows_;
    std::vector<int> basis_;
    int num_cols_;
    std::vector<Rational> cost_;
};

}  // namespace

SimplexResult simplex_solve(const std::vector<std::vector<Rational>>& a,
                            const std::vector<Rational>& b,
                            const std::vector<Rational>& c) {
    const int m = static_cast<int>(a.size());
    const int n = m == 0 ? static_cast<int>(c.size()) : static_cast<int>(a[0].size());

    // phase 1 layout: original columns, then one artificial per row
    std::vector<std::vector<Rational>> rows(m);
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) {
        rows[i].assign(n + m + 1, Rational(0));
        const bool flip = b[i] < 0;
        for (int j = 0; j < n; ++j) rows[i][j] = flip ? -a[i][j] : a[i][j];
        rows[i][n + i] = 1;
        rows[i][n + m] = flip ? -b[i] : b[i];
        basis[i] = n + i;
    }

    Tableau t(std::move(rows), std::move(basis), n + m);
    std::vector<Rational> phase1_cost(n + m, Rational(0));
    for (int i = 0; i < m; ++i) phase1_cost[n + i] = 1;
    t.set_costs(phase1_cost);
    if (t.run([](int) { return true; }) != SimplexStatus::Optimal)
        throw Error("phase-1 simplex cannot be unbounded");

    SimplexResult res;
    if (t.objective() != 0) {
        res.status = SimplexStatus::Infeasible;
        return res;
    }

    // drive surviving artificials out of the basis
    for (int i = t.num_rows() - 1; i >= 0; --i) {
        if (t.basis()[i] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (t.at(i, j) != 0) {
                col = j;
                break;
            }
        if (col >= 0)
            t.pivot(i, col);
        else
            t.drop_row(i);  // redundant constraint
    }

    std::vector<Rational> full_cost(n + m, Rational(0));
    for (int j = 0; j < n; ++j) full_cost[j] = c[j];
    t.set_costs(full_cost);
    const SimplexStatus status = t.run([n](int j) { return j < n; });
    res.status = status;
    if (status == SimplexStatus::Optimal) {
        res.x = t.solution(n);
        res.objective = t.objective();
    }
    return res;
}

StrictFeasibility lp_strict_feasible(const StrictSystem& sys) {
    const int n = sys.num_vars;
    const int ms = static_cast<int>(sys.strict.size());
    const int me = static_cast<int>(sys.equalities.size());
    if (n > 64) throw DimensionTooLarge("lp_strict_feasible: more than 64 variables");
    if (ms + me > 4096) throw DimensionTooLarge("lp_strict_feasible: more than 4096 constraints");
    for (const auto& row : sys.strict)
        if (static_cast<int>(row.size()) != n) throw Error("strict row length mismatch");
    for (const auto& row : sys.equalities)
        if (static_cast<int>(row.size()) != n) throw Error("equality row length mismatch");

    StrictFeasibility out;

    if (ms == 0) {
        out.feasible = true;
        out.certificate.variables.assign(n, Rational(0));
        out.certificate.margin = 1;  // vacuous strict part
        return out;
    }

    // columns: u_0..u_{n-1}, w_0..w_{n-1}, t+, t-, s_0..s_{ms-1}
    const int col_u = 0, col_w = n, col_tp = 2 * n, col_tm = 2 * n + 1, col_s = 2 * n + 2;
    const int ncols = 2 * n + 2 + ms;
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;

    for (int j = 0; j < ms; ++j) {
        std::vector<Rational> row(ncols, Rational(0));
        Rational rhs(0);
        for (int i = 0; i < n; ++i) {
            row[col_u + i] = sys.strict[j][i];
            rhs += sys.strict[j][i];
        }
        row[col_tp] = -1;
        row[col_tm] = 1;
        row[col_s + j] = -1;
        a.push_back(std::move(row));
        b.push_back(rhs);
    }
    for (int k = 0; k < me; ++k) {
        std::vector<Rational> row(ncols, Rational(0));
        Rational rhs(0);
        for (int i = 0; i < n; ++i) {
            row[col_u + i] = sys.equalities[k][i];
            rhs += sys.equalities[k][i];
        }
        a.push_back(std::move(row));
        b.push_back(rhs);
    }
    for (int i = 0; i < n; ++i) {
        std::vector<Rational> row(ncols, Rational(0));
        row[col_u + i] = 1;
        row[col_w + i] = 1;
        a.push_back(std::move(row));
        b.push_back(Rational(2));
    }

    std::vector<Rational> c(ncols, Rational(0));
    c[col_tp] = -1;  // min -t
    c[col_tm] = 1;

    const SimplexResult lp = simplex_solve(a, b, c);
    if (lp.status != SimplexStatus::Optimal)
        throw Error("strict-feasibility LP must have an optimum");

    const Rational t_star = lp.x[col_tp] - lp.x[col_tm];
    if (t_star > 0) {
        out.feasible = true;
        out.certificate.variables.resize(n);
        for (int i = 0; i < n; ++i) out.certificate.variables[i] = lp.x[col_u + i] - 1;
        Rational margin;
        bool first = true;
        for (int j = 0; j < ms; ++j) {
            Rational v(0);
            for (int i = 0; i < n; ++i) v += sys.strict[j][i] * out.certificate.variables[i];
            if (first || v < margin) margin = v;
            first = false;
        }
        out.certificate.margin = margin;
        if (margin <= 0) throw Error("strict certificate failed exact verification");
        for (int k = 0; k < me; ++k) {
            Rational v(0);
            for (int i = 0; i < n; ++i) v += sys.equalities[k][i] * out.certificate.variables[i];
            if (v != 0) throw Error("strict certificate violates an equality");
        }
        return out;
    }

    // infeasible: find lambda >= 0, sum lambda = 1 with L^T lambda + E^T mu = 0
    const int wcols = ms + 2 * me;
    std::vector<std::vector<Rational>> wa;
    std::vector<Rational> wb;
    for (int i = 0; i < n; ++i) {
        std::vector<Rational> row(wcols, Rational(0));
        for (int j = 0; j < ms; ++j) row[j] = sys.strict[j][i];
        for (int k = 0; k < me; ++k) {
            row[ms + 2 * k] = sys.equalities[k][i];
            row[ms + 2 * k + 1] = -sys.equalities[k][i];
        }
        wa.push_back(std::move(row));
        wb.push_back(Rational(0));
    }
    {
        std::vector<Rational> row(wcols, Rational(0));
        for (int j = 0; j < ms; ++j) row[j] = 1;
        wa.push_back(std::move(row));
        wb.push_back(Rational(1));
    }
    const SimplexResult dual = simplex_solve(wa, wb, std::vector<Rational>(wcols, Rational(0)));
    if (dual.status != SimplexStatus::Optimal)
        throw Error("transposition witness LP unexpectedly infeasible");

    out.feasible = false;
    out.witness.lambda.assign(dual.x.begin(), dual.x.begin() + ms);
    out.witness.mu.resize(me);
    for (int k = 0; k < me; ++k) out.witness.mu[k] = dual.x[ms + 2 * k] - dual.x[ms + 2 * k + 1];

    Rational lambda_sum(0);
    for (const Rational& l : out.witness.lambda) {
        if (l < 0) throw Error("witness lambda must be non-negative");
        lambda_sum += l;
    }
    if (lambda_sum != 1) throw Error("witness lambda must sum to one");
    for (int i = 0; i < n; ++i) {
        Rational v(0);
        for (int j = 0; j < ms; ++j) v += sys.strict[j][i] * out.witness.lambda[j];
        for (int k = 0; k < me; ++k) v += sys.equalities[k][i] * out.witness.mu[k];
        if (v != 0) throw Error("witness combination must vanish");
    }
    return out;
}

}  // namespace scalekit
