#include "beliefstock/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace beliefstock {

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kPhase1Tol = 1e-7;
constexpr int kMaxPivots = 10000;
constexpr int kMaxVars = 1024;

// Full-tableau primal simplex, maximization, Bland's rule.
class Tableau {
  public:
    Tableau(int rows, int cols) : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0),
                                  basis_(rows, -1) {}

    double& at(int r, int c) { return t_[static_cast<size_t>(r) * (cols_ + 1) + c]; }
    double at(int r, int c) const { return t_[static_cast<size_t>(r) * (cols_ + 1) + c]; }
    double& rhs(int r) { return at(r, cols_); }
    double& cost(int c) { return at(rows_, c); }
    int basis(int r) const { return basis_[r]; }
    void set_basis(int r, int c) { basis_[r] = c; }

    void price_out(const std::vector<double>& objective) {
        for (int c = 0; c <= cols_; ++c) cost(c) = c < cols_ ? (c < (int)objective.size() ? objective[c] : 0.0) : 0.0;
        for (int r = 0; r < rows_; ++r) {
            const int b = basis_[r];
            const double cb = b < (int)objective.size() ? objective[b] : 0.0;
            if (cb == 0.0) continue;
            for (int c = 0; c <= cols_; ++c) cost(c) -= cb * at(r, c);
        }
    }

    void pivot(int r, int c) {
        const double inv = 1.0 / at(r, c);
        for (int j = 0; j <= cols_; ++j) at(r, j) *= inv;
        at(r, c) = 1.0;
        for (int i = 0; i <= rows_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (int j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        basis_[r] = c;
    }

    // Runs to optimality; columns with allowed[c] == false never enter.
    void run(const std::vector<char>& allowed, int& pivot_budget) {
        while (true) {
            int enter = -1;
            for (int c = 0; c < cols_; ++c) {
                if (!allowed[c]) continue;
                if (cost(c) > kCostTol) { enter = c; break; } // Bland: lowest index
            }
            if (enter < 0) return;
            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int r = 0; r < rows_; ++r) {
                const double a = at(r, enter);
                if (a <= kPivotTol) continue;
                const double ratio = rhs(r) / a;
                if (leave < 0 || ratio < best_ratio - kPivotTol) {
                    best_ratio = ratio;
                    leave = r;
                } else if (ratio <= best_ratio + kPivotTol && basis_[r] < basis_[leave]) {
                    best_ratio = std::min(best_ratio, ratio); // Bland tie: lowest basis index
                    leave = r;
                }
            }
            if (leave < 0) throw LpError("LP is unbounded");
            if (--pivot_budget <= 0) throw LpError("simplex cycling guard exceeded (10000 pivots)");
            pivot(leave, enter);
        }
    }

    double objective_value() const { return -t_[static_cast<size_t>(rows_) * (cols_ + 1) + cols_]; }

    int rows_, cols_;
    std::vector<double> t_;
    std::vector<int> basis_;
};

} // namespace

LpResult solve_general(const GeneralLp& lp) {
    const int n = lp.nvars;
    if (n <= 0) throw LpError("LP has no variables");
    const int n_eq = static_cast<int>(lp.eq_a.size());
    const int n_le = static_cast<int>(lp.le_a.size());
    const int rows = n_eq + n_le;
    const int n_slack = n_le;
    if (n + n_slack + rows > kMaxVars) throw LpError("LP exceeds the dense-kernel size guard");

    // columns: [structural | slacks | artificials]
    const int cols = n + n_slack + rows;
    Tableau t(rows, cols);

    std::vector<char> has_artificial(rows, 1);
    for (int r = 0; r < n_eq; ++r) {
        for (int c = 0; c < n && c < (int)lp.eq_a[r].size(); ++c) t.at(r, c) = lp.eq_a[r][c];
        t.rhs(r) = lp.eq_b[r];
    }
    for (int r = 0; r < n_le; ++r) {
        const int row = n_eq + r;
        for (int c = 0; c < n && c < (int)lp.le_a[r].size(); ++c) t.at(row, c) = lp.le_a[r][c];
        t.at(row, n + r) = 1.0; // slack
        t.rhs(row) = lp.le_b[r];
    }
    for (int r = 0; r < rows; ++r) {
        if (t.rhs(r) < 0.0)
            for (int c = 0; c <= cols; ++c) t.at(r, c) = -t.at(r, c);
        // slack usable as initial basis only with +1 coefficient
        if (r >= n_eq && t.at(r, n + (r - n_eq)) > 0.5) {
            t.set_basis(r, n + (r - n_eq));
            has_artificial[r] = 0;
        }
    }
    for (int r = 0; r < rows; ++r)
        if (has_artificial[r]) {
            t.at(r, n + n_slack + r) = 1.0;
            t.set_basis(r, n + n_slack + r);
        }

    int pivot_budget = kMaxPivots;

    // phase 1: maximize -(sum of artificials)
    std::vector<double> phase1(cols, 0.0);
    for (int r = 0; r < rows; ++r)
        if (has_artificial[r]) phase1[n + n_slack + r] = -1.0;
    std::vector<char> allowed(cols, 1);
    t.price_out(phase1);
    t.run(allowed, pivot_budget);
    if (t.objective_value() < -kPhase1Tol) return LpResult{LpStatus::infeasible, 0.0, {}};

    // drive basic artificials out (or accept degenerate zero rows)
    for (int r = 0; r < rows; ++r) {
        if (t.basis(r) < n + n_slack) continue;
        int c_pivot = -1;
        for (int c = 0; c < n + n_slack; ++c)
            if (std::abs(t.at(r, c)) > kPivotTol) { c_pivot = c; break; }
        if (c_pivot >= 0) {
            if (--pivot_budget <= 0) throw LpError("simplex cycling guard exceeded (10000 pivots)");
            t.pivot(r, c_pivot);
        }
    }
    for (int c = n + n_slack; c < cols; ++c) allowed[c] = 0;

    // phase 2
    std::vector<double> objective(cols, 0.0);
    for (int c = 0; c < n && c < (int)lp.objective.size(); ++c) objective[c] = lp.objective[c];
    t.price_out(objective);
    t.run(allowed, pivot_budget);

    LpResult out;
    out.status = LpStatus::optimal;
    out.point.assign(n, 0.0);
    for (int r = 0; r < rows; ++r)
        if (t.basis(r) >= 0 && t.basis(r) < n) out.point[t.basis(r)] = t.rhs(r);
    out.value = t.objective_value();
    return out;
}

LpResult maximize_over_simplex(const std::vector<double>& objective,
                               const std::vector<HalfSpace>& constraints) {
    GeneralLp lp;
    lp.nvars = static_cast<int>(objective.size());
    lp.objective = objective;
    lp.eq_a.push_back(std::vector<double>(lp.nvars, 1.0));
    lp.eq_b.push_back(1.0);
    for (const auto& hs : constraints) {
        lp.le_a.push_back(hs.a);
        lp.le_b.push_back(hs.b);
    }
    return solve_general(lp);
}

InteriorResult find_interior(int dim, const std::vector<HalfSpace>& constraints) {
    bool any_strict = false;
    for (const auto& hs : constraints) any_strict |= hs.strict;

    GeneralLp lp;
    lp.nvars = dim + (any_strict ? 1 : 0);
    lp.objective.assign(lp.nvars, 0.0);
    if (any_strict) lp.objective[dim] = 1.0; // maximize the common strict slack
    std::vector<double> simplex_row(lp.nvars, 0.0);
    for (int i = 0; i < dim; ++i) simplex_row[i] = 1.0;
    lp.eq_a.push_back(std::move(simplex_row));
    lp.eq_b.push_back(1.0);
    for (const auto& hs : constraints) {
        std::vector<double> row(lp.nvars, 0.0);
        for (int i = 0; i < dim && i < (int)hs.a.size(); ++i) row[i] = hs.a[i];
        if (hs.strict && any_strict) row[dim] = 1.0;
        lp.le_a.push_back(std::move(row));
        lp.le_b.push_back(hs.b);
    }

    InteriorResult out;
    const LpResult res = solve_general(lp);
    if (res.status != LpStatus::optimal) return out;
    out.weak_feasible = true;
    out.max_slack = any_strict ? res.value : std::numeric_limits<double>::infinity();
    out.point.assign(res.point.begin(), res.point.begin() + dim);
    return out;
}

} // namespace beliefstock
