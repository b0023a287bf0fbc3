#include "ringld/simplex.hpp"

#include <cmath>
#include <limits>

#include "ringld/errors.hpp"

namespace ringld {

namespace {

constexpr double kEps = 1e-9;

/// Standard-form tableau: rows 0..m-1 are constraints, row m is the objective
/// (reduced costs, negated objective value in the last column).
struct Tableau {
    int m, n;  // constraints, columns excluding rhs
    std::vector<std::vector<double>> a;
    std::vector<int> basis;

    double& at(int r, int c) { return a[r][c]; }
    double rhs(int r) const { return a[r][n]; }

    void pivot(int pr, int pc) {
        const double p = a[pr][pc];
        for (int c = 0; c <= n; ++c) a[pr][c] /= p;
        for (int r = 0; r <= m; ++r) {
            if (r == pr) continue;
            const double f = a[r][pc];
            if (f == 0.0) continue;
            for (int c = 0; c <= n; ++c) a[r][c] -= f * a[pr][c];
        }
        basis[pr] = pc;
    }

    /// Bland's rule: entering = lowest-index column with negative reduced cost,
    /// leaving = min-ratio row with lowest-index basic variable on ties.
    LpStatus iterate(int allowed_cols) {
        for (;;) {
            int pc = -1;
            for (int c = 0; c < allowed_cols; ++c) {
                if (a[m][c] < -kEps) {
                    pc = c;
                    break;
                }
            }
            if (pc < 0) return LpStatus::Optimal;
            int pr = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int r = 0; r < m; ++r) {
                if (a[r][pc] > kEps) {
                    const double ratio = rhs(r) / a[r][pc];
                    if (ratio < best - kEps || (ratio < best + kEps && (pr < 0 || basis[r] < basis[pr]))) {
                        best = ratio;
                        pr = r;
                    }
                }
            }
            if (pr < 0) return LpStatus::Unbounded;
            pivot(pr, pc);
        }
    }
};

}  // namespace

LpResult simplex_solve(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                       const std::vector<double>& c) {
    const int m = static_cast<int>(A.size());
    const int n = static_cast<int>(c.size());
    if (static_cast<int>(b.size()) != m) throw DimensionError("simplex: |b| != rows of A");
    for (const auto& row : A)
        if (static_cast<int>(row.size()) != n) throw DimensionError("simplex: ragged constraint matrix");

    // Columns: n structural | m slacks | up to m artificials | rhs.
    int n_art = 0;
    for (double bi : b)
        if (bi < 0.0) ++n_art;
    const int cols = n + m + n_art;

    Tableau t;
    t.m = m;
    t.n = cols;
    t.a.assign(m + 1, std::vector<double>(cols + 1, 0.0));
    t.basis.assign(m, -1);

    int art = n + m;
    for (int r = 0; r < m; ++r) {
        const double sign = b[r] < 0.0 ? -1.0 : 1.0;
        for (int cidx = 0; cidx < n; ++cidx) t.a[r][cidx] = sign * A[r][cidx];
        t.a[r][n + r] = sign;  // slack
        t.a[r][cols] = sign * b[r];
        if (b[r] < 0.0) {
            t.a[r][art] = 1.0;
            t.basis[r] = art++;
        } else {
            t.basis[r] = n + r;
        }
    }

    if (n_art > 0) {
        // Phase 1: minimize the sum of artificials.
        for (int cidx = n + m; cidx < cols; ++cidx) t.a[m][cidx] = 1.0;
        for (int r = 0; r < m; ++r) {
            if (t.basis[r] >= n + m) {
                for (int cidx = 0; cidx <= cols; ++cidx) t.a[m][cidx] -= t.a[r][cidx];
            }
        }
        if (t.iterate(cols) != LpStatus::Optimal || -t.a[m][cols] > 1e-7)
            return {LpStatus::Infeasible, 0.0, {}};
        // Drive any residual artificial out of the basis (degenerate rows).
        for (int r = 0; r < m; ++r) {
            if (t.basis[r] >= n + m) {
                int pc = -1;
                for (int cidx = 0; cidx < n + m; ++cidx) {
                    if (std::abs(t.a[r][cidx]) > kEps) {
                        pc = cidx;
                        break;
                    }
                }
                if (pc >= 0) t.pivot(r, pc);
            }
        }
    }

    // Phase 2 objective.
    for (int cidx = 0; cidx <= cols; ++cidx) t.a[m][cidx] = 0.0;
    for (int cidx = 0; cidx < n; ++cidx) t.a[m][cidx] = c[cidx];
    for (int r = 0; r < m; ++r) {
        const int bv = t.basis[r];
        if (bv < n && c[bv] != 0.0) {
            for (int cidx = 0; cidx <= cols; ++cidx) t.a[m][cidx] -= c[bv] * t.a[r][cidx];
        }
    }
    const LpStatus status = t.iterate(n + m);  // artificials stay out
    if (status != LpStatus::Optimal) return {status, 0.0, {}};

    LpResult result{LpStatus::Optimal, -t.a[m][cols], std::vector<double>(n, 0.0)};
    for (int r = 0; r < m; ++r)
        if (t.basis[r] < n) result.x[t.basis[r]] = t.rhs(r);
    return result;
}

}  // namespace ringld
