#include "ringld/routing.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "ringld/errors.hpp"
#include "ringld/simplex.hpp"

namespace ringld {

namespace {

void require_slopes(std::span<const double> slopes, std::size_t min_count, const char* what) {
    if (slopes.size() < min_count)
        throw DimensionError(std::string(what) + " requires at least " + std::to_string(min_count) +
                             " flows (got " + std::to_string(slopes.size()) + ")");
    for (double a : slopes)
        if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("flow slopes must be finite and >= 0");
}

/// Server loads induced by a split on the ring.
std::vector<double> ring_loads(std::span<const double> a, const std::vector<double>& alpha) {
    const int k = static_cast<int>(a.size());
    std::vector<double> b(k);
    for (int i = 0; i < k; ++i) {
        const int next = (i + 1) % k;
        b[i] = alpha[i] * a[i] + (1.0 - alpha[next]) * a[next];
    }
    return b;
}

/// Server loads induced by a split on an arc (l flows, l+1 servers).
std::vector<double> arc_loads(std::span<const double> a, const std::vector<double>& alpha) {
    const int l = static_cast<int>(a.size());
    std::vector<double> b(l + 1, 0.0);
    b[0] = (1.0 - alpha[0]) * a[0];
    for (int i = 1; i < l; ++i) b[i] = alpha[i - 1] * a[i - 1] + (1.0 - alpha[i]) * a[i];
    b[l] = alpha[l - 1] * a[l - 1];
    return b;
}

double cyclic_imbalance(const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) d += std::abs(b[i] - b[(i + 1) % b.size()]);
    return d;
}

double chain_imbalance(const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 1; i < b.size(); ++i) d += std::abs(b[i - 1] - b[i]);
    return d;
}

/// Shared LP assembly. Each |difference| row pair reads
///   +(linear expr in alpha) - t_j <= -const_j
///   -(linear expr in alpha) - t_j <= +const_j
/// plus alpha_i <= 1 box rows; the objective is sum t_j.
RoutingSolution solve_lp(std::span<const double> a, bool cyclic) {
    const int nf = static_cast<int>(a.size());
    const int nd = nf;  // adjacent differences: k around the circle, l along an arc
    const int nvar = nf + nd;

    std::vector<std::vector<double>> A;
    std::vector<double> rhs;
    // Coefficients of b_i - b_next as a function of alpha, plus a constant.
    auto add_diff_rows = [&](const std::vector<double>& coeff, double cst, int t_index) {
        std::vector<double> row(nvar, 0.0);
        for (int j = 0; j < nf; ++j) row[j] = coeff[j];
        row[nf + t_index] = -1.0;
        A.push_back(row);
        rhs.push_back(-cst);
        for (int j = 0; j < nf; ++j) row[j] = -coeff[j];
        A.push_back(row);
        rhs.push_back(cst);
    };

    if (cyclic) {
        for (int i = 0; i < nf; ++i) {
            const int i1 = (i + 1) % nf, i2 = (i + 2) % nf;
            std::vector<double> coeff(nf, 0.0);
            coeff[i] += a[i];
            coeff[i1] -= 2.0 * a[i1];
            coeff[i2] += a[i2];
            add_diff_rows(coeff, a[i1] - a[i2], i);
        }
    } else {
        // b_0..b_l over the arc; differences b_{i-1} - b_i for i = 1..l.
        for (int i = 1; i <= nf; ++i) {
            std::vector<double> coeff(nf, 0.0);
            double cst = 0.0;
            // b_{i-1}
            if (i - 1 == 0) {
                coeff[0] -= a[0];
                cst += a[0];
            } else {
                coeff[i - 2] += a[i - 2];
                coeff[i - 1] -= a[i - 1];
                cst += a[i - 1];
            }
            // minus b_i
            if (i == nf) {
                coeff[nf - 1] -= a[nf - 1];
            } else {
                coeff[i - 1] -= a[i - 1];
                coeff[i] += a[i];
                cst -= a[i];
            }
            add_diff_rows(coeff, cst, i - 1);
        }
    }
    for (int j = 0; j < nf; ++j) {
        std::vector<double> row(nvar, 0.0);
        row[j] = 1.0;
        A.push_back(row);
        rhs.push_back(1.0);
    }
    std::vector<double> cost(nvar, 0.0);
    for (int j = 0; j < nd; ++j) cost[nf + j] = 1.0;

    const LpResult lp = simplex_solve(A, rhs, cost);
    if (lp.status != LpStatus::Optimal)
        throw DomainError("routing LP did not solve to optimality");  // cannot happen: box is compact

    std::vector<double> alpha(lp.x.begin(), lp.x.begin() + nf);
    for (double& v : alpha) v = std::min(1.0, std::max(0.0, v));
    RoutingSolution sol;
    sol.splits = alpha;
    sol.server_loads = cyclic ? ring_loads(a, alpha) : arc_loads(a, alpha);
    sol.imbalance = cyclic ? cyclic_imbalance(sol.server_loads) : chain_imbalance(sol.server_loads);
    return sol;
}

double arc_sum(std::span<const double> slopes) {
    double s = 0.0;
    for (double v : slopes) s += v;
    return s;
}

}  // namespace

RoutingSolution solve_ring(std::span<const double> slopes) {
    require_slopes(slopes, 3, "solve_ring");
    return solve_lp(slopes, true);
}

RoutingSolution solve_arc(std::span<const double> slopes) {
    require_slopes(slopes, 1, "solve_arc");
    return solve_lp(slopes, false);
}

bool is_balanced(std::span<const double> slopes, double tol) {
    return solve_arc(slopes).imbalance <= tol * std::max(1.0, arc_sum(slopes));
}

bool is_balanced_ring(std::span<const double> slopes, double tol) {
    return solve_ring(slopes).imbalance <= tol * std::max(1.0, arc_sum(slopes));
}

std::vector<FlowArc> maximal_balanced_sets(const Configuration& config, double tol) {
    const int k = static_cast<int>(config.slopes.size());
    if (k < 3) throw DimensionError("maximal_balanced_sets requires k >= 3 flows");
    if (k > 62) throw DimensionError("maximal_balanced_sets supports k <= 62");
    const auto& a = config.slopes;

    auto arc_mask = [&](int first, int length) {
        std::uint64_t m = 0;
        for (int j = 0; j < length; ++j) m |= 1ULL << ((first + j) % k);
        return m;
    };
    std::map<std::uint64_t, bool> balanced;  // connected-set mask -> balanced?
    auto arc_balanced = [&](int first, int length) {
        const std::uint64_t m = arc_mask(first, length);
        auto it = balanced.find(m);
        if (it != balanced.end()) return it->second;
        bool ok;
        if (length == k) {
            ok = is_balanced_ring(a, tol);
        } else {
            std::vector<double> sub(length);
            for (int j = 0; j < length; ++j) sub[j] = a[(first + j) % k];
            ok = is_balanced(sub, tol);
        }
        balanced.emplace(m, ok);
        return ok;
    };

    if (arc_balanced(0, k)) return {FlowArc{0, k}};

    std::vector<FlowArc> result;
    for (int length = k - 1; length >= 1; --length) {
        for (int first = (0 - length + 1 + k) % k, j = 0; j < length; ++j, first = (first + 1) % k) {
            // arcs [first, first+length) containing flow 0
            if (!arc_balanced(first, length)) continue;
            const std::uint64_t m = arc_mask(first, length);
            bool maximal = true;
            for (int len2 = length + 1; len2 <= k - 1 && maximal; ++len2) {
                for (int f2 = 0; f2 < k && maximal; ++f2) {
                    const std::uint64_t m2 = arc_mask(f2, len2);
                    if ((m2 & m) == m && arc_balanced(f2, len2)) maximal = false;
                }
            }
            if (maximal) result.push_back(FlowArc{first, length});
        }
    }
    return result;
}

}  // namespace ringld
