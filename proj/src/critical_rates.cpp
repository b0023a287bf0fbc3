#include "ringld/critical_rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ringld/detail/roots.hpp"
#include "ringld/errors.hpp"

namespace ringld {

namespace {

/// Positive root of lo_count*(phi(v/lo_div)-1) = hi_count*(phi(v/hi_div)-1)
/// with lo_div < hi_div. The left side grows faster: the difference is negative
/// near zero (slopes lo_count/lo_div < hi_count/hi_div) and diverges to +inf as
/// v/lo_div approaches theta_plus, so the first bracketed sign change is the root
/// (unique since phi and all its derivatives are convex).
double crossing_vartheta(const MessageLengthModel& model, double lo_count, double lo_div,
                         double hi_count, double hi_div, const char* what) {
    if (!(lo_count / lo_div < hi_count / hi_div))
        throw NoRootError(std::string(what) + ": the two curves are ordered for every positive root");
    auto diff = [&](double v) {
        return lo_count * model.mgf_m1(v / lo_div) - hi_count * model.mgf_m1(v / hi_div);
    };
    const double tp = model.theta_plus();
    const double cap = std::isfinite(tp) ? lo_div * (tp - detail::domain_margin(tp)) : 1e8;
    double lo = std::isfinite(tp) ? 1e-8 * cap : 1e-8;
    double hi = lo;
    bool bracketed = false;
    for (int it = 0; it < 4096 && !bracketed; ++it) {
        if (diff(hi) > 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
        if (hi >= cap) break;
        hi = std::min(hi * 1.5, cap);
    }
    if (!bracketed) throw NoRootError(std::string(what) + ": no crossing in the numeric domain");
    return detail::bisect_increasing(diff, lo, hi, 1e-14);
}

}  // namespace

CriticalPoint lambda_star_kl(const MessageLengthModel& model, int k, int l) {
    if (k < 3) throw DimensionError("lambda*_{k,l} requires k >= 3");
    if (l < 1 || l > k - 1) throw DomainError("lambda*_{k,l} requires 1 <= l <= k-1");
    if (l == k - 1)
        throw NoRootError("lambda*_{k,k-1} does not exist: J(lambda,k) < J(lambda,k-1) for every lambda");
    const double v =
        crossing_vartheta(model, l, l + 1.0, k, static_cast<double>(k), "lambda*_{k,l}");
    return {v / (k * model.mgf_m1(v / k)), v};
}

CriticalPoint lambda_l2l1(const MessageLengthModel& model, int l2, int l1) {
    if (!(1 <= l1 && l1 < l2)) throw DomainError("lambda_{l2,l1} requires 1 <= l1 < l2");
    const double v = crossing_vartheta(model, l1, l1 + 1.0, l2, l2 + 1.0, "lambda_{l2,l1}");
    return {v / (l2 * model.mgf_m1(v / (l2 + 1.0))), v};
}

double lambda_lower(const MessageLengthModel& model, int k) {
    if (k < 3) throw DimensionError("lambda_k requires k >= 3");
    double lo = lambda_star_kl(model, k, 1).lambda;
    for (int l = 2; l <= k - 1; ++l) lo = std::min(lo, lambda_l2l1(model, l, 1).lambda);
    return lo;
}

double lambda_upper(const MessageLengthModel& model, int k) {
    if (k < 3) throw DimensionError("lambda^k requires k >= 3");
    double hi = 0.0;
    for (int l = 1; l <= k - 2; ++l) hi = std::max(hi, lambda_star_kl(model, k, l).lambda);
    return hi;
}

CriticalRateTable critical_table(const MessageLengthModel& model, int k) {
    CriticalRateTable table;
    table.k = k;
    table.hat_lambda = model.hat_lambda();
    table.star.reserve(k - 1);
    for (int l = 1; l <= k - 1; ++l) {
        if (l == k - 1)
            table.star.emplace_back(std::nullopt);
        else
            table.star.emplace_back(lambda_star_kl(model, k, l));
    }
    table.vs_one.reserve(std::max(0, k - 2));
    for (int l = 2; l <= k - 1; ++l) table.vs_one.push_back(lambda_l2l1(model, l, 1));
    table.lower = table.star.front()->lambda;
    for (const auto& p : table.vs_one) table.lower = std::min(table.lower, p.lambda);
    table.upper = 0.0;
    for (const auto& p : table.star)
        if (p) table.upper = std::max(table.upper, p->lambda);
    return table;
}

PhaseDiagram phase_sweep(const MessageLengthModel& model, int k, double d,
                         std::span<const double> lambdas) {
    const double hat = model.hat_lambda();
    PhaseDiagram diagram{k, d, {}};
    diagram.rows.reserve(lambdas.size());
    double prev = 0.0;
    for (double lam : lambdas) {
        if (!(lam > prev)) throw DomainError("phase_sweep grid must be strictly increasing and positive");
        if (!(lam < hat))
            throw DomainError("phase_sweep grid value " + std::to_string(lam) +
                              " is not below hat_lambda = " + std::to_string(hat));
        prev = lam;
        const auto report = scenario(NetworkParams(k, lam, d, model));
        diagram.rows.push_back({lam, report.l_opt, report.entries});
    }
    return diagram;
}

}  // namespace ringld
