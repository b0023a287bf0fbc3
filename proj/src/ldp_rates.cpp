#include "ringld/ldp_rates.hpp"

#include <cmath>
#include <string>

#include "ringld/detail/roots.hpp"
#include "ringld/errors.hpp"

namespace ringld {

namespace {

/// Root of coeff*(phi(theta)-1) = theta on (0, theta_plus).
///
/// h(theta) = coeff*(phi(theta)-1)/theta - 1 is increasing (phi strictly convex),
/// h(0+) = coeff/hat_lambda - 1 < 0 exactly when a positive root exists, and
/// h -> +inf toward theta_plus, so bisection on h is unconditionally safe.
double solve_fixed_point(const MessageLengthModel& model, double coeff, const char* what) {
    const double hat = model.hat_lambda();
    if (!(coeff > 0.0) || !(coeff < hat))
        throw NoRootError(std::string(what) + ": no positive root (requires coefficient < " +
                          std::to_string(hat) + ", got " + std::to_string(coeff) + ")");
    auto h = [&](double th) { return coeff * model.mgf_m1(th) / th - 1.0; };
    const double tp = model.theta_plus();
    double hi;
    if (std::isfinite(tp)) {
        hi = tp - detail::domain_margin(tp);
        if (!(h(hi) > 0.0))
            throw NoRootError(std::string(what) + ": function stays below the identity up to theta_plus");
    } else {
        hi = detail::expand_bracket(h, 1.0, 1e6);
        if (std::isnan(hi)) throw NoRootError(std::string(what) + ": failed to bracket the root");
    }
    const double lo = 1e-300;
    return detail::bisect_increasing(h, lo, hi, 1e-14);
}

}  // namespace

NetworkParams::NetworkParams(int k_, double lambda_, double d_, MessageLengthModel model_)
    : k(k_), lambda(lambda_), d(d_), model(model_) {
    if (k < 3) throw DimensionError("cyclic network requires k >= 3 (got " + std::to_string(k) + ")");
    if (!(lambda > 0.0)) throw DomainError("arrival rate lambda must be positive");
    if (!(d >= 0.0)) throw DomainError("delay threshold d must be nonnegative");
}

double solve_theta_l(const MessageLengthModel& model, double lambda, int l) {
    if (l < 1) throw DomainError("theta(lambda,l) requires l >= 1");
    // (l+1)*theta = l*lambda*(phi-1)  <=>  coeff*(phi-1) = theta with coeff = l*lambda/(l+1).
    return solve_fixed_point(model, lambda * l / (l + 1.0), "theta(lambda,l)");
}

double solve_theta_star(const MessageLengthModel& model, double lambda) {
    return solve_fixed_point(model, lambda, "theta*");
}

double rate_J(const NetworkParams& params, int l) {
    if (l < 1 || l > params.k) throw DomainError("rate_J requires 1 <= l <= k");
    if (l == params.k) return params.k * solve_theta_star(params.model, params.lambda) * params.d;
    return (l + 1) * solve_theta_l(params.model, params.lambda, l) * params.d;
}

OverheatProfile optimal_profile(const NetworkParams& params, int l) {
    if (l < 1 || l > params.k) throw DomainError("optimal_profile requires 1 <= l <= k");
    const auto& model = params.model;
    double theta, a, b, J;
    if (l == params.k) {
        theta = solve_theta_star(model, params.lambda);
        a = b = params.lambda * model.mgf_prime(theta);
        J = params.k * theta * params.d;
    } else {
        theta = solve_theta_l(model, params.lambda, l);
        a = params.lambda * model.mgf_prime(theta);
        b = a * l / (l + 1.0);
        J = (l + 1) * theta * params.d;
    }
    if (!(b > 1.0))
        throw InfeasibleError("overload with l = " + std::to_string(l) +
                              " unreachable: optimal load slope b = " + std::to_string(b) + " <= 1");
    const double T = params.d / (b - 1.0);
    return {l, theta, J, a, b, T};
}

ScenarioReport scenario(const NetworkParams& params) {
    // Requires lambda < hat_lambda so the l = k root exists; the l < k roots then
    // exist automatically since hat_lambda*(l+1)/l > hat_lambda.
    ScenarioReport report;
    report.entries.reserve(params.k);
    report.l_opt = 0;
    double best = 0.0;
    for (int l = 1; l <= params.k; ++l) {
        ScenarioEntry entry{l, true, 0.0};
        try {
            entry.rate_value = rate_J(params, l);
        } catch (const InfeasibleError&) {
            entry.feasible = false;
        }
        if (entry.feasible && (report.l_opt == 0 || entry.rate_value < best)) {
            best = entry.rate_value;
            report.l_opt = l;
        }
        report.entries.push_back(entry);
    }
    return report;
}

double configuration_rate(const MessageLengthModel& model, double lambda, const Configuration& config) {
    if (config.slopes.empty()) throw DimensionError("configuration has no flows");
    if (!(config.duration > 0.0)) throw DomainError("configuration duration must be positive");
    double sum = 0.0;
    for (double a : config.slopes) sum += model.legendre(lambda, a).value;
    return config.duration * sum;
}

double balanced_set_rate(const MessageLengthModel& model, double lambda, double h, int size, double T) {
    if (size < 1) throw DimensionError("balanced set must contain at least one flow");
    if (!(T > 0.0)) throw DomainError("duration must be positive");
    return model.legendre(lambda, h).value * T * size;
}

}  // namespace ringld
