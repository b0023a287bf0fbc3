#pragma once

#include <span>
#include <vector>

#include "ringld/distributions.hpp"

namespace ringld {

/// Problem instance: ring size, per-flow Poisson rate, delay threshold, length law.
struct NetworkParams {
    int k;
    double lambda;
    double d;
    MessageLengthModel model;

    NetworkParams(int k_, double lambda_, double d_, MessageLengthModel model_);
};

/// Optimal overheating of l flows: tilt root, rate value J, input slope a,
/// per-server load slope b, and duration T (with b*T - T = d).
struct OverheatProfile {
    int l;
    double theta;
    double rate_value;   // J(lambda, l), in units of d
    double input_slope;  // a
    double load_slope;   // b
    double duration;     // T
};

struct ScenarioEntry {
    int l;
    bool feasible;
    double rate_value;  // valid when feasible
};

/// J(lambda, l) for every l = 1..k and the minimizing scenario.
struct ScenarioReport {
    std::vector<ScenarioEntry> entries;
    int l_opt;
};

/// Piecewise-linear input configuration: one slope per flow over a common duration.
struct Configuration {
    std::vector<double> slopes;
    double duration;
};

/// Positive root of (l+1)*theta = l*lambda*(phi(theta)-1).
/// Defined for lambda < hat_lambda*(l+1)/l; NoRootError otherwise.
double solve_theta_l(const MessageLengthModel& model, double lambda, int l);

/// Positive root of theta = lambda*(phi(theta)-1). Defined for 0 < lambda < hat_lambda.
double solve_theta_star(const MessageLengthModel& model, double lambda);

/// J(lambda,l) = (l+1)*theta(lambda,l)*d for l < k and k*theta*(lambda)*d for l = k.
double rate_J(const NetworkParams& params, int l);

/// Optimal (a, b, T) for overheating exactly l flows. InfeasibleError if the
/// load slope does not exceed the unit service speed.
OverheatProfile optimal_profile(const NetworkParams& params, int l);

/// All J(lambda,l), l = 1..k, and the argmin (ties broken toward smaller l).
ScenarioReport scenario(const NetworkParams& params);

/// Rate functional of a configuration: T * sum_i legendre(lambda, a_i).value.
double configuration_rate(const MessageLengthModel& model, double lambda, const Configuration& config);

/// Rate of a balanced set of `size` flows overheated at common mean slope h for
/// duration T: (h*theta~ - lambda*(phi(theta~)-1)) * T * size with h = lambda*phi'(theta~).
double balanced_set_rate(const MessageLengthModel& model, double lambda, double h, int size, double T);

}  // namespace ringld
