#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ringld/ldp_rates.hpp"

namespace ringld {

/// A curve intersection in the (lambda, vartheta) plane.
struct CriticalPoint {
    double lambda;
    double vartheta;
};

/// Intersection of the l-flow curve vartheta_l with the all-flows curve vartheta*_k:
/// solves l*(phi(v/(l+1))-1) = k*(phi(v/k)-1), then lambda = v / (k*(phi(v/k)-1)).
/// Exists for 1 <= l <= k-2; for l = k-1 the two sides are proportional and never
/// meet (J(lambda,k) < J(lambda,k-1) for every lambda), so NoRootError is raised.
CriticalPoint lambda_star_kl(const MessageLengthModel& model, int k, int l);

/// Intersection of vartheta_{l1} with vartheta_{l2} (1 <= l1 < l2):
/// solves l1*(phi(v/(l1+1))-1) = l2*(phi(v/(l2+1))-1), lambda = v / (l2*(phi(v/(l2+1))-1)).
/// May exceed hat_lambda, but is below hat_lambda*(l2+1)/l2.
CriticalPoint lambda_l2l1(const MessageLengthModel& model, int l2, int l1);

/// Below lambda_k the solitary scenario dominates every other:
/// min(lambda*_{k,1}, min_{2<=l<=k-1} lambda_{l,1}).
double lambda_lower(const MessageLengthModel& model, int k);

/// Above lambda^k the collective scenario dominates: max_{1<=l<=k-2} lambda*_{k,l}.
double lambda_upper(const MessageLengthModel& model, int k);

/// Full critical-rate summary for one (model, k).
struct CriticalRateTable {
    int k;
    double hat_lambda;
    /// star[l-1] is lambda*_{k,l} for l = 1..k-1; nullopt marks the l = k-1 non-crossing.
    std::vector<std::optional<CriticalPoint>> star;
    /// vs_one[l-2] is lambda_{l,1} for l = 2..k-1.
    std::vector<CriticalPoint> vs_one;
    double lower;
    double upper;
};

CriticalRateTable critical_table(const MessageLengthModel& model, int k);

struct PhaseRow {
    double lambda;
    int l_opt;
    std::vector<ScenarioEntry> entries;
};

/// Scenario map tabulated over a lambda grid (all entries must satisfy lambda < hat_lambda).
struct PhaseDiagram {
    int k;
    double d;
    std::vector<PhaseRow> rows;
};

PhaseDiagram phase_sweep(const MessageLengthModel& model, int k, double d, std::span<const double> lambdas);

}  // namespace ringld
