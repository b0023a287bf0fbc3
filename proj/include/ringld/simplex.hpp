#pragma once

#include <vector>

namespace ringld {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status;
    double objective;
    std::vector<double> x;
};

/// Minimize c.x subject to A x <= b, x >= 0 (b may be negative).
/// Dense two-phase tableau simplex with Bland's rule; meant for the tiny
/// routing programs here (a few dozen variables), not general-purpose use.
LpResult simplex_solve(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                       const std::vector<double>& c);

}  // namespace ringld
