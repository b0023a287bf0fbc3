#pragma once

#include <algorithm>
#include <cmath>

namespace ringld::detail {

/// Relative margin kept between theta evaluations and the MGF pole.
inline double domain_margin(double theta_plus) {
    return 1e-12 * std::max(1.0, theta_plus);
}

/// Bisect a monotone-increasing f on [lo, hi] with f(lo) <= 0 <= f(hi),
/// to relative tolerance rel on the abscissa.
template <class F>
double bisect_increasing(F&& f, double lo, double hi, double rel = 1e-13) {
    for (int it = 0; it < 400 && (hi - lo) > rel * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Grow hi geometrically from start until f(hi) > 0 or hi exceeds limit.
/// Returns hi on success, NaN if the sign never changes.
template <class F>
double expand_bracket(F&& f, double start, double limit, double factor = 2.0) {
    double hi = start;
    for (int it = 0; it < 4096; ++it) {
        if (f(hi) > 0.0) return hi;
        if (hi >= limit) return std::nan("");
        hi = std::min(hi * factor, limit);
    }
    return std::nan("");
}

}  // namespace ringld::detail
