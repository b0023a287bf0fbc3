#pragma once

#include <span>
#include <vector>

#include "ringld/ldp_rates.hpp"

namespace ringld {

/// Work split of a set of flows over their assigned servers. alpha[j] is the
/// fraction of flow j's slope routed to its own server s_j; the remainder goes
/// to s_{j-1}. imbalance is the achieved objective D (sum of adjacent server
/// load differences), zero exactly when the loads can be equalized.
struct RoutingSolution {
    std::vector<double> server_loads;  // b
    std::vector<double> splits;        // alpha, one per participating flow
    double imbalance;                  // D >= 0
};

/// Full circle: k flows over k servers, cyclic objective sum_i |b_i - b_{i+1}|.
RoutingSolution solve_ring(std::span<const double> slopes);

/// Connected arc of l flows over l+1 servers; the end servers receive work only
/// from the arc's boundary flows. Objective sum of the l adjacent differences.
RoutingSolution solve_arc(std::span<const double> slopes);

/// A connected arc of flows is balanced when its optimal imbalance vanishes.
bool is_balanced(std::span<const double> slopes, double tol = 1e-9);
bool is_balanced_ring(std::span<const double> slopes, double tol = 1e-9);

/// Connected run of flows on the ring: indices first, first+1, ..., first+length-1 (mod k).
struct FlowArc {
    int first;
    int length;
};

/// All maximal balanced connected sets containing flow 0, for the configuration's
/// slope vector: balanced sets with every connected strict superset (including the
/// full circle) unbalanced. If the full circle itself is balanced it is the unique
/// answer, reported as an arc of length k.
std::vector<FlowArc> maximal_balanced_sets(const Configuration& config, double tol = 1e-9);

}  // namespace ringld
