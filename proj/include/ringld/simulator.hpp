#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ringld/ldp_rates.hpp"

namespace ringld {

struct ArrivalRecord {
    double t;
    int flow;
    int server;
    double length;
    double w_before_min;  // lesser of the two candidate workloads just before the jump
};

/// Ring of k unit-speed FIFO servers fed by k Poisson flows; each message joins
/// the lesser-loaded of its flow's two servers (ties go to server i-1). Workloads
/// drain lazily between arrivals, so the event queue holds arrivals only.
class RingNetwork {
  public:
    RingNetwork(const NetworkParams& params, std::uint64_t seed, std::uint64_t trial);

    double time() const { return t_; }
    int size() const { return k_; }
    const std::vector<double>& workloads() const { return w_; }
    const std::vector<double>& flow_work() const { return zeta_; }      // cumulative per-flow input
    const std::vector<double>& server_work() const { return what_; }    // cumulative per-server assignment
    double served_total() const { return served_; }

    double next_event_time() const;

    /// Process the next arrival.
    void step();

    /// Process all arrivals strictly before t, then drain workloads up to t.
    void advance_to(double t);

    /// Switch a flow to the exponentially tilted regime (rate lambda*phi(theta),
    /// tilted lengths); theta = 0 restores the nominal law. The flow's arrival
    /// clock restarts from the current time (exact for Poisson flows).
    void set_tilt(int flow, double theta);

    /// Waiting time of a zero-length probe arriving now with the given flow.
    double virtual_wait(int flow) const;

    void set_event_log(std::vector<ArrivalRecord>* sink) { log_ = sink; }

  private:
    void drain(double dt);
    double draw_gap(int flow);

    NetworkParams params_;
    int k_;
    double t_ = 0.0;
    double served_ = 0.0;
    std::vector<double> w_, zeta_, what_;
    std::vector<double> next_arrival_;
    std::vector<double> tilt_theta_;
    std::vector<double> rate_;
    std::vector<SplitMix64> rng_;
    std::vector<ArrivalRecord>* log_ = nullptr;
};

struct TiltConfig {
    int flows;     // tilt flows 0..flows-1 (the connected overheating set containing flow 0)
    double theta;  // tilt parameter; must lie in [0, theta_plus)
};

struct SimConfig {
    NetworkParams params;
    int n;                  // scaling level: the overload event is omega_1 >= n*d
    int trials;
    std::uint64_t seed;
    double warmup = -1.0;   // < 0: default 50/(1 - lambda*mean)
    double window = -1.0;   // measurement window per unit n; < 0: duration from optimal_profile
    std::optional<TiltConfig> tilt;
    bool collect_census = false;
    double census_epsilon = 0.1;
    double census_min_slope = 1.0;
};

struct FlowCensus {
    double slope_freq;      // weighted frequency of window slope > a_min
    double overheat_freq;   // weighted frequency of the full overheat indicator
    double mean_slope;      // weighted mean window slope
};

struct CensusReport {
    int hits;                       // conditioning events observed
    double solitary_freq;           // only flow 0 overheated
    double collective_freq;         // all flows overheated
    double mean_overheat_count;
    std::vector<FlowCensus> flows;
};

struct SimulationResult {
    double p_hat;          // may underflow to 0 for deep tilts; log_p_hat stays exact
    double log_p_hat;
    double rel_se;         // standard error / p_hat
    double empirical_rate; // -(1/n) log p_hat
    long hits;
    int trials;
    int n;
    double level;          // n*d
    double window;         // unscaled measurement window actually used
    std::vector<double> omega;  // per-replica waiting-time samples (simulation measure)
    std::optional<CensusReport> census;
};

/// Estimate Pr(omega_1 >= n*d) by replicated runs (warm-up, then a measurement
/// window). With a tilt the configured flows run the exponential change of measure
/// inside the window and the estimator is likelihood-ratio weighted (unbiased).
SimulationResult estimate_overload(const SimConfig& config);

/// Conditional overheating census among replicas achieving the overload, using
/// the given lookback window, slope threshold and band epsilon.
/// InsufficientHitsError if fewer than 20 replicas hit.
CensusReport overheat_census(const SimConfig& config, double window, double min_slope, double epsilon);

}  // namespace ringld
