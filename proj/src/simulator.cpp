#include "ringld/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ringld/errors.hpp"

namespace ringld {

RingNetwork::RingNetwork(const NetworkParams& params, std::uint64_t seed, std::uint64_t trial)
    : params_(params), k_(params.k) {
    w_.assign(k_, 0.0);
    zeta_.assign(k_, 0.0);
    what_.assign(k_, 0.0);
    tilt_theta_.assign(k_, 0.0);
    rate_.assign(k_, params_.lambda);
    rng_.reserve(k_);
    next_arrival_.resize(k_);
    for (int i = 0; i < k_; ++i) {
        rng_.push_back(SplitMix64::stream(seed, trial, static_cast<std::uint64_t>(i)));
        next_arrival_[i] = rng_[i].exponential(rate_[i]);
    }
}

double RingNetwork::next_event_time() const {
    double best = std::numeric_limits<double>::infinity();
    for (double t : next_arrival_) best = std::min(best, t);
    return best;
}

void RingNetwork::drain(double dt) {
    for (double& w : w_) {
        const double served = std::min(w, dt);
        served_ += served;
        w -= served;
    }
}

void RingNetwork::step() {
    int flow = 0;
    for (int i = 1; i < k_; ++i)
        if (next_arrival_[i] < next_arrival_[flow]) flow = i;
    const double when = next_arrival_[flow];
    drain(when - t_);
    t_ = when;

    const double length = params_.model.sample_tilted(rng_[flow], tilt_theta_[flow]);
    const int prev = (flow + k_ - 1) % k_;
    const int target = w_[prev] <= w_[flow] ? prev : flow;  // tie joins s_{i-1}
    if (log_) log_->push_back({t_, flow, target, length, std::min(w_[prev], w_[flow])});
    w_[target] += length;
    what_[target] += length;
    zeta_[flow] += length;
    next_arrival_[flow] = t_ + rng_[flow].exponential(rate_[flow]);
}

void RingNetwork::advance_to(double t) {
    while (next_event_time() < t) step();
    drain(t - t_);
    t_ = t;
}

void RingNetwork::set_tilt(int flow, double theta) {
    tilt_theta_[flow] = theta;
    rate_[flow] = params_.lambda * params_.model.mgf(theta);
    next_arrival_[flow] = t_ + rng_[flow].exponential(rate_[flow]);
}

double RingNetwork::virtual_wait(int flow) const {
    return std::min(w_[(flow + k_ - 1) % k_], w_[flow]);
}

namespace {

struct ReplicaOutcome {
    bool hit;
    double log_weight;
    double omega;
    std::vector<double> slope;      // per-flow window slope
    std::vector<double> deviation;  // per-flow scaled sup deviation from the window secant
};

struct RunPlan {
    double warmup;
    double window;      // unscaled
    double level;       // n*d
    double tilt_theta;
    int tilt_flows;
};

RunPlan make_plan(const SimConfig& cfg) {
    const auto& p = cfg.params;
    if (cfg.n < 1) throw DomainError("scaling level n must be >= 1");
    if (cfg.trials < 1) throw DomainError("trials must be >= 1");
    const double rho = p.lambda * p.model.mean();
    if (!cfg.tilt && rho >= 1.0)
        throw StabilityError("lambda*mean = " + std::to_string(rho) +
                             " >= 1: plain estimation needs a stationary network");

    RunPlan plan{};
    plan.level = cfg.n * p.d;
    plan.warmup = cfg.warmup >= 0.0 ? cfg.warmup : (rho < 1.0 ? 50.0 / (1.0 - rho) : 0.0);
    plan.tilt_flows = 0;
    plan.tilt_theta = 0.0;
    int profile_l;
    if (cfg.tilt) {
        if (cfg.tilt->flows < 1 || cfg.tilt->flows > p.k)
            throw DomainError("tilt scenario must name between 1 and k flows");
        plan.tilt_flows = cfg.tilt->flows;
        plan.tilt_theta = cfg.tilt->theta > 0.0
                              ? cfg.tilt->theta
                              : (cfg.tilt->flows == p.k ? solve_theta_star(p.model, p.lambda)
                                                        : solve_theta_l(p.model, p.lambda, cfg.tilt->flows));
        if (!(plan.tilt_theta < p.model.theta_plus()))
            throw DomainError("tilt theta must lie below theta_plus");
        profile_l = cfg.tilt->flows;
    } else {
        profile_l = scenario(p).l_opt;
    }
    if (cfg.window >= 0.0) {
        plan.window = cfg.n * cfg.window;
    } else if (p.d == 0.0) {
        plan.window = 0.0;
    } else {
        plan.window = cfg.n * optimal_profile(p, profile_l).duration;
    }
    return plan;
}

ReplicaOutcome run_replica(const SimConfig& cfg, const RunPlan& plan, std::uint64_t trial,
                           bool with_census) {
    const auto& p = cfg.params;
    RingNetwork net(p, cfg.seed, trial);
    net.advance_to(plan.warmup);

    std::vector<ArrivalRecord> window_log;
    if (with_census) net.set_event_log(&window_log);

    std::vector<double> zeta_at_start = net.flow_work();
    if (plan.tilt_flows > 0)
        for (int f = 0; f < plan.tilt_flows; ++f) net.set_tilt(f, plan.tilt_theta);

    const double t_end = plan.warmup + plan.window;
    net.advance_to(t_end);

    ReplicaOutcome out{};
    out.omega = net.virtual_wait(0);
    out.hit = out.omega >= plan.level;
    out.log_weight = 0.0;
    if (plan.tilt_flows > 0) {
        const double drift = p.lambda * p.model.mgf_m1(plan.tilt_theta) * plan.window;
        for (int f = 0; f < plan.tilt_flows; ++f) {
            const double brought = net.flow_work()[f] - zeta_at_start[f];
            out.log_weight += drift - plan.tilt_theta * brought;
        }
    }

    if (with_census && plan.window > 0.0) {
        const int k = p.k;
        out.slope.assign(k, 0.0);
        out.deviation.assign(k, 0.0);
        for (int f = 0; f < k; ++f)
            out.slope[f] = (net.flow_work()[f] - zeta_at_start[f]) / plan.window;
        std::vector<double> cum(k, 0.0);
        for (const auto& rec : window_log) {
            const double line = out.slope[rec.flow] * (rec.t - plan.warmup);
            const double before = std::abs(cum[rec.flow] - line);
            cum[rec.flow] += rec.length;
            const double after = std::abs(cum[rec.flow] - line);
            out.deviation[rec.flow] = std::max({out.deviation[rec.flow], before, after});
        }
        for (double& dev : out.deviation) dev /= cfg.n;  // scaled-path units
    }
    return out;
}

double log_sum_exp(const std::vector<double>& xs) {
    if (xs.empty()) return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(xs.begin(), xs.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

CensusReport build_census(const SimConfig& cfg, const RunPlan& plan,
                          const std::vector<ReplicaOutcome>& outcomes, double min_slope,
                          double epsilon) {
    if (!(plan.window > 0.0)) throw DomainError("overheating census needs a positive lookback window");
    const int k = cfg.params.k;
    std::vector<double> hit_logw;
    for (const auto& o : outcomes)
        if (o.hit) hit_logw.push_back(o.log_weight);
    CensusReport report{};
    report.hits = static_cast<int>(hit_logw.size());
    if (report.hits < 20)
        throw InsufficientHitsError("census needs >= 20 conditioning events, got " +
                                    std::to_string(report.hits));
    const double scaled_window = plan.window / cfg.n;
    const double log_norm = log_sum_exp(hit_logw);

    report.flows.assign(k, FlowCensus{0.0, 0.0, 0.0});
    report.solitary_freq = report.collective_freq = report.mean_overheat_count = 0.0;
    for (const auto& o : outcomes) {
        if (!o.hit) continue;
        const double w = std::exp(o.log_weight - log_norm);
        int count = 0;
        bool flow0 = false;
        for (int f = 0; f < k; ++f) {
            const bool steep = o.slope[f] > min_slope;
            const double band = epsilon * std::max(1.0, o.slope[f] * scaled_window);
            const bool overheated = steep && o.deviation[f] <= band;
            report.flows[f].slope_freq += steep ? w : 0.0;
            report.flows[f].overheat_freq += overheated ? w : 0.0;
            report.flows[f].mean_slope += w * o.slope[f];
            count += overheated;
            if (f == 0) flow0 = overheated;
        }
        report.mean_overheat_count += w * count;
        if (flow0 && count == 1) report.solitary_freq += w;
        if (count == k) report.collective_freq += w;
    }
    return report;
}

SimulationResult aggregate(const SimConfig& cfg, const RunPlan& plan,
                           const std::vector<ReplicaOutcome>& outcomes) {
    std::vector<double> logw1, logw2;
    long hits = 0;
    for (const auto& o : outcomes) {
        if (!o.hit) continue;
        ++hits;
        logw1.push_back(o.log_weight);
        logw2.push_back(2.0 * o.log_weight);
    }
    const double R = static_cast<double>(cfg.trials);
    SimulationResult res{};
    res.hits = hits;
    res.trials = cfg.trials;
    res.n = cfg.n;
    res.level = plan.level;
    res.window = plan.window;
    res.omega.reserve(outcomes.size());
    for (const auto& o : outcomes) res.omega.push_back(o.omega);
    if (hits == 0) {
        res.p_hat = 0.0;
        res.log_p_hat = -std::numeric_limits<double>::infinity();
        res.rel_se = std::numeric_limits<double>::quiet_NaN();
        res.empirical_rate = std::numeric_limits<double>::infinity();
        return res;
    }
    const double log_s1 = log_sum_exp(logw1);
    const double log_s2 = log_sum_exp(logw2);
    res.log_p_hat = log_s1 - std::log(R);
    res.p_hat = std::exp(res.log_p_hat);
    // relative se from the weight moments: se/p = sqrt((R*S2/S1^2 - 1)/(R-1))
    const double ratio = std::exp(std::log(R) + log_s2 - 2.0 * log_s1);
    res.rel_se = R > 1.5 ? std::sqrt(std::max(0.0, ratio - 1.0) / (R - 1.0)) : 0.0;
    res.empirical_rate = -res.log_p_hat / cfg.n;
    return res;
}

std::vector<ReplicaOutcome> run_all(const SimConfig& cfg, const RunPlan& plan, bool with_census) {
    std::vector<ReplicaOutcome> outcomes;
    outcomes.reserve(cfg.trials);
    for (int trial = 0; trial < cfg.trials; ++trial)
        outcomes.push_back(run_replica(cfg, plan, static_cast<std::uint64_t>(trial), with_census));
    return outcomes;
}

}  // namespace

SimulationResult estimate_overload(const SimConfig& config) {
    const RunPlan plan = make_plan(config);
    const bool census = config.collect_census && plan.window > 0.0;
    const auto outcomes = run_all(config, plan, census);
    SimulationResult result = aggregate(config, plan, outcomes);
    if (census) {
        try {
            result.census = build_census(config, plan, outcomes, config.census_min_slope,
                                         config.census_epsilon);
        } catch (const InsufficientHitsError&) {
            result.census = std::nullopt;
        }
    }
    return result;
}

CensusReport overheat_census(const SimConfig& config, double window, double min_slope,
                             double epsilon) {
    SimConfig cfg = config;
    cfg.window = window;
    const RunPlan plan = make_plan(cfg);
    const auto outcomes = run_all(cfg, plan, true);
    return build_census(cfg, plan, outcomes, min_slope, epsilon);
}

}  // namespace ringld
