// Command-line front end: scenario analysis, critical input rates, phase
// sweeps, split optimization, rare-event simulation, and a reference-table
// reproduction check.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ringld/critical_rates.hpp"
#include "ringld/distributions.hpp"
#include "ringld/errors.hpp"
#include "ringld/ldp_rates.hpp"
#include "ringld/routing.hpp"
#include "ringld/simulator.hpp"

using nlohmann::json;
using namespace ringld;

namespace {

/// Round to 9 significant digits so emitted JSON re-parses to the same value.
double sig9(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return std::strtod(buf, nullptr);
}

json num(double x) {
    if (std::isnan(x)) return nullptr;
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return sig9(x);
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open output file " + out_path);
    os << text;
    if (!text.empty() && text.back() != '\n') os << '\n';
}

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0.0)
        throw DomainError("grid must be start:stop:step with step > 0 (got '" + spec + "')");
    std::vector<double> grid;
    for (double v = start; v <= stop + 1e-12 * std::max(1.0, std::abs(stop)); v += step)
        grid.push_back(v);
    if (grid.empty()) throw DomainError("grid '" + spec + "' is empty");
    return grid;
}

std::vector<double> parse_slopes(const std::string& spec) {
    std::vector<double> slopes;
    const char* p = spec.c_str();
    char* end = nullptr;
    for (;;) {
        const double v = std::strtod(p, &end);
        if (end == p) throw DomainError("bad slope list '" + spec + "'");
        slopes.push_back(v);
        p = end;
        if (*p == ',')
            ++p;
        else
            break;
    }
    if (*p != '\0') throw DomainError("bad slope list '" + spec + "'");
    return slopes;
}

/// 1-based inclusive arc i..j on the ring, possibly wrapping.
std::vector<double> subset_slopes(const std::vector<double>& slopes, const std::string& subset) {
    int from = 0, to = 0;
    if (std::sscanf(subset.c_str(), "%d..%d", &from, &to) != 2)
        throw DomainError("subset must be i..j with 1-based flow indices");
    const int k = static_cast<int>(slopes.size());
    if (from < 1 || from > k || to < 1 || to > k) throw DomainError("subset indices out of range");
    std::vector<double> arc;
    for (int i = from - 1;; i = (i + 1) % k) {
        arc.push_back(slopes[i]);
        if (i == to - 1) break;
    }
    if (arc.size() == slopes.size() && from != 1)
        throw DomainError("subset covers the whole ring; omit --subset instead");
    return arc;
}

json loads_json(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(num(x));
    return arr;
}

// ---------------------------------------------------------------------------

int cmd_analyze(const std::string& dist, int k, double lambda, double d, const std::string& out) {
    const auto model = MessageLengthModel::parse(dist);
    const NetworkParams params(k, lambda, d, model);
    if (!(lambda < model.hat_lambda()))
        throw StabilityError("lambda = " + std::to_string(lambda) + " >= hat_lambda = " +
                             std::to_string(model.hat_lambda()) + ": no stationary regime");
    const auto report = scenario(params);
    json scenarios = json::array();
    for (const auto& e : report.entries) {
        json row{{"l", e.l}, {"feasible", e.feasible}};
        if (e.feasible) {
            const auto prof = optimal_profile(params, e.l);
            row["J"] = num(e.rate_value);
            row["theta"] = num(prof.theta);
            row["a"] = num(prof.input_slope);
            row["b"] = num(prof.load_slope);
            row["T"] = num(prof.duration);
        }
        scenarios.push_back(row);
    }
    const json doc{{"command", "analyze"},
                   {"dist", model.descriptor()},
                   {"k", k},
                   {"lambda", num(lambda)},
                   {"d", num(d)},
                   {"hat_lambda", num(model.hat_lambda())},
                   {"l_opt", report.l_opt},
                   {"scenarios", scenarios}};
    write_output(out, doc.dump(2));
    return 0;
}

int cmd_critical(const std::string& dist, int k, const std::string& out) {
    const auto model = MessageLengthModel::parse(dist);
    const auto table = critical_table(model, k);
    json star = json::array();
    for (int l = 1; l <= k - 1; ++l) {
        const auto& pt = table.star[l - 1];
        if (pt)
            star.push_back({{"l", l}, {"lambda", num(pt->lambda)}, {"vartheta", num(pt->vartheta)}});
        else
            star.push_back({{"l", l}, {"exists", false}});
    }
    json vs_one = json::array();
    for (int l = 2; l <= k - 1; ++l) {
        const auto& pt = table.vs_one[l - 2];
        vs_one.push_back({{"l", l}, {"lambda", num(pt.lambda)}, {"vartheta", num(pt.vartheta)}});
    }
    const json doc{{"command", "critical"},
                   {"dist", model.descriptor()},
                   {"k", k},
                   {"hat_lambda", num(table.hat_lambda)},
                   {"lambda_lower", num(table.lower)},
                   {"lambda_upper", num(table.upper)},
                   {"star", star},
                   {"vs_one", vs_one}};
    write_output(out, doc.dump(2));
    return 0;
}

int cmd_phase(const std::string& dist, int k, double d, const std::string& grid_spec,
              const std::string& format, const std::string& out) {
    const auto model = MessageLengthModel::parse(dist);
    const auto grid = parse_grid(grid_spec);
    const auto diagram = phase_sweep(model, k, d, grid);
    if (format == "json") {
        json rows = json::array();
        for (const auto& row : diagram.rows) {
            json js = json::array();
            for (const auto& e : row.entries)
                js.push_back(e.feasible ? json(num(e.rate_value)) : json(nullptr));
            rows.push_back({{"lambda", num(row.lambda)}, {"l_opt", row.l_opt}, {"J", js}});
        }
        const json doc{{"command", "phase"},
                       {"dist", model.descriptor()},
                       {"k", k},
                       {"d", num(d)},
                       {"rows", rows}};
        write_output(out, doc.dump(2));
        return 0;
    }
    std::string text = "lambda,l_opt";
    for (int l = 1; l <= k; ++l) text += ",J_" + std::to_string(l);
    text += "\n";
    char buf[40];
    for (const auto& row : diagram.rows) {
        std::snprintf(buf, sizeof buf, "%.9g", row.lambda);
        text += buf;
        text += "," + std::to_string(row.l_opt);
        for (const auto& e : row.entries) {
            text += ",";
            if (e.feasible) {
                std::snprintf(buf, sizeof buf, "%.9g", e.rate_value);
                text += buf;
            }
        }
        text += "\n";
    }
    write_output(out, text);
    return 0;
}

int cmd_route(const std::string& slopes_spec, const std::string& subset, double tol,
              const std::string& out) {
    const auto slopes = parse_slopes(slopes_spec);
    json doc{{"command", "route"}, {"slopes", loads_json(slopes)}};
    RoutingSolution sol;
    if (subset.empty()) {
        sol = solve_ring(slopes);
        doc["mode"] = "ring";
        doc["balanced"] = is_balanced_ring(slopes, tol);
        json sets = json::array();
        for (const auto& arc : maximal_balanced_sets(Configuration{slopes, 1.0}, tol)) {
            const int last = (arc.first + arc.length - 1) % static_cast<int>(slopes.size());
            sets.push_back({{"first", arc.first + 1},
                            {"length", arc.length},
                            {"flows",
                             "f" + std::to_string(arc.first + 1) + "..f" + std::to_string(last + 1)}});
        }
        doc["maximal_balanced_sets"] = sets;
    } else {
        const auto arc = subset_slopes(slopes, subset);
        sol = solve_arc(arc);
        doc["mode"] = "arc";
        doc["subset"] = subset;
        doc["balanced"] = is_balanced(arc, tol);
    }
    doc["D"] = num(sol.imbalance);
    doc["b"] = loads_json(sol.server_loads);
    doc["alpha"] = loads_json(sol.splits);
    write_output(out, doc.dump(2));
    return 0;
}

int cmd_simulate(const std::string& dist, int k, double lambda, double d, int n, int trials,
                 std::uint64_t seed, double warmup, int tilt_l, double tilt_theta, double window,
                 double census_eps, double census_amin, const std::string& event_log,
                 const std::string& out) {
    const auto model = MessageLengthModel::parse(dist);
    const NetworkParams params(k, lambda, d, model);
    SimConfig cfg{params, n, trials, seed};
    cfg.warmup = warmup;
    cfg.window = window;
    cfg.collect_census = true;
    cfg.census_epsilon = census_eps;
    cfg.census_min_slope = census_amin;
    if (tilt_l > 0) cfg.tilt = TiltConfig{tilt_l, tilt_theta};

    const auto res = estimate_overload(cfg);

    json doc{{"command", "simulate"},
             {"dist", model.descriptor()},
             {"k", k},
             {"lambda", num(lambda)},
             {"d", num(d)},
             {"n", n},
             {"trials", trials},
             {"seed", seed},
             {"level", num(res.level)},
             {"window", num(res.window)},
             {"hits", res.hits},
             {"omega_mean", num(res.omega.empty()
                                    ? 0.0
                                    : std::accumulate(res.omega.begin(), res.omega.end(), 0.0) /
                                          res.omega.size())},
             {"p_hat", num(res.p_hat)},
             {"log_p_hat", num(res.log_p_hat)},
             {"rel_se", num(res.rel_se)},
             {"empirical_rate", num(res.empirical_rate)}};
    if (res.hits > 0 && std::isfinite(res.rel_se)) {
        const double se = res.p_hat * res.rel_se;
        doc["ci95"] = {num(std::max(0.0, res.p_hat - 1.96 * se)), num(res.p_hat + 1.96 * se)};
    }
    if (cfg.tilt)
        doc["tilt"] = {{"flows", cfg.tilt->flows}, {"theta", num(cfg.tilt->theta)}};
    else
        doc["tilt"] = nullptr;

    try {
        const auto rep = scenario(params);
        doc["prediction"] = {{"l_opt", rep.l_opt}, {"J", num(rate_J(params, rep.l_opt))}};
    } catch (const std::exception&) {
        doc["prediction"] = nullptr;
    }

    if (res.census) {
        json flows = json::array();
        for (const auto& f : res.census->flows)
            flows.push_back({{"slope_freq", num(f.slope_freq)},
                             {"overheat_freq", num(f.overheat_freq)},
                             {"mean_slope", num(f.mean_slope)}});
        doc["census"] = {{"hits", res.census->hits},
                         {"solitary_freq", num(res.census->solitary_freq)},
                         {"collective_freq", num(res.census->collective_freq)},
                         {"mean_overheat_count", num(res.census->mean_overheat_count)},
                         {"flows", flows}};
    } else {
        doc["census"] = nullptr;
    }

    if (!event_log.empty()) {
        // replay replica 0 and dump its window arrivals
        RingNetwork net(params, seed, 0);
        const double rho = lambda * model.mean();
        const double wu = warmup >= 0.0 ? warmup : (rho < 1.0 ? 50.0 / (1.0 - rho) : 0.0);
        net.advance_to(wu);
        std::vector<ArrivalRecord> log;
        net.set_event_log(&log);
        if (cfg.tilt) {
            const double th =
                cfg.tilt->theta > 0.0
                    ? cfg.tilt->theta
                    : (cfg.tilt->flows == k ? solve_theta_star(model, lambda)
                                            : solve_theta_l(model, lambda, cfg.tilt->flows));
            for (int f = 0; f < cfg.tilt->flows; ++f) net.set_tilt(f, th);
        }
        net.advance_to(wu + res.window);
        std::ofstream os(event_log);
        if (!os) throw std::runtime_error("cannot open event log " + event_log);
        os << "t,flow,server,length,w_before_min\n";
        char buf[160];
        for (const auto& rec : log) {
            std::snprintf(buf, sizeof buf, "%.9g,%d,%d,%.9g,%.9g\n", rec.t, rec.flow + 1,
                          rec.server + 1, rec.length, rec.w_before_min);
            os << buf;
        }
    }

    write_output(out, doc.dump(2));
    return 0;
}

struct ReproRow {
    std::string name;
    double computed;
    double expected;
};

int cmd_reproduce(double tol, const std::string& format, const std::string& out) {
    const auto exp1 = MessageLengthModel::exponential(1.0);
    const auto mix = MessageLengthModel::mixture(1.0, 0.5);
    const auto det1 = MessageLengthModel::deterministic(1.0);
    std::vector<ReproRow> rows;

    for (int k : {3, 4, 5, 10}) {
        const double closed = (k - 2.0) / (k - 1.0);
        rows.push_back(
            {"exp(c=1) k=" + std::to_string(k) + " lambda_k", lambda_lower(exp1, k), closed});
        rows.push_back(
            {"exp(c=1) k=" + std::to_string(k) + " lambda^k", lambda_upper(exp1, k), closed});
    }
    rows.push_back({"mix(c=1,g=0.5) hat_lambda", mix.hat_lambda(), 0.75});
    rows.push_back({"mix(c=1,g=0.5) k=3 lambda*_{3,1}", lambda_star_kl(mix, 3, 1).lambda, 0.418});

    rows.push_back({"det(c=1) k=3 lambda_k", lambda_lower(det1, 3), 0.311});
    rows.push_back({"det(c=1) k=5 lambda_k", lambda_lower(det1, 5), 0.667});
    rows.push_back({"det(c=1) k=10 lambda_k", lambda_lower(det1, 10), 0.857});
    rows.push_back({"det(c=1) k=12 lambda_k", lambda_lower(det1, 12), 0.883});
    for (int k = 13; k <= 35; ++k)
        rows.push_back({"det(c=1) k=" + std::to_string(k) + " lambda_k (= lambda_{2,1})",
                        lambda_lower(det1, k), 0.888});
    rows.push_back({"det(c=1) lambda_{3,2}", lambda_l2l1(det1, 3, 2).lambda, 0.956});
    rows.push_back({"det(c=1) k=15 lambda^k", lambda_upper(det1, 15), 0.910});
    rows.push_back({"det(c=1) k=20 lambda^k", lambda_upper(det1, 20), 0.935});
    rows.push_back({"det(c=1) k=25 lambda^k", lambda_upper(det1, 25), 0.940});
    rows.push_back({"det(c=1) k=30 lambda^k", lambda_upper(det1, 30), 0.959});
    rows.push_back({"det(c=1) k=35 lambda^k", lambda_upper(det1, 35), 0.965});

    int failed = 0;
    json jrows = json::array();
    std::string csv = "name,computed,expected,abs_error,tol,pass\n";
    for (const auto& row : rows) {
        const double err = std::abs(row.computed - row.expected);
        const bool pass = err <= tol;
        failed += pass ? 0 : 1;
        jrows.push_back({{"name", row.name},
                         {"computed", num(row.computed)},
                         {"expected", num(row.expected)},
                         {"abs_error", num(err)},
                         {"tol", num(tol)},
                         {"pass", pass}});
        char buf[240];
        std::snprintf(buf, sizeof buf, "\"%s\",%.9g,%.9g,%.3g,%.3g,%s\n", row.name.c_str(),
                      row.computed, row.expected, err, tol, pass ? "true" : "false");
        csv += buf;
    }
    const json doc{{"command", "reproduce"},
                   {"tolerance", num(tol)},
                   {"rows", jrows},
                   {"passed", static_cast<int>(rows.size()) - failed},
                   {"failed", failed}};
    write_output(out, format == "csv" ? csv : doc.dump(2));
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"overload scenarios on a ring of join-lesser-workload servers"};
    app.require_subcommand(1);

    std::string dist = "exp:c=1", out, format, grid, slopes, subset, event_log, config_path;
    int k = 3, n = 1, trials = 10000, tilt_l = 0;
    double lambda = 0.5, d = 1.0, warmup = -1.0, window = -1.0;
    double tilt_theta = 0.0, tol = 0.002, route_tol = 1e-9;
    double census_eps = 0.1, census_amin = 1.0;
    std::uint64_t seed = 1;

    // A JSON run config seeds the defaults; explicit flags still override it.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--config") == 0) {
            config_path = argv[i + 1];
            break;
        }
    }
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) {
            std::cerr << "error: cannot open config file " << config_path << "\n";
            return 1;
        }
        json cfg;
        try {
            is >> cfg;
        } catch (const std::exception& err) {
            std::cerr << "error: bad config file: " << err.what() << "\n";
            return 1;
        }
        auto load = [&cfg](const char* key, auto& into) {
            if (cfg.contains(key)) into = cfg[key].get<std::decay_t<decltype(into)>>();
        };
        load("dist", dist);
        load("k", k);
        load("lambda", lambda);
        load("d", d);
        load("n", n);
        load("trials", trials);
        load("seed", seed);
        load("warmup", warmup);
        load("window", window);
        load("tilt", tilt_l);
        load("theta", tilt_theta);
        load("grid", grid);
        load("slopes", slopes);
        load("subset", subset);
        load("tol", tol);
        load("route_tol", route_tol);
        load("census_eps", census_eps);
        load("census_amin", census_amin);
        load("format", format);
        load("out", out);
        load("event_log", event_log);
    }

    auto* analyze = app.add_subcommand("analyze", "scenario rates J(lambda,l) and optimal profiles");
    analyze->add_option("--dist", dist, "model descriptor exp:c=..|mix:c=..,g=..|det:c=..")
        ->required(config_path.empty());
    analyze->add_option("--k", k, "ring size")->required(config_path.empty());
    analyze->add_option("--lambda", lambda, "per-flow arrival rate")->required(config_path.empty());
    analyze->add_option("--d", d, "delay threshold");
    analyze->add_option("--out", out, "output path (default stdout)");

    auto* critical = app.add_subcommand("critical", "critical input rates for one (model, k)");
    critical->add_option("--dist", dist)->required(config_path.empty());
    critical->add_option("--k", k)->required(config_path.empty());
    critical->add_option("--out", out);

    auto* phase = app.add_subcommand("phase", "scenario map over a lambda grid");
    phase->add_option("--dist", dist)->required(config_path.empty());
    phase->add_option("--k", k)->required(config_path.empty());
    phase->add_option("--d", d);
    phase->add_option("--grid", grid, "lambda grid start:stop:step")->required(config_path.empty());
    phase->add_option("--format", format, "csv (default) or json");
    phase->add_option("--out", out);

    auto* route = app.add_subcommand("route", "optimal work split for a slope configuration");
    route->add_option("--slopes", slopes, "comma-separated flow slopes")->required(config_path.empty());
    route->add_option("--subset", subset, "connected arc i..j (1-based, may wrap)");
    route->add_option("--tol", route_tol, "balance tolerance");
    route->add_option("--out", out);

    auto* simulate = app.add_subcommand("simulate", "estimate Pr(omega_1 >= n d) by simulation");
    simulate->add_option("--dist", dist)->required(config_path.empty());
    simulate->add_option("--k", k)->required(config_path.empty());
    simulate->add_option("--lambda", lambda)->required(config_path.empty());
    simulate->add_option("--d", d);
    simulate->add_option("--n", n, "scaling level")->required(config_path.empty());
    simulate->add_option("--trials", trials, "replica count");
    simulate->add_option("--seed", seed, "master RNG seed");
    simulate->add_option("--warmup", warmup, "warm-up time (default 50/(1-rho))");
    simulate->add_option("--window", window,
                         "scaled measurement window (default from the optimal profile)");
    simulate->add_option("--tilt", tilt_l, "importance-sampling scenario: tilt flows f1..fl");
    simulate->add_option("--theta", tilt_theta, "tilt parameter (default from the scenario root)");
    simulate->add_option("--census-eps", census_eps, "census band tolerance");
    simulate->add_option("--census-amin", census_amin, "census overheat slope threshold");
    simulate->add_option("--event-log", event_log, "CSV arrival log of replica 0");
    simulate->add_option("--out", out);

    auto* reproduce = app.add_subcommand("reproduce", "recompute the reference critical-rate table");
    reproduce->add_option("--tol", tol, "pass tolerance (default 0.002)");
    reproduce->add_option("--format", format, "json (default) or csv");
    reproduce->add_option("--out", out);

    for (auto* cmd : {analyze, critical, phase, route, simulate, reproduce})
        cmd->add_option("--config", config_path, "JSON run config; explicit flags override it");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(dist, k, lambda, d, out);
        if (app.got_subcommand(critical)) return cmd_critical(dist, k, out);
        if (app.got_subcommand(phase))
            return cmd_phase(dist, k, d, grid, format.empty() ? "csv" : format, out);
        if (app.got_subcommand(route)) return cmd_route(slopes, subset, route_tol, out);
        if (app.got_subcommand(simulate))
            return cmd_simulate(dist, k, lambda, d, n, trials, seed, warmup, tilt_l, tilt_theta,
                                window, census_eps, census_amin, event_log, out);
        if (app.got_subcommand(reproduce)) return cmd_reproduce(tol, format, out);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
