#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "ringld/errors.hpp"
#include "ringld/ldp_rates.hpp"
#include "ringld/rng.hpp"

using namespace ringld;

namespace {

const MessageLengthModel kExp1 = MessageLengthModel::exponential(1.0);
const MessageLengthModel kMix = MessageLengthModel::mixture(1.0, 0.5);
const MessageLengthModel kDet1 = MessageLengthModel::deterministic(1.0);

std::vector<MessageLengthModel> builtin_models() { return {kExp1, kMix, kDet1}; }

/// Independent route to J(lambda, l): minimize over the duration T the rate of the
/// equal-slope overload of the auxiliary one-channel system, h(T) = (l+1)(d+T)/(lT),
/// using golden-section on a bracket around the analytic optimum.
double rate_oracle(const MessageLengthModel& m, double lambda, int l, int k, double d) {
    const int servers = l == k ? k : l + 1;
    auto cost = [&](double T) {
        const double h = servers * (d + T) / (l * T);
        return l * T * m.legendre(lambda, h).value;
    };
    return oracles::golden_min(cost, 1e-4, 1e4, 1e-10);
}

}  // namespace

TEST_CASE("theta(lambda,l): exponential closed form c - l*lambda/(l+1)") {
    CHECK(solve_theta_l(kExp1, 0.5, 1) == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(solve_theta_l(kExp1, 0.999999, 1) == doctest::Approx(0.5000005).epsilon(1e-6));
    for (int l : {1, 2, 3, 7}) {
        for (double lam : {0.2, 0.5, 0.9}) {
            CHECK(solve_theta_l(kExp1, lam, l) ==
                  doctest::Approx(1.0 - l * lam / (l + 1.0)).epsilon(1e-10));
        }
    }
}

TEST_CASE("theta roots collapse at the validity boundary and error beyond") {
    for (const auto& m : builtin_models()) {
        const double hat = m.hat_lambda();
        CHECK(solve_theta_l(m, 2.0 * hat * (1.0 - 1e-9), 1) < 1e-6);
        CHECK_THROWS_AS(solve_theta_l(m, 2.0 * hat, 1), NoRootError);
        CHECK(solve_theta_star(m, hat * (1.0 - 1e-9)) < 1e-6);
        CHECK_THROWS_AS(solve_theta_star(m, hat), NoRootError);
        CHECK_THROWS_AS(solve_theta_star(m, 1.1 * hat), NoRootError);
    }
}

TEST_CASE("theta*: closed form and frozen bisection value") {
    CHECK(solve_theta_star(kExp1, 0.25) == doctest::Approx(0.75).epsilon(1e-10));
    // root of theta = 0.5(e^theta - 1), frozen from an independent bisection oracle
    CHECK(solve_theta_star(kDet1, 0.5) == doctest::Approx(1.256431).epsilon(1e-5));
}

TEST_CASE("root residuals are tiny") {
    for (const auto& m : builtin_models()) {
        const double hat = m.hat_lambda();
        for (double frac : {0.1, 0.5, 0.9}) {
            const double lam = frac * hat;
            for (int l : {1, 2, 5}) {
                const double th = solve_theta_l(m, lam, l);
                const double resid = std::abs((l + 1) * th - l * lam * m.mgf_m1(th));
                CHECK(resid < 1e-10 * std::max(1.0, th));
            }
            const double ts = solve_theta_star(m, lam);
            CHECK(std::abs(ts - lam * m.mgf_m1(ts)) < 1e-10 * std::max(1.0, ts));
        }
    }
}

TEST_CASE("theta(lambda,l) and theta* decrease in lambda") {
    for (const auto& m : builtin_models()) {
        const double hat = m.hat_lambda();
        double prev_l = 1e300, prev_s = 1e300;
        for (int i = 1; i <= 50; ++i) {
            const double lam = hat * i / 51.0;
            const double tl = solve_theta_l(m, lam, 2);
            const double ts = solve_theta_star(m, lam);
            CHECK(tl < prev_l);
            CHECK(ts < prev_s);
            prev_l = tl;
            prev_s = ts;
        }
    }
}

TEST_CASE("rate_J examples and linearity in d") {
    const NetworkParams p(3, 0.25, 1.0, kExp1);
    CHECK(rate_J(p, 1) == doctest::Approx(1.75).epsilon(1e-10));
    CHECK(rate_J(p, 3) == doctest::Approx(2.25).epsilon(1e-10));
    const NetworkParams p2(3, 0.25, 2.0, kExp1);
    CHECK(rate_J(p2, 1) == doctest::Approx(2.0 * rate_J(p, 1)).epsilon(1e-12));
    CHECK(rate_J(p2, 3) == doctest::Approx(2.0 * rate_J(p, 3)).epsilon(1e-12));
}

TEST_CASE("rate_J agrees with the duration-optimization oracle") {
    struct Case {
        MessageLengthModel m;
        double lam;
    };
    const Case cases[] = {{kExp1, 0.5}, {kMix, 0.4}, {kDet1, 0.7}};
    for (const auto& cs : cases) {
        const NetworkParams p(4, cs.lam, 1.0, cs.m);
        for (int l : {1, 2, 4}) {
            const double direct = rate_J(p, l);
            const double via_T = rate_oracle(cs.m, cs.lam, l, 4, 1.0);
            CHECK(direct == doctest::Approx(via_T).epsilon(1e-6));
        }
    }
}

TEST_CASE("optimal_profile examples and the overload identity") {
    const NetworkParams p(3, 0.5, 1.0, kExp1);
    const auto full = optimal_profile(p, 3);
    CHECK(full.theta == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(full.input_slope == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(full.load_slope == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(full.duration == doctest::Approx(1.0).epsilon(1e-9));

    const auto solo = optimal_profile(p, 1);
    CHECK(solo.theta == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(solo.input_slope == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(solo.load_slope == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(solo.duration == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    for (const auto& m : builtin_models()) {
        const NetworkParams q(5, 0.6 * m.hat_lambda(), 1.7, m);
        for (int l = 1; l <= 5; ++l) {
            const auto prof = optimal_profile(q, l);
            CHECK(prof.load_slope * prof.duration - prof.duration ==
                  doctest::Approx(q.d).epsilon(1e-9));
            CHECK(prof.rate_value == doctest::Approx(rate_J(q, l)).epsilon(1e-12));
            if (l < 5) CHECK(prof.load_slope == doctest::Approx(prof.input_slope * l / (l + 1.0)));
        }
    }
}

TEST_CASE("scenario: exponential threshold at c(k-2)/(k-1) and d-invariance") {
    CHECK(scenario(NetworkParams(3, 0.4, 1.0, kExp1)).l_opt == 1);
    CHECK(scenario(NetworkParams(3, 0.6, 1.0, kExp1)).l_opt == 3);
    for (double d : {0.25, 1.0, 7.5}) {
        CHECK(scenario(NetworkParams(3, 0.4, d, kExp1)).l_opt == 1);
        CHECK(scenario(NetworkParams(3, 0.6, d, kExp1)).l_opt == 3);
        CHECK(scenario(NetworkParams(7, 0.55, d, kMix)).l_opt ==
              scenario(NetworkParams(7, 0.55, 1.0, kMix)).l_opt);
    }
    const auto rep = scenario(NetworkParams(3, 0.4, 1.0, kExp1));
    CHECK(rep.entries.size() == 3);
    for (const auto& e : rep.entries) CHECK(e.feasible);
}

TEST_CASE("J(lambda,k) < J(lambda,k-1) on a lambda grid") {
    for (const auto& m : builtin_models()) {
        const double hat = m.hat_lambda();
        for (int k : {3, 5, 10}) {
            for (int i = 1; i <= 50; ++i) {
                const NetworkParams p(k, hat * i / 51.0, 1.0, m);
                CHECK(rate_J(p, k) < rate_J(p, k - 1));
            }
        }
    }
}

TEST_CASE("configuration_rate: mean is free, single hot flow matches legendre, scales with T") {
    const double lam = 0.5;
    const double mean_slope = lam * kExp1.mgf_prime(0.0);
    Configuration rest{{mean_slope, mean_slope, mean_slope}, 1.0};
    CHECK(configuration_rate(kExp1, lam, rest) == doctest::Approx(0.0).epsilon(1e-12));

    Configuration hot{{2.0, mean_slope, mean_slope}, 1.0};
    CHECK(configuration_rate(kExp1, lam, hot) == doctest::Approx(0.5).epsilon(1e-10));

    Configuration hot3{{2.0, mean_slope, mean_slope}, 3.0};
    CHECK(configuration_rate(kExp1, lam, hot3) == doctest::Approx(1.5).epsilon(1e-10));

    Configuration bad{{0.1 * mean_slope, mean_slope, mean_slope}, 1.0};
    CHECK_THROWS_AS(configuration_rate(kExp1, lam, bad), DomainError);
}

TEST_CASE("configuration_rate equals the sum of per-flow legendre values times T") {
    for (const auto& m : builtin_models()) {
        const double lam = 0.45 * m.hat_lambda();
        const double a0 = lam * m.mgf_prime(0.0);
        Configuration cfg{{1.2 * a0, 3.0 * a0, a0, 2.2 * a0}, 0.7};
        double expected = 0.0;
        for (double a : cfg.slopes) expected += m.legendre(lam, a).value;
        expected *= cfg.duration;
        CHECK(configuration_rate(m, lam, cfg) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("balanced_set_rate: zero at mean, reduces to legendre, doubles with the set") {
    const double lam = 0.5;
    const double mean_slope = lam * kExp1.mgf_prime(0.0);
    CHECK(balanced_set_rate(kExp1, lam, mean_slope, 3, 2.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(balanced_set_rate(kExp1, lam, 2.0, 1, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(balanced_set_rate(kExp1, lam, 2.0, 2, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("equal overheating minimizes the rate among mean-preserving perturbations") {
    SplitMix64 rng = SplitMix64::stream(61, 0, 0);
    for (const auto& m : builtin_models()) {
        const double lam = 0.5 * m.hat_lambda();
        const double a0 = lam * m.mgf_prime(0.0);
        const int size = 4;
        const double h = 2.5 * a0;
        const double T = 1.3;
        const double equal_rate = balanced_set_rate(m, lam, h, size, T);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> g(size);
            double sum = 0.0;
            for (double& gi : g) {
                gi = (rng.uniform() - 0.5) * (h - a0);
                sum += gi;
            }
            Configuration cfg{{}, T};
            for (double gi : g) cfg.slopes.push_back(h + gi - sum / size);
            bool valid = true;
            for (double a : cfg.slopes) valid = valid && a > a0;
            if (!valid) continue;
            CHECK(configuration_rate(m, lam, cfg) >= equal_rate - 1e-9);
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(NetworkParams(2, 0.5, 1.0, kExp1), DimensionError);
    CHECK_THROWS_AS(NetworkParams(3, -0.5, 1.0, kExp1), DomainError);
    CHECK_THROWS_AS(rate_J(NetworkParams(3, 0.5, 1.0, kExp1), 0), DomainError);
    CHECK_THROWS_AS(rate_J(NetworkParams(3, 0.5, 1.0, kExp1), 4), DomainError);
}
