#include "ringld/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ringld/detail/roots.hpp"
#include "ringld/errors.hpp"

namespace ringld {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_field(std::string_view text, std::string_view key) {
    const auto pos = text.find(key);
    if (pos == std::string_view::npos)
        throw DomainError("model descriptor missing field '" + std::string(key) + "'");
    const char* begin = text.data() + pos + key.size();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) throw DomainError("model descriptor has malformed number after '" + std::string(key) + "'");
    return value;
}

}  // namespace

MessageLengthModel::MessageLengthModel(LengthLaw law, double c, double g) : law_(law), c_(c), g_(g) {
    if (!(c > 0.0)) throw DomainError("length model requires c > 0");
    if (law == LengthLaw::TwoPhaseMixture && !(g >= 0.0 && g < c))
        throw DomainError("two-phase mixture requires 0 <= g < c");
}

MessageLengthModel MessageLengthModel::exponential(double c) {
    return MessageLengthModel(LengthLaw::Exponential, c, 0.0);
}

MessageLengthModel MessageLengthModel::mixture(double c, double g) {
    return MessageLengthModel(LengthLaw::TwoPhaseMixture, c, g);
}

MessageLengthModel MessageLengthModel::deterministic(double c) {
    return MessageLengthModel(LengthLaw::Deterministic, c, 0.0);
}

MessageLengthModel MessageLengthModel::parse(std::string_view descriptor) {
    if (descriptor.rfind("exp:", 0) == 0) return exponential(parse_field(descriptor, "c="));
    if (descriptor.rfind("mix:", 0) == 0)
        return mixture(parse_field(descriptor, "c="), parse_field(descriptor, "g="));
    if (descriptor.rfind("det:", 0) == 0) return deterministic(parse_field(descriptor, "c="));
    throw DomainError("unknown model descriptor '" + std::string(descriptor) +
                      "' (expected exp:c=..., mix:c=...,g=..., det:c=...)");
}

std::string MessageLengthModel::descriptor() const {
    char buf[96];
    switch (law_) {
        case LengthLaw::Exponential: std::snprintf(buf, sizeof buf, "exp:c=%.17g", c_); break;
        case LengthLaw::TwoPhaseMixture: std::snprintf(buf, sizeof buf, "mix:c=%.17g,g=%.17g", c_, g_); break;
        case LengthLaw::Deterministic: std::snprintf(buf, sizeof buf, "det:c=%.17g", c_); break;
    }
    return buf;
}

double MessageLengthModel::theta_plus() const {
    switch (law_) {
        case LengthLaw::Exponential: return c_;
        case LengthLaw::TwoPhaseMixture: return c_ - g_;
        case LengthLaw::Deterministic: return kInf;
    }
    return kInf;
}

void MessageLengthModel::require_in_domain(double theta) const {
    if (!(theta < theta_plus()))
        throw DomainError("theta = " + std::to_string(theta) + " is outside the MGF domain [0, " +
                          std::to_string(theta_plus()) + ")");
}

double MessageLengthModel::mgf_m1(double theta) const {
    require_in_domain(theta);
    switch (law_) {
        case LengthLaw::Exponential:
            return theta / (c_ - theta);
        case LengthLaw::TwoPhaseMixture: {
            const double s = c_ - theta;
            return theta * s / (s * s - g_ * g_);
        }
        case LengthLaw::Deterministic:
            return std::expm1(theta / c_);
    }
    return 0.0;
}

double MessageLengthModel::mgf_prime(double theta) const {
    require_in_domain(theta);
    switch (law_) {
        case LengthLaw::Exponential: {
            const double s = c_ - theta;
            return c_ / (s * s);
        }
        case LengthLaw::TwoPhaseMixture: {
            const double sp = c_ + g_ - theta;
            const double sm = c_ - g_ - theta;
            return 0.5 * ((c_ + g_) / (sp * sp) + (c_ - g_) / (sm * sm));
        }
        case LengthLaw::Deterministic:
            return std::exp(theta / c_) / c_;
    }
    return 0.0;
}

double MessageLengthModel::tilt_for_slope(double lambda, double slope) const {
    if (!(lambda > 0.0)) throw DomainError("tilt_for_slope requires lambda > 0");
    const double mean_slope = lambda * mean();
    if (slope < mean_slope * (1.0 - 1e-12))
        throw DomainError("slope " + std::to_string(slope) + " below the mean slope " +
                          std::to_string(mean_slope));
    if (slope <= mean_slope) return 0.0;

    if (law_ == LengthLaw::Exponential) {
        // lambda*c/(c-theta)^2 = slope
        return c_ - std::sqrt(lambda * c_ / slope);
    }

    const double tp = theta_plus();
    const double cap = std::isfinite(tp) ? tp - detail::domain_margin(tp) : 700.0 * c_;
    auto fn = [&](double th) { return lambda * mgf_prime(th) - slope; };
    const double hi = detail::expand_bracket(fn, std::min(1.0, 0.5 * cap), cap);
    if (std::isnan(hi))
        throw NoRootError("slope " + std::to_string(slope) + " exceeds the attainable tilted slopes");
    return detail::bisect_increasing(fn, 0.0, hi, 1e-14);
}

LegendreResult MessageLengthModel::legendre(double lambda, double slope) const {
    const double theta = tilt_for_slope(lambda, slope);
    return {theta * slope - lambda * mgf_m1(theta), theta};
}

double MessageLengthModel::sample_tilted(SplitMix64& rng, double theta) const {
    require_in_domain(theta);
    switch (law_) {
        case LengthLaw::Exponential:
            return rng.exponential(c_ - theta);
        case LengthLaw::TwoPhaseMixture: {
            // Tilting keeps the two-phase structure; only the weights and rates move.
            const double rp = c_ + g_ - theta;
            const double rm = c_ - g_ - theta;
            const double wp = 0.5 * (c_ + g_) / rp;
            const double wm = 0.5 * (c_ - g_) / rm;
            return rng.uniform() * (wp + wm) <= wp ? rng.exponential(rp) : rng.exponential(rm);
        }
        case LengthLaw::Deterministic:
            return 1.0 / c_;
    }
    return 0.0;
}

}  // namespace ringld
