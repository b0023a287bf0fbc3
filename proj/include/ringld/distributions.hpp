#pragma once

#include <string>
#include <string_view>

#include "ringld/rng.hpp"

namespace ringld {

enum class LengthLaw { Exponential, TwoPhaseMixture, Deterministic };

/// Legendre transform value sup_theta {theta*a - lambda*(phi(theta)-1)} and its maximizer.
struct LegendreResult {
    double value;
    double theta;
};

/// Message-length law with its exponential-moment machinery: MGF phi, derivative,
/// domain boundary theta_plus, Legendre transform, and (tilted) sampling.
///
/// Built-in laws:
///   Exponential(c)        density c e^{-cx};              phi = c/(c-theta),        theta_plus = c
///   TwoPhaseMixture(c,g)  half-half mix of Exp(c+g), Exp(c-g);
///                         phi - 1 = theta(c-theta)/((c-theta)^2 - g^2), theta_plus = c - g
///   Deterministic(c)      point mass at 1/c;              phi = e^{theta/c},        theta_plus = inf
class MessageLengthModel {
  public:
    static MessageLengthModel exponential(double c);
    static MessageLengthModel mixture(double c, double g);
    static MessageLengthModel deterministic(double c);

    /// Parse a textual descriptor: exp:c=<v> | mix:c=<v>,g=<v> | det:c=<v>.
    static MessageLengthModel parse(std::string_view descriptor);
    std::string descriptor() const;

    LengthLaw law() const { return law_; }
    double c() const { return c_; }
    double g() const { return g_; }

    /// Boundary of the MGF domain (+inf for the deterministic law).
    double theta_plus() const;

    /// E e^{theta xi}; DomainError for theta >= theta_plus.
    double mgf(double theta) const { return 1.0 + mgf_m1(theta); }

    /// phi(theta) - 1 in a cancellation-free closed form (exact 0 at theta = 0).
    double mgf_m1(double theta) const;

    double mgf_prime(double theta) const;

    double mean() const { return mgf_prime(0.0); }

    /// Per-flow stability boundary 1/phi'(0).
    double hat_lambda() const { return 1.0 / mean(); }

    /// Solve lambda * phi'(theta) = slope for theta (closed form for the exponential
    /// law, monotone bisection otherwise). DomainError if slope is below the mean
    /// slope lambda*phi'(0); NoRootError if slope exceeds sup lambda*phi'.
    double tilt_for_slope(double lambda, double slope) const;

    /// sup_{theta<theta_plus} {theta*slope - lambda*(phi(theta)-1)} with its maximizer,
    /// computed through the first-order condition slope = lambda*phi'(theta).
    LegendreResult legendre(double lambda, double slope) const;

    /// Draw one message length.
    double sample(SplitMix64& rng) const { return sample_tilted(rng, 0.0); }

    /// Draw from the exponentially tilted law e^{theta x} f(x) / phi(theta).
    double sample_tilted(SplitMix64& rng, double theta) const;

  private:
    MessageLengthModel(LengthLaw law, double c, double g);
    void require_in_domain(double theta) const;

    LengthLaw law_;
    double c_;
    double g_;
};

}  // namespace ringld
