#pragma once

#include <stdexcept>
#include <string>

namespace ringld {

/// Argument outside the analytic domain (theta past the MGF pole, slope below mean, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A scalar equation has no root in the admissible range.
struct NoRootError : std::runtime_error {
    explicit NoRootError(const std::string& what) : std::runtime_error(what) {}
};

/// An overheating profile whose load slope cannot exceed the service speed.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Estimation requested for a network that is not stationary.
struct StabilityError : std::runtime_error {
    explicit StabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Too few conditioning events to report conditional frequencies.
struct InsufficientHitsError : std::runtime_error {
    explicit InsufficientHitsError(const std::string& what) : std::runtime_error(what) {}
};

/// Vector arguments of the wrong size.
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace ringld
