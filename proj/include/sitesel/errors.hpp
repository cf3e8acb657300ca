#pragma once

#include <stdexcept>
#include <string>

namespace sitesel {

/// Input violates a documented precondition (bad coordinate, bad k, shape mismatch...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A cluster has no members where the caller needs at least one.
class EmptyClusterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dunn index denominator is zero, or no run in a sweep produced a usable score.
class DegenerateClusteringError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every k in a sweep was unscored.
class SweepError : public DegenerateClusteringError {
public:
    using DegenerateClusteringError::DegenerateClusteringError;
};

/// Malformed survey input (missing columns, or any row diagnostic under strict parsing).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sitesel
