// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Pointwise evaluation requested at an integrable singularity.
class SingularPointError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Quadrature did not reach the requested tolerance. Carries the best
/// estimate available when the budget ran out.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double best, double error_estimate)
        : std::runtime_error(what), best_(best), error_(error_estimate) {}

    double best() const noexcept { return best_; }
    double error_estimate() const noexcept { return error_; }

private:
    double best_;
    double error_;
};

/// Grid resolution insufficient for the requested accuracy.
class GridResolutionError : public std::runtime_error {
public:
    GridResolutionError(const std::string& what, double estimated_error)
        : std::runtime_error(what), estimated_(estimated_error) {}

    double estimated_error() const noexcept { return estimated_; }

private:
    double estimated_;
};

/// Malformed configuration, schema mismatch or missing input.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sampler misconfiguration (e.g. proposal with negligible acceptance).
class SamplerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hardy
