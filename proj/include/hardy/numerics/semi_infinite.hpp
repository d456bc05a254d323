// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hardy/numerics/quadrature.hpp"

namespace hardy::numerics {

/// Large-x behaviour f(x) ~ sum_k coefficients[k] * x^{-2-k} beyond `cutoff`.
struct AsymptoticTail {
    std::vector<double> coefficients;
    double cutoff = 0.0;  ///< <= a selects a + 50
};

/// int_a^inf f(x) dx as adaptive quadrature on [a, X] plus the term-by-term
/// integral of the asymptotic series on [X, inf).
///
/// The first min(spec.tail_order, coefficients.size()) terms are used. The
/// remainder of the series at X is estimated from the mismatch between f(X)
/// and the truncated series and added to the error estimate.
template <class F>
QuadratureResult integrate_semi_infinite_with_tail(F&& f, double a, const AsymptoticTail& tail,
                                                   const QuadratureSpec& spec = {}) {
    spec.validate();
    const std::size_t terms = std::min<std::size_t>(static_cast<std::size_t>(spec.tail_order), tail.coefficients.size());
    if (terms == 0 && spec.rel_tol < 1e-6)
        throw std::invalid_argument("integrate_semi_infinite_with_tail: empty tail cannot reach rel_tol < 1e-6");
    const double cutoff = tail.cutoff > a ? tail.cutoff : a + 50.0;
    if (!(cutoff > 0.0)) throw DomainError("integrate_semi_infinite_with_tail: cutoff must be positive");

    auto body = integrate_adaptive(f, a, cutoff, spec);

    double tail_integral = 0.0;
    double series_at_cutoff = 0.0;
    for (std::size_t k = 0; k < terms; ++k) {
        const double c = tail.coefficients[k];
        const double order = static_cast<double>(k) + 1.0;
        tail_integral += c * std::pow(cutoff, -order) / order;
        series_at_cutoff += c * std::pow(cutoff, -order - 1.0);
    }
    const double mismatch = f(cutoff) - series_at_cutoff;
    const double remainder = std::abs(mismatch) * cutoff / (static_cast<double>(terms) + 1.0);

    return {body.value + tail_integral, body.error_estimate + remainder, body.evaluations + 1};
}

template <class F>
QuadratureResult integrate_semi_infinite_with_tail(F&& f, double a, const std::vector<double>& coefficients,
                                                   const QuadratureSpec& spec = {}) {
    return integrate_semi_infinite_with_tail(std::forward<F>(f), a, AsymptoticTail{coefficients, 0.0}, spec);
}

}  // namespace hardy::numerics
