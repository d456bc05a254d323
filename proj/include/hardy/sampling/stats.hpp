// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "hardy/errors.hpp"

namespace hardy::sampling {

/// Two-sided normal critical value z with P(|Z| <= z) = confidence.
inline double normal_critical_value(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * confidence);
}

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for k successes in n trials.
inline Interval wilson_interval(std::uint64_t k, std::uint64_t n, double confidence = 0.95) {
    if (n == 0) return {0.0, 1.0};
    if (k > n) throw DomainError("wilson_interval: k exceeds n");
    const double z = normal_critical_value(confidence);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Binomial variance of a frequency estimate, kept positive at k = 0 and
/// k = n by the add-half adjustment.
inline double frequency_variance(std::uint64_t k, std::uint64_t n) {
    if (n == 0) return 0.25;
    const double p = (static_cast<double>(k) + 0.5) / (static_cast<double>(n) + 1.0);
    return p * (1.0 - p) / static_cast<double>(n);
}

}  // namespace hardy::sampling
