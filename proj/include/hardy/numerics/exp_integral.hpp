// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy::numerics {

namespace detail {

/// Ei(-t) for t > 0 from the convergent series
///   Ei(-t) = gamma + ln t + sum_{k>=1} (-t)^k / (k k!).
/// Accurate to ~1e-14 absolute for t <= 8; cancellation grows beyond that.
inline double ei_negative_series(double t) {
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 500; ++k) {
        term *= -t / k;
        const double contrib = term / k;
        sum += contrib;
        if (std::abs(contrib) <= 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return std::numbers::egamma + std::log(t) + sum;
}

/// e^t E1(t) for t > 0 by the continued fraction
///   E1(t) = e^{-t} / (t + 1 - 1/(t + 3 - 4/(t + 5 - ...)))
/// evaluated with the modified Lentz algorithm. Converges for every t > 0,
/// slowly below t ~ 1.
inline double scaled_e1_continued_fraction(double t) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double b = t + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace detail

/// Argument magnitude beyond which Ei(x) underflows to -0.0.
inline constexpr double ei_underflow_threshold = 745.0;

/// Crossover |x| between the series branch and the continued fraction. The
/// series loses relative accuracy to cancellation above ~1 (1e-12 by |x| = 6).
inline constexpr double ei_branch_crossover = 1.0;

/// Exponential integral Ei(x) on the negative axis,
/// Ei(x) = -int_{-x}^inf e^{-t}/t dt for x < 0.
///
/// Power series for |x| <= 1, continued fraction beyond. Returns -0.0 once
/// |x| exceeds ei_underflow_threshold. Throws DomainError for x >= 0 or NaN.
inline double exp_integral_ei(double x) {
    if (!(x < 0.0)) throw DomainError("exp_integral_ei: argument must be negative");
    const double t = -x;
    if (t > ei_underflow_threshold) return -0.0;
    if (t <= ei_branch_crossover) return detail::ei_negative_series(t);
    return -std::exp(-t) * detail::scaled_e1_continued_fraction(t);
}

/// e^{t} E1(t) = -e^{t} Ei(-t) for t > 0, finite for every t (tends to 1/t).
inline double scaled_exp_integral_e1(double t) {
    if (!(t > 0.0)) throw DomainError("scaled_exp_integral_e1: argument must be positive");
    if (t <= ei_branch_crossover) return -std::exp(t) * detail::ei_negative_series(t);
    return detail::scaled_e1_continued_fraction(t);
}

/// e^{-t} Ei(t) for t > 0, with Ei the principal value. Series
/// Ei(t) = gamma + ln t + sum t^k / (k k!) (all terms positive) up to t = 40,
/// the asymptotic sum k! / t^{k+1} beyond.
inline double scaled_exp_integral_ei_positive(double t) {
    if (!(t > 0.0)) throw DomainError("scaled_exp_integral_ei_positive: argument must be positive");
    if (t > 40.0) {
        double sum = 0.0, term = 1.0 / t;
        for (int k = 0; k < 60 && term > 1e-18 * sum; ++k) {
            sum += term;
            term *= (k + 1) / t;
        }
        return sum;
    }
    double sum = 0.0, power = 1.0;
    for (int k = 1; k < 200; ++k) {
        power *= t / k;
        const double term = power / k;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return std::exp(-t) * (std::numbers::egamma + std::log(t) + sum);
}

/// Coefficients c_k of (e^{x} E1(x))^2 ~ sum_k c_k x^{-2-k} as x -> inf,
/// from e^{x}E1(x) ~ sum_n (-1)^n n! x^{-n-1}.
inline std::vector<double> squared_scaled_e1_tail(int terms) {
    std::vector<double> fact(static_cast<std::size_t>(terms) + 1, 1.0);
    for (int i = 1; i <= terms; ++i) fact[i] = fact[i - 1] * i;
    std::vector<double> c(static_cast<std::size_t>(terms), 0.0);
    for (int k = 0; k < terms; ++k) {
        double s = 0.0;
        for (int i = 0; i <= k; ++i) s += fact[i] * fact[k - i];
        c[k] = (k % 2 == 0) ? s : -s;
    }
    return c;
}

}  // namespace hardy::numerics
