// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy::numerics {

/// Tolerances and budgets shared by every integrator in this module.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
    int tail_order = 8;  ///< asymptotic tail terms used by semi-infinite rules

    void validate() const {
        if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0))
            throw DomainError("QuadratureSpec: tolerances must be non-negative");
        if (abs_tol == 0.0 && rel_tol == 0.0)
            throw DomainError("QuadratureSpec: abs_tol and rel_tol cannot both be zero");
        if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
        if (tail_order < 0 || tail_order > 8) throw DomainError("QuadratureSpec: tail_order must lie in [0, 8]");
    }

    double tolerance_for(double magnitude) const { return std::max(abs_tol, rel_tol * magnitude); }
};

template <class T>
struct BasicQuadratureResult {
    T value{};
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

using QuadratureResult = BasicQuadratureResult<double>;
using ComplexQuadratureResult = BasicQuadratureResult<std::complex<double>>;

namespace detail {

// 21-point Gauss-Kronrod rule with its embedded 10-point Gauss rule
// (QUADPACK qk21 abscissae and weights).
inline constexpr std::array<double, 11> gk21_nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> gk21_kronrod_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980221119, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for nodes 1, 3, 5, 7, 9 of gk21_nodes.
inline constexpr std::array<double, 5> g10_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class T>
struct Segment {
    double a;
    double b;
    T value;
    double error;
};

template <class T>
void check_finite(const T& v) {
    if constexpr (std::is_same_v<T, double>) {
        if (!std::isfinite(v)) throw QuadratureError("integrand is not finite", v, std::numeric_limits<double>::infinity());
    } else {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw QuadratureError("integrand is not finite", std::abs(v), std::numeric_limits<double>::infinity());
    }
}

/// One application of the GK21 rule on [a, b] with the QUADPACK error heuristic.
template <class T, class F>
Segment<T> gk21(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<T, 21> fv{};
    fv[0] = f(center);
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * gk21_nodes[j];
        fv[1 + 2 * j] = f(center - dx);
        fv[2 + 2 * j] = f(center + dx);
    }
    for (const auto& v : fv) check_finite(v);

    T kronrod = fv[0] * gk21_kronrod_weights[10];
    T gauss{};
    double resabs = std::abs(fv[0]) * gk21_kronrod_weights[10];
    for (std::size_t j = 0; j < 10; ++j) {
        const T pair = fv[1 + 2 * j] + fv[2 + 2 * j];
        kronrod += gk21_kronrod_weights[j] * pair;
        resabs += gk21_kronrod_weights[j] * (std::abs(fv[1 + 2 * j]) + std::abs(fv[2 + 2 * j]));
        if (j % 2 == 1) gauss += g10_weights[j / 2] * pair;
    }
    const T mean = kronrod * 0.5;
    double resasc = gk21_kronrod_weights[10] * std::abs(fv[0] - mean);
    for (std::size_t j = 0; j < 10; ++j)
        resasc += gk21_kronrod_weights[j] * (std::abs(fv[1 + 2 * j] - mean) + std::abs(fv[2 + 2 * j] - mean));

    const double scale = std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    resabs *= scale;
    resasc *= scale;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, kronrod * half, err};
}

template <class T>
struct WorstFirst {
    bool operator()(const Segment<T>& l, const Segment<T>& r) const {
        if (l.error != r.error) return l.error < r.error;
        return l.a > r.a;  // deterministic tie-break
    }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (21-point) quadrature on [a, b].
///
/// Bisects the segment with the largest error estimate until the total
/// estimate drops below max(abs_tol, rel_tol*|value|). Endpoints are never
/// evaluated, so integrable endpoint singularities (log, x^-1/2) are fine.
/// The integrand may return double or std::complex<double>.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    using T = std::decay_t<decltype(f(a))>;
    spec.validate();
    if (!(a < b)) throw DomainError("integrate_adaptive: requires a < b");

    std::vector<detail::Segment<T>> heap;
    std::vector<detail::Segment<T>> frozen;
    heap.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
    heap.push_back(detail::gk21<T>(f, a, b));
    std::size_t evaluations = 21;

    T total = heap.front().value;
    double total_err = heap.front().error;
    const detail::WorstFirst<T> cmp;
    int segments = 1;

    auto finalize = [&]() {
        // Deterministic re-summation ordered by left endpoint.
        std::vector<detail::Segment<T>> all = heap;
        all.insert(all.end(), frozen.begin(), frozen.end());
        std::sort(all.begin(), all.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
        T v{};
        double e = 0.0;
        for (const auto& s : all) {
            v += s.value;
            e += s.error;
        }
        return BasicQuadratureResult<T>{v, e, evaluations};
    };

    while (total_err > spec.tolerance_for(std::abs(total))) {
        if (heap.empty() || segments >= spec.max_subdivisions) {
            const auto best = finalize();
            throw QuadratureError("integrate_adaptive: tolerance not reached after " + std::to_string(segments) +
                                      " subdivisions",
                                  std::abs(best.value), best.error_estimate);
        }
        std::pop_heap(heap.begin(), heap.end(), cmp);
        const auto worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        constexpr double eps = std::numeric_limits<double>::epsilon();
        if ((worst.b - worst.a) <= 1e3 * eps * std::max({std::abs(worst.a), std::abs(worst.b), 1e-300})) {
            frozen.push_back(worst);
            continue;
        }
        auto left = detail::gk21<T>(f, worst.a, mid);
        auto right = detail::gk21<T>(f, mid, worst.b);
        evaluations += 42;
        total += (left.value + right.value) - worst.value;
        total_err += (left.error + right.error) - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), cmp);
        ++segments;
    }
    return finalize();
}

/// int_a^inf f(x) dx through x = a + t/(1-t), for integrands decaying
/// faster than 1/x. Heavy 1/x^2 tails belong in integrate_semi_infinite_with_tail.
template <class F>
auto integrate_half_line(F&& f, double a, const QuadratureSpec& spec = {}) {
    auto mapped = [&](double t) {
        const double one_minus = 1.0 - t;
        const double x = a + t / one_minus;
        return f(x) * (1.0 / (one_minus * one_minus));
    };
    return integrate_adaptive(mapped, 0.0, 1.0, spec);
}

}  // namespace hardy::numerics
