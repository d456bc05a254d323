// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "hardy/numerics/quadrature.hpp"

namespace hardy::numerics {

struct Extrapolation {
    double value = 0.0;
    double error = std::numeric_limits<double>::infinity();
};

/// Wynn epsilon-algorithm limit of a sequence of partial sums. Uses at most
/// the last `window` entries.
inline Extrapolation wynn_epsilon(const std::vector<double>& partial_sums, std::size_t window = 40) {
    const std::size_t n = std::min(partial_sums.size(), window);
    if (n == 0) return {};
    if (n < 3) return {partial_sums.back(), std::numeric_limits<double>::infinity()};
    const auto first = partial_sums.end() - static_cast<std::ptrdiff_t>(n);
    std::vector<double> prev(n, 0.0);  // column k-1
    std::vector<double> cur(first, partial_sums.end());  // column k
    double best = cur.back();
    double previous_best = cur[n - 2];
    for (std::size_t k = 0; cur.size() > 1; ++k) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
            const double diff = cur[j + 1] - cur[j];
            if (diff == 0.0) return {cur[j + 1], 0.0};
            next[j] = prev[j + 1] + 1.0 / diff;
        }
        prev = cur;
        cur = std::move(next);
        if (k % 2 == 1 && cur.size() >= 2) {  // even columns approximate the limit
            best = cur.back();
            previous_best = cur[cur.size() - 2];
        }
    }
    return {best, std::abs(best - previous_best)};
}

enum class HalfLine { positive, negative };

/// (1/sqrt(2 pi)) int_0^inf e^{-ipx} f(x) dx (HalfLine::positive), or the
/// same over (-inf, 0] (HalfLine::negative).
///
/// For p != 0 the half line is cut at multiples of pi/|p|; each piece is
/// integrated adaptively and the partial sums are extrapolated with the
/// epsilon algorithm, which handles f decaying only like 1/x. For p = 0 the
/// integral must converge absolutely.
template <class F>
ComplexQuadratureResult oscillatory_transform_detailed(F&& f, double p, HalfLine half, const QuadratureSpec& spec = {}) {
    spec.validate();
    using cd = std::complex<double>;
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double sign = half == HalfLine::positive ? 1.0 : -1.0;
    // Reduce the negative half line to the positive one: x -> -y, p -> -p.
    const double q = sign * p;
    auto g = [&](double y) -> cd { return cd(f(sign * y)); };

    if (p == 0.0) {
        auto r = integrate_half_line(g, 0.0, spec);
        return {r.value * inv_sqrt_2pi, r.error_estimate * inv_sqrt_2pi, r.evaluations};
    }

    const double omega = std::abs(q);
    const double half_period = std::numbers::pi / omega;
    auto integrand = [&](double y) -> cd { return std::polar(1.0, -q * y) * g(y); };

    QuadratureSpec piece = spec;
    piece.abs_tol = std::max(spec.abs_tol * 1e-2, 1e-15);
    piece.rel_tol = spec.rel_tol * 1e-2;

    std::vector<double> re_sums;
    std::vector<double> im_sums;
    cd running{};
    double body_error = 0.0;
    std::size_t evaluations = 0;
    int stable = 0;
    double last_re = 0.0;
    double last_im = 0.0;
    constexpr int min_pieces = 8;

    for (int n = 0; n < spec.max_subdivisions; ++n) {
        const double lo = n * half_period;
        const double hi = (n + 1) * half_period;
        auto r = integrate_adaptive(integrand, lo, hi, piece);
        running += r.value;
        body_error += r.error_estimate;
        evaluations += r.evaluations;
        re_sums.push_back(running.real());
        im_sums.push_back(running.imag());
        if (n + 1 < min_pieces) continue;

        const auto re = wynn_epsilon(re_sums);
        const auto im = wynn_epsilon(im_sums);
        const cd estimate(re.value, im.value);
        const double tol = spec.tolerance_for(std::abs(estimate) * inv_sqrt_2pi) / inv_sqrt_2pi;
        const double change = std::hypot(re.value - last_re, im.value - last_im);
        last_re = re.value;
        last_im = im.value;
        if (change <= 0.5 * tol && std::hypot(re.error, im.error) <= tol) {
            if (++stable >= 3) {
                const double err = (body_error + std::hypot(re.error, im.error) + change) * inv_sqrt_2pi;
                return {estimate * inv_sqrt_2pi, err, evaluations};
            }
        } else {
            stable = 0;
        }
    }
    throw QuadratureError("oscillatory_transform: extrapolation did not converge",
                          std::hypot(last_re, last_im) * inv_sqrt_2pi, std::numeric_limits<double>::infinity());
}

template <class F>
std::complex<double> oscillatory_transform(F&& f, double p, HalfLine half, const QuadratureSpec& spec = {}) {
    return oscillatory_transform_detailed(std::forward<F>(f), p, half, spec).value;
}

}  // namespace hardy::numerics
