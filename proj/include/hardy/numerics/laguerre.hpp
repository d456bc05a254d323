// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <span>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy::numerics {

/// Laguerre functions e^{-u/2} L_n(u) for n = 0..out.size()-1.
///
/// The three-term recurrence runs on a rescaled mantissa with a separate
/// log scale, so the result stays accurate where e^{-u/2} alone underflows
/// (u in the thousands).
inline void laguerre_functions(double u, std::span<double> out) {
    if (!(u >= 0.0)) throw DomainError("laguerre_functions: u must be >= 0");
    if (out.empty()) return;
    constexpr double big = 1e150;
    const double log_big = std::log(big);
    double log_scale = -0.5 * u;
    double prev = 0.0;  // L_{n-1}
    double cur = 1.0;   // L_n
    auto emit = [&](std::size_t n) {
        out[n] = cur == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(cur)) + log_scale), cur);
    };
    emit(0);
    for (std::size_t n = 0; n + 1 < out.size(); ++n) {
        const double nd = static_cast<double>(n);
        const double next = ((2.0 * nd + 1.0 - u) * cur - nd * prev) / (nd + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > big) {
            cur /= big;
            prev /= big;
            log_scale += log_big;
        }
        emit(n + 1);
    }
}

struct GaussLaguerreRule {
    std::vector<double> nodes;
    std::vector<double> log_weights;  ///< ln w_k, so w_k e^{u_k} stays finite
};

/// K-point Gauss-Laguerre rule for int_0^inf e^{-u} F(u) du.
///
/// Nodes come from the Jacobi matrix eigenvalues, polished by Newton steps on
/// L_K. Weights use w_k = u_k / ((K+1) L_{K+1}(u_k))^2 in log form: the
/// eigenvector route loses all relative accuracy once w_k drops below ~1e-16.
inline GaussLaguerreRule gauss_laguerre(int points) {
    if (points < 1 || points > 256) throw DomainError("gauss_laguerre: points must lie in [1, 256]");
    Eigen::VectorXd diag(points);
    Eigen::VectorXd sub(points > 1 ? points - 1 : 0);
    for (int i = 0; i < points; ++i) diag[i] = 2.0 * i + 1.0;
    for (int i = 1; i < points; ++i) sub[i - 1] = static_cast<double>(i);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    GaussLaguerreRule rule;
    std::vector<double> l(static_cast<std::size_t>(points) + 2);
    const double k = points;
    for (int i = 0; i < points; ++i) {
        double u = solver.eigenvalues()[i];
        for (int it = 0; it < 3; ++it) {
            laguerre_functions(u, l);
            // u L_K' = K (L_K - L_{K-1}); the e^{-u/2} factors cancel.
            const double denom = k * (l[points] - l[points - 1]);
            if (denom == 0.0) break;
            u -= u * l[points] / denom;
        }
        laguerre_functions(u, l);
        rule.nodes.push_back(u);
        rule.log_weights.push_back(std::log(u) - 2.0 * std::log(k + 1.0) - 2.0 * std::log(std::abs(l[points + 1])) - u);
    }
    return rule;
}

}  // namespace hardy::numerics
