// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/numerics/exp_integral.hpp"
#include "hardy/numerics/oscillatory.hpp"
#include "hardy/numerics/quadrature.hpp"
#include "hardy/numerics/semi_infinite.hpp"

namespace hardy {

using cd = std::complex<double>;

enum class ProfileKind { exponential, custom };

inline std::string to_string(ProfileKind k) { return k == ProfileKind::exponential ? "exponential" : "custom"; }

/// One-particle momentum amplitude g(p), real, zero for p <= 0, unit norm.
///
/// `scale` is the length unit lambda: g falls off over momenta ~ 1/lambda.
/// It sets arctan grid scales and asymptotic cutoffs; for the exponential
/// profile it is the decay length.
class MomentumProfile {
public:
    using Function = std::function<double(double)>;

    static MomentumProfile exponential(double lambda) {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("exponential profile: lambda must be > 0");
        const double amp = std::sqrt(2.0 * lambda);
        MomentumProfile p;
        p.kind_ = ProfileKind::exponential;
        p.scale_ = lambda;
        p.g_ = [amp, lambda](double q) { return q > 0.0 ? amp * std::exp(-lambda * q) : 0.0; };
        return p;
    }

    /// Validates support and unit norm; throws DomainError otherwise.
    static MomentumProfile custom(Function g, double scale = 1.0, const numerics::QuadratureSpec& spec = {}) {
        MomentumProfile p = unchecked(std::move(g), scale);
        const double n2 = p.norm_squared(spec);
        if (std::abs(n2 - 1.0) > 1e-10)
            throw DomainError("custom profile: int g^2 dp = " + std::to_string(n2) + ", expected 1 within 1e-10");
        return p;
    }

    /// Rescales g to unit norm before validation.
    static MomentumProfile normalized(Function g, double scale = 1.0, const numerics::QuadratureSpec& spec = {}) {
        MomentumProfile raw = unchecked(g, scale);
        const double n2 = raw.norm_squared(spec);
        if (!(n2 > 0.0) || !std::isfinite(n2)) throw DomainError("custom profile: not normalizable");
        const double k = 1.0 / std::sqrt(n2);
        return custom([g = std::move(g), k](double q) { return k * g(q); }, scale, spec);
    }

    double operator()(double p) const { return g_(p); }
    ProfileKind kind() const { return kind_; }
    double scale() const { return scale_; }

    double norm_squared(const numerics::QuadratureSpec& spec = {}) const {
        if (kind_ == ProfileKind::exponential) return 1.0;
        auto sq = [this](double q) {
            const double v = g_(q);
            return v * v;
        };
        try {
            return numerics::integrate_half_line(sq, 0.0, spec).value;
        } catch (const QuadratureError&) {
            throw DomainError("custom profile: int g^2 dp did not converge (not normalizable)");
        }
    }

    /// Moments int_0^inf p^k g(p) dp for k < count.
    std::vector<double> moments(int count, const numerics::QuadratureSpec& spec = {}) const {
        std::vector<double> m;
        double fact = 1.0;
        for (int k = 0; k < count; ++k) {
            if (k > 0) fact *= k;
            if (kind_ == ProfileKind::exponential) {
                m.push_back(std::sqrt(2.0 * scale_) * fact / std::pow(scale_, k + 1));
            } else {
                auto f = [this, k](double q) { return std::pow(q, k) * g_(q); };
                m.push_back(numerics::integrate_half_line(f, 0.0, spec).value);
            }
        }
        return m;
    }

private:
    MomentumProfile() = default;

    static MomentumProfile unchecked(Function g, double scale) {
        if (!g) throw DomainError("custom profile: empty function");
        if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("custom profile: scale must be > 0");
        for (double t : {0.0, 1e-12, 1e-6, 1e-3, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0}) {
            const double v = g(-t * scale);
            if (v != 0.0) throw DomainError("custom profile: g(p) must vanish for p <= 0");
        }
        MomentumProfile p;
        p.kind_ = ProfileKind::custom;
        p.scale_ = scale;
        p.g_ = std::move(g);
        return p;
    }

    ProfileKind kind_ = ProfileKind::custom;
    double scale_ = 1.0;
    Function g_;
};

inline MomentumProfile build_exponential_profile(double lambda) { return MomentumProfile::exponential(lambda); }

/// psi_p(p) = -(i/pi) sqrt(lambda/2) e^{lambda|p|} Ei(-lambda|p|) for p < 0.
inline cd psi_p_closed_form(double lambda, double p) {
    if (!(lambda > 0.0)) throw DomainError("psi_p_closed_form: lambda must be > 0");
    if (p == 0.0) throw SingularPointError("psi_p_closed_form: logarithmic singularity at p = 0");
    if (!(p < 0.0)) throw DomainError("psi_p_closed_form: requires p <= 0");
    const double u = -lambda * p;
    // e^u Ei(-u); beyond the underflow threshold only the scaled form is finite.
    const double scaled = u < 700.0 ? std::exp(u) * numerics::exp_integral_ei(-u) : -numerics::scaled_exp_integral_e1(u);
    return cd(0.0, -std::sqrt(0.5 * lambda) / std::numbers::pi * scaled);
}

/// h(p) of the exponential profile on both half-axes: psi_p for p < 0 and
/// g(p)/2 - (i/pi) sqrt(lambda/2) e^{-lambda p} Ei(lambda p) for p > 0
/// (Re h = g/2 holds for every real g).
inline cd half_line_transform_closed_form(double lambda, double p) {
    if (p <= 0.0) return psi_p_closed_form(lambda, p);
    if (!(lambda > 0.0)) throw DomainError("half_line_transform_closed_form: lambda must be > 0");
    const double u = lambda * p;
    return cd(std::sqrt(0.5 * lambda) * std::exp(-u),
              -std::sqrt(0.5 * lambda) / std::numbers::pi * numerics::scaled_exp_integral_ei_positive(u));
}

/// Position amplitude f(x) = (1/sqrt(2 pi)) int_0^inf e^{ipx} g(p) dp.
class PositionProfile {
public:
    enum class Provenance { closed_form, transformed };

    PositionProfile(std::function<cd(double)> f, Provenance prov) : f_(std::move(f)), provenance_(prov) {}

    cd operator()(double x) const { return f_(x); }
    Provenance provenance() const { return provenance_; }

private:
    std::function<cd(double)> f_;
    Provenance provenance_;
};

inline PositionProfile position_profile(const MomentumProfile& g, const numerics::QuadratureSpec& spec = {}) {
    if (g.kind() == ProfileKind::exponential) {
        const double lambda = g.scale();
        const double amp = std::sqrt(lambda / std::numbers::pi);
        return PositionProfile([amp, lambda](double x) { return cd(0.0, amp) / cd(x, lambda); },
                               PositionProfile::Provenance::closed_form);
    }
    return PositionProfile(
        [g, spec](double x) { return numerics::oscillatory_transform(g, -x, numerics::HalfLine::positive, spec); },
        PositionProfile::Provenance::transformed);
}

/// h(p) = (1/sqrt(2 pi)) int_0^inf e^{-ipx} f(x) dx, the transform of the
/// positive-x half of f. For p < 0 it equals psi_p.
///
/// Exponential profile: the closed form for p < 0; for p > 0 oscillatory
/// quadrature of the closed-form f, switching to the integration-by-parts
/// series sum_k f^(k)(0) / (ip)^{k+1} once lambda p >= 40.
/// Custom profiles: h(-u) = (i / 2 pi) int g(p')/(p' + u) dp' and, for p > 0,
/// h(p) = g(p)/2 + (i / 2 pi) PV int g(p')/(p' - p) dp'.
class HalfLineTransform {
public:
    explicit HalfLineTransform(MomentumProfile g, const numerics::QuadratureSpec& spec = {})
        : g_(std::move(g)), f_(position_profile(g_, spec)), spec_(spec) {}

    const MomentumProfile& profile() const { return g_; }

    cd operator()(double p) const {
        if (p == 0.0) throw SingularPointError("half-line transform: logarithmic singularity at p = 0");
        if (g_.kind() == ProfileKind::exponential) return exponential(p);
        return custom(p);
    }

    static constexpr double asymptotic_threshold = 40.0;

private:
    cd exponential(double p) const {
        const double lambda = g_.scale();
        if (p < 0.0) return psi_p_closed_form(lambda, p);
        const double u = lambda * p;
        if (u >= asymptotic_threshold) {
            // f^(k)(0)/(ip)^{k+1} collapses to -(i/pi) sqrt(lambda/2) k!/u^{k+1}.
            double sum = 0.0;
            double term = 1.0 / u;
            for (int k = 0; k < 14; ++k) {
                sum += term;
                term *= (k + 1) / u;
            }
            return cd(0.0, -std::sqrt(0.5 * lambda) / std::numbers::pi * sum);
        }
        return numerics::oscillatory_transform(f_, p, numerics::HalfLine::positive, spec_);
    }

    cd custom(double p) const {
        const double inv2pi = 0.5 / std::numbers::pi;
        if (p < 0.0) {
            const double u = -p;
            auto k = [&](double q) { return g_(q) / (q + u); };
            return cd(0.0, inv2pi * numerics::integrate_half_line(k, 0.0, spec_).value);
        }
        auto odd = [&](double t) { return (g_(p + t) - g_(p - t)) / t; };
        auto far = [&](double q) { return g_(q) / (q - p); };
        const double pv = numerics::integrate_adaptive(odd, 0.0, p, spec_).value +
                          numerics::integrate_half_line(far, 2.0 * p, spec_).value;
        return cd(0.5 * g_(p), inv2pi * pv);
    }

    MomentumProfile g_;
    PositionProfile f_;
    numerics::QuadratureSpec spec_;
};

/// int_{-inf}^0 |h(p)|^2 dp, the one-particle negative-momentum mass of the
/// positive-x half of f.
///
/// Computed in u = lambda |p|: for the exponential profile this is
/// (1/2 pi^2) int_0^inf (e^u E1(u))^2 du with the analytic 1/u^2 tail, which
/// is independent of lambda. Custom profiles use a tail built from the moments
/// of g.
inline numerics::QuadratureResult negative_momentum_mass(const MomentumProfile& g,
                                                         const numerics::QuadratureSpec& spec = {}) {
    const double inv2pi2 = 0.5 / (std::numbers::pi * std::numbers::pi);
    if (g.kind() == ProfileKind::exponential) {
        auto f = [](double u) {
            const double e = numerics::scaled_exp_integral_e1(u);
            return e * e;
        };
        auto r = numerics::integrate_semi_infinite_with_tail(f, 0.0, numerics::squared_scaled_e1_tail(8), spec);
        return {r.value * inv2pi2, r.error_estimate * inv2pi2, r.evaluations};
    }
    const HalfLineTransform h(g, spec);
    const double s = g.scale();
    const auto m = g.moments(spec.tail_order, spec);
    // |h(-u)|^2 ~ (1/4 pi^2) sum_j (-1)^j (sum_{a+b=j} m_a m_b) u^{-2-j}
    std::vector<double> tail;
    for (int j = 0; j < spec.tail_order; ++j) {
        double c = 0.0;
        for (int a = 0; a <= j; ++a) c += m[a] * m[j - a];
        tail.push_back((j % 2 == 0 ? 1.0 : -1.0) * c * 0.25 / (std::numbers::pi * std::numbers::pi));
    }
    // Work in u = p * s so the tail coefficients scale with s^(1+j).
    std::vector<double> scaled_tail;
    for (int j = 0; j < spec.tail_order; ++j) scaled_tail.push_back(tail[j] * std::pow(s, j + 1));
    auto f = [&](double u) { return std::norm(h(-u / s)) / s; };
    return numerics::integrate_semi_infinite_with_tail(f, 0.0, numerics::AsymptoticTail{scaled_tail, 60.0}, spec);
}

/// int_0^inf |f(x)|^2 dx. For real g, |f(-x)| = |f(x)|, so this is exactly 1/2.
inline double positive_position_mass(const MomentumProfile&) { return 0.5; }

}  // namespace hardy
