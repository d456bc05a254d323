// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hardy/cayley.hpp"
#include "hardy/errors.hpp"
#include "hardy/state.hpp"

namespace hardy {

enum class Setting { x, p };
enum class Sign { plus, minus };

inline char to_char(Setting s) { return s == Setting::x ? 'x' : 'p'; }
inline char to_char(Sign s) { return s == Sign::plus ? '+' : '-'; }

struct SettingPair {
    Setting first;
    Setting second;

    friend bool operator==(const SettingPair&, const SettingPair&) = default;
    std::string name() const { return {to_char(first), to_char(second)}; }
    int index() const { return (first == Setting::p ? 2 : 0) + (second == Setting::p ? 1 : 0); }
};

inline constexpr SettingPair xx_setting{Setting::x, Setting::x};
inline constexpr SettingPair xp_setting{Setting::x, Setting::p};
inline constexpr SettingPair px_setting{Setting::p, Setting::x};
inline constexpr SettingPair pp_setting{Setting::p, Setting::p};
inline constexpr std::array<SettingPair, 4> all_settings{xx_setting, xp_setting, px_setting, pp_setting};
inline constexpr std::array<Sign, 2> both_signs{Sign::plus, Sign::minus};

inline SettingPair setting_from_string(const std::string& s) {
    for (const auto& p : all_settings)
        if (p.name() == s) return p;
    throw ConfigError("unknown setting pair '" + s + "' (expected xx, xp, px or pp)");
}

struct Probability {
    double value = 0.0;
    double error = 0.0;
};

enum class ProbabilityMethod { closed_form, grid };

inline std::string to_string(ProbabilityMethod m) { return m == ProbabilityMethod::closed_form ? "closed-form" : "grid"; }

/// P_{b1 b2}(s1, s2) for the four setting pairs.
struct QuadrantProbabilityTable {
    std::array<std::optional<Probability>, 16> entries;
    ProbabilityMethod method = ProbabilityMethod::closed_form;
    double error_budget = 0.0;

    static int slot(SettingPair pair, Sign s1, Sign s2) {
        return pair.index() * 4 + (s1 == Sign::minus ? 2 : 0) + (s2 == Sign::minus ? 1 : 0);
    }
    void set(SettingPair pair, Sign s1, Sign s2, Probability p) { entries[slot(pair, s1, s2)] = p; }
    const std::optional<Probability>& get(SettingPair pair, Sign s1, Sign s2) const {
        return entries[slot(pair, s1, s2)];
    }
    double value(SettingPair pair, Sign s1, Sign s2) const {
        const auto& e = get(pair, s1, s2);
        if (!e) throw DomainError("probability table: missing entry " + pair.name() + "(" + to_char(s1) + "," +
                                  to_char(s2) + ")");
        return e->value;
    }
    double setting_sum(SettingPair pair) const {
        double s = 0.0;
        for (Sign a : both_signs)
            for (Sign b : both_signs) s += value(pair, a, b);
        return s;
    }
};

namespace detail {

inline QuadrantProbabilityTable closed_form_table(const TwoParticleState& state) {
    const auto& d = state.factorized_data();
    const double q = d.q;
    const double i = d.negative_mass.value;
    const double n2 = state.norm_constant() * state.norm_constant();
    const double di = d.negative_mass.error_estimate;
    const double err = n2 * 4.0 * di + 4.0 * std::numeric_limits<double>::epsilon();
    const double exact = 0.0;
    QuadrantProbabilityTable t;
    t.method = ProbabilityMethod::closed_form;
    auto put = [&](SettingPair p, Sign a, Sign b, double v, double e) { t.set(p, a, b, {v, e}); };
    const Sign P = Sign::plus, M = Sign::minus;
    if (state.masked()) {
        put(xx_setting, P, P, 0.0, exact);
        put(xx_setting, P, M, n2 * q * (1.0 - q), err);
        put(xx_setting, M, P, n2 * q * (1.0 - q), err);
        put(xx_setting, M, M, n2 * (1.0 - q) * (1.0 - q), err);
        put(px_setting, P, P, n2 * q * (1.0 - q - i), err);
        put(px_setting, P, M, n2 * (1.0 - q), err);
        put(px_setting, M, P, n2 * q * i, err);
        put(px_setting, M, M, 0.0, exact);
        put(xp_setting, P, P, n2 * q * (1.0 - q - i), err);
        put(xp_setting, M, P, n2 * (1.0 - q), err);
        put(xp_setting, P, M, n2 * q * i, err);
        put(xp_setting, M, M, 0.0, exact);
        put(pp_setting, P, P, n2 * (1.0 - 2.0 * q * q + (q - i) * (q - i)), err);
        put(pp_setting, P, M, n2 * (q - i) * i, err);
        put(pp_setting, M, P, n2 * (q - i) * i, err);
        put(pp_setting, M, M, n2 * i * i, err);
    } else {
        put(xx_setting, P, P, q * q, err);
        put(xx_setting, P, M, q * (1.0 - q), err);
        put(xx_setting, M, P, q * (1.0 - q), err);
        put(xx_setting, M, M, (1.0 - q) * (1.0 - q), err);
        put(px_setting, P, P, q, err);
        put(px_setting, P, M, 1.0 - q, err);
        put(px_setting, M, P, 0.0, exact);
        put(px_setting, M, M, 0.0, exact);
        put(xp_setting, P, P, q, err);
        put(xp_setting, M, P, 1.0 - q, err);
        put(xp_setting, P, M, 0.0, exact);
        put(xp_setting, M, M, 0.0, exact);
        put(pp_setting, P, P, 1.0, exact);
        put(pp_setting, P, M, 0.0, exact);
        put(pp_setting, M, P, 0.0, exact);
        put(pp_setting, M, M, 0.0, exact);
    }
    t.error_budget = 4.0 * err;
    return t;
}

/// Cayley-mode spectra of an xx grid: sign-quadrant masses per setting,
/// outer-mode fractions and the mass kept by the pointwise-evaluation filter.
struct GridModeAnalysis {
    std::array<std::array<double, 4>, 4> mass{};  // [setting][2*s1+s2], sign 0 = plus
    std::array<double, 4> filtered{};              // filtered / total mode mass per setting
    double outer_fraction = 0.0;
};

inline GridModeAnalysis analyze_grid_modes(const AmplitudeGrid& g) {
    if (g.spec.mapping != GridMapping::arctan)
        throw ConfigError("grid probabilities need the arctan mapping (sign splits are exact mode splits)");
    const int m = g.size();
    const int half = m / 2;
    const double s = g.length_scale();
    std::vector<double> w(m);
    std::vector<double> filter(m);
    for (int j = 0; j < m; ++j) {
        w[j] = cayley::weight(j, m, s);
        const int n = j - half;
        const double f = cayley::mode_filter(n >= 0 ? n : -n - 1, m);
        filter[j] = f * f;
    }
    std::vector<cd> weighted(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) weighted[static_cast<std::size_t>(i) * m + j] = g.at(i, j) * w[i] * w[j];

    // Index k < M/2 is the negative half in theta and in mode number alike.
    auto sign_of = [half](int k) { return k >= half ? 0 : 1; };
    auto outer = [half, m](int k) { return std::abs(k - half) >= 3 * m / 8; };
    GridModeAnalysis r;
    cayley::ModeAnalyzer analyzer(m);
    std::vector<cd> line(m);

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            r.mass[xx_setting.index()][2 * sign_of(i) + sign_of(j)] +=
                std::norm(weighted[static_cast<std::size_t>(i) * m + j]);
    r.filtered[xx_setting.index()] = 1.0;

    auto finish = [&](SettingPair pair, double total, double kept, double out) {
        r.filtered[pair.index()] = total > 0.0 ? kept / total : 1.0;
        r.outer_fraction = std::max(r.outer_fraction, total > 0.0 ? out / total : 0.0);
    };

    // Axis-1 modes per column: px.
    std::vector<cd> modes1(static_cast<std::size_t>(m) * m);  // (n, j)
    double total = 0.0, kept = 0.0, out = 0.0;
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) line[i] = weighted[static_cast<std::size_t>(i) * m + j];
        const auto beta = analyzer.modes(line);
        for (int n = 0; n < m; ++n) {
            const double v = std::norm(beta[n]);
            modes1[static_cast<std::size_t>(n) * m + j] = beta[n];
            r.mass[px_setting.index()][2 * sign_of(n) + sign_of(j)] += v;
            total += v;
            kept += filter[n] * v;
            if (outer(n)) out += v;
        }
    }
    finish(px_setting, total, kept, out);

    // Axis-2 modes per row: xp.
    total = kept = out = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) line[j] = weighted[static_cast<std::size_t>(i) * m + j];
        const auto beta = analyzer.modes(line);
        for (int n = 0; n < m; ++n) {
            const double v = std::norm(beta[n]);
            r.mass[xp_setting.index()][2 * sign_of(i) + sign_of(n)] += v;
            total += v;
            kept += filter[n] * v;
            if (outer(n)) out += v;
        }
    }
    finish(xp_setting, total, kept, out);

    // Both axes: pp.
    total = kept = out = 0.0;
    for (int n = 0; n < m; ++n) {
        for (int j = 0; j < m; ++j) line[j] = modes1[static_cast<std::size_t>(n) * m + j];
        const auto beta = analyzer.modes(line);
        for (int k = 0; k < m; ++k) {
            const double v = std::norm(beta[k]);
            r.mass[pp_setting.index()][2 * sign_of(n) + sign_of(k)] += v;
            total += v;
            kept += filter[n] * filter[k] * v;
            if (outer(n) || outer(k)) out += v;
        }
    }
    finish(pp_setting, total, kept, out);
    return r;
}

/// Sign-quadrant masses from Cayley-mode splits of the xx grid.
inline QuadrantProbabilityTable grid_table(const TwoParticleState& state) {
    const auto& gd = state.grid_data();
    const auto a = analyze_grid_modes(gd.xx);
    const double bound = std::max({a.outer_fraction, gd.discretization_bound, gd.norm_defect}) + 1e-12;
    QuadrantProbabilityTable t;
    t.method = ProbabilityMethod::grid;
    for (const auto& pair : all_settings) {
        const auto& mm = a.mass[pair.index()];
        const double total = mm[0] + mm[1] + mm[2] + mm[3];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                t.set(pair, i == 0 ? Sign::plus : Sign::minus, j == 0 ? Sign::plus : Sign::minus,
                      {mm[2 * i + j] / total, bound});
    }
    t.error_budget = bound;
    return t;
}

}  // namespace detail

/// All 16 quadrant probabilities: closed form for factorized analytic states,
/// Cayley-mode splits for grid states.
inline QuadrantProbabilityTable quadrant_table(const TwoParticleState& state) {
    return state.is_grid() ? detail::grid_table(state) : detail::closed_form_table(state);
}

/// Probability mass of |psi|^2 over the open sign quadrant (s1, s2) in the
/// given setting pair.
inline Probability quadrant_probability(const TwoParticleState& state, SettingPair pair, Sign s1, Sign s2) {
    return *quadrant_table(state).get(pair, s1, s2);
}

/// N^2 [int_{-inf}^0 |psi_p|^2 dp]^2 for a factorized unit-norm profile.
inline Probability hardy_probability_factorized(const MomentumProfile& g, const numerics::QuadratureSpec& spec = {}) {
    const double q = positive_position_mass(g);
    const auto inner = negative_momentum_mass(g, spec);
    const double n2 = 1.0 / (1.0 - q * q);
    return {n2 * inner.value * inner.value, n2 * 2.0 * inner.value * inner.error_estimate};
}

struct ZeroConditionsReport {
    Probability xx_plus_plus;
    Probability px_minus_minus;
    Probability xp_minus_minus;
    double threshold = 0.0;
    bool pass = false;
};

/// The three probabilities the construction forces to zero, checked against
/// `threshold` (default 1e-9 for closed-form states, 1e-3 for grid states).
/// Each entry carries the table's error budget.
inline ZeroConditionsReport zero_conditions_report(const TwoParticleState& state,
                                                   std::optional<double> threshold = std::nullopt) {
    const auto t = quadrant_table(state);
    ZeroConditionsReport r;
    r.xx_plus_plus = *t.get(xx_setting, Sign::plus, Sign::plus);
    r.px_minus_minus = *t.get(px_setting, Sign::minus, Sign::minus);
    r.xp_minus_minus = *t.get(xp_setting, Sign::minus, Sign::minus);
    r.threshold = threshold.value_or(t.method == ProbabilityMethod::closed_form ? 1e-9 : 1e-3);
    r.pass = r.xx_plus_plus.value <= r.threshold && r.px_minus_minus.value <= r.threshold &&
             r.xp_minus_minus.value <= r.threshold;
    return r;
}

struct HardyWitness {
    double lhs = 0.0;
    double xx_plus_plus = 0.0;
    double px_minus_minus = 0.0;
    double xp_minus_minus = 0.0;
    double min_term = 0.0;
    double w = 0.0;
    double error = 0.0;

    bool violates_local_realism() const { return w > 0.0; }
};

/// W = P_pp(-,-) - [P_xx(+,+) + P_px(-,-) + P_xp(-,-) + min(P_xp(-,-), P_px(-,-))].
inline HardyWitness hardy_witness(const QuadrantProbabilityTable& t) {
    HardyWitness h;
    h.lhs = t.value(pp_setting, Sign::minus, Sign::minus);
    h.xx_plus_plus = t.value(xx_setting, Sign::plus, Sign::plus);
    h.px_minus_minus = t.value(px_setting, Sign::minus, Sign::minus);
    h.xp_minus_minus = t.value(xp_setting, Sign::minus, Sign::minus);
    h.min_term = std::min(h.xp_minus_minus, h.px_minus_minus);
    h.w = h.lhs - (h.xx_plus_plus + h.px_minus_minus + h.xp_minus_minus + h.min_term);
    h.error = t.get(pp_setting, Sign::minus, Sign::minus)->error + t.get(xx_setting, Sign::plus, Sign::plus)->error +
              2.0 * t.get(px_setting, Sign::minus, Sign::minus)->error +
              2.0 * t.get(xp_setting, Sign::minus, Sign::minus)->error;
    return h;
}

}  // namespace hardy
