// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "hardy/numerics/exp_integral.hpp"
#include "hardy/numerics/quadrature.hpp"
#include "hardy/probabilities.hpp"
#include "hardy/state.hpp"
#include "hardy/transforms.hpp"

namespace {

using namespace hardy;
constexpr double pi = std::numbers::pi;
const Sign P = Sign::plus;
const Sign M = Sign::minus;

// int_{-inf}^0 |psi_p|^2 dp in log variables (p = -e^t), no tail model: an
// oracle independent of the tail-corrected semi-infinite rule.
double negative_mass_oracle() {
    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-14;
    spec.rel_tol = 1e-12;
    spec.max_subdivisions = 20000;
    auto f = [](double t) {
        const double u = std::exp(t);
        const double e = numerics::scaled_exp_integral_e1(u);
        return e * e * u;
    };
    // Beyond u = e^40 the integrand is e^{-t} to double precision.
    const double body = numerics::integrate_adaptive(f, -60.0, 40.0, spec).value + std::exp(-40.0);
    return body / (2.0 * pi * pi);
}

TEST(Oracle, NegativeMassIsOneEighth) { EXPECT_NEAR(negative_mass_oracle(), 0.125, 1e-10); }

TEST(ClosedFormTable, ExpectedEntries) {
    const auto t = quadrant_table(build_state(build_exponential_profile(1.0)));
    EXPECT_EQ(t.method, ProbabilityMethod::closed_form);
    EXPECT_EQ(t.value(xx_setting, P, P), 0.0);
    EXPECT_NEAR(t.value(xx_setting, M, M), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(t.value(xx_setting, P, M), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(t.value(xx_setting, M, P), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(t.value(px_setting, P, M), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(t.value(xp_setting, M, P), 2.0 / 3.0, 1e-12);
    EXPECT_EQ(t.value(px_setting, M, M), 0.0);
    EXPECT_EQ(t.value(xp_setting, M, M), 0.0);
    EXPECT_NEAR(t.value(pp_setting, M, M), 1.0 / 48.0, 5e-9);
    EXPECT_NEAR(t.value(px_setting, M, P), 4.0 / 3.0 * 0.5 * 0.125, 1e-9);
}

TEST(ClosedFormTable, AgreesWithQuadratureOracles) {
    // Products of 1D oracle masses: q from |f|^2 quadrature, I in log variables.
    const auto s = build_state(build_exponential_profile(1.0));
    const auto& d = s.factorized_data();
    const double q = numerics::integrate_half_line([&](double x) { return std::norm(d.f(x)); }, 0.0).value;
    const double i = negative_mass_oracle();
    const double n2 = 1.0 / (1.0 - q * q);
    const auto t = quadrant_table(s);
    EXPECT_NEAR(t.value(xx_setting, P, M), n2 * q * (1.0 - q), 1e-9);
    EXPECT_NEAR(t.value(pp_setting, M, M), n2 * i * i, 1e-10);
    EXPECT_NEAR(t.value(pp_setting, P, M), n2 * (q - i) * i, 1e-9);
    EXPECT_NEAR(t.value(px_setting, P, P), n2 * q * (1.0 - q - i), 1e-9);
}

TEST(ClosedFormTable, EntriesInUnitIntervalAndSumToOne) {
    const auto t = quadrant_table(build_state(build_exponential_profile(2.0)));
    for (const auto& e : t.entries) {
        ASSERT_TRUE(e.has_value());
        EXPECT_GE(e->value, 0.0);
        EXPECT_LE(e->value, 1.0);
    }
    for (const auto& pair : all_settings) EXPECT_NEAR(t.setting_sum(pair), 1.0, std::max(t.error_budget, 1e-14));
}

TEST(ClosedFormTableProperty, LambdaInvariance) {
    const auto ref = quadrant_table(build_state(build_exponential_profile(1.0)));
    for (double lambda : {0.25, 4.0, 0.1, 13.0}) {
        const auto t = quadrant_table(build_state(build_exponential_profile(lambda)));
        for (std::size_t k = 0; k < 16; ++k) EXPECT_NEAR(t.entries[k]->value, ref.entries[k]->value, 1e-9) << lambda;
    }
}

TEST(HardyProbability, FactorizedFormula) {
    for (double lambda : {0.25, 1.0, 4.0}) {
        const auto p = hardy_probability_factorized(build_exponential_profile(lambda));
        EXPECT_NEAR(p.value, 1.0 / 48.0, 5e-9) << lambda;
        EXPECT_LT(p.error, 5e-9);
    }
    const auto a = hardy_probability_factorized(build_exponential_profile(0.25));
    const auto b = hardy_probability_factorized(build_exponential_profile(4.0));
    EXPECT_NEAR(a.value, b.value, 1e-9);
}

TEST(HardyProbability, QuadrantProbabilityAgrees) {
    const auto s = build_state(build_exponential_profile(1.0));
    EXPECT_NEAR(quadrant_probability(s, pp_setting, M, M).value, hardy_probability_factorized(s.factorized_data().g).value,
                1e-15);
}

TEST(ZeroConditions, ClosedFormExactZeros) {
    const auto r = zero_conditions_report(build_state(build_exponential_profile(1.0)));
    EXPECT_TRUE(r.pass);
    EXPECT_DOUBLE_EQ(r.threshold, 1e-9);
    EXPECT_LE(r.xx_plus_plus.value, 1e-12);
    EXPECT_LE(r.px_minus_minus.value, 1e-12);
    EXPECT_LE(r.xp_minus_minus.value, 1e-12);
}

TEST(ZeroConditions, UnmaskedProductFails) {
    const auto r = zero_conditions_report(build_state(build_exponential_profile(1.0), {.masked = false}));
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.xx_plus_plus.value, 0.25, 1e-12);
}

TEST(ZeroConditions, GridBelowOwnBound) {
    const auto g = build_grid_state(build_state(build_exponential_profile(1.0)), {.points_per_axis = 256});
    const auto r = zero_conditions_report(g);
    EXPECT_DOUBLE_EQ(r.threshold, 1e-3);
    EXPECT_TRUE(r.pass);
    EXPECT_LT(r.xx_plus_plus.value, r.xx_plus_plus.error);
    EXPECT_LT(r.px_minus_minus.value, r.px_minus_minus.error);
    EXPECT_LT(r.xp_minus_minus.value, r.xp_minus_minus.error);
}

TEST(GridTable, AgreesWithClosedForm) {
    const auto s = build_state(build_exponential_profile(1.0));
    const auto cf = quadrant_table(s);
    const auto gt = quadrant_table(build_grid_state(s, {.points_per_axis = 256}));
    EXPECT_EQ(gt.method, ProbabilityMethod::grid);
    for (std::size_t k = 0; k < 16; ++k) {
        EXPECT_NEAR(gt.entries[k]->value, cf.entries[k]->value, 2e-3) << k;
        EXPECT_NEAR(gt.entries[k]->value, cf.entries[k]->value, gt.entries[k]->error) << k;
    }
    for (const auto& pair : all_settings) EXPECT_NEAR(gt.setting_sum(pair), 1.0, gt.error_budget);
}

TEST(GridTable, LambdaInvariant) {
    const auto a = quadrant_table(build_grid_state(build_state(build_exponential_profile(0.5)), {.points_per_axis = 128}));
    const auto b = quadrant_table(build_grid_state(build_state(build_exponential_profile(3.0)), {.points_per_axis = 128}));
    for (std::size_t k = 0; k < 16; ++k) EXPECT_NEAR(a.entries[k]->value, b.entries[k]->value, 1e-12);
}

TEST(GridTable, RequiresArctanMapping) {
    const auto g = build_grid_state(build_state(build_exponential_profile(1.0)),
                                    {.extent = 40.0, .points_per_axis = 128, .mapping = GridMapping::linear});
    EXPECT_THROW(quadrant_table(g), ConfigError);
}

TEST(QuadrantBoundaries, OpenAndClosedSumsDifferByOneRow) {
    // On a linear grid 0 is a node: the closed quadrant adds the x = 0 row
    // and column, which bounds the difference.
    const auto g = build_grid_state(build_state(build_exponential_profile(1.0), {.masked = false}),
                                    {.extent = 60.0, .points_per_axis = 512, .mapping = GridMapping::linear});
    const auto& a = g.grid_data().xx;
    const int m = a.size();
    const double w = a.cell_width(0, 0);
    double open = 0.0, closed = 0.0, row = 0.0;
    for (int i = m / 2; i < m; ++i)
        for (int j = m / 2; j < m; ++j) {
            const double v = std::norm(a.at(i, j)) * w * w;
            closed += v;
            if (i > m / 2 && j > m / 2) open += v;
            if (i == m / 2 || j == m / 2) row += v;
        }
    EXPECT_GT(closed, open);
    EXPECT_LE(closed - open, row * (1.0 + 1e-12));
}

TEST(HardyWitness, ExponentialExample) {
    const auto w = hardy_witness(quadrant_table(build_state(build_exponential_profile(1.0))));
    EXPECT_NEAR(w.w, 1.0 / 48.0, 5e-9);
    EXPECT_TRUE(w.violates_local_realism());
    EXPECT_EQ(w.min_term, 0.0);
}

TEST(HardyWitness, UniformTable) {
    QuadrantProbabilityTable t;
    for (const auto& pair : all_settings)
        for (Sign a : both_signs)
            for (Sign b : both_signs) t.set(pair, a, b, {0.25, 0.0});
    // 1/4 - (1/4 + 1/4 + 1/4 + min(1/4, 1/4)).
    const auto w = hardy_witness(t);
    EXPECT_DOUBLE_EQ(w.w, -0.75);
    EXPECT_DOUBLE_EQ(w.min_term, 0.25);
    EXPECT_FALSE(w.violates_local_realism());
}

TEST(HardyWitness, MissingEntriesThrow) {
    QuadrantProbabilityTable t;
    t.set(pp_setting, M, M, {0.1, 0.0});
    EXPECT_THROW(hardy_witness(t), DomainError);
}

TEST(SettingPair, NamesAndParsing) {
    for (const auto& p : all_settings) EXPECT_EQ(setting_from_string(p.name()), p);
    EXPECT_THROW(setting_from_string("qq"), ConfigError);
    EXPECT_EQ(pp_setting.name(), "pp");
}

}  // namespace
