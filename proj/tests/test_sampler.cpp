// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "hardy/numerics/quadrature.hpp"
#include "hardy/sampler.hpp"

namespace {

using namespace hardy;
constexpr double pi = std::numbers::pi;
const Sign P = Sign::plus;
const Sign M = Sign::minus;

const TwoParticleState& example() {
    static const TwoParticleState s = build_state(MomentumProfile::exponential(1.0));
    return s;
}

double chi2_99(int dof) { return boost::math::quantile(boost::math::chi_squared(dof), 0.99); }

TEST(QuadrantPicker, NeverPicksZeroQuadrants) {
    const sampling::QuadrantPicker picker({0.0, 0.5, 0.5, 0.0});
    for (double u : {1e-16, 0.25, 0.5 - 1e-16, 0.5, 0.75, 1.0 - 1e-16}) {
        const int q = picker.pick(u);
        EXPECT_TRUE(q == 1 || q == 2) << u;
    }
    EXPECT_EQ(picker.pick(0.4), 1);
    EXPECT_EQ(picker.pick(0.6), 2);
    EXPECT_THROW(sampling::QuadrantPicker({0.0, 0.0, 0.0, 0.0}), SamplerError);
}

TEST(SampleLinear, MatchesLinearDensityMoments) {
    // Density (1 - t) a + t b has mean (a + 2b) / (3 (a + b)).
    for (auto [a, b] : {std::pair{1.0, 1.0}, {0.0, 2.0}, {3.0, 0.0}, {0.2, 5.0}}) {
        const int n = 200000;
        double mean = 0.0;
        for (int k = 0; k < n; ++k) {
            const double t = sampling::sample_linear(a, b, (k + 0.5) / n);
            ASSERT_GE(t, 0.0);
            ASSERT_LE(t, 1.0);
            mean += t / n;
        }
        EXPECT_NEAR(mean, (a + 2.0 * b) / (3.0 * (a + b)), 1e-6);
    }
}

TEST(Acceptance, LowEfficiencyIsAnError) {
    EXPECT_THROW(sampling::check_acceptance(5, 1000), SamplerError);
    EXPECT_NO_THROW(sampling::check_acceptance(750, 1000));
    EXPECT_NO_THROW(sampling::check_acceptance(1, 10));
}

TEST(SampleSetting, RequiresXxRepresentation) {
    EXPECT_THROW(SettingSampler(example().with(Representation::pp), pp_setting), DomainError);
}

TEST(SampleSetting, XxQuadrantFrequencies) {
    const std::uint64_t n = 1000000;
    SettingSampler s(example(), xx_setting);
    EXPECT_TRUE(s.exact());
    const auto c = count_quadrants(s, n, 42, 4);
    EXPECT_EQ(c[quadrant_index(P, P)], 0u);
    const double p = 1.0 / 3.0;
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    for (auto [a, b] : {std::pair{P, M}, {M, P}, {M, M}})
        EXPECT_NEAR(static_cast<double>(c[quadrant_index(a, b)]) / n, p, 5.0 * sigma);
}

TEST(SampleSetting, PpMinusMinusIsOneIn48) {
    const std::uint64_t n = 1000000;
    const auto c = count_quadrants(SettingSampler(example(), pp_setting), n, 42, 4);
    const double p = 1.0 / 48.0;
    EXPECT_NEAR(static_cast<double>(c[quadrant_index(M, M)]) / n, p, 3.0 * std::sqrt(p * (1.0 - p) / n));
}

TEST(SampleSetting, MixedZeroConditionsHaveNoEvents) {
    const std::uint64_t n = 1000000;
    EXPECT_EQ(count_quadrants(SettingSampler(example(), px_setting), n, 42, 4)[quadrant_index(M, M)], 0u);
    EXPECT_EQ(count_quadrants(SettingSampler(example(), xp_setting), n, 43, 4)[quadrant_index(M, M)], 0u);
}

TEST(SampleSetting, RecordsAreStrictAndConsistent) {
    for (const auto& pair : all_settings) {
        const auto r = sample_setting(example(), pair, 20000, 9);
        for (const auto& rec : r) {
            ASSERT_NE(rec.value1, 0.0);
            ASSERT_NE(rec.value2, 0.0);
            ASSERT_TRUE(std::isfinite(rec.value1) && std::isfinite(rec.value2));
            ASSERT_EQ(rec.sign1, sign_of(rec.value1));
            ASSERT_EQ(rec.sign2, sign_of(rec.value2));
            ASSERT_EQ(rec.setting, pair);
        }
    }
}

TEST(SampleSettingProperty, IndependentOfThreadCount) {
    for (const auto& pair : all_settings) {
        SamplerOptions one, many;
        many.threads = 5;
        const auto a = sample_setting(example(), pair, 30001, 17, one);
        const auto b = sample_setting(example(), pair, 30001, 17, many);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            ASSERT_EQ(a[i].value1, b[i].value1);
            ASSERT_EQ(a[i].value2, b[i].value2);
        }
    }
}

TEST(SampleSettingProperty, FrequenciesConvergeToTable) {
    const std::uint64_t n = 1000000;
    const int seeds = 10;
    const auto table = quadrant_table(example());
    for (const auto& pair : all_settings) {
        const SettingSampler s(example(), pair);
        std::array<double, 4> mean{};
        for (int seed = 0; seed < seeds; ++seed) {
            const auto c = count_quadrants(s, n, 1000 + seed, 8);
            for (int q = 0; q < 4; ++q) mean[q] += static_cast<double>(c[q]) / n / seeds;
        }
        for (Sign a : both_signs)
            for (Sign b : both_signs) {
                const double p = table.value(pair, a, b);
                EXPECT_LE(std::abs(mean[quadrant_index(a, b)] - p), 5.0 * std::sqrt(p * (1.0 - p) / n) + 1e-15)
                    << pair.name() << to_char(a) << to_char(b);
            }
    }
}

TEST(SampleSettingProperty, XxMarginalMatchesAnalytic) {
    // Particle-1 marginal: N^2 |f|^2 for x < 0 and N^2 (1 - q) |f|^2 for x > 0,
    // with |f|^2 Cauchy of width lambda. Equal-mass bins from the inverse CDF.
    const double n2 = 4.0 / 3.0, q = 0.5, lambda = 2.5;
    const auto state = build_state(MomentumProfile::exponential(lambda));
    auto cdf = [&](double x) {
        const double f = 0.5 + std::atan(x / lambda) / pi;
        return x < 0.0 ? n2 * f : n2 * (0.5 + (1.0 - q) * (f - 0.5));
    };
    auto inverse = [&](double u) {
        const double f = u < n2 * 0.5 ? u / n2 : 0.5 + (u / n2 - 0.5) / (1.0 - q);
        return lambda * std::tan(pi * (f - 0.5));
    };
    const int bins = 50;
    std::vector<double> edges{-std::numeric_limits<double>::infinity()};
    for (int k = 1; k < bins; ++k) edges.push_back(inverse(static_cast<double>(k) / bins));
    edges.push_back(std::numeric_limits<double>::infinity());
    EXPECT_NEAR(cdf(edges[25]), 0.5, 1e-12);

    const std::uint64_t n = 200000;
    std::vector<double> counts(bins, 0.0);
    for (const auto& r : sample_setting(state, xx_setting, n, 4242)) {
        const int k = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), r.value1) - edges.begin()) - 1;
        counts[k] += 1.0;
    }
    const double expected = static_cast<double>(n) / bins;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    EXPECT_LT(chi2, chi2_99(bins - 1));
}

TEST(SampleSettingProperty, PpNegativeMomentumMarginalMatchesClosedForm) {
    // For p1 < 0 the particle-1 marginal of |psi_pp|^2 is N^2 |h(p1)|^2 / 2
    // (using <h, g> = q = 1/2), integrated here from the closed form of h.
    const std::vector<double> u_edges{0.0, 0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.5, 4.0, 7.0, 15.0};
    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-12;
    spec.rel_tol = 1e-9;
    auto dens = [](double u) { return (2.0 / 3.0) * std::norm(psi_p_closed_form(1.0, -u)); };
    std::vector<double> mass;
    for (std::size_t k = 0; k + 1 < u_edges.size(); ++k)
        mass.push_back(numerics::integrate_adaptive(dens, u_edges[k], u_edges[k + 1], spec).value);
    mass.push_back(numerics::integrate_half_line(dens, u_edges.back(), spec).value);
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    EXPECT_NEAR(total, 1.0 / 12.0, 1e-8);

    const std::uint64_t n = 1000000;
    std::vector<double> counts(mass.size(), 0.0);
    for (const auto& r : sample_setting(example(), pp_setting, n, 77, {.threads = 4})) {
        if (r.value1 > 0.0) continue;
        const int k = static_cast<int>(std::upper_bound(u_edges.begin(), u_edges.end(), -r.value1) - u_edges.begin()) - 1;
        counts[k] += 1.0;
    }
    double chi2 = 0.0;
    for (std::size_t k = 0; k < mass.size(); ++k) {
        const double e = mass[k] * n;
        chi2 += (counts[k] - e) * (counts[k] - e) / e;
    }
    EXPECT_LT(chi2, chi2_99(static_cast<int>(mass.size()) - 1));
}

TEST(SampleSetting, GridStateFollowsGridTable) {
    const auto grid = build_grid_state(example(), GridSpec{});
    const auto table = quadrant_table(grid);
    const std::uint64_t n = 200000;
    const SettingSampler s(grid, pp_setting);
    EXPECT_FALSE(s.exact());
    const auto c = count_quadrants(s, n, 5, 4);
    for (Sign a : both_signs)
        for (Sign b : both_signs) {
            const double p = table.value(pp_setting, a, b);
            EXPECT_NEAR(static_cast<double>(c[quadrant_index(a, b)]) / n, p, 5.0 * std::sqrt(p * (1.0 - p) / n) + 1e-9);
        }
}

TEST(EstimateWitness, ExampleViolates) {
    ExperimentPlan plan;
    plan.shots_per_setting = 1000000;
    plan.seed = 42;
    const auto e = estimate_witness(plan, example(), {.threads = 8});
    EXPECT_NEAR(e.point, 1.0 / 48.0, 5.0 * 1.43e-4);
    EXPECT_GT(e.z_score, 5.0);
    EXPECT_TRUE(std::isfinite(e.z_score));
    EXPECT_TRUE(e.violation_claimed());
    EXPECT_GE(e.interval.lo, -3.0);
    EXPECT_LE(e.interval.hi, 1.0);
    EXPECT_EQ(e.components[1].count, 0u);
    EXPECT_EQ(e.components[2].count, 0u);
    EXPECT_EQ(e.components[3].count, 0u);
}

TEST(EstimateWitness, LhvDataIsConsistentWithBound) {
    ExperimentPlan plan;
    plan.shots_per_setting = 10000;
    for (std::uint64_t k = 0; k < 20; ++k) {
        plan.seed = 100 + k;
        const auto e = estimate_witness(plan, MessageDistribution::random(3, k), 2);
        EXPECT_LE(e.interval.lo, 0.0) << k;
        EXPECT_FALSE(e.violation_claimed());
    }
    // The distribution that saturates one bound: W = 0 exactly.
    plan.seed = 5;
    const auto sat = estimate_witness(plan, MessageDistribution::point_mass(InstructionSet::parse("++;--")));
    EXPECT_EQ(sat.point, 0.0);
    EXPECT_LE(sat.interval.lo, 0.0);
}

TEST(EstimateWitness, SingleShotIsUninformative) {
    ExperimentPlan plan;
    plan.shots_per_setting = 1;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        plan.seed = seed;
        const auto e = estimate_witness(plan, example());
        EXPECT_GE(e.interval.hi - e.interval.lo, 1.0);
        EXPECT_LE(e.interval.lo, 0.0);
        EXPECT_FALSE(e.violation_claimed());
        EXPECT_TRUE(std::isfinite(e.z_score));
    }
}

TEST(EstimateWitness, PlanValidation) {
    ExperimentPlan plan;
    plan.shots_per_setting = 0;
    EXPECT_THROW(estimate_witness(plan, example()), ConfigError);
    plan.shots_per_setting = 10;
    plan.settings = {pp_setting, xx_setting};
    EXPECT_THROW(estimate_witness(plan, example()), ConfigError);
}

TEST(EstimateWitnessProperty, IndependentOfThreadCount) {
    ExperimentPlan plan;
    plan.shots_per_setting = 50000;
    const auto a = estimate_witness(plan, example(), {.threads = 1});
    const auto b = estimate_witness(plan, example(), {.threads = 7});
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.point, b.point);
    EXPECT_EQ(a.z_score, b.z_score);
}

TEST(EventsToViolation, GeometricWithMean48) {
    const auto trials = violation_trials(example(), 10000, 42, 4);
    const double mean = std::accumulate(trials.begin(), trials.end(), 0.0) / trials.size();
    EXPECT_NEAR(mean, 48.0, 3.0 * 48.0 / std::sqrt(1e4));
    auto sorted = trials;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = static_cast<double>(sorted[sorted.size() / 2]);
    // Smallest k with 1 - (47/48)^k >= 1/2.
    const double exact_median = std::ceil(std::log(2.0) / std::log(48.0 / 47.0));
    EXPECT_EQ(exact_median, 33.0);
    EXPECT_NEAR(median, exact_median, 3.0);
}

TEST(EventsToViolation, PlanningCountAndDeterminism) {
    const auto r = events_to_violation(example(), 0.5, 1);
    EXPECT_NEAR(r.probability, 1.0 / 48.0, 1e-9);
    EXPECT_EQ(r.planning_shots, 33u);
    EXPECT_EQ(events_to_violation(example(), 0.95, 1).planning_shots,
              static_cast<std::uint64_t>(std::ceil(std::log(0.05) / std::log(47.0 / 48.0))));
    EXPECT_EQ(r.shots, events_to_violation(example(), 0.5, 1).shots);
    EXPECT_EQ(violation_trials(example(), 500, 8, 1), violation_trials(example(), 500, 8, 3));
    EXPECT_THROW(events_to_violation(example(), 1.0, 1), ConfigError);
}

TEST(EventsToViolation, LhvStateHitsCap) {
    // (-,-;+,+) satisfies all three zero conditions, so P_pp(-,-) = 0.
    const auto d = MessageDistribution::point_mass(InstructionSet::parse("--;++"));
    EXPECT_THROW(events_to_violation(d, 0.95, 1), SamplerError);
    EXPECT_EQ(lhv_table(d).value(pp_setting, M, M), 0.0);
}

}  // namespace
