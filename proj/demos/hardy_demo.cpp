// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

// Walks through the library: build the masked state, tabulate the quadrant
// probabilities, bound the instruction-set models, then simulate data.

#include <cstdio>
#include <cstdlib>

#include "hardy/hardy.hpp"

int main(int argc, char** argv) {
    using namespace hardy;
    const double lambda = argc > 1 ? std::atof(argv[1]) : 1.0;
    const Sign P = Sign::plus, M = Sign::minus;

    const auto state = build_state(MomentumProfile::exponential(lambda));
    std::printf("lambda = %g, N = %.15f\n\n", lambda, state.norm_constant());

    const auto table = quadrant_table(state);
    std::printf("setting      (+,+)      (+,-)      (-,+)      (-,-)\n");
    for (const auto& pair : all_settings)
        std::printf("%-7s %10.6f %10.6f %10.6f %10.6f\n", pair.name().c_str(), table.value(pair, P, P),
                    table.value(pair, P, M), table.value(pair, M, P), table.value(pair, M, M));

    const auto w = hardy_witness(table);
    std::printf("\nP_pp(-,-) = %.12f, forced-zero terms sum to %.1e, W = %.12f\n", w.lhs,
                w.xx_plus_plus + w.px_minus_minus + w.xp_minus_minus, w.w);

    const auto lhv = lhv_max_witness();
    std::printf("largest W over instruction-set models: %g (%zu maximizing messages)\n", lhv.max_w,
                lhv.maximizers.size());

    ExperimentPlan plan;
    plan.shots_per_setting = 200000;
    const auto e = estimate_witness(plan, state);
    std::printf("\n%llu shots per setting: W = %.5f, 95%% interval [%.5f, %.5f], z = %.1f\n",
                static_cast<unsigned long long>(plan.shots_per_setting), e.point, e.interval.lo, e.interval.hi,
                e.z_score);

    const auto first = events_to_violation(state, 0.5, plan.seed);
    std::printf("first pp (-,-) event at shot %llu; %llu shots give one with probability 1/2\n",
                static_cast<unsigned long long>(first.shots), static_cast<unsigned long long>(first.planning_shots));
    return 0;
}
