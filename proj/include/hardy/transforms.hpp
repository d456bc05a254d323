// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "hardy/errors.hpp"
#include "hardy/grid.hpp"
#include "hardy/probabilities.hpp"
#include "hardy/state.hpp"

namespace hardy {

struct TransformOptions {
    double grid_tolerance = 1e-3;  ///< largest acceptable outer-mode fraction
};

namespace detail {

inline void require_xx(const TwoParticleState& s, const char* op) {
    if (s.representation() != Representation::xx)
        throw DomainError(std::string(op) + ": state must be in the xx representation");
}

inline TwoParticleState transform_grid(const TwoParticleState& s, Representation target, const TransformOptions& opt) {
    const auto& gd = s.grid_data();
    auto out = std::make_shared<GridData>(gd);
    double bound = gd.discretization_bound;
    auto step = [&](int axis) {
        auto r = grid_partial_ft(out->current, axis, FourierDirection::position_to_momentum);
        bound = std::max(bound, r.discretization_bound);
        out->current = std::move(r.grid);
    };
    if (target == Representation::px || target == Representation::pp) step(1);
    if (target == Representation::xp || target == Representation::pp) step(2);
    if (bound > opt.grid_tolerance)
        throw GridResolutionError("grid too coarse: outer-mode mass fraction " + std::to_string(bound) +
                                      " exceeds tolerance " + std::to_string(opt.grid_tolerance),
                                  bound);
    out->discretization_bound = bound;
    if (out->xx.spec.mapping == GridMapping::arctan) {
        const auto modes = analyze_grid_modes(out->xx);
        const SettingPair pair = target == Representation::px   ? px_setting
                                 : target == Representation::xp ? xp_setting
                                                                : pp_setting;
        out->represented_norm = modes.filtered[pair.index()];
    } else {
        out->represented_norm = out->current.squared_norm();
    }
    return s.with(target, std::move(out));
}

inline TwoParticleState to_rep(const TwoParticleState& s, Representation target, const TransformOptions& opt,
                               const char* op) {
    require_xx(s, op);
    if (s.is_grid()) return transform_grid(s, target, opt);
    return s.with(target);
}

}  // namespace detail

/// psi_px(p1, x2) = (1/sqrt(2 pi)) int e^{-i p1 x1} psi_xx(x1, x2) dx1.
inline TwoParticleState to_mixed_px(const TwoParticleState& s, const TransformOptions& opt = {}) {
    return detail::to_rep(s, Representation::px, opt, "to_mixed_px");
}

/// Mirror of to_mixed_px acting on particle 2.
inline TwoParticleState to_mixed_xp(const TwoParticleState& s, const TransformOptions& opt = {}) {
    return detail::to_rep(s, Representation::xp, opt, "to_mixed_xp");
}

/// Both particles to momentum. Grid states apply the particle-1 transform
/// and then the particle-2 transform through the same line routine.
inline TwoParticleState to_momentum_pp(const TwoParticleState& s, const TransformOptions& opt = {}) {
    return detail::to_rep(s, Representation::pp, opt, "to_momentum_pp");
}

}  // namespace hardy
