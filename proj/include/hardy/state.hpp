// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hardy/cayley.hpp"
#include "hardy/errors.hpp"
#include "hardy/grid.hpp"
#include "hardy/numerics/laguerre.hpp"
#include "hardy/profile.hpp"

namespace hardy {

enum class Representation { xx, xp, px, pp };

inline std::string to_string(Representation r) {
    switch (r) {
        case Representation::xx: return "xx";
        case Representation::xp: return "xp";
        case Representation::px: return "px";
        case Representation::pp: return "pp";
    }
    return "?";
}

inline Representation representation_from_string(const std::string& s) {
    if (s == "xx") return Representation::xx;
    if (s == "xp") return Representation::xp;
    if (s == "px") return Representation::px;
    if (s == "pp") return Representation::pp;
    throw ConfigError("unknown representation '" + s + "'");
}

/// Heaviside step with theta(0) = 1.
inline double heaviside(double x) { return x >= 0.0 ? 1.0 : 0.0; }

/// The mask factor [1 - theta(x1) theta(x2)].
inline double hardy_mask(double x1, double x2) { return 1.0 - heaviside(x1) * heaviside(x2); }

/// Profile data shared by every representation of a factorized state.
struct FactorizedData {
    MomentumProfile g;
    PositionProfile f;
    HalfLineTransform h;
    double q;                                 ///< int_0^inf |f|^2 dx
    numerics::QuadratureResult negative_mass;  ///< int_{-inf}^0 |h|^2 dp
};

struct TwoParticleNodeTable;

/// Tabulated state: the xx grid (kept for mode-split probabilities) and the
/// grid in the current representation.
struct GridData {
    AmplitudeGrid xx;
    AmplitudeGrid current;
    double discretization_bound = 0.0;
    double norm_defect = 0.0;  ///< |1 - unmasked mass| from profile truncation
    /// Squared norm of the continuous function the current samples represent
    /// (mode-space Parseval; 1 for xx, filter-reduced after arctan transforms).
    double represented_norm = 1.0;
    /// Node values the grid was built from, for two-particle profiles.
    std::shared_ptr<const TwoParticleNodeTable> nodes;
};

/// Two-particle momentum amplitude g2(p1, p2), zero unless p1, p2 > 0.
struct TwoParticleMomentumProfile {
    std::function<double(double, double)> g2;
    double scale = 1.0;
    int laguerre_order = 96;  ///< modes per axis kept from g2
};

/// g2 sampled at the Gauss-Laguerre product nodes (u_a / 2s, u_b / 2s), with
/// s the grid's absolute length scale; row-major in a. Everything a grid state
/// needs to be rebuilt.
struct TwoParticleNodeTable {
    double scale = 1.0;
    int laguerre_order = 96;
    GridSpec grid;
    std::vector<double> values;
};

class TwoParticleState {
public:
    Representation representation() const { return rep_; }
    double norm_constant() const { return n_; }
    bool factorized() const { return static_cast<bool>(fact_); }
    bool masked() const { return masked_; }
    bool is_grid() const { return static_cast<bool>(grid_); }
    double scale() const { return scale_; }

    const FactorizedData& factorized_data() const {
        if (!fact_) throw DomainError("state has no factorized closed form");
        return *fact_;
    }
    const GridData& grid_data() const {
        if (!grid_) throw DomainError("state is not tabulated on a grid");
        return *grid_;
    }
    std::shared_ptr<const FactorizedData> factorized_ptr() const { return fact_; }
    std::shared_ptr<const GridData> grid_ptr() const { return grid_; }

    /// psi in the current representation. Grid states return the nearest node.
    cd amplitude(double a, double b) const {
        if (grid_) return grid_amplitude(a, b);
        const auto& d = *fact_;
        switch (rep_) {
            case Representation::xx:
                return masked_ ? n_ * hardy_mask(a, b) * d.f(a) * d.f(b) : d.f(a) * d.f(b);
            case Representation::px: return mixed(a, b);
            case Representation::xp: return mixed(b, a);
            case Representation::pp: {
                const cd gg = d.g(a) * d.g(b);
                if (!masked_) return gg;
                return n_ * (gg - d.h(a) * d.h(b));
            }
        }
        return {};
    }

    TwoParticleState with(Representation rep) const {
        TwoParticleState s = *this;
        s.rep_ = rep;
        return s;
    }
    TwoParticleState with(Representation rep, std::shared_ptr<const GridData> grid) const {
        TwoParticleState s = *this;
        s.rep_ = rep;
        s.grid_ = std::move(grid);
        return s;
    }

    static TwoParticleState make_factorized(std::shared_ptr<const FactorizedData> d, bool masked) {
        TwoParticleState s;
        s.fact_ = std::move(d);
        s.masked_ = masked;
        s.scale_ = s.fact_->g.scale();
        s.n_ = masked ? 1.0 / std::sqrt(1.0 - s.fact_->q * s.fact_->q) : 1.0;
        return s;
    }
    static TwoParticleState make_grid(std::shared_ptr<const GridData> g, double n, bool masked, double scale,
                                      std::shared_ptr<const FactorizedData> origin = nullptr) {
        TwoParticleState s;
        s.grid_ = std::move(g);
        s.n_ = n;
        s.masked_ = masked;
        s.scale_ = scale;
        s.fact_ = std::move(origin);
        return s;
    }

private:
    // psi_px(p1, x2) = N [g(p1) - theta(x2) h(p1)] f(x2)
    cd mixed(double p1, double x2) const {
        const auto& d = *fact_;
        if (!masked_) return d.g(p1) * d.f(x2);
        const cd fx = d.f(x2);
        if (heaviside(x2) == 0.0) return n_ * d.g(p1) * fx;
        return n_ * (d.g(p1) - d.h(p1)) * fx;
    }

    cd grid_amplitude(double a, double b) const {
        const auto& g = grid_->current;
        const int m = g.size();
        auto locate = [&](int axis, double v) {
            if (g.spec.mapping == GridMapping::arctan) return cayley::nearest_node(v, m, g.axis_scale(axis));
            const double step = g.cell_width(axis, 0);
            return std::clamp(static_cast<int>(std::lround(v / step)) + m / 2, 0, m - 1);
        };
        return g.at(locate(0, a), locate(1, b));
    }

    Representation rep_ = Representation::xx;
    double n_ = 1.0;
    bool masked_ = true;
    double scale_ = 1.0;
    std::shared_ptr<const FactorizedData> fact_;
    std::shared_ptr<const GridData> grid_;
};

struct BuildOptions {
    bool masked = true;  ///< false builds the product state f(x1) f(x2) with N = 1
    numerics::QuadratureSpec quadrature{};
};

/// Masked state N [1 - theta(x1) theta(x2)] f(x1) f(x2) from a factorized profile.
inline TwoParticleState build_state(const MomentumProfile& g, const BuildOptions& opt = {}) {
    auto d = std::make_shared<FactorizedData>(FactorizedData{
        g, position_profile(g, opt.quadrature), HalfLineTransform(g, opt.quadrature), positive_position_mass(g),
        negative_momentum_mass(g, opt.quadrature)});
    if (!(d->q < 1.0)) throw DomainError("build_state: mask removes all probability");
    return TwoParticleState::make_factorized(std::move(d), opt.masked);
}

namespace detail {

inline GridData finish_grid(AmplitudeGrid xx, bool masked, double unmasked_mass, double& n_out) {
    const int m = xx.size();
    if (masked) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) xx.at(i, j) *= hardy_mask(xx.node(0, i), xx.node(1, j));
    }
    const double mass = xx.squared_norm();
    if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("grid state is not normalizable");
    n_out = 1.0 / std::sqrt(mass / unmasked_mass);
    const double k = 1.0 / std::sqrt(mass);
    for (auto& v : xx.values) v *= k;
    GridData d;
    d.xx = xx;
    d.current = std::move(xx);
    d.norm_defect = std::abs(1.0 - unmasked_mass);
    return d;
}

}  // namespace detail

/// Tabulates a factorized state's xx amplitude on a grid.
inline TwoParticleState build_grid_state(const TwoParticleState& state, const GridSpec& spec) {
    spec.validate();
    const auto& d = state.factorized_data();
    AmplitudeGrid g;
    g.spec = spec;
    g.length_unit = state.scale();
    const int m = spec.points_per_axis;
    std::vector<cd> fx(m);
    for (int j = 0; j < m; ++j) fx[j] = d.f(g.node(0, j));
    g.values.resize(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g.at(i, j) = fx[i] * fx[j];
    const double unmasked = g.squared_norm();
    double n = 1.0;
    auto data = std::make_shared<GridData>(detail::finish_grid(std::move(g), state.masked(), unmasked, n));
    data->norm_defect = std::abs(1.0 - unmasked);
    return TwoParticleState::make_grid(std::move(data), n, state.masked(), state.scale(), state.factorized_ptr());
}

/// Samples g2 at the Gauss-Laguerre nodes of the given arctan grid.
inline TwoParticleNodeTable tabulate_two_particle(const TwoParticleMomentumProfile& profile, const GridSpec& spec) {
    spec.validate();
    if (spec.mapping != GridMapping::arctan) throw ConfigError("build_state: two-particle profiles need an arctan grid");
    if (!profile.g2) throw DomainError("build_state: empty two-particle profile");
    if (!(profile.scale > 0.0)) throw DomainError("build_state: scale must be positive");
    const int k = profile.laguerre_order;
    if (k < 4 || k > 256) throw DomainError("build_state: laguerre_order must lie in [4, 256]");
    const double sc = profile.scale;
    for (double a : {-1e-9, -0.01, -1.0, -10.0})
        for (double b : {-1e-9, 0.0, 0.5, 2.0}) {
            if (profile.g2(a * sc, b / sc) != 0.0 || profile.g2(b / sc, a * sc) != 0.0)
                throw DomainError("build_state: g2 must vanish unless p1 > 0 and p2 > 0");
        }
    TwoParticleNodeTable t{sc, k, spec, {}};
    const double s = spec.scale * sc;
    const auto rule = numerics::gauss_laguerre(k);
    t.values.resize(static_cast<std::size_t>(k) * k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            const double v = profile.g2(rule.nodes[a] / (2.0 * s), rule.nodes[b] / (2.0 * s));
            if (!std::isfinite(v)) throw DomainError("build_state: g2 is not finite");
            t.values[static_cast<std::size_t>(a) * k + b] = v;
        }
    return t;
}

/// Masked state from g2 node values, tabulated on the table's arctan grid
/// through the Laguerre expansion.
///
/// g2 is expanded as sum b_nm l_n(p1) l_m(p2) in Laguerre functions of scale
/// s (Gauss-Laguerre projection), which makes the xx amplitude an exact finite
/// Cayley-mode sum with positive-momentum support built in.
inline TwoParticleState build_state(const TwoParticleNodeTable& table, const BuildOptions& opt = {}) {
    const GridSpec& spec = table.grid;
    spec.validate();
    if (spec.mapping != GridMapping::arctan) throw ConfigError("build_state: two-particle profiles need an arctan grid");
    const int k = table.laguerre_order;
    if (k < 4 || k > 256) throw DomainError("build_state: laguerre_order must lie in [4, 256]");
    if (!(table.scale > 0.0)) throw DomainError("build_state: scale must be positive");
    if (table.values.size() != static_cast<std::size_t>(k) * k)
        throw DomainError("build_state: node table holds " + std::to_string(table.values.size()) +
                          " values, expected laguerre_order^2");
    const double sc = table.scale;

    AmplitudeGrid g;
    g.spec = spec;
    g.length_unit = sc;
    const double s = g.length_scale();
    const int m = spec.points_per_axis;
    const int modes = std::min(k, m / 2);

    const auto rule = numerics::gauss_laguerre(k);
    Eigen::MatrixXd lambda(k, modes);  // W'_a e^{-u/2} L_n(u_a)
    std::vector<double> row(modes);
    std::vector<double> wprime(k);
    for (int a = 0; a < k; ++a) {
        wprime[a] = std::exp(rule.log_weights[a] + rule.nodes[a]);
        numerics::laguerre_functions(rule.nodes[a], row);
        for (int n = 0; n < modes; ++n) lambda(a, n) = wprime[a] * row[n];
    }
    Eigen::MatrixXd values(k, k);
    double mass = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            const double v = table.values[static_cast<std::size_t>(a) * k + b];
            if (!std::isfinite(v)) throw DomainError("build_state: g2 is not finite");
            values(a, b) = v;
            mass += wprime[a] * wprime[b] * v * v;
        }
    mass /= 4.0 * s * s;
    if (!(mass > 0.0) || std::abs(mass - 1.0) > 1e-6)
        throw DomainError("build_state: int g2^2 = " + std::to_string(mass) + ", expected 1");
    const Eigen::MatrixXd b = lambda.transpose() * values * lambda / (2.0 * s);
    const double captured = b.squaredNorm();

    // Weighted amplitude Psi = (1/2 pi) sum b_nm (-1)^{n+m} e^{i(n+1/2) t1} e^{i(m+1/2) t2}.
    Eigen::MatrixXcd e(m, modes);
    for (int j = 0; j < m; ++j)
        for (int n = 0; n < modes; ++n)
            e(j, n) = std::polar((n % 2 == 0 ? 1.0 : -1.0) / std::sqrt(2.0 * std::numbers::pi),
                                 (n + 0.5) * cayley::theta(j, m));
    const Eigen::MatrixXcd psi = e * b.cast<cd>() * e.transpose();
    g.values.resize(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        const double wi = cayley::weight(i, m, s);
        for (int j = 0; j < m; ++j) g.at(i, j) = psi(i, j) / (wi * cayley::weight(j, m, s));
    }
    const double unmasked = g.squared_norm();
    double n = 1.0;
    auto data = std::make_shared<GridData>(detail::finish_grid(std::move(g), opt.masked, unmasked, n));
    data->norm_defect = std::abs(1.0 - captured);
    data->nodes = std::make_shared<const TwoParticleNodeTable>(table);
    return TwoParticleState::make_grid(std::move(data), n, opt.masked, sc);
}

/// Masked state from a general two-particle momentum amplitude on an arctan grid.
inline TwoParticleState build_state(const TwoParticleMomentumProfile& profile, const GridSpec& spec,
                                    const BuildOptions& opt = {}) {
    return build_state(tabulate_two_particle(profile, spec), opt);
}

}  // namespace hardy
