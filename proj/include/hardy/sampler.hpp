// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "hardy/cayley.hpp"
#include "hardy/errors.hpp"
#include "hardy/grid.hpp"
#include "hardy/lhv.hpp"
#include "hardy/probabilities.hpp"
#include "hardy/sampling/philox.hpp"
#include "hardy/sampling/stats.hpp"
#include "hardy/state.hpp"
#include "hardy/transforms.hpp"

namespace hardy {

/// One simulated shot: measured values and their strict signs.
struct SampleRecord {
    SettingPair setting = xx_setting;
    double value1 = 0.0;
    double value2 = 0.0;
    Sign sign1 = Sign::plus;
    Sign sign2 = Sign::plus;
};

inline Sign sign_of(double v) { return v > 0.0 ? Sign::plus : Sign::minus; }

/// Quadrant index 2 s1 + s2 with plus = 0, matching GridModeAnalysis.
inline int quadrant_index(Sign s1, Sign s2) { return 2 * (s1 == Sign::minus) + (s2 == Sign::minus); }
inline Sign quadrant_sign(int q, int particle) {
    const int bit = particle == 1 ? (q >> 1) & 1 : q & 1;
    return bit ? Sign::minus : Sign::plus;
}

/// Fixed blocks of shots per setting pair.
struct ExperimentPlan {
    std::uint64_t shots_per_setting = 1000000;
    std::uint64_t seed = 42;
    std::vector<SettingPair> settings{all_settings.begin(), all_settings.end()};

    void validate() const {
        if (shots_per_setting < 1) throw ConfigError("ExperimentPlan: shots_per_setting must be >= 1");
        if (settings.empty()) throw ConfigError("ExperimentPlan: no settings");
    }
    bool covers_all_settings() const {
        return std::all_of(all_settings.begin(), all_settings.end(), [this](SettingPair p) {
            return std::find(settings.begin(), settings.end(), p) != settings.end();
        });
    }
};

struct SamplerOptions {
    GridSpec grid{};  ///< density table for factorized states; grid states use their own grid
    TransformOptions transform{};
    unsigned threads = 1;
};

namespace sampling {

inline StreamTag setting_tag(SettingPair p) { return static_cast<StreamTag>(p.index()); }
inline StreamTag message_tag(SettingPair p) { return static_cast<StreamTag>(4 + p.index()); }

/// Categorical draw over four quadrant probabilities. Zero-probability
/// quadrants are never selected.
class QuadrantPicker {
public:
    QuadrantPicker() = default;
    explicit QuadrantPicker(const std::array<double, 4>& p) {
        double total = 0.0;
        for (int q = 0; q < 4; ++q) {
            p_[q] = std::max(0.0, p[q]);
            total += p_[q];
        }
        if (!(total > 0.0) || !std::isfinite(total)) throw SamplerError("quadrant probabilities sum to zero");
        int last = 0;
        double c = 0.0;
        for (int q = 0; q < 4; ++q) {
            p_[q] /= total;
            c += p_[q];
            cum_[q] = c;
            if (p_[q] > 0.0) last = q;
        }
        for (int q = last; q < 4; ++q) cum_[q] = 1.0;
    }

    int pick(double u) const {
        for (int q = 0; q < 3; ++q)
            if (u < cum_[q]) return q;
        return 3;
    }

    const std::array<double, 4>& probabilities() const { return p_; }

private:
    std::array<double, 4> p_{};
    std::array<double, 4> cum_{};
};

/// Inverse CDF of the density proportional to (1 - t) a + t b on [0, 1].
inline double sample_linear(double a, double b, double r) {
    if (!(a + b > 0.0)) return r;
    return r * (a + b) / (a + std::sqrt(a * a + r * (b * b - a * a)));
}

/// Acceptance check for rejection stages; below 1% signals a bad proposal.
inline void check_acceptance(std::uint64_t accepted, std::uint64_t attempts) {
    if (attempts >= 1000 && static_cast<double>(accepted) < 0.01 * static_cast<double>(attempts))
        throw SamplerError("rejection sampler efficiency " +
                           std::to_string(static_cast<double>(accepted) / static_cast<double>(attempts)) +
                           " is below 1%: proposal misconfigured");
}

inline constexpr std::uint64_t max_attempts_per_shot = 100000;

}  // namespace sampling

/// Draws outcome pairs from |psi|^2 of one state in one setting pair.
///
/// The sign quadrant comes first, from the exact quadrant table. Inside it a
/// cell of the arctan grid is chosen by inverse CDF over cell masses of
/// |psi|^2, and the point within the cell by bilinear interpolation in theta
/// of the mass density. Factorized states integrate each cell from the
/// closed-form factors; grid states use the node values (midpoint rule). The exponential profile's
/// xx setting is sampled exactly instead: a Cauchy pair with the (+,+)
/// quadrant rejected.
class SettingSampler {
public:
    SettingSampler(const TwoParticleState& state, SettingPair pair, const SamplerOptions& opt = {}) : pair_(pair) {
        if (state.representation() != Representation::xx)
            throw DomainError("sampler: state must be given in the xx representation");
        const auto table = quadrant_table(state);
        std::array<double, 4> p{};
        for (Sign a : both_signs)
            for (Sign b : both_signs) p[quadrant_index(a, b)] = table.value(pair, a, b);
        picker_ = sampling::QuadrantPicker(p);

        if (!state.is_grid() && pair == xx_setting &&
            state.factorized_data().g.kind() == ProfileKind::exponential) {
            exact_ = true;
            masked_ = state.masked();
            lambda_ = state.scale();
            return;
        }
        if (state.is_grid())
            tabulate_grid(state, opt);
        else
            tabulate_factorized(state, opt.grid);
    }

    SettingPair setting() const { return pair_; }
    bool exact() const { return exact_; }
    sampling::StreamTag tag() const { return sampling::setting_tag(pair_); }
    const std::array<double, 4>& quadrant_probabilities() const { return picker_.probabilities(); }

    /// One shot; `attempts` accumulates proposals including redraws.
    SampleRecord draw(sampling::Stream& rng, std::uint64_t& attempts) const {
        for (std::uint64_t k = 0; k < sampling::max_attempts_per_shot; ++k) {
            ++attempts;
            SampleRecord r{pair_, 0.0, 0.0, Sign::plus, Sign::plus};
            if (exact_) {
                r.value1 = cauchy(rng.uniform());
                r.value2 = cauchy(rng.uniform());
                if (r.value1 == 0.0 || r.value2 == 0.0) continue;
                if (masked_ && r.value1 > 0.0 && r.value2 > 0.0) continue;
            } else {
                const int q = picker_.pick(rng.uniform());
                if (!draw_in_quadrant(rng, q, r)) continue;
                if (sign_of(r.value1) != quadrant_sign(q, 1) || sign_of(r.value2) != quadrant_sign(q, 2)) continue;
            }
            r.sign1 = sign_of(r.value1);
            r.sign2 = sign_of(r.value2);
            return r;
        }
        throw SamplerError("sampler: no acceptable draw after " + std::to_string(sampling::max_attempts_per_shot) +
                           " proposals");
    }

private:
    double cauchy(double u) const { return lambda_ * std::tan(std::numbers::pi * (u - 0.5)); }

    double density(int i, int j) const { return dens_[static_cast<std::size_t>(i) * m_ + j]; }

    /// Density at cell corner (a, b), a, b in [0, M]: mean of adjacent cells.
    double corner(int a, int b) const {
        double sum = 0.0;
        int count = 0;
        for (int i = std::max(0, a - 1); i <= std::min(m_ - 1, a); ++i)
            for (int j = std::max(0, b - 1); j <= std::min(m_ - 1, b); ++j) {
                sum += density(i, j);
                ++count;
            }
        return sum / count;
    }

    bool draw_in_quadrant(sampling::Stream& rng, int q, SampleRecord& r) const {
        const auto& cum = cum_[q];
        const double target = rng.uniform() * cum.back();
        const auto it = std::upper_bound(cum.begin(), cum.end(), target);
        const int cell = static_cast<int>(std::min<std::ptrdiff_t>(it - cum.begin(), cum.size() - 1));
        const int half = m_ / 2;
        const int i = cell / half + (quadrant_sign(q, 1) == Sign::plus ? half : 0);
        const int j = cell % half + (quadrant_sign(q, 2) == Sign::plus ? half : 0);
        const double f00 = corner(i, j), f10 = corner(i + 1, j), f01 = corner(i, j + 1), f11 = corner(i + 1, j + 1);
        const double u = sampling::sample_linear(f00 + f01, f10 + f11, rng.uniform());
        const double v = sampling::sample_linear((1.0 - u) * f00 + u * f10, (1.0 - u) * f01 + u * f11, rng.uniform());
        const double dt = cayley::delta_theta(m_);
        r.value1 = c1_ * std::tan(0.5 * (cayley::theta_edge(i, m_) + u * dt));
        r.value2 = c2_ * std::tan(0.5 * (cayley::theta_edge(j, m_) + v * dt));
        return r.value1 != 0.0 && r.value2 != 0.0 && std::isfinite(r.value1) && std::isfinite(r.value2);
    }

    void tabulate_grid(const TwoParticleState& state, const SamplerOptions& opt) {
        const Representation rep = pair_ == xx_setting   ? Representation::xx
                                   : pair_ == px_setting ? Representation::px
                                   : pair_ == xp_setting ? Representation::xp
                                                         : Representation::pp;
        if (state.grid_data().xx.spec.mapping != GridMapping::arctan)
            throw ConfigError("sampler: grid states need the arctan mapping");
        const TwoParticleState s = rep == Representation::xx ? state : detail::to_rep(state, rep, opt.transform, "sampler");
        const auto& g = s.grid_data().current;
        m_ = g.size();
        c1_ = g.axis_scale(0);
        c2_ = g.axis_scale(1);
        dens_.resize(static_cast<std::size_t>(m_) * m_);
        for (int i = 0; i < m_; ++i) {
            const double w1 = cayley::weight(i, m_, c1_);
            for (int j = 0; j < m_; ++j) {
                const double w = w1 * cayley::weight(j, m_, c2_);
                dens_[static_cast<std::size_t>(i) * m_ + j] = std::norm(g.at(i, j)) * w * w;
            }
        }
        build_cdf();
    }

    /// Cell masses by a 4-point Gauss-Legendre rule per axis in theta. The
    /// two cells touching theta = 0 use theta = +-dtheta v^4, which absorbs
    /// the ln^2|p| singularity of |h|^2 at p = 0.
    void tabulate_factorized(const TwoParticleState& state, const GridSpec& spec) {
        spec.validate();
        if (spec.mapping != GridMapping::arctan) throw ConfigError("sampler: density tables need the arctan mapping");
        const auto& d = state.factorized_data();
        const bool exponential = d.g.kind() == ProfileKind::exponential;
        m_ = spec.points_per_axis;
        const double s = spec.scale * state.scale();
        const bool mom1 = pair_.first == Setting::p, mom2 = pair_.second == Setting::p;
        c1_ = mom1 ? 1.0 / s : s;
        c2_ = mom2 ? 1.0 / s : s;

        constexpr int k_points = 4;
        constexpr std::array<double, k_points> gx{0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
                                                  0.9305681557970263};
        constexpr std::array<double, k_points> gw{0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                                                  0.1739274225687269};
        // Per-axis factors at m_ * k_points sub-nodes: y, weight (dy/dtheta
        // times the rule weight), and g, h (momentum) or f (position).
        struct Axis {
            std::vector<double> y, w;
            std::vector<cd> a, h;
        };
        const double dt = cayley::delta_theta(m_);
        auto axis = [&](bool momentum, double c) {
            Axis ax;
            for (int j = 0; j < m_; ++j)
                for (int k = 0; k < k_points; ++k) {
                    double th, jac;
                    if (j == m_ / 2 - 1 || j == m_ / 2) {
                        const double v = gx[k];
                        th = (j == m_ / 2 ? 1.0 : -1.0) * dt * v * v * v * v;
                        jac = 4.0 * v * v * v;
                    } else {
                        th = cayley::theta_edge(j, m_) + gx[k] * dt;
                        jac = 1.0;
                    }
                    const double y = c * std::tan(0.5 * th);
                    const double sec = 1.0 / std::cos(0.5 * th);
                    ax.y.push_back(y);
                    ax.w.push_back(0.5 * c * sec * sec * jac * gw[k]);
                    if (momentum) {
                        ax.a.push_back(d.g(y));
                        cd h{};
                        if (state.masked()) h = exponential ? half_line_transform_closed_form(d.g.scale(), y) : d.h(y);
                        ax.h.push_back(h);
                    } else {
                        ax.a.push_back(d.f(y));
                        ax.h.push_back({});
                    }
                }
            return ax;
        };
        const Axis a1 = axis(mom1, c1_);
        const Axis a2 = mom1 == mom2 ? a1 : axis(mom2, c2_);
        const double n = state.norm_constant();
        const bool masked = state.masked();
        auto psi = [&](int i, int j) {
            const cd plain = a1.a[i] * a2.a[j];
            if (!masked) return plain;
            if (!mom1 && !mom2) return n * hardy_mask(a1.y[i], a2.y[j]) * plain;
            if (mom1 && !mom2) return n * (a1.a[i] - heaviside(a2.y[j]) * a1.h[i]) * a2.a[j];
            if (!mom1 && mom2) return n * (a2.a[j] - heaviside(a1.y[i]) * a2.h[j]) * a1.a[i];
            return n * (plain - a1.h[i] * a2.h[j]);
        };

        dens_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) {
                double mass = 0.0;
                for (int k = 0; k < k_points; ++k) {
                    const int ik = i * k_points + k;
                    for (int l = 0; l < k_points; ++l) {
                        const int jl = j * k_points + l;
                        mass += std::norm(psi(ik, jl)) * a1.w[ik] * a2.w[jl];
                    }
                }
                dens_[static_cast<std::size_t>(i) * m_ + j] = mass;
            }
        build_cdf();
    }

    void build_cdf() {
        const int half = m_ / 2;
        for (int q = 0; q < 4; ++q) {
            const int i0 = quadrant_sign(q, 1) == Sign::plus ? half : 0;
            const int j0 = quadrant_sign(q, 2) == Sign::plus ? half : 0;
            auto& cum = cum_[q];
            cum.resize(static_cast<std::size_t>(half) * half);
            double c = 0.0;
            for (int i = 0; i < half; ++i)
                for (int j = 0; j < half; ++j) {
                    c += density(i0 + i, j0 + j);
                    cum[static_cast<std::size_t>(i) * half + j] = c;
                }
            if (picker_.probabilities()[q] > 0.0 && !(c > 0.0))
                throw SamplerError("sampler: tabulated density vanishes on a quadrant of positive probability");
        }
    }

    SettingPair pair_;
    sampling::QuadrantPicker picker_;
    bool exact_ = false;
    bool masked_ = true;
    double lambda_ = 1.0;
    int m_ = 0;
    double c1_ = 1.0, c2_ = 1.0;
    std::vector<double> dens_;
    std::array<std::vector<double>, 4> cum_;
};

/// Shots from an instruction-set model: draw a message, read off the answers
/// as values +-1.
class LhvSettingSampler {
public:
    LhvSettingSampler(const MessageDistribution& d, SettingPair pair) : pair_(pair) {
        double c = 0.0;
        for (int i = 0; i < 16; ++i) {
            c += d.weights()[i];
            cum_[i] = c;
        }
        int last = 0;
        for (int i = 0; i < 16; ++i)
            if (d.weights()[i] > 0.0) last = i;
        for (int i = last; i < 16; ++i) cum_[i] = 1.0;
        for (Sign a : both_signs)
            for (Sign b : both_signs) p_[quadrant_index(a, b)] = joint_from_messages(d, pair, a, b);
    }

    SettingPair setting() const { return pair_; }
    sampling::StreamTag tag() const { return sampling::message_tag(pair_); }
    const std::array<double, 4>& quadrant_probabilities() const { return p_; }

    SampleRecord draw(sampling::Stream& rng, std::uint64_t& attempts) const {
        ++attempts;
        const double u = rng.uniform();
        int k = 0;
        while (k < 15 && !(u < cum_[k])) ++k;
        const auto m = InstructionSet::from_index(k);
        SampleRecord r{pair_, 0.0, 0.0, m.answer(1, pair_.first), m.answer(2, pair_.second)};
        r.value1 = r.sign1 == Sign::plus ? 1.0 : -1.0;
        r.value2 = r.sign2 == Sign::plus ? 1.0 : -1.0;
        return r;
    }

private:
    SettingPair pair_;
    std::array<double, 16> cum_{};
    std::array<double, 4> p_{};
};

namespace sampling {

/// Runs body(lo, hi, part) over [0, n) split into `threads` contiguous parts.
template <class Body>
void parallel_ranges(std::uint64_t n, unsigned threads, Body body) {
    threads = std::max(1u, threads);
    if (n < threads) threads = static_cast<unsigned>(std::max<std::uint64_t>(1, n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    auto run = [&](unsigned t) {
        try {
            body(n * t / threads, n * (t + 1) / threads, t);
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(run, t);
    run(0);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace sampling

/// Shot i draws from stream (seed, tag, i), so records do not depend on the
/// thread count.
template <class Sampler>
std::vector<SampleRecord> sample_records(const Sampler& s, std::uint64_t n, std::uint64_t seed, unsigned threads = 1) {
    std::vector<SampleRecord> out(n);
    std::vector<std::uint64_t> attempts(std::max(1u, threads), 0);
    sampling::parallel_ranges(n, threads, [&](std::uint64_t lo, std::uint64_t hi, unsigned t) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            sampling::Stream rng(seed, s.tag(), i);
            out[i] = s.draw(rng, attempts[t]);
        }
    });
    std::uint64_t total = 0;
    for (auto a : attempts) total += a;
    sampling::check_acceptance(n, total);
    return out;
}

/// Quadrant counts (index 2 s1 + s2) of n shots without storing records.
template <class Sampler>
std::array<std::uint64_t, 4> count_quadrants(const Sampler& s, std::uint64_t n, std::uint64_t seed,
                                             unsigned threads = 1) {
    threads = std::max(1u, threads);
    std::vector<std::array<std::uint64_t, 4>> parts(threads);
    std::vector<std::uint64_t> attempts(threads, 0);
    sampling::parallel_ranges(n, threads, [&](std::uint64_t lo, std::uint64_t hi, unsigned t) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            sampling::Stream rng(seed, s.tag(), i);
            const auto r = s.draw(rng, attempts[t]);
            ++parts[t][quadrant_index(r.sign1, r.sign2)];
        }
    });
    std::array<std::uint64_t, 4> out{};
    std::uint64_t total = 0;
    for (unsigned t = 0; t < threads; ++t) {
        for (int q = 0; q < 4; ++q) out[q] += parts[t][q];
        total += attempts[t];
    }
    sampling::check_acceptance(n, total);
    return out;
}

/// n i.i.d. shots of `state` (xx representation) in the setting pair.
inline std::vector<SampleRecord> sample_setting(const TwoParticleState& state, SettingPair pair, std::uint64_t n,
                                                std::uint64_t seed, const SamplerOptions& opt = {}) {
    return sample_records(SettingSampler(state, pair, opt), n, seed, opt.threads);
}

/// One witness term: the count of a sign pair in its setting block.
struct ComponentEstimate {
    SettingPair setting = xx_setting;
    Sign sign1 = Sign::plus;
    Sign sign2 = Sign::plus;
    std::uint64_t count = 0;
    std::uint64_t shots = 0;
    double frequency = 0.0;
    sampling::Interval wilson;
};

struct WitnessEstimate {
    double point = 0.0;
    /// pp(-,-), xx(+,+), px(-,-), xp(-,-) in that order.
    std::array<ComponentEstimate, 4> components;
    sampling::Interval interval{-3.0, 1.0};  ///< conservative union of Wilson intervals
    double sigma = 0.0;
    double z_score = 0.0;
    double confidence = 0.95;
    /// Quadrant counts per setting, [pair.index()][2 s1 + s2].
    std::array<std::array<std::uint64_t, 4>, 4> counts{};
    std::uint64_t shots_per_setting = 0;
    std::uint64_t seed = 0;

    bool violation_claimed() const { return interval.lo > 0.0; }
};

/// Witness from per-setting quadrant counts.
///
/// Point: W of the empirical frequencies. Interval: each term at its Wilson
/// endpoint in the direction that widens W, the min term at min of the
/// matching endpoints, clamped to [-3, 1]. z = W / sigma with
/// sigma^2 = v_pp + v_xx + v_px + v_xp + 3 max(v_px, v_xp), the larger of the
/// two delta-method variances the min branch can produce.
inline WitnessEstimate witness_from_counts(const std::array<std::array<std::uint64_t, 4>, 4>& counts,
                                           std::uint64_t shots, double confidence = 0.95) {
    if (shots < 1) throw ConfigError("witness: shots_per_setting must be >= 1");
    const Sign P = Sign::plus, M = Sign::minus;
    WitnessEstimate e;
    e.counts = counts;
    e.shots_per_setting = shots;
    e.confidence = confidence;
    const std::array<std::tuple<SettingPair, Sign, Sign>, 4> terms{
        std::tuple{pp_setting, M, M}, std::tuple{xx_setting, P, P}, std::tuple{px_setting, M, M},
        std::tuple{xp_setting, M, M}};
    std::array<double, 4> var{};
    for (int k = 0; k < 4; ++k) {
        auto& c = e.components[k];
        std::tie(c.setting, c.sign1, c.sign2) = terms[k];
        c.count = counts[c.setting.index()][quadrant_index(c.sign1, c.sign2)];
        c.shots = shots;
        c.frequency = static_cast<double>(c.count) / static_cast<double>(shots);
        c.wilson = sampling::wilson_interval(c.count, shots, confidence);
        var[k] = sampling::frequency_variance(c.count, shots);
    }
    const auto& pp = e.components[0];
    const auto& xx = e.components[1];
    const auto& px = e.components[2];
    const auto& xp = e.components[3];
    e.point = pp.frequency - (xx.frequency + px.frequency + xp.frequency + std::min(xp.frequency, px.frequency));
    const double lo = pp.wilson.lo - (xx.wilson.hi + px.wilson.hi + xp.wilson.hi + std::min(xp.wilson.hi, px.wilson.hi));
    const double hi = pp.wilson.hi - (xx.wilson.lo + px.wilson.lo + xp.wilson.lo + std::min(xp.wilson.lo, px.wilson.lo));
    e.interval = {std::clamp(lo, -3.0, 1.0), std::clamp(hi, -3.0, 1.0)};
    e.sigma = std::sqrt(var[0] + var[1] + var[2] + var[3] + 3.0 * std::max(var[2], var[3]));
    e.z_score = e.point / e.sigma;
    return e;
}

namespace detail {

template <class MakeSampler>
WitnessEstimate estimate_witness_with(const ExperimentPlan& plan, MakeSampler make, unsigned threads,
                                      double confidence) {
    plan.validate();
    if (!plan.covers_all_settings()) throw ConfigError("witness: the plan must cover all four setting pairs");
    std::array<std::array<std::uint64_t, 4>, 4> counts{};
    for (const auto& pair : all_settings)
        counts[pair.index()] = count_quadrants(make(pair), plan.shots_per_setting, plan.seed, threads);
    auto e = witness_from_counts(counts, plan.shots_per_setting, confidence);
    e.seed = plan.seed;
    return e;
}

}  // namespace detail

inline WitnessEstimate estimate_witness(const ExperimentPlan& plan, const TwoParticleState& state,
                                        const SamplerOptions& opt = {}, double confidence = 0.95) {
    return detail::estimate_witness_with(
        plan, [&](SettingPair p) { return SettingSampler(state, p, opt); }, opt.threads, confidence);
}

/// Control run on data generated by an instruction-set model.
inline WitnessEstimate estimate_witness(const ExperimentPlan& plan, const MessageDistribution& d,
                                        unsigned threads = 1, double confidence = 0.95) {
    return detail::estimate_witness_with(
        plan, [&](SettingPair p) { return LhvSettingSampler(d, p); }, threads, confidence);
}

struct ViolationSearch {
    std::uint64_t shots = 0;          ///< index (1-based) of the first pp (-,-) shot
    double probability = 0.0;         ///< P_pp(-,-) used for the draws
    double confidence = 0.0;
    std::uint64_t planning_shots = 0;  ///< shots giving at least one (-,-) with this confidence; 0 if never
};

inline constexpr std::uint64_t violation_shot_cap = 10000000;

namespace detail {

inline std::array<double, 4> pp_quadrants(const QuadrantProbabilityTable& t) {
    std::array<double, 4> p{};
    for (Sign a : both_signs)
        for (Sign b : both_signs) p[quadrant_index(a, b)] = t.value(pp_setting, a, b);
    return p;
}

inline ViolationSearch search_violation(const std::array<double, 4>& pp, double confidence, std::uint64_t seed,
                                        std::uint64_t trial, std::uint64_t cap) {
    if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must lie in (0, 1)");
    const sampling::QuadrantPicker picker(pp);
    ViolationSearch r;
    r.probability = picker.probabilities()[3];
    r.confidence = confidence;
    if (r.probability > 0.0)
        r.planning_shots = static_cast<std::uint64_t>(std::ceil(std::log1p(-confidence) / std::log1p(-r.probability)));
    sampling::Stream rng(seed, sampling::StreamTag::trials, trial);
    for (std::uint64_t k = 1; k <= cap; ++k)
        if (picker.pick(rng.uniform()) == 3) {
            r.shots = k;
            return r;
        }
    throw SamplerError("no pp (-,-) event within " + std::to_string(cap) + " shots");
}

}  // namespace detail

/// pp-setting shots until the first (-,-) outcome. Only the sign quadrant of
/// each shot is drawn; trial t uses stream (seed, trials, t).
inline ViolationSearch events_to_violation(const TwoParticleState& state, double confidence, std::uint64_t seed,
                                           std::uint64_t trial = 0, std::uint64_t cap = violation_shot_cap) {
    return detail::search_violation(detail::pp_quadrants(quadrant_table(state)), confidence, seed, trial, cap);
}

inline ViolationSearch events_to_violation(const MessageDistribution& d, double confidence, std::uint64_t seed,
                                           std::uint64_t trial = 0, std::uint64_t cap = violation_shot_cap) {
    return detail::search_violation(detail::pp_quadrants(lhv_table(d)), confidence, seed, trial, cap);
}

/// Shots-to-first-violation for trials 0..count-1.
inline std::vector<std::uint64_t> violation_trials(const TwoParticleState& state, std::uint64_t count,
                                                   std::uint64_t seed, unsigned threads = 1,
                                                   std::uint64_t cap = violation_shot_cap) {
    const auto pp = detail::pp_quadrants(quadrant_table(state));
    std::vector<std::uint64_t> out(count);
    sampling::parallel_ranges(count, threads, [&](std::uint64_t lo, std::uint64_t hi, unsigned) {
        for (std::uint64_t t = lo; t < hi; ++t) out[t] = detail::search_violation(pp, 0.5, seed, t, cap).shots;
    });
    return out;
}

}  // namespace hardy
