// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/probabilities.hpp"
#include "hardy/sampling/philox.hpp"

namespace hardy {

/// Predetermined answers (a_x1, a_x2; a_p1, a_p2).
struct InstructionSet {
    Sign x1 = Sign::plus;
    Sign x2 = Sign::plus;
    Sign p1 = Sign::plus;
    Sign p2 = Sign::plus;

    friend bool operator==(const InstructionSet&, const InstructionSet&) = default;

    /// Bit 3 = x1, bit 2 = x2, bit 1 = p1, bit 0 = p2; set bit = minus.
    int index() const {
        auto b = [](Sign s) { return s == Sign::minus ? 1 : 0; };
        return b(x1) << 3 | b(x2) << 2 | b(p1) << 1 | b(p2);
    }
    static InstructionSet from_index(int i) {
        if (i < 0 || i > 15) throw DomainError("instruction set index must lie in [0, 15]");
        auto s = [i](int bit) { return (i >> bit) & 1 ? Sign::minus : Sign::plus; };
        return {s(3), s(2), s(1), s(0)};
    }

    /// Answer of detector `particle` (1 or 2) under `setting`.
    Sign answer(int particle, Setting setting) const {
        if (setting == Setting::x) return particle == 1 ? x1 : x2;
        return particle == 1 ? p1 : p2;
    }

    /// "+-;-+" in the order a_x1 a_x2 ; a_p1 a_p2.
    std::string to_string() const { return {to_char(x1), to_char(x2), ';', to_char(p1), to_char(p2)}; }

    static InstructionSet parse(const std::string& s) {
        auto sign = [&](char c) {
            if (c == '+') return Sign::plus;
            if (c == '-') return Sign::minus;
            throw ConfigError("bad instruction set '" + s + "' (expected e.g. \"+-;-+\")");
        };
        if (s.size() != 5 || s[2] != ';') throw ConfigError("bad instruction set '" + s + "' (expected e.g. \"+-;-+\")");
        return {sign(s[0]), sign(s[1]), sign(s[3]), sign(s[4])};
    }
};

/// Probability weights over the 16 instruction sets, indexed by InstructionSet::index().
class MessageDistribution {
public:
    static constexpr double tolerance = 1e-12;

    explicit MessageDistribution(const std::array<double, 16>& w) : w_(w) {
        double sum = 0.0;
        for (double v : w_) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("message weights must be finite and >= 0");
            sum += v;
        }
        if (std::abs(sum - 1.0) > tolerance)
            throw DomainError("message weights sum to " + std::to_string(sum) + ", expected 1");
    }

    static MessageDistribution uniform() {
        std::array<double, 16> w;
        w.fill(1.0 / 16.0);
        return MessageDistribution(w);
    }

    static MessageDistribution point_mass(const InstructionSet& m) {
        std::array<double, 16> w{};
        w[m.index()] = 1.0;
        return MessageDistribution(w);
    }

    /// 16 independent uniform(0, 1) draws normalized to sum 1, from the
    /// Philox stream (seed, index).
    static MessageDistribution random(std::uint64_t seed, std::uint64_t index = 0) {
        sampling::Stream rng(seed, sampling::StreamTag::lhv_suite, index);
        std::array<double, 16> w;
        double sum = 0.0;
        for (double& v : w) {
            v = rng.uniform();
            sum += v;
        }
        for (double& v : w) v /= sum;
        return MessageDistribution(w);
    }

    /// (1 - a) d1 + a d2 for a in [0, 1].
    static MessageDistribution mix(const MessageDistribution& d1, const MessageDistribution& d2, double a) {
        if (!(a >= 0.0 && a <= 1.0)) throw DomainError("mixing weight must lie in [0, 1]");
        std::array<double, 16> w;
        for (int i = 0; i < 16; ++i) w[i] = (1.0 - a) * d1.w_[i] + a * d2.w_[i];
        return MessageDistribution(w);
    }

    double weight(const InstructionSet& m) const { return w_[m.index()]; }
    const std::array<double, 16>& weights() const { return w_; }

private:
    std::array<double, 16> w_;
};

/// P_{b1 b2}(s1, s2): total weight of messages answering s1 at detector 1
/// under b1 and s2 at detector 2 under b2, summed in ascending index order.
inline double joint_from_messages(const MessageDistribution& d, SettingPair pair, Sign s1, Sign s2) {
    double p = 0.0;
    for (int i = 0; i < 16; ++i) {
        const auto m = InstructionSet::from_index(i);
        if (m.answer(1, pair.first) == s1 && m.answer(2, pair.second) == s2) p += d.weights()[i];
    }
    return p;
}

/// Single-detector marginal P(answer of `particle` under `setting` = s).
inline double marginal_from_messages(const MessageDistribution& d, int particle, Setting setting, Sign s) {
    double p = 0.0;
    for (int i = 0; i < 16; ++i)
        if (InstructionSet::from_index(i).answer(particle, setting) == s) p += d.weights()[i];
    return p;
}

/// The full joint-probability table an instruction-set model predicts.
inline QuadrantProbabilityTable lhv_table(const MessageDistribution& d) {
    QuadrantProbabilityTable t;
    t.method = ProbabilityMethod::closed_form;
    for (const auto& pair : all_settings)
        for (Sign a : both_signs)
            for (Sign b : both_signs) t.set(pair, a, b, {joint_from_messages(d, pair, a, b), 0.0});
    return t;
}

/// Slacks of the four message bounds behind the witness, each >= 0 for a
/// valid distribution:
///   P(+,+;-,-) <= P_xx(+,+),  P(+,-;-,-) <= P_px(-,-),
///   P(-,+;-,-) <= P_xp(-,-),  P(-,-;-,-) <= min{P_xp(-,-), P_px(-,-)}.
struct MessageBoundsReport {
    std::array<double, 4> slacks{};

    double min_slack() const { return *std::min_element(slacks.begin(), slacks.end()); }
    bool holds(double tol = 1e-12) const { return min_slack() >= -tol; }
};

inline MessageBoundsReport verify_message_bounds(const MessageDistribution& d) {
    const Sign P = Sign::plus, M = Sign::minus;
    const double xx = joint_from_messages(d, xx_setting, P, P);
    const double px = joint_from_messages(d, px_setting, M, M);
    const double xp = joint_from_messages(d, xp_setting, M, M);
    MessageBoundsReport r;
    r.slacks[0] = xx - d.weight({P, P, M, M});
    r.slacks[1] = px - d.weight({P, M, M, M});
    r.slacks[2] = xp - d.weight({M, P, M, M});
    r.slacks[3] = std::min(xp, px) - d.weight({M, M, M, M});
    return r;
}

/// Witness of the model's own joint table; local realism requires W <= 0.
inline HardyWitness verify_hardy_bound(const MessageDistribution& d) { return hardy_witness(lhv_table(d)); }

struct LhvMaximum {
    double max_w = 0.0;
    std::vector<InstructionSet> maximizers;  ///< every vertex attaining max_w
    std::array<double, 16> vertex_w{};       ///< W at each point mass
};

/// max W over all message distributions. W = P_pp(-,-) - [linear terms] -
/// min{...} is convex in d, so its maximum over the simplex is attained at a
/// vertex: enumerating the 16 point masses is exact.
inline LhvMaximum lhv_max_witness() {
    LhvMaximum r;
    r.max_w = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 16; ++i) {
        const auto m = InstructionSet::from_index(i);
        const double w = verify_hardy_bound(MessageDistribution::point_mass(m)).w;
        r.vertex_w[i] = w;
        if (w > r.max_w) {
            r.max_w = w;
            r.maximizers.clear();
        }
        if (w == r.max_w) r.maximizers.push_back(m);
    }
    return r;
}

/// Randomized check over `count` seeded distributions.
struct LhvSuiteReport {
    std::uint64_t count = 0;
    std::uint64_t seed = 0;
    double max_w = -std::numeric_limits<double>::infinity();
    double min_slack = std::numeric_limits<double>::infinity();
    std::uint64_t w_violations = 0;      ///< W > 1e-12
    std::uint64_t slack_violations = 0;  ///< any slack < -1e-12
    /// Counts of the smallest slack per distribution in bins of width 1/32
    /// over [0, 1/4), last bin open-ended.
    std::array<std::uint64_t, 9> slack_histogram{};
};

inline LhvSuiteReport run_lhv_suite(std::uint64_t count, std::uint64_t seed, unsigned threads = 1) {
    threads = std::max(1u, threads);
    std::vector<LhvSuiteReport> parts(threads);
    auto work = [&](unsigned t) {
        auto& r = parts[t];
        const std::uint64_t lo = count * t / threads, hi = count * (t + 1) / threads;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const auto d = MessageDistribution::random(seed, i);
            const double w = verify_hardy_bound(d).w;
            const double s = verify_message_bounds(d).min_slack();
            r.max_w = std::max(r.max_w, w);
            r.min_slack = std::min(r.min_slack, s);
            if (w > 1e-12) ++r.w_violations;
            if (s < -1e-12) ++r.slack_violations;
            const int bin = std::clamp(static_cast<int>(std::floor(s * 32.0)), 0, 8);
            ++r.slack_histogram[bin];
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();

    LhvSuiteReport out;
    out.count = count;
    out.seed = seed;
    for (const auto& r : parts) {
        out.max_w = std::max(out.max_w, r.max_w);
        out.min_slack = std::min(out.min_slack, r.min_slack);
        out.w_violations += r.w_violations;
        out.slack_violations += r.slack_violations;
        for (std::size_t b = 0; b < out.slack_histogram.size(); ++b) out.slack_histogram[b] += r.slack_histogram[b];
    }
    return out;
}

}  // namespace hardy
