// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Plot-ready CSV: flat rows, header first, numbers at round-trip precision.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/probabilities.hpp"
#include "hardy/profile.hpp"
#include "hardy/sampler.hpp"
#include "hardy/state.hpp"

namespace hardy::io {

/// Shortest "%.17g" rendering; identical doubles give identical text.
inline std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_table_csv(std::ostream& os, const QuadrantProbabilityTable& t, bool header = true) {
    if (header) os << "method,setting,sign1,sign2,value,error\n";
    for (const auto& pair : all_settings)
        for (Sign a : both_signs)
            for (Sign b : both_signs) {
                const auto& e = t.get(pair, a, b);
                if (!e) continue;
                os << to_string(t.method) << ',' << pair.name() << ',' << to_char(a) << ',' << to_char(b) << ',' << number(e->value) << ','
                   << number(e->error) << '\n';
            }
}

inline void write_records_csv(std::ostream& os, const std::vector<SampleRecord>& records, bool header = true) {
    if (header) os << "setting,value1,value2,sign1,sign2\n";
    for (const auto& r : records)
        os << r.setting.name() << ',' << number(r.value1) << ',' << number(r.value2) << ',' << to_char(r.sign1) << ','
           << to_char(r.sign2) << '\n';
}

namespace detail {

/// h(p) of a factorized state, closed form for the exponential profile.
inline cd half_line(const FactorizedData& d, double p) {
    return d.g.kind() == ProfileKind::exponential ? half_line_transform_closed_form(d.g.scale(), p) : d.h(p);
}

/// `points` midpoints of [-extent, extent]; an even count keeps 0 off the grid.
inline std::vector<double> midpoints(double extent, int points) {
    if (!(extent > 0.0) || points < 2 || points % 2 != 0)
        throw ConfigError("plot grid: extent must be > 0 and points an even count >= 2");
    std::vector<double> v;
    for (int k = 0; k < points; ++k) v.push_back(-extent + (k + 0.5) * 2.0 * extent / points);
    return v;
}

}  // namespace detail

/// One-particle curve h(p), the transform of the positive-x half of f; it
/// equals psi_p for p < 0.
inline void write_psi_p_csv(std::ostream& os, const TwoParticleState& state, double extent, int points) {
    const auto& d = state.factorized_data();
    os << "p,re,im,abs2\n";
    for (double p : detail::midpoints(extent, points)) {
        const cd h = detail::half_line(d, p);
        os << number(p) << ',' << number(h.real()) << ',' << number(h.imag()) << ',' << number(std::norm(h)) << '\n';
    }
}

/// |psi_pp(p1, p2)|^2 heat map of a factorized state, row-major in p1.
inline void write_pp_density_csv(std::ostream& os, const TwoParticleState& state, double extent, int points) {
    const auto& d = state.factorized_data();
    const auto p = detail::midpoints(extent, points);
    std::vector<cd> g, h;
    for (double v : p) {
        g.push_back(d.g(v));
        h.push_back(state.masked() ? detail::half_line(d, v) : cd{});
    }
    const double n = state.norm_constant();
    os << "p1,p2,density\n";
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) {
            const cd psi = state.masked() ? n * (g[i] * g[j] - h[i] * h[j]) : g[i] * g[j];
            os << number(p[i]) << ',' << number(p[j]) << ',' << number(std::norm(psi)) << '\n';
        }
}

}  // namespace hardy::io
