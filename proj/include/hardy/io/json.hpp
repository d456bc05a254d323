// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// JSON documents. Every top-level document carries "schema" ("hardy.<kind>/1",
// matched by docs/schemas/<kind>.schema.json) and is emitted with sorted keys,
// so identical inputs give byte-identical text.

#include <json.hpp>

#include <string>
#include <vector>

#include "hardy/config.hpp"
#include "hardy/errors.hpp"
#include "hardy/grid.hpp"
#include "hardy/lhv.hpp"
#include "hardy/probabilities.hpp"
#include "hardy/sampler.hpp"
#include "hardy/state.hpp"
#include "hardy/transforms.hpp"

namespace hardy::io {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

inline std::string schema_id(const std::string& kind) { return "hardy." + kind + "/" + std::to_string(schema_version); }

inline json document(const std::string& kind) { return json{{"schema", schema_id(kind)}}; }

/// Throws ConfigError unless `j` is an object tagged with the expected schema.
inline void require_schema(const json& j, const std::string& kind) {
    if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
        throw ConfigError("expected a JSON object with a \"schema\" field");
    const auto got = j["schema"].get<std::string>();
    if (got != schema_id(kind)) throw ConfigError("schema mismatch: expected " + schema_id(kind) + ", got " + got);
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field \"") + key + "\": " + e.what());
    }
}

inline std::string sign_string(Sign s) { return std::string(1, to_char(s)); }

inline Sign sign_from_string(const std::string& s) {
    if (s == "+") return Sign::plus;
    if (s == "-") return Sign::minus;
    throw ConfigError("bad sign '" + s + "' (expected + or -)");
}

inline json to_json(const GridSpec& g) {
    return {{"extent", g.extent}, {"points_per_axis", g.points_per_axis}, {"mapping", to_string(g.mapping)},
            {"scale", g.scale}};
}

inline GridSpec grid_spec_from_json(const json& j) {
    GridSpec g;
    g.extent = field<double>(j, "extent");
    g.points_per_axis = field<int>(j, "points_per_axis");
    g.mapping = grid_mapping_from_string(field<std::string>(j, "mapping"));
    g.scale = field<double>(j, "scale");
    g.validate();
    return g;
}

/// The result-determining part of a run configuration (no output routing).
inline json to_json(const RunConfig& c) {
    return {{"lambda", c.lambda},
            {"grid", to_json(c.grid)},
            {"tolerances",
             {{"abs_tol", c.tolerances.abs_tol},
              {"rel_tol", c.tolerances.rel_tol},
              {"max_subdivisions", c.tolerances.max_subdivisions},
              {"tail_order", c.tolerances.tail_order}}},
            {"seed", c.seed}};
}

inline json to_json(const HardyWitness& w) {
    return {{"lhs", w.lhs},
            {"xx_plus_plus", w.xx_plus_plus},
            {"px_minus_minus", w.px_minus_minus},
            {"xp_minus_minus", w.xp_minus_minus},
            {"min_term", w.min_term},
            {"w", w.w},
            {"error", w.error},
            {"violates_local_realism", w.violates_local_realism()}};
}

/// Entries in the order xx, xp, px, pp and (+,+), (+,-), (-,+), (-,-);
/// absent entries are omitted.
inline json table_entries(const QuadrantProbabilityTable& t) {
    json rows = json::array();
    for (const auto& pair : all_settings)
        for (Sign a : both_signs)
            for (Sign b : both_signs) {
                const auto& e = t.get(pair, a, b);
                if (!e) continue;
                rows.push_back({{"setting", pair.name()},
                                {"sign1", sign_string(a)},
                                {"sign2", sign_string(b)},
                                {"value", e->value},
                                {"error", e->error}});
            }
    return rows;
}

inline json to_json(const QuadrantProbabilityTable& t) {
    json j{{"method", to_string(t.method)}, {"error_budget", t.error_budget}, {"entries", table_entries(t)}};
    bool complete = true;
    for (const auto& e : t.entries) complete = complete && e.has_value();
    if (complete) {
        json sums = json::object();
        for (const auto& pair : all_settings) sums[pair.name()] = t.setting_sum(pair);
        j["setting_sums"] = sums;
        j["witness"] = to_json(hardy_witness(t));
    }
    return j;
}

inline QuadrantProbabilityTable table_from_json(const json& j) {
    QuadrantProbabilityTable t;
    const auto method = field<std::string>(j, "method");
    if (method == "closed-form")
        t.method = ProbabilityMethod::closed_form;
    else if (method == "grid")
        t.method = ProbabilityMethod::grid;
    else
        throw ConfigError("unknown probability method '" + method + "'");
    t.error_budget = field<double>(j, "error_budget");
    for (const auto& row : field<json>(j, "entries")) {
        const auto pair = setting_from_string(field<std::string>(row, "setting"));
        t.set(pair, sign_from_string(field<std::string>(row, "sign1")), sign_from_string(field<std::string>(row, "sign2")),
              {field<double>(row, "value"), field<double>(row, "error")});
    }
    return t;
}

inline json to_json(const ZeroConditionsReport& r) {
    auto p = [](const Probability& v) { return json{{"value", v.value}, {"error", v.error}}; };
    return {{"xx_plus_plus", p(r.xx_plus_plus)},
            {"px_minus_minus", p(r.px_minus_minus)},
            {"xp_minus_minus", p(r.xp_minus_minus)},
            {"threshold", r.threshold},
            {"pass", r.pass}};
}

// LHV

inline json to_json(const MessageDistribution& d) {
    json j = json::object();
    for (int i = 0; i < 16; ++i) j[InstructionSet::from_index(i).to_string()] = d.weights()[i];
    return j;
}

/// Map keyed by "+-;-+" strings; absent messages get weight 0.
inline MessageDistribution message_distribution_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("message distribution must be a JSON object");
    std::array<double, 16> w{};
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number()) throw ConfigError("message weight for '" + key + "' is not a number");
        w[InstructionSet::parse(key).index()] = value.get<double>();
    }
    try {
        return MessageDistribution(w);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

inline json to_json(const MessageBoundsReport& r) {
    return {{"slacks", r.slacks}, {"min_slack", r.min_slack()}, {"holds", r.holds()}};
}

inline json to_json(const LhvMaximum& m) {
    json maximizers = json::array();
    for (const auto& v : m.maximizers) maximizers.push_back(v.to_string());
    json vertices = json::object();
    for (int i = 0; i < 16; ++i) vertices[InstructionSet::from_index(i).to_string()] = m.vertex_w[i];
    return {{"max_w", m.max_w}, {"maximizers", maximizers}, {"vertex_w", vertices}};
}

inline json to_json(const LhvSuiteReport& r) {
    json bins = json::array();
    for (std::size_t b = 0; b < r.slack_histogram.size(); ++b) {
        const double lo = static_cast<double>(b) / 32.0;
        json bin{{"lo", lo}, {"count", r.slack_histogram[b]}};
        bin["hi"] = b + 1 < r.slack_histogram.size() ? json(lo + 1.0 / 32.0) : json(nullptr);
        bins.push_back(bin);
    }
    return {{"count", r.count},
            {"seed", r.seed},
            {"max_w", r.max_w},
            {"min_slack", r.min_slack},
            {"w_violations", r.w_violations},
            {"slack_violations", r.slack_violations},
            {"min_slack_histogram", bins}};
}

// Sampler

inline json to_json(const sampling::Interval& i) { return {{"lo", i.lo}, {"hi", i.hi}}; }

inline json to_json(const WitnessEstimate& e) {
    json comps = json::array();
    for (const auto& c : e.components)
        comps.push_back({{"setting", c.setting.name()},
                         {"sign1", sign_string(c.sign1)},
                         {"sign2", sign_string(c.sign2)},
                         {"count", c.count},
                         {"shots", c.shots},
                         {"frequency", c.frequency},
                         {"wilson", to_json(c.wilson)}});
    json counts = json::object();
    for (const auto& pair : all_settings) {
        json row = json::object();
        for (Sign a : both_signs)
            for (Sign b : both_signs) row[sign_string(a) + sign_string(b)] = e.counts[pair.index()][quadrant_index(a, b)];
        counts[pair.name()] = row;
    }
    return {{"point", e.point},
            {"interval", to_json(e.interval)},
            {"sigma", e.sigma},
            {"z_score", e.z_score},
            {"confidence", e.confidence},
            {"violation_claimed", e.violation_claimed()},
            {"components", comps},
            {"counts", counts},
            {"shots_per_setting", e.shots_per_setting},
            {"seed", e.seed}};
}

// States

/// State document: representation, mask, N, and what it was built from:
/// the exponential lambda, or a two-particle node table with its grid.
/// Custom factorized profiles are code, not data, and cannot be exported.
inline json to_json(const TwoParticleState& s) {
    json j = document("state");
    j["representation"] = to_string(s.representation());
    j["masked"] = s.masked();
    j["norm_constant"] = s.norm_constant();
    if (s.is_grid() && s.grid_data().nodes) {
        const auto& t = *s.grid_data().nodes;
        j["source"] = {{"kind", "two_particle_nodes"},
                       {"scale", t.scale},
                       {"laguerre_order", t.laguerre_order},
                       {"values", t.values}};
        j["grid"] = to_json(t.grid);
        return j;
    }
    const auto origin = s.factorized_ptr();
    if (!origin || origin->g.kind() != ProfileKind::exponential)
        throw ConfigError("state export supports the exponential profile and two-particle node tables only");
    j["source"] = {{"kind", "exponential"}, {"lambda", origin->g.scale()}};
    j["grid"] = s.is_grid() ? to_json(s.grid_data().xx.spec) : json(nullptr);
    return j;
}

/// Rebuilds a state and checks the stored N against the rebuilt one.
inline TwoParticleState state_from_json(const json& j, const TransformOptions& opt = {}) {
    require_schema(j, "state");
    const auto rep = representation_from_string(field<std::string>(j, "representation"));
    BuildOptions build;
    build.masked = field<bool>(j, "masked");
    const auto src = field<json>(j, "source");
    const auto kind = field<std::string>(src, "kind");
    const auto grid = field<json>(j, "grid");
    TwoParticleState s;
    try {
        if (kind == "exponential") {
            s = build_state(MomentumProfile::exponential(field<double>(src, "lambda")), build);
            if (!grid.is_null()) s = build_grid_state(s, grid_spec_from_json(grid));
        } else if (kind == "two_particle_nodes") {
            if (grid.is_null()) throw ConfigError("two-particle node tables need a grid");
            TwoParticleNodeTable t{field<double>(src, "scale"), field<int>(src, "laguerre_order"),
                                   grid_spec_from_json(grid), field<std::vector<double>>(src, "values")};
            s = build_state(t, build);
        } else {
            throw ConfigError("unknown state source kind '" + kind + "'");
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("state document: ") + e.what());
    }
    const double n = field<double>(j, "norm_constant");
    if (std::abs(n - s.norm_constant()) > 1e-9 * std::abs(s.norm_constant()))
        throw ConfigError("state document: stored N = " + std::to_string(n) + " but rebuilt N = " +
                          std::to_string(s.norm_constant()));
    return rep == Representation::xx ? s : hardy::detail::to_rep(s, rep, opt, "state import");
}

}  // namespace hardy::io
