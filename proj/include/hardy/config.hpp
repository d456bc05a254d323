// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Run configuration in flat key=value text. `#` starts a comment, blank lines
// are ignored, unknown keys are errors. to_text() emits every key at
// round-trip precision, so parse(to_text(c)) == c.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <sstream>
#include <string>

#include "hardy/errors.hpp"
#include "hardy/grid.hpp"
#include "hardy/numerics/quadrature.hpp"

namespace hardy {

enum class OutputFormat { json, csv, human };

inline std::string to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::json: return "json";
        case OutputFormat::csv: return "csv";
        case OutputFormat::human: return "human";
    }
    return "?";
}

inline OutputFormat output_format_from_string(const std::string& s) {
    if (s == "json") return OutputFormat::json;
    if (s == "csv") return OutputFormat::csv;
    if (s == "human") return OutputFormat::human;
    throw ConfigError("unknown output format '" + s + "' (expected json, csv or human)");
}

struct RunConfig {
    double lambda = 1.0;
    GridSpec grid;
    numerics::QuadratureSpec tolerances;
    OutputFormat output = OutputFormat::human;
    std::string out_path;  ///< empty: stdout, or HARDY_OUT_DIR when set
    std::uint64_t seed = 42;
    unsigned threads = 1;

    void validate() const {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be a positive number");
        grid.validate();
        try {
            tolerances.validate();
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        if (threads < 1 || threads > 1024) throw ConfigError("threads must lie in [1, 1024]");
    }

    bool operator==(const RunConfig& o) const {
        return lambda == o.lambda && grid.extent == o.grid.extent && grid.points_per_axis == o.grid.points_per_axis &&
               grid.mapping == o.grid.mapping && grid.scale == o.grid.scale &&
               tolerances.abs_tol == o.tolerances.abs_tol && tolerances.rel_tol == o.tolerances.rel_tol &&
               tolerances.max_subdivisions == o.tolerances.max_subdivisions &&
               tolerances.tail_order == o.tolerances.tail_order && output == o.output && out_path == o.out_path &&
               seed == o.seed && threads == o.threads;
    }
};

namespace config_detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "'");
    return out;
}

inline std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace config_detail

/// Applies one key; throws ConfigError for unknown keys or malformed values.
inline void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    using config_detail::parse_number;
    if (key == "lambda")
        c.lambda = parse_number<double>(key, value);
    else if (key == "grid.extent")
        c.grid.extent = parse_number<double>(key, value);
    else if (key == "grid.points")
        c.grid.points_per_axis = parse_number<int>(key, value);
    else if (key == "grid.mapping")
        c.grid.mapping = grid_mapping_from_string(value);
    else if (key == "grid.scale")
        c.grid.scale = parse_number<double>(key, value);
    else if (key == "tol.abs")
        c.tolerances.abs_tol = parse_number<double>(key, value);
    else if (key == "tol.rel")
        c.tolerances.rel_tol = parse_number<double>(key, value);
    else if (key == "tol.max_subdivisions")
        c.tolerances.max_subdivisions = parse_number<int>(key, value);
    else if (key == "tol.tail_order")
        c.tolerances.tail_order = parse_number<int>(key, value);
    else if (key == "format")
        c.output = output_format_from_string(value);
    else if (key == "out")
        c.out_path = value;
    else if (key == "seed")
        c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "threads")
        c.threads = parse_number<unsigned>(key, value);
    else
        throw ConfigError("unknown config key '" + key + "'");
}

/// Overlays the keys in `in` onto `base` and validates the result.
inline RunConfig parse_config(std::istream& in, RunConfig base = {}) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = config_detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        set_config_value(base, config_detail::trim(line.substr(0, eq)), config_detail::trim(line.substr(eq + 1)));
    }
    base.validate();
    return base;
}

inline RunConfig parse_config(const std::string& text, RunConfig base = {}) {
    std::istringstream in(text);
    return parse_config(in, std::move(base));
}

inline std::string to_text(const RunConfig& c) {
    using config_detail::number;
    std::ostringstream os;
    os << "lambda = " << number(c.lambda) << '\n'
       << "grid.extent = " << number(c.grid.extent) << '\n'
       << "grid.points = " << c.grid.points_per_axis << '\n'
       << "grid.mapping = " << to_string(c.grid.mapping) << '\n'
       << "grid.scale = " << number(c.grid.scale) << '\n'
       << "tol.abs = " << number(c.tolerances.abs_tol) << '\n'
       << "tol.rel = " << number(c.tolerances.rel_tol) << '\n'
       << "tol.max_subdivisions = " << c.tolerances.max_subdivisions << '\n'
       << "tol.tail_order = " << c.tolerances.tail_order << '\n'
       << "format = " << to_string(c.output) << '\n'
       << "out = " << c.out_path << '\n'
       << "seed = " << c.seed << '\n'
       << "threads = " << c.threads << '\n';
    return os.str();
}

}  // namespace hardy
