// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

// hardy: command-line front end.
//
// Exit codes: 0 success, 2 numerical tolerance not met, 3 invalid
// configuration or input, 4 internal quadrature or sampler failure.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hardy/hardy.hpp"

namespace {

using namespace hardy;
using io::json;
namespace fs = std::filesystem;

enum ExitCode { exit_ok = 0, exit_tolerance = 2, exit_config = 3, exit_internal = 4 };

/// A check that ran but did not meet its tolerance; the report is still written.
struct ToleranceFailure {
    std::string what;
};

// ---------------------------------------------------------------------------
// Options shared by every command

struct Common {
    std::string config_file;
    std::map<std::string, std::string> overrides;  ///< config key -> flag value
    bool reproducible = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_file, "key=value config file; flags override it")->check(CLI::ExistingFile);
    auto key = [&](const char* flag, const char* k, const char* help) {
        cmd->add_option_function<std::string>(flag, [&c, k](const std::string& v) { c.overrides[k] = v; }, help);
    };
    key("--format", "format", "Output format: json, csv or human");
    key("--out", "out", "Output file ('-' for stdout); relative paths resolve under HARDY_OUT_DIR");
    key("--seed", "seed", "RNG seed");
    key("--lambda", "lambda", "Momentum scale of the exponential profile");
    key("--grid-points", "grid.points", "Grid points per axis");
    key("--grid-extent", "grid.extent", "Linear-grid half width");
    key("--grid-mapping", "grid.mapping", "Grid mapping: arctan or linear");
    key("--grid-scale", "grid.scale", "Grid length scale");
    key("--abs-tol", "tol.abs", "Quadrature absolute tolerance");
    key("--rel-tol", "tol.rel", "Quadrature relative tolerance");
    key("--threads", "threads", "Worker threads (results do not depend on it)");
    cmd->add_flag("--reproducible", c.reproducible, "Omit the metadata block (timestamp, version, threads)");
}

RunConfig resolve_config(const Common& c) {
    RunConfig cfg;
    if (!c.config_file.empty()) {
        std::ifstream in(c.config_file);
        if (!in) throw ConfigError("cannot read config file " + c.config_file);
        cfg = parse_config(in);
    }
    for (const auto& [k, v] : c.overrides) set_config_value(cfg, k, v);
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------
// Output

std::string extension(OutputFormat f) {
    switch (f) {
        case OutputFormat::json: return ".json";
        case OutputFormat::csv: return ".csv";
        case OutputFormat::human: return ".txt";
    }
    return "";
}

/// Empty result means stdout.
std::optional<fs::path> resolve_path(const std::string& requested, const std::string& default_name) {
    const char* env = std::getenv("HARDY_OUT_DIR");
    const std::string dir = env ? env : "";
    if (requested == "-") return std::nullopt;
    if (requested.empty()) {
        if (dir.empty()) return std::nullopt;
        return fs::path(dir) / default_name;
    }
    fs::path p(requested);
    if (p.is_relative() && !dir.empty()) p = fs::path(dir) / p;
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << text;
    if (!out) throw ConfigError("write failed: " + p.string());
}

void emit(const RunConfig& cfg, const std::string& command, const std::string& text) {
    if (auto p = resolve_path(cfg.out_path, command + extension(cfg.output)))
        write_file(*p, text);
    else
        std::cout << text << std::flush;
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Schema-tagged document with the run config; run-specific facts go into
/// "metadata", which --reproducible drops.
json make_document(const std::string& kind, const RunConfig& cfg, const Common& common) {
    json j = io::document(kind);
    j["config"] = io::to_json(cfg);
    if (!common.reproducible)
        j["metadata"] = {{"generated_at", utc_timestamp()}, {"version", hardy_version}, {"threads", cfg.threads}};
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }
std::string full(double v) { return fmt("%.15g", v); }

/// Left-aligned text table.
std::string text_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (width.size() <= c) width.push_back(0);
            width[c] = std::max(width[c], r[c].size());
        }
    std::ostringstream os;
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            os << r[c];
            if (c + 1 < r.size()) os << std::string(width[c] - r[c].size() + 2, ' ');
        }
        os << '\n';
    }
    return os.str();
}

std::string sign_pair(Sign a, Sign b) { return std::string{'(', to_char(a), ',', to_char(b), ')'}; }

MessageDistribution read_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    return io::message_distribution_from_json(json::parse(in));
}

TwoParticleState exponential_state(const RunConfig& cfg, bool masked = true) {
    BuildOptions b;
    b.masked = masked;
    b.quadrature = cfg.tolerances;
    return build_state(MomentumProfile::exponential(cfg.lambda), b);
}

// ---------------------------------------------------------------------------
// reproduce

struct ReproduceArgs {
    std::optional<double> tol;
};

int cmd_reproduce(const Common& common, const ReproduceArgs& args) {
    const RunConfig cfg = resolve_config(common);
    const auto g = MomentumProfile::exponential(cfg.lambda);
    const auto state = exponential_state(cfg);
    const auto mass = negative_momentum_mass(g, cfg.tolerances);
    const auto hardy = hardy_probability_factorized(g, cfg.tolerances);

    struct Row {
        std::string quantity;
        double expected, computed, error_estimate, tolerance;
    };
    std::vector<Row> rows{
        {"N", 2.0 / std::sqrt(3.0), state.norm_constant(), 0.0, 1e-10},
        {"negative-momentum mass", 0.125, mass.value, mass.error_estimate, 1e-8},
        {"P_pp(-,-)", 1.0 / 48.0, hardy.value, hardy.error, 5e-9},
    };
    bool all = true;
    json jrows = json::array();
    for (auto& r : rows) {
        if (args.tol) r.tolerance = *args.tol;
        const double d = std::abs(r.computed - r.expected);
        const bool pass = d <= r.tolerance;
        all = all && pass;
        if (!pass)
            std::cerr << "FAIL " << r.quantity << ": |delta| = " << sci(d) << " exceeds tolerance " << sci(r.tolerance)
                      << " (computed " << full(r.computed) << ", expected " << full(r.expected) << ")\n";
        jrows.push_back({{"quantity", r.quantity},
                         {"expected", r.expected},
                         {"computed", r.computed},
                         {"abs_diff", d},
                         {"error_estimate", r.error_estimate},
                         {"tolerance", r.tolerance},
                         {"pass", pass}});
    }

    std::string text;
    if (cfg.output == OutputFormat::json) {
        json j = make_document("reproduce", cfg, common);
        j["rows"] = jrows;
        j["pass"] = all;
        text = dump(j);
    } else if (cfg.output == OutputFormat::csv) {
        text = "quantity,expected,computed,abs_diff,tolerance,pass\n";
        for (const auto& r : jrows)
            text += r["quantity"].get<std::string>() + ',' + io::number(r["expected"]) + ',' +
                    io::number(r["computed"]) + ',' + io::number(r["abs_diff"]) + ',' + io::number(r["tolerance"]) +
                    ',' + (r["pass"].get<bool>() ? "pass" : "fail") + '\n';
    } else {
        std::vector<std::vector<std::string>> t{{"quantity", "expected", "computed", "|delta|", "tolerance", "status"}};
        for (const auto& r : jrows)
            t.push_back({r["quantity"].get<std::string>(), full(r["expected"]), full(r["computed"]), sci(r["abs_diff"]),
                         sci(r["tolerance"]), r["pass"].get<bool>() ? "pass" : "FAIL"});
        text = text_table(t);
    }
    emit(cfg, "reproduce", text);
    if (!all) throw ToleranceFailure{"reproduce: at least one quantity is outside its tolerance"};
    return exit_ok;
}

// ---------------------------------------------------------------------------
// probs

struct ProbsArgs {
    bool grid = false;
    bool cross_check = false;
    double cross_tol = 2e-3;
    bool unmasked = false;
    std::string plots;
    double plot_extent = 10.0;
    int plot_points = 200;
};

struct CrossCheck {
    double max_abs_diff = 0.0;
    std::string worst;
    double tolerance = 0.0;
    std::array<double, 4> grid_sum_defect{};
    bool pass = false;
};

CrossCheck cross_check(const QuadrantProbabilityTable& cf, const QuadrantProbabilityTable& gr, double tol) {
    CrossCheck c;
    c.tolerance = tol;
    for (const auto& pair : all_settings) {
        for (Sign a : both_signs)
            for (Sign b : both_signs) {
                const double d = std::abs(cf.value(pair, a, b) - gr.value(pair, a, b));
                if (d >= c.max_abs_diff) {
                    c.max_abs_diff = d;
                    c.worst = pair.name() + sign_pair(a, b);
                }
            }
        c.grid_sum_defect[pair.index()] = std::abs(gr.setting_sum(pair) - 1.0);
    }
    const double sums = *std::max_element(c.grid_sum_defect.begin(), c.grid_sum_defect.end());
    c.pass = c.max_abs_diff <= tol && sums <= gr.error_budget + cf.error_budget;
    return c;
}

std::string table_text(const QuadrantProbabilityTable& t) {
    std::vector<std::vector<std::string>> rows{{"setting", "(+,+)", "(+,-)", "(-,+)", "(-,-)", "sum"}};
    for (const auto& pair : all_settings) {
        std::vector<std::string> r{pair.name()};
        for (Sign a : both_signs)
            for (Sign b : both_signs) r.push_back(fmt("%.12f", t.value(pair, a, b)));
        r.push_back(fmt("%.12f", t.setting_sum(pair)));
        rows.push_back(r);
    }
    return text_table(rows);
}

void write_plots(const ProbsArgs& args, const TwoParticleState& state) {
    auto dir = resolve_path(args.plots, "");
    if (!dir) throw ConfigError("--plots needs a directory, not stdout");
    std::ostringstream curve, heat;
    io::write_psi_p_csv(curve, state, args.plot_extent, args.plot_points);
    io::write_pp_density_csv(heat, state, args.plot_extent, args.plot_points);
    write_file(*dir / "psi_p.csv", curve.str());
    write_file(*dir / "pp_density.csv", heat.str());
}

std::string probabilities_text(const RunConfig& cfg, const Common& common, const TwoParticleState& primary,
                               const std::vector<QuadrantProbabilityTable>& tables,
                               const std::optional<CrossCheck>& check) {
    const auto zero = zero_conditions_report(primary);
    if (cfg.output == OutputFormat::json) {
        json j = make_document("probabilities", cfg, common);
        j["masked"] = primary.masked();
        j["tables"] = json::array();
        for (const auto& t : tables) j["tables"].push_back(io::to_json(t));
        j["zero_conditions"] = io::to_json(zero);
        if (check)
            j["cross_check"] = {{"max_abs_diff", check->max_abs_diff},
                                {"worst_entry", check->worst},
                                {"tolerance", check->tolerance},
                                {"grid_sum_defect", check->grid_sum_defect},
                                {"pass", check->pass}};
        return dump(j);
    }
    std::ostringstream os;
    if (cfg.output == OutputFormat::csv) {
        for (std::size_t i = 0; i < tables.size(); ++i) io::write_table_csv(os, tables[i], i == 0);
        return os.str();
    }
    for (const auto& t : tables) {
        const auto w = hardy_witness(t);
        os << to_string(t.method) << " (error budget " << sci(t.error_budget) << ")\n"
           << table_text(t) << "W = " << full(w.w) << " +- " << sci(w.error) << "\n\n";
    }
    os << "zero conditions (threshold " << sci(zero.threshold) << "): P_xx(+,+) = " << sci(zero.xx_plus_plus.value)
       << ", P_px(-,-) = " << sci(zero.px_minus_minus.value) << ", P_xp(-,-) = " << sci(zero.xp_minus_minus.value)
       << (zero.pass ? "  pass\n" : "  FAIL\n");
    if (check)
        os << "cross-check: max |delta| = " << sci(check->max_abs_diff) << " at " << check->worst << ", tolerance "
           << sci(check->tolerance) << (check->pass ? "  pass\n" : "  FAIL\n");
    return os.str();
}

int finish_probabilities(const RunConfig& cfg, const Common& common, const std::string& command,
                         const TwoParticleState& primary, const std::vector<QuadrantProbabilityTable>& tables,
                         const std::optional<CrossCheck>& check) {
    emit(cfg, command, probabilities_text(cfg, common, primary, tables, check));
    if (check && !check->pass)
        throw ToleranceFailure{"cross-check: max |delta| " + sci(check->max_abs_diff) + " exceeds " +
                               sci(check->tolerance)};
    if (primary.masked() && !zero_conditions_report(primary).pass)
        throw ToleranceFailure{"zero conditions above threshold"};
    return exit_ok;
}

int cmd_probs(const Common& common, const ProbsArgs& args) {
    const RunConfig cfg = resolve_config(common);
    const auto state = exponential_state(cfg, !args.unmasked);
    std::vector<QuadrantProbabilityTable> tables;
    std::optional<CrossCheck> check;
    TwoParticleState primary = state;
    if (args.grid || args.cross_check) {
        const auto grid = build_grid_state(state, cfg.grid);
        if (args.cross_check) {
            tables.push_back(quadrant_table(state));
            tables.push_back(quadrant_table(grid));
            check = cross_check(tables[0], tables[1], args.cross_tol);
        } else {
            primary = grid;
            tables.push_back(quadrant_table(grid));
        }
    } else {
        tables.push_back(quadrant_table(state));
    }
    if (!args.plots.empty()) write_plots(args, state);
    return finish_probabilities(cfg, common, "probs", primary, tables, check);
}

// ---------------------------------------------------------------------------
// lhv

struct LhvArgs {
    std::uint64_t count = 100000;
    std::string distribution;
};

int cmd_lhv(const Common& common, const LhvArgs& args) {
    const RunConfig cfg = resolve_config(common);
    const auto max = lhv_max_witness();
    const auto suite = run_lhv_suite(args.count, cfg.seed, cfg.threads);
    bool pass = max.max_w <= 1e-12 && suite.w_violations == 0 && suite.slack_violations == 0;
    std::optional<MessageDistribution> d;
    if (!args.distribution.empty()) d = read_distribution(args.distribution);
    std::optional<HardyWitness> dw;
    std::optional<MessageBoundsReport> db;
    if (d) {
        dw = verify_hardy_bound(*d);
        db = verify_message_bounds(*d);
        pass = pass && dw->w <= 1e-12 && db->holds();
    }

    std::string text;
    if (cfg.output == OutputFormat::json) {
        json j = make_document("lhv", cfg, common);
        j["maximum"] = io::to_json(max);
        j["suite"] = io::to_json(suite);
        if (d)
            j["distribution"] = {{"weights", io::to_json(*d)},
                                 {"table", io::to_json(lhv_table(*d))},
                                 {"witness", io::to_json(*dw)},
                                 {"bounds", io::to_json(*db)}};
        j["pass"] = pass;
        text = dump(j);
    } else if (cfg.output == OutputFormat::csv) {
        text = "message,w\n";
        for (int i = 0; i < 16; ++i)
            text += InstructionSet::from_index(i).to_string() + ',' + io::number(max.vertex_w[i]) + '\n';
    } else {
        std::ostringstream os;
        os << "vertex enumeration: max W = " << full(max.max_w) << " at";
        for (const auto& m : max.maximizers) os << ' ' << m.to_string();
        os << "\nrandom suite (" << suite.count << " distributions, seed " << suite.seed
           << "): max W = " << sci(suite.max_w) << ", min slack = " << sci(suite.min_slack)
           << ", violations W/slack = " << suite.w_violations << '/' << suite.slack_violations << '\n';
        os << "min-slack histogram:\n";
        std::vector<std::vector<std::string>> rows{{"  bin", "count"}};
        for (std::size_t b = 0; b < suite.slack_histogram.size(); ++b) {
            const std::string lo = fmt("%.5f", b / 32.0);
            const std::string hi = b + 1 < suite.slack_histogram.size() ? fmt("%.5f", (b + 1) / 32.0) : "inf";
            rows.push_back({"  [" + lo + ", " + hi + ")", std::to_string(suite.slack_histogram[b])});
        }
        os << text_table(rows);
        if (d)
            os << "distribution: W = " << full(dw->w) << ", min slack = " << full(db->min_slack()) << '\n';
        os << (pass ? "pass\n" : "FAIL\n");
        text = os.str();
    }
    emit(cfg, "lhv", text);
    if (!pass) throw ToleranceFailure{"lhv: local-realism bound violated"};
    return exit_ok;
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
    std::string setting = "pp";
    std::uint64_t shots = 1000000;
    std::string lhv;
    std::string records;
    std::uint64_t trials = 0;
    bool grid = false;
};

SamplerOptions sampler_options(const RunConfig& cfg) {
    SamplerOptions o;
    o.grid = cfg.grid;
    o.threads = cfg.threads;
    return o;
}

TwoParticleState sampling_state(const RunConfig& cfg, bool grid) {
    const auto s = exponential_state(cfg);
    return grid ? build_grid_state(s, cfg.grid) : s;
}

json quadrant_summary(const std::array<std::uint64_t, 4>& counts, const std::array<double, 4>& exact,
                      std::uint64_t n) {
    json rows = json::array();
    for (int q = 0; q < 4; ++q) {
        const Sign a = quadrant_sign(q, 1), b = quadrant_sign(q, 2);
        rows.push_back({{"sign1", io::sign_string(a)},
                        {"sign2", io::sign_string(b)},
                        {"count", counts[q]},
                        {"frequency", static_cast<double>(counts[q]) / static_cast<double>(n)},
                        {"exact", exact[q]},
                        {"wilson", io::to_json(sampling::wilson_interval(counts[q], n, 0.95))}});
    }
    return rows;
}

int cmd_sample(const Common& common, const SampleArgs& args) {
    const RunConfig cfg = resolve_config(common);
    if (args.shots < 1) throw ConfigError("--shots must be >= 1");
    const SettingPair pair = setting_from_string(args.setting);
    std::optional<MessageDistribution> d;
    if (!args.lhv.empty()) d = read_distribution(args.lhv);

    const bool want_records = cfg.output == OutputFormat::csv || !args.records.empty();
    std::vector<SampleRecord> records;
    std::array<std::uint64_t, 4> counts{};
    std::array<double, 4> exact{};
    auto run = [&](const auto& sampler) {
        if (want_records) {
            records = sample_records(sampler, args.shots, cfg.seed, cfg.threads);
            for (const auto& r : records) ++counts[quadrant_index(r.sign1, r.sign2)];
        } else {
            counts = count_quadrants(sampler, args.shots, cfg.seed, cfg.threads);
        }
    };
    std::optional<TwoParticleState> state;
    if (d) {
        const LhvSettingSampler s(*d, pair);
        const auto t = lhv_table(*d);
        for (int q = 0; q < 4; ++q) exact[q] = t.value(pair, quadrant_sign(q, 1), quadrant_sign(q, 2));
        run(s);
    } else {
        state = sampling_state(cfg, args.grid);
        const SettingSampler s(*state, pair, sampler_options(cfg));
        exact = s.quadrant_probabilities();
        run(s);
    }

    std::vector<std::uint64_t> trials;
    if (args.trials > 0) {
        if (state) {
            trials = violation_trials(*state, args.trials, cfg.seed, cfg.threads);
        } else {
            for (std::uint64_t t = 0; t < args.trials; ++t)
                trials.push_back(events_to_violation(*d, 0.5, cfg.seed, t).shots);
        }
    }

    if (!args.records.empty()) {
        const auto p = resolve_path(args.records, "");
        if (!p) throw ConfigError("--records needs a file path");
        std::ostringstream os;
        io::write_records_csv(os, records);
        write_file(*p, os.str());
    }

    json tj;
    if (!trials.empty()) {
        auto sorted = trials;
        std::sort(sorted.begin(), sorted.end());
        const double mean = std::accumulate(trials.begin(), trials.end(), 0.0) / static_cast<double>(trials.size());
        const double p = (state ? quadrant_table(*state) : lhv_table(*d)).value(pp_setting, Sign::minus, Sign::minus);
        tj = {{"count", trials.size()},
              {"mean", mean},
              {"median", static_cast<double>(sorted[(sorted.size() - 1) / 2])},
              {"min", sorted.front()},
              {"max", sorted.back()},
              {"expected_mean", 1.0 / p},
              {"expected_sigma_of_mean", std::sqrt((1.0 - p) / (p * p) / static_cast<double>(trials.size()))}};
    }

    std::string text;
    if (cfg.output == OutputFormat::json) {
        json j = make_document("sample", cfg, common);
        j["source"] = d ? "lhv" : (args.grid ? "grid" : "closed-form");
        j["setting"] = pair.name();
        j["shots"] = args.shots;
        j["quadrants"] = quadrant_summary(counts, exact, args.shots);
        if (!trials.empty()) j["violation_trials"] = tj;
        text = dump(j);
    } else if (cfg.output == OutputFormat::csv) {
        std::ostringstream os;
        io::write_records_csv(os, records);
        text = os.str();
    } else {
        std::ostringstream os;
        os << args.shots << " shots, setting " << pair.name() << ", seed " << cfg.seed << '\n';
        std::vector<std::vector<std::string>> rows{{"quadrant", "count", "frequency", "exact", "95% Wilson"}};
        for (const auto& r : quadrant_summary(counts, exact, args.shots))
            rows.push_back({sign_pair(io::sign_from_string(r["sign1"]), io::sign_from_string(r["sign2"])),
                            std::to_string(r["count"].get<std::uint64_t>()), fmt("%.6f", r["frequency"]),
                            fmt("%.6f", r["exact"]),
                            "[" + fmt("%.6f", r["wilson"]["lo"]) + ", " + fmt("%.6f", r["wilson"]["hi"]) + "]"});
        os << text_table(rows);
        if (!trials.empty())
            os << "shots to first pp (-,-) over " << trials.size() << " trials: mean " << fmt("%.3f", tj["mean"])
               << " (expected " << fmt("%.3f", tj["expected_mean"]) << " +- "
               << fmt("%.3f", tj["expected_sigma_of_mean"]) << "), median " << fmt("%.0f", tj["median"]) << '\n';
        text = os.str();
    }
    emit(cfg, "sample", text);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// witness

struct WitnessArgs {
    std::uint64_t shots = 1000000;
    std::string lhv;
    double confidence = 0.95;
    bool grid = false;
};

int cmd_witness(const Common& common, const WitnessArgs& args) {
    const RunConfig cfg = resolve_config(common);
    if (!(args.confidence > 0.0 && args.confidence < 1.0)) throw ConfigError("--confidence must lie in (0, 1)");
    ExperimentPlan plan;
    plan.shots_per_setting = args.shots;
    plan.seed = cfg.seed;
    WitnessEstimate e;
    if (!args.lhv.empty())
        e = estimate_witness(plan, read_distribution(args.lhv), cfg.threads, args.confidence);
    else
        e = estimate_witness(plan, sampling_state(cfg, args.grid), sampler_options(cfg), args.confidence);

    std::string text;
    if (cfg.output == OutputFormat::json) {
        json j = make_document("witness", cfg, common);
        j["source"] = args.lhv.empty() ? (args.grid ? "grid" : "closed-form") : "lhv";
        j["estimate"] = io::to_json(e);
        text = dump(j);
    } else if (cfg.output == OutputFormat::csv) {
        text = "setting,sign1,sign2,count,shots,frequency,wilson_lo,wilson_hi\n";
        for (const auto& c : e.components)
            text += c.setting.name() + ',' + to_char(c.sign1) + ',' + to_char(c.sign2) + ',' +
                    std::to_string(c.count) + ',' + std::to_string(c.shots) + ',' + io::number(c.frequency) + ',' +
                    io::number(c.wilson.lo) + ',' + io::number(c.wilson.hi) + '\n';
    } else {
        std::ostringstream os;
        os << e.shots_per_setting << " shots per setting, seed " << e.seed << '\n';
        std::vector<std::vector<std::string>> rows{{"term", "count", "frequency", "Wilson interval"}};
        for (const auto& c : e.components)
            rows.push_back({"P_" + c.setting.name() + sign_pair(c.sign1, c.sign2), std::to_string(c.count),
                            fmt("%.6f", c.frequency),
                            "[" + fmt("%.6f", c.wilson.lo) + ", " + fmt("%.6f", c.wilson.hi) + "]"});
        os << text_table(rows);
        os << "W = " << fmt("%.6f", e.point) << ", " << fmt("%.0f", 100.0 * e.confidence) << "% interval ["
           << fmt("%.6f", e.interval.lo) << ", " << fmt("%.6f", e.interval.hi) << "], sigma = " << sci(e.sigma)
           << ", z = " << fmt("%.2f", e.z_score) << '\n'
           << (e.violation_claimed() ? "local realism violated at this confidence\n"
                                     : "no violation claimed at this confidence\n");
        text = os.str();
    }
    emit(cfg, "witness", text);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// state export / import

struct StateArgs {
    bool grid = false;
    std::string representation = "xx";
    bool unmasked = false;
    std::string input;
};

int cmd_state_export(const Common& common, const StateArgs& args) {
    RunConfig cfg = resolve_config(common);
    if (!common.overrides.count("format")) cfg.output = OutputFormat::json;
    if (cfg.output != OutputFormat::json) throw ConfigError("state export writes JSON only");
    auto s = exponential_state(cfg, !args.unmasked);
    if (args.grid) s = build_grid_state(s, cfg.grid);
    const auto rep = representation_from_string(args.representation);
    if (rep != Representation::xx) s = hardy::detail::to_rep(s, rep, {}, "state export");
    emit(cfg, "state", dump(io::to_json(s)));
    return exit_ok;
}

int cmd_state_import(const Common& common, const StateArgs& args) {
    const RunConfig cfg = resolve_config(common);
    std::ifstream in(args.input);
    if (!in) throw ConfigError("cannot read " + args.input);
    // Tables depend only on the underlying xx data, whatever the representation.
    const auto s = io::state_from_json(json::parse(in));
    return finish_probabilities(cfg, common, "state", s, {quadrant_table(s)}, std::nullopt);
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
    CLI::App app{"Hardy-type position-momentum local-realism test: exact probabilities, LHV bounds and sampling",
                 "hardy"};
    app.set_version_flag("--version", std::string(hardy_version));
    app.require_subcommand(1);

    int code = exit_ok;
    auto bind = [&](CLI::App* cmd, Common& common, std::function<int()> f) {
        add_common(cmd, common);
        cmd->callback([&code, f] { code = f(); });
    };

    Common c_rep, c_probs, c_lhv, c_sample, c_witness, c_export, c_import;

    ReproduceArgs rep;
    auto* reproduce = app.add_subcommand("reproduce", "Check N, the negative-momentum mass and P_pp(-,-)");
    reproduce->add_option("--tol", rep.tol, "Override every row's tolerance");
    bind(reproduce, c_rep, [&] { return cmd_reproduce(c_rep, rep); });

    ProbsArgs probs;
    auto* p = app.add_subcommand("probs", "All 16 quadrant probabilities with error budgets");
    p->add_flag("--grid", probs.grid, "Use the grid method instead of the closed form");
    p->add_flag("--cross-check", probs.cross_check, "Compute both methods and compare");
    p->add_option("--cross-tol", probs.cross_tol, "Cross-check tolerance")->capture_default_str();
    p->add_flag("--unmasked", probs.unmasked, "Product state without the Heaviside mask");
    p->add_option("--plots", probs.plots, "Directory for psi_p.csv and pp_density.csv");
    p->add_option("--plot-extent", probs.plot_extent, "Plot half width in p")->capture_default_str();
    p->add_option("--plot-points", probs.plot_points, "Plot points per axis (even)")->capture_default_str();
    bind(p, c_probs, [&] { return cmd_probs(c_probs, probs); });

    LhvArgs lhv;
    auto* l = app.add_subcommand("lhv", "Instruction-set bound: vertex enumeration and random suite");
    l->add_option("--count", lhv.count, "Random distributions in the suite")->capture_default_str();
    l->add_option("--distribution", lhv.distribution, "Also check this message distribution (JSON object)")
        ->check(CLI::ExistingFile);
    bind(l, c_lhv, [&] { return cmd_lhv(c_lhv, lhv); });

    SampleArgs sample;
    auto* s = app.add_subcommand("sample", "Draw measurement records in one setting pair");
    s->add_option("--setting", sample.setting, "xx, xp, px or pp")->capture_default_str();
    s->add_option("--shots", sample.shots, "Shots")->capture_default_str();
    s->add_option("--lhv", sample.lhv, "Sample this message distribution instead of the state")
        ->check(CLI::ExistingFile);
    s->add_option("--records", sample.records, "Also write the records as CSV");
    s->add_option("--trials", sample.trials, "Shots-to-first-pp(-,-) trials");
    s->add_flag("--grid", sample.grid, "Sample the grid state");
    bind(s, c_sample, [&] { return cmd_sample(c_sample, sample); });

    WitnessArgs witness;
    auto* w = app.add_subcommand("witness", "Four-setting experiment and the statistical witness");
    w->add_option("--shots", witness.shots, "Shots per setting pair")->capture_default_str();
    w->add_option("--lhv", witness.lhv, "Simulate data from this message distribution")->check(CLI::ExistingFile);
    w->add_option("--confidence", witness.confidence, "Interval confidence")->capture_default_str();
    w->add_flag("--grid", witness.grid, "Sample the grid state");
    bind(w, c_witness, [&] { return cmd_witness(c_witness, witness); });

    StateArgs ex, im;
    auto* st = app.add_subcommand("state", "Export or import a state document");
    st->require_subcommand(1);
    auto* e = st->add_subcommand("export", "Write the state as JSON");
    e->add_flag("--grid", ex.grid, "Export the grid state");
    e->add_option("--representation", ex.representation, "xx, xp, px or pp")->capture_default_str();
    e->add_flag("--unmasked", ex.unmasked, "Product state without the Heaviside mask");
    bind(e, c_export, [&] { return cmd_state_export(c_export, ex); });
    auto* i = st->add_subcommand("import", "Rebuild a state document and report its probabilities");
    i->add_option("file", im.input, "State JSON")->required()->check(CLI::ExistingFile);
    bind(i, c_import, [&] { return cmd_state_import(c_import, im); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; every parse error (unknown flag included) is a config error.
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ToleranceFailure& e) {
        std::cerr << "hardy: " << e.what << '\n';
        return exit_tolerance;
    } catch (const GridResolutionError& e) {
        std::cerr << "hardy: grid resolution: " << e.what() << " (estimated error " << e.estimated_error() << ")\n";
        return exit_tolerance;
    } catch (const ConfigError& e) {
        std::cerr << "hardy: invalid configuration: " << e.what() << '\n';
        return exit_config;
    } catch (const DomainError& e) {
        std::cerr << "hardy: invalid input: " << e.what() << '\n';
        return exit_config;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "hardy: malformed JSON: " << e.what() << '\n';
        return exit_config;
    } catch (const QuadratureError& e) {
        std::cerr << "hardy: quadrature failed: " << e.what() << " (best " << e.best() << ", error estimate "
                  << e.error_estimate() << ")\n";
        return exit_internal;
    } catch (const SamplerError& e) {
        std::cerr << "hardy: sampler failed: " << e.what() << '\n';
        return exit_internal;
    } catch (const std::exception& e) {
        std::cerr << "hardy: internal error: " << e.what() << '\n';
        return exit_internal;
    }
}
