// Copyright 2026 The qka authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qka/discrimination.hpp"
#include "qka/json_io.hpp"
#include "qka/nosignalling.hpp"
#include "qka/protocol.hpp"
#include "qka/random.hpp"

namespace qka {

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

class HelpRequested : public std::runtime_error {
public:
    explicit HelpRequested(std::string text)
        : std::runtime_error("help requested"), help_text(std::move(text)) {}

    std::string help_text;
};

struct RunConfig {
    enum class Command { simulate, attack, discriminate, nosignal, full_report };
    enum class Format { json, text };

    Command command = Command::simulate;
    double theta = 0.0;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::optional<KeyBits> target_key;  // attack only
    std::optional<std::string> output_path;
    Format format = Format::json;
};

inline std::string to_string(RunConfig::Command c) {
    switch (c) {
        case RunConfig::Command::simulate: return "simulate";
        case RunConfig::Command::attack: return "attack";
        case RunConfig::Command::discriminate: return "discriminate";
        case RunConfig::Command::nosignal: return "nosignal";
        case RunConfig::Command::full_report: return "full-report";
    }
    throw std::logic_error("to_string(Command): bad value");
}

namespace detail {

inline std::uint64_t seed_from_env() {
    const char* env = std::getenv("QKA_SEED");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
        throw UsageError("QKA_SEED must be a decimal 64-bit integer (got \"" +
                         std::string(env) + "\")");
    }
    return static_cast<std::uint64_t>(v);
}

}  // namespace detail

/// Parse CLI arguments (program name excluded) into a validated RunConfig.
/// Bad input raises UsageError naming the offending flag; --help raises
/// HelpRequested carrying the help text.
inline RunConfig parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Simulator and falsifier for the teleportation-based two-party "
                 "quantum key agreement protocol"};
    app.name("qka");
    app.require_subcommand(1);

    RunConfig cfg;
    std::string target_str;
    std::string format_str = "json";
    std::string output_str;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* output_opt = nullptr;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--theta", cfg.theta,
                        "Preparation angle in radians, alpha = cos(theta), beta = sin(theta); "
                        "must lie strictly inside (0, pi/4)")
            ->required();
        sub->add_option("--trials", cfg.trials, "Number of protocol runs (>= 1)")
            ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
        seed_opt = sub->add_option("--seed", cfg.seed,
                                   "Master seed; per-trial streams are derived from it "
                                   "(falls back to QKA_SEED, then 1)");
        output_opt = sub->add_option("--output", output_str, "Write the report to this file");
        sub->add_option("--format", format_str, "Report format: json or text")
            ->check(CLI::IsMember({"json", "text"}));
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Run honest protocol trials");
    CLI::App* attack = app.add_subcommand(
        "attack", "Run malicious-Bob trials that force a pre-defined key");
    CLI::App* discriminate = app.add_subcommand(
        "discriminate", "Optimal discrimination of the four candidate states");
    CLI::App* nosignal = app.add_subcommand(
        "nosignal", "Check Alice's marginals under Bob's two basis choices");
    CLI::App* full = app.add_subcommand("full-report", "All four analyses in one document");
    add_common(simulate);
    CLI::Option* seed_opts[5];
    seed_opts[0] = seed_opt;
    add_common(attack);
    seed_opts[1] = seed_opt;
    attack->add_option("--target", target_str, "Key Bob forces: 00, 01, 10 or 11")->required();
    add_common(discriminate);
    seed_opts[2] = seed_opt;
    add_common(nosignal);
    seed_opts[3] = seed_opt;
    add_common(full);
    seed_opts[4] = seed_opt;

    std::vector<std::string> argv_with_name;
    argv_with_name.reserve(args.size() + 1);
    argv_with_name.push_back("qka");
    argv_with_name.insert(argv_with_name.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(argv_with_name.size());
    for (const auto& a : argv_with_name) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    std::size_t parsed_index = 0;
    if (simulate->parsed()) {
        cfg.command = RunConfig::Command::simulate;
        parsed_index = 0;
    } else if (attack->parsed()) {
        cfg.command = RunConfig::Command::attack;
        parsed_index = 1;
    } else if (discriminate->parsed()) {
        cfg.command = RunConfig::Command::discriminate;
        parsed_index = 2;
    } else if (nosignal->parsed()) {
        cfg.command = RunConfig::Command::nosignal;
        parsed_index = 3;
    } else {
        cfg.command = RunConfig::Command::full_report;
        parsed_index = 4;
    }

    if (seed_opts[parsed_index]->count() == 0) cfg.seed = detail::seed_from_env();
    if (output_opt != nullptr && !output_str.empty()) cfg.output_path = output_str;
    cfg.format = (format_str == "text") ? RunConfig::Format::text : RunConfig::Format::json;

    if (cfg.command == RunConfig::Command::attack) {
        try {
            cfg.target_key = key_from_string(target_str);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--target: ") + e.what());
        }
    }

    constexpr double kQuarterPi = 0.78539816339744830961;
    if (!(cfg.theta > 0.0 && cfg.theta < kQuarterPi)) {
        throw UsageError("--theta must lie strictly inside (0, pi/4)");
    }
    try {
        params_from_theta(cfg.theta);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--theta: ") + e.what());
    }
    return cfg;
}

namespace detail {

inline Json simulate_results(const ProtocolParams& params, std::size_t trials,
                             std::uint64_t seed, std::string* verdict) {
    const RandomSource master(seed);
    std::array<std::size_t, 4> histogram{};
    std::size_t agreed = 0;
    Json samples = Json::array();
    for (std::size_t i = 0; i < trials; ++i) {
        RandomSource child = master.child(i);
        const Transcript t = run_honest(params, child);
        histogram[static_cast<std::size_t>(t.alice_key)] += 1;
        agreed += (t.alice_key == t.bob_key) ? 1 : 0;
        if (i < 3) samples.push_back(transcript_json(t));
    }

    Json hist;
    for (KeyBits k : kAllKeys)
        hist[to_string(k)] = histogram[static_cast<std::size_t>(k)];
    Json results;
    results["trials"] = trials;
    results["key_histogram"] = hist;
    results["agreement_rate"] =
        json_real(static_cast<double>(agreed) / static_cast<double>(trials));
    results["sample_transcripts"] = samples;

    *verdict = (agreed == trials)
                   ? "alice and bob agree in every trial"
                   : "key disagreement in " + std::to_string(trials - agreed) + " of " +
                         std::to_string(trials) + " trials";
    return results;
}

inline Json attack_results(const ProtocolParams& params, KeyBits target, std::size_t trials,
                           std::uint64_t seed, std::string* verdict) {
    const RandomSource master(seed);
    std::size_t hits = 0;
    Json samples = Json::array();
    for (std::size_t i = 0; i < trials; ++i) {
        RandomSource child = master.child(i);
        const Transcript t = run_malicious_bob(params, target, child);
        hits += (t.alice_key == target) ? 1 : 0;
        if (i < 3) samples.push_back(transcript_json(t));
    }

    Json results;
    results["target_key"] = to_string(target);
    results["trials"] = trials;
    results["hit_rate"] = json_real(static_cast<double>(hits) / static_cast<double>(trials));
    results["sample_transcripts"] = samples;

    *verdict = (hits == trials) ? "malicious bob forced his target key in every trial"
                                : "target key missed in " + std::to_string(trials - hits) +
                                      " of " + std::to_string(trials) + " trials";
    return results;
}

inline Json discriminate_results(const ProtocolParams& params, std::string* verdict) {
    const auto cands = candidate_states(params);
    const Ensemble ensemble =
        Ensemble::equal_priors({cands[0], cands[1], cands[2], cands[3]});
    const DiscriminationReport pgm_report = pgm(ensemble);
    const DiscriminationReport verdict_report = lemma1_verdict(params);

    Json results;
    results["pgm_success"] = json_real(pgm_report.success_probability);
    results["optimizer_success"] = json_real(verdict_report.success_probability);
    results["bound"] = json_real(perfect_discrimination_bound(4, 2));
    results["report"] = discrimination_report_json(verdict_report);
    *verdict = verdict_report.verdict;
    return results;
}

inline Json nosignal_results(const ProtocolParams& params, std::string* verdict) {
    const NoSignalReport r = nosignal_report(params);
    *verdict = r.verdict;
    return nosignal_report_json(r);
}

}  // namespace detail

/// Build the full report document for a validated config. Pure given the
/// config: identical configs produce identical documents.
inline Json build_report(const RunConfig& cfg) {
    const ProtocolParams params = params_from_theta(cfg.theta);

    Json report;
    report["schema_version"] = "1";
    report["command"] = to_string(cfg.command);
    Json config;
    config["theta"] = json_real(cfg.theta);
    config["trials"] = cfg.trials;
    config["seed"] = cfg.seed;
    if (cfg.target_key.has_value()) config["target_key"] = to_string(*cfg.target_key);
    config["format"] = cfg.format == RunConfig::Format::text ? "text" : "json";
    report["config"] = config;

    Json results;
    Json verdicts;
    std::string verdict;
    switch (cfg.command) {
        case RunConfig::Command::simulate:
            results = detail::simulate_results(params, cfg.trials, cfg.seed, &verdict);
            verdicts["key_agreement"] = verdict;
            break;
        case RunConfig::Command::attack:
            results = detail::attack_results(params, *cfg.target_key, cfg.trials, cfg.seed,
                                             &verdict);
            verdicts["attack"] = verdict;
            break;
        case RunConfig::Command::discriminate:
            results = detail::discriminate_results(params, &verdict);
            verdicts["four_state_discrimination"] = verdict;
            break;
        case RunConfig::Command::nosignal:
            results = detail::nosignal_results(params, &verdict);
            verdicts["no_signalling"] = verdict;
            break;
        case RunConfig::Command::full_report: {
            results["simulate"] = detail::simulate_results(params, cfg.trials, cfg.seed, &verdict);
            verdicts["key_agreement"] = verdict;
            Json attack;
            for (std::size_t i = 0; i < kAllKeys.size(); ++i) {
                const std::uint64_t section_seed = RandomSource::split_seed(cfg.seed, i + 1);
                attack[to_string(kAllKeys[i])] = detail::attack_results(
                    params, kAllKeys[i], cfg.trials, section_seed, &verdict);
            }
            results["attack"] = attack;
            verdicts["attack"] = verdict;
            results["discriminate"] = detail::discriminate_results(params, &verdict);
            verdicts["four_state_discrimination"] = verdict;
            results["nosignal"] = detail::nosignal_results(params, &verdict);
            verdicts["no_signalling"] = verdict;
            break;
        }
    }
    report["results"] = results;
    report["verdicts"] = verdicts;
    return report;
}

namespace detail {

inline void render_text_value(const Json& v, const std::string& indent, const std::string& key,
                              std::string* out) {
    const std::string prefix = key.empty() ? indent : indent + key + ": ";
    if (v.is_object()) {
        if (!key.empty()) *out += indent + key + ":\n";
        const std::string child_indent = key.empty() ? indent : indent + "  ";
        for (const auto& [k, val] : v.items()) render_text_value(val, child_indent, k, out);
    } else if (v.is_array()) {
        bool scalars_only = true;
        for (const auto& item : v) scalars_only = scalars_only && !item.is_structured();
        if (scalars_only) {
            std::string line = prefix + "[";
            bool first = true;
            for (const auto& item : v) {
                if (!first) line += ", ";
                first = false;
                line += item.is_number_float() ? real12_string(item.get<double>()) : item.dump();
            }
            *out += line + "]\n";
        } else {
            if (!key.empty()) *out += indent + key + ":\n";
            std::size_t i = 0;
            for (const auto& item : v)
                render_text_value(item, indent + "  ", "[" + std::to_string(i++) + "]", out);
        }
    } else if (v.is_number_float()) {
        *out += prefix + real12_string(v.get<double>()) + "\n";
    } else if (v.is_string()) {
        *out += prefix + v.get<std::string>() + "\n";
    } else {
        *out += prefix + v.dump() + "\n";
    }
}

}  // namespace detail

/// Human-readable rendering of a report document. Built from the same JSON
/// tree, so both formats carry identical numeric values.
inline std::string render_text(const Json& report) {
    std::string out;
    detail::render_text_value(report, "", "", &out);
    return out;
}

/// Run a validated config and write the report (exit status 0 on success;
/// module errors propagate as exceptions).
inline int execute(const RunConfig& cfg, std::ostream& fallback_out) {
    const Json report = build_report(cfg);
    const std::string payload = cfg.format == RunConfig::Format::json
                                    ? report.dump(2) + "\n"
                                    : render_text(report);
    if (cfg.output_path.has_value()) {
        std::ofstream ofs(*cfg.output_path, std::ios::binary);
        if (!ofs) {
            throw UsageError("--output: cannot open \"" + *cfg.output_path + "\" for writing");
        }
        ofs << payload;
    } else {
        fallback_out << payload;
    }
    return 0;
}

/// Full CLI entry point: exit 0 on success, 1 on usage errors, 2 when an
/// internal self-check (or any other module error) fires.
inline int run_cli(int argc, const char* const* argv) {
    RunConfig cfg;
    try {
        cfg = parse_args(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const HelpRequested& h) {
        std::cout << h.help_text;
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    }
    try {
        return execute(cfg, std::cout);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const SelfCheckError& e) {
        std::cerr << "self-check failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace qka
