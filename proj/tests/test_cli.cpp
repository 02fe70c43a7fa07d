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

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "qka/cli.hpp"
#include "test_helpers.hpp"

using namespace qka;
using qka::testing::kPi;

TEST_CASE("parse_args accepts the documented invocations") {
    SUBCASE("simulate") {
        const RunConfig cfg = parse_args(
            {"simulate", "--theta", "0.6283", "--trials", "100000", "--seed", "42"});
        CHECK(cfg.command == RunConfig::Command::simulate);
        CHECK(cfg.theta == doctest::Approx(0.6283));
        CHECK(cfg.trials == 100000);
        CHECK(cfg.seed == 42);
        CHECK(cfg.format == RunConfig::Format::json);
        CHECK_FALSE(cfg.target_key.has_value());
    }

    SUBCASE("attack") {
        const RunConfig cfg = parse_args({"attack", "--theta", "0.6283", "--target", "10",
                                          "--trials", "10000", "--seed", "7"});
        CHECK(cfg.command == RunConfig::Command::attack);
        REQUIRE(cfg.target_key.has_value());
        CHECK(*cfg.target_key == KeyBits::k10);
    }

    SUBCASE("full-report with text format and output path") {
        const RunConfig cfg = parse_args({"full-report", "--theta", "0.3", "--format", "text",
                                          "--output", "report.txt"});
        CHECK(cfg.command == RunConfig::Command::full_report);
        CHECK(cfg.format == RunConfig::Format::text);
        REQUIRE(cfg.output_path.has_value());
        CHECK(*cfg.output_path == "report.txt");
    }
}

TEST_CASE("parse_args rejects bad input with the offending flag named") {
    SUBCASE("theta at pi/4 is degenerate") {
        CHECK_THROWS_WITH_AS(parse_args({"simulate", "--theta", "0.7854"}),
                             doctest::Contains("--theta"), UsageError);
    }
    SUBCASE("theta outside the open interval") {
        CHECK_THROWS_WITH_AS(parse_args({"simulate", "--theta", "1.0"}),
                             doctest::Contains("--theta"), UsageError);
        CHECK_THROWS_AS(parse_args({"simulate", "--theta", "0"}), UsageError);
    }
    SUBCASE("unknown flag") {
        CHECK_THROWS_AS(parse_args({"simulate", "--theta", "0.3", "--bogus", "1"}), UsageError);
    }
    SUBCASE("attack without a target") {
        CHECK_THROWS_WITH_AS(parse_args({"attack", "--theta", "0.3"}),
                             doctest::Contains("--target"), UsageError);
    }
    SUBCASE("bad target value") {
        CHECK_THROWS_WITH_AS(parse_args({"attack", "--theta", "0.3", "--target", "2"}),
                             doctest::Contains("--target"), UsageError);
    }
    SUBCASE("bad format") {
        CHECK_THROWS_AS(parse_args({"simulate", "--theta", "0.3", "--format", "xml"}),
                        UsageError);
    }
    SUBCASE("missing subcommand") {
        CHECK_THROWS_AS(parse_args({}), UsageError);
    }
    SUBCASE("help is not an error") {
        CHECK_THROWS_AS(parse_args({"--help"}), HelpRequested);
    }
}

TEST_CASE("seed falls back to QKA_SEED, then 1") {
    unsetenv("QKA_SEED");
    CHECK(parse_args({"simulate", "--theta", "0.3"}).seed == 1);

    setenv("QKA_SEED", "777", 1);
    CHECK(parse_args({"simulate", "--theta", "0.3"}).seed == 777);
    CHECK(parse_args({"simulate", "--theta", "0.3", "--seed", "5"}).seed == 5);

    setenv("QKA_SEED", "not-a-number", 1);
    CHECK_THROWS_WITH_AS(parse_args({"simulate", "--theta", "0.3"}),
                         doctest::Contains("QKA_SEED"), UsageError);
    unsetenv("QKA_SEED");
}

TEST_CASE("build_report") {
    SUBCASE("simulate reports full agreement and a uniform histogram") {
        RunConfig cfg;
        cfg.command = RunConfig::Command::simulate;
        cfg.theta = kPi / 5.0;
        cfg.trials = 400;
        cfg.seed = 42;
        const Json report = build_report(cfg);
        CHECK(report["schema_version"] == "1");
        CHECK(report["command"] == "simulate");
        CHECK(report["results"]["agreement_rate"].get<double>() == 1.0);
        CHECK(report["verdicts"]["key_agreement"] == "alice and bob agree in every trial");
        std::size_t total = 0;
        for (const auto& [key, count] : report["results"]["key_histogram"].items())
            total += count.get<std::size_t>();
        CHECK(total == 400);
        CHECK(report["results"]["sample_transcripts"].size() == 3);
    }

    SUBCASE("attack with target 11 hits every trial") {
        RunConfig cfg;
        cfg.command = RunConfig::Command::attack;
        cfg.theta = kPi / 5.0;
        cfg.trials = 250;
        cfg.seed = 7;
        cfg.target_key = KeyBits::k11;
        const Json report = build_report(cfg);
        CHECK(report["results"]["hit_rate"].get<double>() == 1.0);
        CHECK(report["results"]["target_key"] == "11");
    }

    SUBCASE("full-report carries the headline numbers") {
        RunConfig cfg;
        cfg.command = RunConfig::Command::full_report;
        cfg.theta = kPi / 5.0;
        cfg.trials = 50;
        cfg.seed = 3;
        const Json report = build_report(cfg);
        CHECK(report["results"]["discriminate"]["report"]["success_probability"]
                  .get<double>() == 0.5);
        CHECK(report["results"]["nosignal"]["trace_distance"].get<double>() == 0.0);
        CHECK(report["verdicts"]["four_state_discrimination"] == "impossible");
        CHECK(report["verdicts"]["no_signalling"] ==
              "no signalling upheld; hypothetical device would signal");
        for (KeyBits k : kAllKeys)
            CHECK(report["results"]["attack"][to_string(k)]["hit_rate"].get<double>() == 1.0);
    }

    SUBCASE("identical configs produce identical bytes") {
        RunConfig cfg;
        cfg.command = RunConfig::Command::full_report;
        cfg.theta = 0.3;
        cfg.trials = 60;
        cfg.seed = 11;
        CHECK(build_report(cfg).dump(2) == build_report(cfg).dump(2));
    }
}

TEST_CASE("text and json formats report identical numeric values") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::full_report;
    cfg.theta = kPi / 5.0;
    cfg.trials = 40;
    cfg.seed = 9;
    const Json report = build_report(cfg);
    const std::string text = render_text(report);

    const auto appears = [&](double v) {
        return text.find(real12_string(v)) != std::string::npos;
    };
    CHECK(appears(report["results"]["nosignal"]["trace_distance"].get<double>()));
    CHECK(appears(report["results"]["nosignal"]["helstrom_success"].get<double>()));
    CHECK(appears(report["results"]["simulate"]["agreement_rate"].get<double>()));
    CHECK(appears(
        report["results"]["discriminate"]["report"]["success_probability"].get<double>()));
    CHECK(render_text(report) == text);  // rendering is deterministic
}

TEST_CASE("execute writes the report and returns 0") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::nosignal;
    cfg.theta = 0.3;
    cfg.seed = 2;
    std::ostringstream out;
    CHECK(execute(cfg, out) == 0);
    const Json parsed = Json::parse(out.str());
    CHECK(parsed["command"] == "nosignal");
    CHECK(parsed["results"]["helstrom_success"].get<double>() == 0.5);

    SUBCASE("text format renders the same document") {
        cfg.format = RunConfig::Format::text;
        std::ostringstream text_out;
        CHECK(execute(cfg, text_out) == 0);
        CHECK(text_out.str().rfind("schema_version: 1", 0) == 0);
        CHECK(text_out.str().find("no signalling upheld") != std::string::npos);
    }
}

TEST_CASE("every command emits the versioned report schema") {
    for (RunConfig::Command command :
         {RunConfig::Command::simulate, RunConfig::Command::attack,
          RunConfig::Command::discriminate, RunConfig::Command::nosignal,
          RunConfig::Command::full_report}) {
        RunConfig cfg;
        cfg.command = command;
        cfg.theta = kPi / 5.0;
        cfg.trials = 20;
        cfg.seed = 1;
        if (command == RunConfig::Command::attack) cfg.target_key = KeyBits::k01;
        const Json report = build_report(cfg);
        CHECK(report["schema_version"] == "1");
        CHECK(report.contains("command"));
        CHECK(report.contains("config"));
        CHECK(report.contains("results"));
        CHECK(report.contains("verdicts"));
        CHECK(report["config"]["theta"].get<double>() > 0.0);
        CHECK(report["config"].contains("seed"));
        CHECK(report["config"].contains("trials"));
    }
}

TEST_CASE("run_cli maps errors to exit codes") {
    SUBCASE("success is 0") {
        const char* argv[] = {"qka", "nosignal", "--theta", "0.3",
                              "--output", "cli_exit_test.json"};
        CHECK(run_cli(6, argv) == 0);
        std::remove("cli_exit_test.json");
    }
    SUBCASE("usage errors are 1") {
        const char* argv[] = {"qka", "simulate", "--theta", "0.7853981633974483"};
        CHECK(run_cli(4, argv) == 1);
    }
    SUBCASE("help is 0") {
        const char* argv[] = {"qka", "--help"};
        CHECK(run_cli(2, argv) == 0);
    }
}
