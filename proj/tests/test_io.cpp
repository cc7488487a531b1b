// Copyright 2026 The noonlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noonlab/io.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "noonlab/error.hpp"
#include "noonlab/simkit.hpp"

using namespace noonlab;
using nlohmann::json;

namespace {

CountDataset sample_dataset() {
    ExperimentConfig cfg;
    for (int i = 0; i < 7; ++i) {
        cfg.phases.push_back(std::numbers::pi * i / 7);
    }
    cfg.pulses_per_point = 2'000'000;
    cfg.pair_prob = 0.05;
    cfg.ea_ratio = 0.5;
    cfg.v2 = 0.95;
    cfg.dark_prob = 1e-4;
    cfg.seed = 99;
    return simulate_counts(cfg);
}

std::string bad_row_message(const std::string &text) {
    std::istringstream in(text);
    try {
        read_counts_csv(in, "data.csv");
    } catch (const ValidationError &e) {
        return e.what();
    }
    return "";
}

std::string header() { return std::string(kCountsHeader) + "\n"; }

void expect_equal(const CountDataset &a, const CountDataset &b) {
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].phase, b.points[i].phase);
        EXPECT_EQ(a.points[i].duration, b.points[i].duration);
        EXPECT_EQ(a.points[i].counts, b.points[i].counts);
    }
}

}  // namespace

TEST(io, header_is_exact) {
    std::ostringstream out;
    write_counts_csv(out, CountDataset{});
    EXPECT_EQ(out.str(),
              "phase_rad,duration_s,n_AB,n_CD,n_AC,n_BD,n_AD,n_CB,n_4fold,s_A,s_B,s_C,s_D\n");
}

TEST(io, format_double_round_trips) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 10000; ++i) {
        const double x = std::ldexp(u(rng), static_cast<int>(i % 200) - 100);
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(std::numbers::pi), "3.141592653589793");
}

TEST(io, csv_round_trip_is_bit_exact) {
    const CountDataset ds = sample_dataset();
    std::ostringstream out;
    write_counts_csv(out, ds);
    std::istringstream in(out.str());
    const CountDataset back = read_counts_csv(in);
    expect_equal(ds, back);
    std::ostringstream again;
    write_counts_csv(again, back);
    EXPECT_EQ(again.str(), out.str());
}

TEST(io, csv_reader_tolerates_bom_crlf_and_schema_line) {
    const std::string text = "\xEF\xBB\xBF# schema: counts/1.3\r\n" + std::string(kCountsHeader) +
                             "\r\n\r\n0.25,1.5,1,2,3,4,5,6,7,8,9,10,11\r\n";
    std::istringstream in(text);
    const CountDataset ds = read_counts_csv(in);
    ASSERT_EQ(ds.points.size(), 1u);
    EXPECT_EQ(ds.points[0].phase, 0.25);
    EXPECT_EQ(ds.points[0].duration, 1.5);
    EXPECT_EQ(ds.points[0][Channel::kFourfold], 7u);
    EXPECT_EQ(ds.points[0][Channel::kSingleD], 11u);
}

TEST(io, csv_reader_rejects_newer_major_schema) {
    const std::string msg = bad_row_message("# schema: counts/2.0\n" + header());
    EXPECT_NE(msg.find("major version 2"), std::string::npos) << msg;
}

TEST(io, csv_reader_reports_line_numbers) {
    EXPECT_NE(bad_row_message(header() + "0,1,1,1,1,1,1,1,1,1,1,1,1\n0,1,1,1\n")
                  .find("data.csv:3"),
              std::string::npos);
    EXPECT_NE(bad_row_message(header() + "x,1,1,1,1,1,1,1,1,1,1,1,1\n").find("data.csv:2"),
              std::string::npos);
    EXPECT_NE(bad_row_message(header() + "0,1,1,1,1,-1,1,1,1,1,1,1,1\n").find("column 6"),
              std::string::npos);
    EXPECT_NE(bad_row_message(header() + "0,0,1,1,1,1,1,1,1,1,1,1,1\n").find("data.csv:2"),
              std::string::npos);
    EXPECT_NE(bad_row_message("phase,duration\n").find("data.csv:1"), std::string::npos);
    EXPECT_NE(bad_row_message("").find("missing counts header"), std::string::npos);
}

TEST(io, json_round_trip) {
    const CountDataset ds = sample_dataset();
    const json j = counts_to_json(ds);
    EXPECT_EQ(j.at("schema_version"), std::string(kSchemaVersion));
    expect_equal(ds, counts_from_json(parse_json_text(j.dump())));
    json bad = j;
    bad["schema_version"] = "3.1";
    EXPECT_THROW(counts_from_json(bad), ValidationError);
    bad = j;
    bad["points"][1]["counts"]["AB"] = -4;
    try {
        counts_from_json(bad, "c.json");
        FAIL();
    } catch (const ValidationError &e) {
        EXPECT_NE(std::string(e.what()).find("$.points[1]"), std::string::npos) << e.what();
    }
}

TEST(io, simulation_spec_parses_and_round_trips) {
    const json j = parse_json_text(R"({
        "n_phases": 8, "pulses_per_point": 1000, "pair_prob": 0.01,
        "ea_ratio": 0.5, "v2": 0.9, "seed": 5, "method": "per_pulse",
        "background_run": true})");
    const SimulationSpec spec = parse_simulation_spec(j);
    ASSERT_EQ(spec.experiment.phases.size(), 8u);
    EXPECT_EQ(spec.experiment.phases[0], 0.0);
    EXPECT_NEAR(spec.experiment.phases[4], std::numbers::pi / 2, 1e-15);
    EXPECT_EQ(spec.experiment.method, SimulationMethod::kPerPulse);
    EXPECT_EQ(spec.experiment.seed, 5u);
    EXPECT_TRUE(spec.background_run);
    const SimulationSpec back = parse_simulation_spec(simulation_spec_to_json(spec));
    EXPECT_EQ(back.experiment.phases, spec.experiment.phases);
    EXPECT_EQ(back.experiment.v2, 0.9);
    EXPECT_EQ(back.experiment.rep_rate, spec.experiment.rep_rate);
    EXPECT_TRUE(back.background_run);
}

TEST(io, simulation_spec_accepts_manifest) {
    const SimulationSpec spec = parse_simulation_spec(parse_json_text(
        R"({"phases": [0.0, 0.5], "pulses_per_point": 10, "pair_prob": 0.1, "ea_ratio": 0.3})"));
    const RunManifest m = make_manifest("simulate", simulation_spec_to_json(spec), 17);
    const json mj = m.to_json();
    EXPECT_EQ(mj.at("command"), "simulate");
    EXPECT_EQ(mj.at("seed"), 17u);
    EXPECT_FALSE(mj.at("version").get<std::string>().empty());
    EXPECT_EQ(mj.at("timestamp").get<std::string>().back(), 'Z');
    const SimulationSpec again = parse_simulation_spec(mj);
    EXPECT_EQ(again.experiment.phases, spec.experiment.phases);
}

TEST(io, simulation_spec_errors_name_the_field) {
    const auto message = [](const char *text) {
        try {
            parse_simulation_spec(parse_json_text(text));
        } catch (const ValidationError &e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message(R"({"n_phases": 4, "pulses_per_point": 10, "pair_prob": 0.1,
                          "ea_ratio": 0.3, "colour": 1})")
                  .find("$.colour"),
              std::string::npos);
    EXPECT_NE(message(R"({"n_phases": 4, "pulses_per_point": 10, "ea_ratio": 0.3})")
                  .find("$.pair_prob"),
              std::string::npos);
    EXPECT_NE(message(R"({"n_phases": 4, "pulses_per_point": 10, "pair_prob": -1,
                          "ea_ratio": 0.3})")
                  .find("$.pair_prob"),
              std::string::npos);
    EXPECT_NE(message(R"({"n_phases": 4, "pulses_per_point": "many", "pair_prob": 0.1,
                          "ea_ratio": 0.3})")
                  .find("$.pulses_per_point"),
              std::string::npos);
    EXPECT_NE(message(R"({"phases": [0], "n_phases": 4, "pulses_per_point": 10,
                          "pair_prob": 0.1, "ea_ratio": 0.3})")
                  .find("exactly one"),
              std::string::npos);
    EXPECT_NE(message(R"({"n_phases": 4, "pulses_per_point": 10, "pair_prob": 0.1,
                          "ea_ratio": 0.3, "method": "magic"})")
                  .find("$.method"),
              std::string::npos);
    EXPECT_NE(message("{nope").find("<input>"), std::string::npos);
}
