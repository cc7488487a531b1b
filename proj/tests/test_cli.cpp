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

#include "noonlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "noonlab/io.hpp"

using namespace noonlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "noonlab");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
   public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("noonlab_cli_" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;
    [[nodiscard]] std::string operator/(const std::string &name) const {
        return (path_ / name).string();
    }
    [[nodiscard]] std::string str() const { return path_.string(); }

   private:
    fs::path path_;
};

void write(const std::string &path, const std::string &text) { std::ofstream(path) << text; }

std::string slurp(const std::string &path) {
    std::ifstream f(path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

constexpr const char *kConfig = R"({
    "n_phases": 16, "pulses_per_point": 3000000000, "pair_prob": 0.001,
    "ea_ratio": 0.5, "v2": 1.0, "dark_prob": 1e-6, "seed": 11})";

}  // namespace

TEST(cli, usage_errors_exit_with_validation_code) {
    EXPECT_EQ(run({}).code, kExitValidation);
    EXPECT_EQ(run({"bogus"}).code, kExitValidation);
    EXPECT_EQ(run({"fit"}).code, kExitValidation);
    EXPECT_EQ(run({"metrology", "--format", "xml"}).code, kExitValidation);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(cli, simulate_then_fit_is_reproducible) {
    TempDir dir;
    write(dir / "config.json", kConfig);
    const Result sim = run({"simulate", "--config", dir / "config.json", "--output-dir",
                            dir / "run"});
    ASSERT_EQ(sim.code, kExitOk) << sim.err;
    const std::string counts = slurp(dir / "run/counts.csv");
    EXPECT_EQ(counts.substr(0, kCountsHeader.size()), kCountsHeader);
    const json manifest = parse_json_text(slurp(dir / "run/simulate.manifest.json"));
    EXPECT_EQ(manifest.at("command"), "simulate");
    EXPECT_EQ(manifest.at("seed"), 11u);

    // The manifest reproduces the run.
    ASSERT_EQ(run({"simulate", "--config", dir / "run/simulate.manifest.json", "--output-dir",
                   dir / "rerun"})
                  .code,
              kExitOk);
    EXPECT_EQ(slurp(dir / "rerun/counts.csv"), counts);

    const Result fit1 = run({"fit", "--counts", dir / "run/counts.csv"});
    const Result fit2 = run({"fit", "--counts", dir / "rerun/counts.csv"});
    ASSERT_EQ(fit1.code, kExitOk) << fit1.err;
    EXPECT_EQ(fit1.out, fit2.out);
    const json fits = parse_json_text(fit1.out).at("fits");
    ASSERT_EQ(fits.size(), 8u);
    EXPECT_EQ(fits[6].at("series"), "4fold");
    EXPECT_EQ(fits[6].at("harmonic"), 4);
    EXPECT_EQ(fits[0].at("harmonic"), 2);
    EXPECT_EQ(fits[7].at("series"), "accidental");

    const Result other = run({"simulate", "--config", dir / "config.json", "--seed", "12"});
    ASSERT_EQ(other.code, kExitOk);
    EXPECT_NE(other.out, counts);
}

TEST(cli, simulate_background_run_and_subtraction) {
    TempDir dir;
    std::string cfg = kConfig;
    cfg.insert(cfg.rfind('}'), R"(, "background_run": true)");
    write(dir / "config.json", cfg);
    EXPECT_EQ(run({"simulate", "--config", dir / "config.json"}).code, kExitValidation);
    ASSERT_EQ(run({"simulate", "--config", dir / "config.json", "--output-dir", dir.str(),
                   "--format", "json"})
                  .code,
              kExitOk);
    const Result fit = run({"fit", "--counts", dir / "counts.json", "--background",
                            dir / "background.json", "--series", "AB,4fold", "--format", "csv"});
    ASSERT_EQ(fit.code, kExitOk) << fit.err;
    EXPECT_EQ(std::count(fit.out.begin(), fit.out.end(), '\n'), 3);

    // The fringe dataset feeds the visibility route; the rate route takes
    // single-crystal rates, here the published ones.
    const Result only_counts = run({"analyze", "--counts", dir / "counts.json", "--background",
                                    dir / "background.json"});
    ASSERT_EQ(only_counts.code, kExitOk) << only_counts.err;
    EXPECT_TRUE(parse_json_text(only_counts.out).at("rate_route").is_null());

    const Result an = run({"analyze", "--counts", dir / "counts.json", "--background",
                           dir / "background.json", "--rates", "777,892,800,862,823,847",
                           "--r4-counts", "103", "--r4-duration", "1800"});
    ASSERT_EQ(an.code, kExitOk) << an.err;
    const json j = parse_json_text(an.out);
    const json &vis = j.at("visibility_route");
    EXPECT_NEAR(vis.at("v2").get<double>(), 1.0, 0.01);
    EXPECT_NEAR(vis.at("ea").get<double>(), 0.5, 3 * vis.at("sigma_ea").get<double>());
    const double acc = (777.0 * 892 + 800.0 * 862 + 823.0 * 847) / 76e6;
    EXPECT_NEAR(j.at("rate_route").at("ea").get<double>(), (103.0 / 1800 / acc - 1) / 2, 1e-12);
    EXPECT_TRUE(j.at("consistent").is_boolean());
}

TEST(cli, fit_reports_bad_inputs) {
    TempDir dir;
    write(dir / "bad.csv", std::string(kCountsHeader) + "\n0,1,2\n");
    const Result bad = run({"fit", "--counts", dir / "bad.csv"});
    EXPECT_EQ(bad.code, kExitValidation);
    EXPECT_NE(bad.err.find(":2"), std::string::npos) << bad.err;
    EXPECT_EQ(run({"fit", "--counts", dir / "missing.csv"}).code, kExitValidation);
    write(dir / "config.json", kConfig);
    ASSERT_EQ(run({"simulate", "--config", dir / "config.json", "--output-dir", dir.str()}).code,
              kExitOk);
    EXPECT_EQ(run({"fit", "--counts", dir / "counts.csv", "--series", "AB,XY"}).code,
              kExitValidation);
}

TEST(cli, analyze_both_routes) {
    const Result r = run({"analyze", "--v4", "0.57", "--sigma-v4", "0.04", "--v2", "0.88",
                          "--sigma-v2", "0.01"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json j = parse_json_text(r.out);
    EXPECT_NEAR(j.at("visibility_route").at("ea").get<double>(), 0.4758, 1e-3);
    EXPECT_TRUE(j.at("rate_route").is_null());
    EXPECT_TRUE(j.at("consistent").is_null());

    const Result below = run({"analyze", "--v4", "0.2", "--v2", "0.88"});
    EXPECT_EQ(below.code, kExitValidation);
    EXPECT_NE(below.err.find("lower"), std::string::npos) << below.err;
    EXPECT_EQ(run({"analyze"}).code, kExitValidation);
}

TEST(cli, synth_noon4_preset) {
    const Result r = run({"synth", "--preset", "noon4"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json j = parse_json_text(r.out);
    ASSERT_EQ(j.at("forms").size(), 4u);
    EXPECT_TRUE(j.at("isometry").at("isometric").get<bool>());
    const double s = 0.5;
    const std::vector<std::array<double, 2>> beta{{0, -s}, {-s, 0}, {0, s}, {s, 0}};
    for (std::size_t i = 0; i < 4; ++i) {
        const json &f = j.at("forms")[i];
        EXPECT_NEAR(f.at("alpha")[0].get<double>(), s, 1e-12);
        EXPECT_NEAR(f.at("alpha")[1].get<double>(), 0.0, 1e-12);
        EXPECT_NEAR(f.at("beta")[0].get<double>(), beta[i][0], 1e-12) << i;
        EXPECT_NEAR(f.at("beta")[1].get<double>(), beta[i][1], 1e-12) << i;
    }
    EXPECT_EQ(run({"synth"}).code, kExitValidation);
    EXPECT_EQ(run({"synth", "--preset", "noon:0"}).code, kExitValidation);
    EXPECT_EQ(run({"synth", "--random", "5", "--seed", "3"}).out,
              run({"synth", "--random", "5", "--seed", "3"}).out);
}

TEST(cli, synth_state_file) {
    TempDir dir;
    write(dir / "s.json", R"({"amplitudes": [0.5, [0, 0.5], 0.5, 0.5]})");
    const Result r = run({"synth", "--state", dir / "s.json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(parse_json_text(r.out).at("n"), 3);
    write(dir / "bad.json", R"({"amplitudes": [0, 0]})");
    EXPECT_EQ(run({"synth", "--state", dir / "bad.json"}).code, kExitValidation);
}

TEST(cli, metrology_sweep_outputs) {
    const Result csv = run({"metrology", "--state", "noon", "--n-min", "2", "--n-max", "16"});
    ASSERT_EQ(csv.code, kExitOk) << csv.err;
    EXPECT_NE(csv.out.find("# scaling_exponent,-1"), std::string::npos) << csv.out;

    TempDir dir;
    const Result j = run({"metrology", "--state", "pdc", "--n-min", "8", "--n-max", "256",
                          "--format", "json", "--output-dir", dir.str()});
    ASSERT_EQ(j.code, kExitOk) << j.err;
    const json result = parse_json_text(slurp(dir / "metrology.json"));
    EXPECT_EQ(result.at("rows").size(), 6u);
    const double e = result.at("exponent").get<double>();
    EXPECT_GE(e, -0.80);
    EXPECT_LE(e, -0.70);
    EXPECT_TRUE(fs::exists(dir / "metrology.manifest.json"));
    EXPECT_EQ(run({"metrology", "--n-min", "9", "--n-max", "3"}).code, kExitValidation);
}
