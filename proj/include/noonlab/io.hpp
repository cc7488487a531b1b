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

/**
 * @file io.hpp
 * File formats: the counts table (CSV or JSON), experiment configs and run
 * manifests.
 *
 * Counts CSV: an optional "# schema: counts/<major>.<minor>" comment line,
 * then the header row
 *   phase_rad,duration_s,n_AB,n_CD,n_AC,n_BD,n_AD,n_CB,n_4fold,s_A,s_B,s_C,s_D
 * then one row per phase point. Reals are written in shortest round-trip
 * form. Readers reject any schema major version other than 1.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "noonlab/dataset.hpp"
#include "noonlab/simkit.hpp"
#include "json.hpp"

namespace noonlab {

inline constexpr std::string_view kCountsHeader =
    "phase_rad,duration_s,n_AB,n_CD,n_AC,n_BD,n_AD,n_CB,n_4fold,s_A,s_B,s_C,s_D";
inline constexpr std::string_view kSchemaVersion = "1.0";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

void write_counts_csv(std::ostream &out, const CountDataset &ds);
/// Throws ValidationError naming `source` and the line number on bad input.
CountDataset read_counts_csv(std::istream &in, std::string_view source = "<input>");

nlohmann::json counts_to_json(const CountDataset &ds);
CountDataset counts_from_json(const nlohmann::json &j, std::string_view source = "<input>");

/// Reads a counts file, choosing JSON for a ".json" extension and CSV otherwise.
CountDataset load_counts(const std::string &path);
void save_counts(const std::string &path, const CountDataset &ds);

/// What `simulate` runs: the experiment and whether to add a no-signal run.
struct SimulationSpec {
    ExperimentConfig experiment;
    /// Also simulate pair_prob = 0 with a derived seed, for background subtraction.
    bool background_run = false;
};

/**
 * Parses a simulation config. Keys mirror ExperimentConfig field names
 * (phases in radians), plus optional "method" ("aggregated" | "per_pulse"),
 * "background_run" and "schema_version". Instead of "phases", "n_phases"
 * gives that many equally spaced phases over [0, pi). A run manifest is
 * accepted too; its "config" member is used.
 *
 * Unknown keys, wrong types and out-of-range values throw ValidationError
 * with the JSON path, e.g. "$.pair_prob".
 */
SimulationSpec parse_simulation_spec(const nlohmann::json &j);
nlohmann::json simulation_spec_to_json(const SimulationSpec &spec);

/// Throws ValidationError with the JSON path when text is not valid JSON.
nlohmann::json parse_json_text(std::string_view text, std::string_view source = "<input>");
nlohmann::json load_json_file(const std::string &path);

struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string version;
    /// UTC, ISO 8601.
    std::string timestamp;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Manifest stamped with the library version and the current UTC time.
RunManifest make_manifest(std::string command, nlohmann::json config, std::uint64_t seed);

}  // namespace noonlab
