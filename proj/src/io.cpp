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

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <system_error>
#include <vector>

#include "noonlab/error.hpp"

#ifndef NOONLAB_VERSION
#define NOONLAB_VERSION "0.0.0"
#endif

namespace noonlab {

namespace {

using nlohmann::json;

constexpr std::size_t kCountsColumns = 2 + kNumChannels;
constexpr std::string_view kSchemaPrefix = "# schema: counts/";

[[noreturn]] void bad_line(std::string_view source, std::size_t line, const std::string &what) {
    throw ValidationError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view row) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = row.find(',', start);
        out.push_back(row.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

bool parse_real(std::string_view text, double &value) {
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    return ec == std::errc{} && ptr == end;
}

bool parse_count(std::string_view text, std::uint64_t &value) {
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    return ec == std::errc{} && ptr == end && !text.empty();
}

// Checks "<major>.<minor>"; only major 1 is understood.
void check_schema_version(std::string_view version, const std::string &where) {
    const std::size_t dot = version.find('.');
    std::uint64_t major = 0;
    if (!parse_count(version.substr(0, dot), major)) {
        throw ValidationError(where + ": malformed schema version '" + std::string(version) + "'");
    }
    if (major != 1) {
        throw ValidationError(where + ": unsupported schema major version " +
                              std::to_string(major) + " (this reader understands 1)");
    }
}

std::string path_of(const std::string &key) { return "$." + key; }

double number_at(const json &j, const std::string &key) {
    const json &v = j.at(key);
    if (!v.is_number()) {
        throw ValidationError(path_of(key) + ": expected a number, got " + v.type_name());
    }
    return v.get<double>();
}

std::uint64_t unsigned_at(const json &j, const std::string &key) {
    const json &v = j.at(key);
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer()) {
        throw ValidationError(path_of(key) + ": must be nonnegative");
    }
    throw ValidationError(path_of(key) + ": expected an unsigned integer, got " + v.type_name());
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) {
        throw NumericalError("format_double: conversion failed");
    }
    return {buf, ptr};
}

void write_counts_csv(std::ostream &out, const CountDataset &ds) {
    out << kCountsHeader << '\n';
    for (const auto &r : ds.points) {
        out << format_double(r.phase) << ',' << format_double(r.duration);
        for (const auto c : r.counts) {
            out << ',' << c;
        }
        out << '\n';
    }
}

CountDataset read_counts_csv(std::istream &in, std::string_view source) {
    CountDataset ds;
    std::string line;
    std::size_t number = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::string_view row = line;
        if (number == 1 && row.size() >= 3 && row.substr(0, 3) == "\xEF\xBB\xBF") {
            row.remove_prefix(3);
        }
        if (!header_seen) {
            if (row.substr(0, kSchemaPrefix.size()) == kSchemaPrefix) {
                check_schema_version(row.substr(kSchemaPrefix.size()),
                                     std::string(source) + ":" + std::to_string(number));
                continue;
            }
            if (row != kCountsHeader) {
                bad_line(source, number, "expected header '" + std::string(kCountsHeader) + "'");
            }
            header_seen = true;
            continue;
        }
        if (row.empty()) {
            continue;
        }
        const auto fields = split(row);
        if (fields.size() != kCountsColumns) {
            bad_line(source, number,
                     "expected " + std::to_string(kCountsColumns) + " fields, got " +
                         std::to_string(fields.size()));
        }
        CountRecord r;
        if (!parse_real(fields[0], r.phase) || !std::isfinite(r.phase)) {
            bad_line(source, number, "bad phase_rad '" + std::string(fields[0]) + "'");
        }
        if (!parse_real(fields[1], r.duration) || !(r.duration > 0.0) ||
            !std::isfinite(r.duration)) {
            bad_line(source, number, "bad duration_s '" + std::string(fields[1]) + "'");
        }
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            if (!parse_count(fields[c + 2], r.counts[c])) {
                bad_line(source, number,
                         "bad count in column " + std::to_string(c + 3) + " '" +
                             std::string(fields[c + 2]) + "'");
            }
        }
        ds.points.push_back(r);
    }
    if (!header_seen) {
        throw ValidationError(std::string(source) + ": missing counts header");
    }
    return ds;
}

json counts_to_json(const CountDataset &ds) {
    json points = json::array();
    for (const auto &r : ds.points) {
        json counts = json::object();
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            counts[std::string(channel_name(static_cast<Channel>(c)))] = r.counts[c];
        }
        points.push_back({{"phase_rad", r.phase}, {"duration_s", r.duration}, {"counts", counts}});
    }
    return {{"schema", "counts"}, {"schema_version", kSchemaVersion}, {"points", points}};
}

CountDataset counts_from_json(const json &j, std::string_view source) {
    const std::string where(source);
    try {
        if (j.contains("schema_version")) {
            check_schema_version(j.at("schema_version").get<std::string>(),
                                 where + ": $.schema_version");
        }
        CountDataset ds;
        const json &points = j.at("points");
        for (std::size_t i = 0; i < points.size(); ++i) {
            const std::string at = where + ": $.points[" + std::to_string(i) + "]";
            const json &p = points.at(i);
            CountRecord r;
            r.phase = p.at("phase_rad").get<double>();
            r.duration = p.at("duration_s").get<double>();
            if (!(r.duration > 0.0)) {
                throw ValidationError(at + ".duration_s: must be positive");
            }
            const json &counts = p.at("counts");
            for (std::size_t c = 0; c < kNumChannels; ++c) {
                const std::string name(channel_name(static_cast<Channel>(c)));
                if (!counts.contains(name) || !counts.at(name).is_number_unsigned()) {
                    throw ValidationError(at + ".counts." + name +
                                          ": expected an unsigned integer");
                }
                r.counts[c] = counts.at(name).get<std::uint64_t>();
            }
            ds.points.push_back(r);
        }
        return ds;
    } catch (const json::exception &e) {
        throw ValidationError(where + ": " + e.what());
    }
}

CountDataset load_counts(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open counts file '" + path + "'");
    }
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        std::stringstream buf;
        buf << in.rdbuf();
        return counts_from_json(parse_json_text(buf.str(), path), path);
    }
    return read_counts_csv(in, path);
}

void save_counts(const std::string &path, const CountDataset &ds) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write '" + path + "'");
    }
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        out << counts_to_json(ds).dump(2) << '\n';
    } else {
        write_counts_csv(out, ds);
    }
}

SimulationSpec parse_simulation_spec(const json &input) {
    if (!input.is_object()) {
        throw ValidationError("$: expected an object");
    }
    if (input.contains("command") && input.contains("config")) {
        const json &cfg = input.at("config");
        if (cfg.is_object()) {
            return parse_simulation_spec(cfg);
        }
    }
    static const std::set<std::string> known{
        "phases",   "n_phases",     "pulses_per_point", "rep_rate",       "pair_prob",
        "ea_ratio", "v2",           "det_efficiency",   "dark_prob",      "seed",
        "method",   "background_run", "schema_version"};
    for (const auto &item : input.items()) {
        if (!known.contains(item.key())) {
            throw ValidationError(path_of(item.key()) + ": unknown key");
        }
    }
    for (const char *key : {"pulses_per_point", "pair_prob", "ea_ratio"}) {
        if (!input.contains(key)) {
            throw ValidationError(path_of(key) + ": required key missing");
        }
    }
    if (input.contains("schema_version")) {
        const json &v = input.at("schema_version");
        if (!v.is_string()) {
            throw ValidationError("$.schema_version: expected a string");
        }
        check_schema_version(v.get<std::string>(), "$.schema_version");
    }

    SimulationSpec spec;
    ExperimentConfig &cfg = spec.experiment;
    if (input.contains("phases") == input.contains("n_phases")) {
        throw ValidationError("$.phases: give exactly one of phases or n_phases");
    }
    if (input.contains("phases")) {
        const json &phases = input.at("phases");
        if (!phases.is_array()) {
            throw ValidationError("$.phases: expected an array");
        }
        for (std::size_t i = 0; i < phases.size(); ++i) {
            if (!phases[i].is_number()) {
                throw ValidationError("$.phases[" + std::to_string(i) + "]: expected a number");
            }
            cfg.phases.push_back(phases[i].get<double>());
        }
    } else {
        const std::uint64_t n = unsigned_at(input, "n_phases");
        if (n == 0 || n > 1000000) {
            throw ValidationError("$.n_phases: must be in [1, 1000000]");
        }
        for (std::uint64_t i = 0; i < n; ++i) {
            cfg.phases.push_back(std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(n));
        }
    }
    cfg.pulses_per_point = unsigned_at(input, "pulses_per_point");
    cfg.pair_prob = number_at(input, "pair_prob");
    cfg.ea_ratio = number_at(input, "ea_ratio");
    if (input.contains("rep_rate")) {
        cfg.rep_rate = number_at(input, "rep_rate");
    }
    if (input.contains("v2")) {
        cfg.v2 = number_at(input, "v2");
    }
    if (input.contains("det_efficiency")) {
        cfg.det_efficiency = number_at(input, "det_efficiency");
    }
    if (input.contains("dark_prob")) {
        cfg.dark_prob = number_at(input, "dark_prob");
    }
    if (input.contains("seed")) {
        cfg.seed = unsigned_at(input, "seed");
    }
    if (input.contains("method")) {
        const json &m = input.at("method");
        const std::string name = m.is_string() ? m.get<std::string>() : "";
        if (name == "aggregated") {
            cfg.method = SimulationMethod::kAggregated;
        } else if (name == "per_pulse") {
            cfg.method = SimulationMethod::kPerPulse;
        } else {
            throw ValidationError("$.method: expected \"aggregated\" or \"per_pulse\"");
        }
    }
    if (input.contains("background_run")) {
        const json &b = input.at("background_run");
        if (!b.is_boolean()) {
            throw ValidationError("$.background_run: expected a boolean");
        }
        spec.background_run = b.get<bool>();
    }
    try {
        cfg.validate();
    } catch (const ValidationError &e) {
        // "ExperimentConfig.<field>: ..." -> "$.<field>: ..."
        std::string msg = e.what();
        const std::string prefix = "ExperimentConfig.";
        if (msg.rfind(prefix, 0) == 0) {
            msg = "$." + msg.substr(prefix.size());
        }
        throw ValidationError(msg);
    }
    return spec;
}

json simulation_spec_to_json(const SimulationSpec &spec) {
    const ExperimentConfig &cfg = spec.experiment;
    return {{"schema_version", kSchemaVersion},
            {"phases", cfg.phases},
            {"pulses_per_point", cfg.pulses_per_point},
            {"rep_rate", cfg.rep_rate},
            {"pair_prob", cfg.pair_prob},
            {"ea_ratio", cfg.ea_ratio},
            {"v2", cfg.v2},
            {"det_efficiency", cfg.det_efficiency},
            {"dark_prob", cfg.dark_prob},
            {"seed", cfg.seed},
            {"method", cfg.method == SimulationMethod::kAggregated ? "aggregated" : "per_pulse"},
            {"background_run", spec.background_run}};
}

json parse_json_text(std::string_view text, std::string_view source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError(std::string(source) + ": invalid JSON: " + e.what());
    }
}

json load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

json RunManifest::to_json() const {
    return {{"schema_version", kSchemaVersion},
            {"command", command},
            {"config", config},
            {"seed", seed},
            {"version", version},
            {"timestamp", timestamp}};
}

RunManifest make_manifest(std::string command, json config, std::uint64_t seed) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return {std::move(command), std::move(config), seed, NOONLAB_VERSION, stamp};
}

}  // namespace noonlab
