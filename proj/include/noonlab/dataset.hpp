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
 * @file dataset.hpp
 * Per-phase-point coincidence records shared by the simulator, the fitter and
 * the file readers/writers.
 */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace noonlab {

/// Counted channels, in counts-file column order.
enum class Channel : std::size_t {
    kAB = 0,
    kCD,
    kAC,
    kBD,
    kAD,
    kCB,
    kFourfold,
    kSingleA,
    kSingleB,
    kSingleC,
    kSingleD,
};

inline constexpr std::size_t kNumChannels = 11;
inline constexpr std::size_t kNumPairChannels = 6;

/// Detector indices (A..D) of each pair channel, in Channel order.
inline constexpr std::array<std::array<std::size_t, 2>, kNumPairChannels> kPairDetectors{
    {{0, 1}, {2, 3}, {0, 2}, {1, 3}, {0, 3}, {2, 1}}};

/// "AB", "CD", ..., "4fold", "A", ..., "D".
std::string_view channel_name(Channel c);
std::optional<Channel> channel_from_name(std::string_view name);
/// Harmonic of the ideal fringe in this channel: 2 for pairs, 4 for the
/// four-fold, 0 (flat) for singles.
int natural_harmonic(Channel c);

struct CountRecord {
    double phase = 0.0;
    double duration = 0.0;
    std::array<std::uint64_t, kNumChannels> counts{};

    [[nodiscard]] std::uint64_t operator[](Channel c) const {
        return counts[static_cast<std::size_t>(c)];
    }
    std::uint64_t &operator[](Channel c) { return counts[static_cast<std::size_t>(c)]; }
};

struct CountDataset {
    std::vector<CountRecord> points;
};

/// Real-valued counts with one-sigma errors, e.g. after background subtraction.
struct CorrectedRecord {
    double phase = 0.0;
    double duration = 0.0;
    std::array<double, kNumChannels> values{};
    std::array<double, kNumChannels> sigmas{};
    std::array<bool, kNumChannels> clamped{};

    [[nodiscard]] double value(Channel c) const { return values[static_cast<std::size_t>(c)]; }
    [[nodiscard]] double sigma(Channel c) const { return sigmas[static_cast<std::size_t>(c)]; }
};

struct CorrectedDataset {
    std::vector<CorrectedRecord> points;
};

/// Raw counts as a corrected dataset with Poisson sigmas sqrt(n).
CorrectedDataset to_corrected(const CountDataset &ds);

/// One point of a fringe to be fitted. Without sigma, Poisson weighting applies.
struct FringePoint {
    double phi = 0.0;
    double value = 0.0;
    std::optional<double> sigma;
};

/// Raw counts of one channel (sigma left empty).
std::vector<FringePoint> channel_series(const CountDataset &ds, Channel c);
/// Corrected values of one channel with their propagated sigmas.
std::vector<FringePoint> channel_series(const CorrectedDataset &ds, Channel c);

}  // namespace noonlab
