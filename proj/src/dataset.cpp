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

#include "noonlab/dataset.hpp"

#include <cmath>

namespace noonlab {

namespace {

constexpr std::array<std::string_view, kNumChannels> kNames{
    "AB", "CD", "AC", "BD", "AD", "CB", "4fold", "A", "B", "C", "D"};

}  // namespace

std::string_view channel_name(Channel c) { return kNames[static_cast<std::size_t>(c)]; }

std::optional<Channel> channel_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kNumChannels; ++i) {
        if (kNames[i] == name) {
            return static_cast<Channel>(i);
        }
    }
    return std::nullopt;
}

int natural_harmonic(Channel c) {
    const auto i = static_cast<std::size_t>(c);
    if (i < kNumPairChannels) {
        return 2;
    }
    return c == Channel::kFourfold ? 4 : 0;
}

CorrectedDataset to_corrected(const CountDataset &ds) {
    CorrectedDataset out;
    out.points.reserve(ds.points.size());
    for (const auto &p : ds.points) {
        CorrectedRecord r;
        r.phase = p.phase;
        r.duration = p.duration;
        for (std::size_t i = 0; i < kNumChannels; ++i) {
            r.values[i] = static_cast<double>(p.counts[i]);
            r.sigmas[i] = std::sqrt(r.values[i]);
        }
        out.points.push_back(r);
    }
    return out;
}

std::vector<FringePoint> channel_series(const CountDataset &ds, Channel c) {
    std::vector<FringePoint> out;
    out.reserve(ds.points.size());
    for (const auto &p : ds.points) {
        out.push_back({p.phase, static_cast<double>(p[c]), std::nullopt});
    }
    return out;
}

std::vector<FringePoint> channel_series(const CorrectedDataset &ds, Channel c) {
    std::vector<FringePoint> out;
    out.reserve(ds.points.size());
    for (const auto &p : ds.points) {
        out.push_back({p.phase, p.value(c), p.sigma(c)});
    }
    return out;
}

}  // namespace noonlab
