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
 * @file simkit.hpp
 * Monte Carlo generator of coincidence-count datasets for the four-detector
 * NOON projection network.
 *
 * Emission model, per pump pulse and phase point phi:
 *  - the number of pairs k is Poisson with mean pair_prob, except that
 *    two-pair pulses are split into independent-pair (2x2) events with weight
 *    1 - r and indistinguishable-quadruple (4x1) events with weight 2r,
 *    r = ea_ratio. Emission of a 4x1 quadruple is twice as likely as that of
 *    two independent pairs in the same pulse;
 *  - a single pair is, with probability v2, the coherent state
 *    (|2,0> + e^{2i phi}|0,2>)/sqrt(2), otherwise |2,0> or |0,2> with equal
 *    probability (no interference);
 *  - a 4x1 quadruple is the coherent four-photon state with probability v2^2,
 *    |4,0> or |0,4> with total probability 1 - v2/3 - 2 v2^2/3, and |2,2>
 *    with probability v2 (1 - v2)/3;
 *  - three or more pairs are independent pairs.
 * With these weights the four-fold fringe follows 1 - V4 cos 4phi with V4
 * exactly v4_of({1, r, v2}), and its mean level scales as the denominator of
 * the same formula. Photons are routed through noon4_network(), each photon
 * is detected with probability det_efficiency, and every detector fires a
 * dark count with probability dark_prob. A detector "clicks" when it sees a
 * photon or a dark count; coincidences are tallied per pulse.
 */
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "noonlab/dataset.hpp"
#include "noonlab/fock.hpp"
#include "noonlab/projection.hpp"
#include "noonlab/rng.hpp"

namespace noonlab {

enum class SimulationMethod {
    /// Exact multinomial over the 16 click patterns of a pulse. Cost does not
    /// depend on the number of pulses.
    kAggregated,
    /// Pulse-by-pulse sampling of photons, losses and dark counts. Pulses with
    /// no pair and no dark count are skipped in bulk.
    kPerPulse,
};

struct ExperimentConfig {
    std::vector<double> phases;
    std::uint64_t pulses_per_point = 0;
    double rep_rate = 76e6;
    /// Mean number of pairs per pulse.
    double pair_prob = 0.0;
    double ea_ratio = 0.0;
    double v2 = 1.0;
    double det_efficiency = 1.0;
    double dark_prob = 0.0;
    std::uint64_t seed = 0;
    SimulationMethod method = SimulationMethod::kAggregated;

    /// Throws ValidationError naming the offending field.
    void validate() const;
    [[nodiscard]] double duration() const {
        return static_cast<double>(pulses_per_point) / rep_rate;
    }
};

/// One detector-occupation outcome and its probability.
struct PatternProbability {
    std::vector<int> occupation;
    double probability = 0.0;
};

/**
 * Exact distribution of detector occupations for s sent into net.
 *
 * Uses a_H^dag = sum_j alpha_j b_j^dag and a_V^dag = sum_j beta_j b_j^dag,
 * valid when net is an isometry; throws ValidationError otherwise. Throws
 * NumericalError if the probabilities do not sum to 1 within 1e-10.
 */
std::vector<PatternProbability> outcome_distribution(const StateVector &s,
                                                     const DetectorNetwork &net);

/// Draws detector occupations from a precomputed outcome distribution.
class PatternSampler {
   public:
    explicit PatternSampler(std::vector<PatternProbability> distribution);
    PatternSampler(const StateVector &s, const DetectorNetwork &net);

    [[nodiscard]] const std::vector<PatternProbability> &distribution() const { return dist_; }
    [[nodiscard]] const std::vector<int> &sample(Rng &rng) const;

   private:
    std::vector<PatternProbability> dist_;
    std::vector<double> cumulative_;
};

/// One draw from outcome_distribution(s, net).
std::vector<int> sample_pattern(const StateVector &s, const DetectorNetwork &net, Rng &rng);

/// What happened in one simulated pulse.
struct PulseOutcome {
    int pairs = 0;
    int emitted = 0;
    std::array<int, 4> arrived{};
    std::array<int, 4> detected{};
    /// Bit j set when detector j clicked.
    unsigned clicks = 0;
};

/// Emission, routing and detection model at one phase point.
class PulseModel {
   public:
    PulseModel(const ExperimentConfig &cfg, double phase);

    /// Probability of k pairs in a pulse, k = 0 .. size()-1 (tail folded into
    /// the last entry).
    [[nodiscard]] std::span<const double> pair_number_probs() const { return pair_probs_; }
    /// Share of two-pair pulses emitted as an indistinguishable quadruple.
    [[nodiscard]] double quadruple_share() const { return quad_share_; }
    /// Probability of each click pattern (bitmask over A..D) in one pulse.
    [[nodiscard]] const std::array<double, 16> &click_distribution() const { return clicks_; }

    /// Simulates one pulse.
    PulseOutcome fire(Rng &rng) const;
    /// Simulates one pulse conditioned on at least one pair or dark count.
    PulseOutcome fire_active(Rng &rng) const;
    /// Probability that a pulse carries a pair or a dark count.
    [[nodiscard]] double active_probability() const { return active_; }

    /// Photon-pattern samplers of a single pair and of a 4x1 quadruple.
    [[nodiscard]] const PatternSampler &pair_sampler() const { return pair_; }
    [[nodiscard]] const PatternSampler &quadruple_sampler() const { return quad_; }

   private:
    PulseOutcome emit(int pairs, Rng &rng) const;
    void detect(PulseOutcome &out, Rng &rng) const;
    void compute_click_distribution();

    double efficiency_;
    double dark_;
    std::vector<double> pair_probs_;
    std::vector<double> pair_cumulative_;  // over k >= 1, normalized
    double quad_share_ = 0.0;
    double active_ = 0.0;
    PatternSampler pair_;
    PatternSampler quad_;
    std::array<double, 16> clicks_{};
};

/// Tallies one pulse's click pattern `times` times into a record.
void tally_clicks(CountRecord &record, unsigned clicks, std::uint64_t times = 1);

/// Dataset for phases[index], from the stream (seed, index) only.
CountRecord simulate_point(const ExperimentConfig &cfg, std::size_t index);

/// All phase points, OpenMP-parallel over points. Identical to the serial
/// version bit for bit.
CountDataset simulate_counts(const ExperimentConfig &cfg);
/// Serial reference for simulate_counts.
CountDataset simulate_counts_serial(const ExperimentConfig &cfg);

/// Mean four-fold clicks per pulse, averaged over a fringe period.
double expected_fourfold_per_pulse(const ExperimentConfig &cfg);
/// Pulses per point giving a mean four-fold level of `target_counts`.
std::uint64_t pulses_for_fourfold_level(const ExperimentConfig &cfg, double target_counts);

/// Accidental four-fold rate derived from the pair rates of one point.
struct AccidentalPoint {
    double phase = 0.0;
    double duration = 0.0;
    double rate = 0.0;
    double sigma_rate = 0.0;
};

/**
 * Pointwise accidental_fourfold of the six pair rates, with first-order
 * propagation of the pair-rate sigmas. Throws ValidationError on a
 * nonpositive duration or repetition rate.
 */
std::vector<AccidentalPoint> derive_accidental_dataset(const CorrectedDataset &ds,
                                                       double rep_rate);
std::vector<AccidentalPoint> derive_accidental_dataset(const CountDataset &ds, double rep_rate);

/// Accidental series as counts over each point's duration, ready to fit. Points
/// with zero propagated sigma carry none and fall back to Poisson weighting.
std::vector<FringePoint> accidental_series(std::span<const AccidentalPoint> points);

}  // namespace noonlab
