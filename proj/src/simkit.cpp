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

#include "noonlab/simkit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <string>

#include "noonlab/error.hpp"
#include "noonlab/vismodel.hpp"

namespace noonlab {

namespace {

constexpr std::size_t kDetectors = 4;
constexpr unsigned kAllClicks = 0xF;
constexpr double kDistributionTolerance = 1e-10;
constexpr double kNegligiblePairProb = 1e-18;
constexpr int kMaxPairs = 64;

using Occupation = std::vector<int>;

void require(bool ok, const std::string &field, const std::string &what) {
    if (!ok) {
        throw ValidationError("ExperimentConfig." + field + ": " + what);
    }
}

std::vector<PatternProbability> mixture(
    std::initializer_list<std::pair<double, const std::vector<PatternProbability> *>> parts) {
    std::map<Occupation, double> merged;
    for (const auto &[weight, dist] : parts) {
        if (weight == 0.0) {
            continue;
        }
        for (const auto &p : *dist) {
            merged[p.occupation] += weight * p.probability;
        }
    }
    std::vector<PatternProbability> out;
    out.reserve(merged.size());
    for (auto &[occ, prob] : merged) {
        if (prob > 0.0) {
            out.push_back({occ, prob});
        }
    }
    return out;
}

std::vector<PatternProbability> convolve(const std::vector<PatternProbability> &a,
                                         const std::vector<PatternProbability> &b) {
    std::map<Occupation, double> merged;
    for (const auto &x : a) {
        for (const auto &y : b) {
            Occupation occ(x.occupation.size());
            for (std::size_t j = 0; j < occ.size(); ++j) {
                occ[j] = x.occupation[j] + y.occupation[j];
            }
            merged[occ] += x.probability * y.probability;
        }
    }
    std::vector<PatternProbability> out;
    out.reserve(merged.size());
    for (auto &[occ, prob] : merged) {
        out.push_back({occ, prob});
    }
    return out;
}

// Probability of each click mask for a fixed photon arrival pattern.
void accumulate_clicks(std::array<double, 16> &acc, double weight, const Occupation &arrived,
                       double efficiency, double dark) {
    std::array<double, kDetectors> click{};
    for (std::size_t j = 0; j < kDetectors; ++j) {
        click[j] = 1.0 - std::pow(1.0 - efficiency, arrived[j]) * (1.0 - dark);
    }
    for (unsigned mask = 0; mask < 16; ++mask) {
        double p = weight;
        for (std::size_t j = 0; j < kDetectors; ++j) {
            p *= (mask >> j) & 1U ? click[j] : 1.0 - click[j];
        }
        acc[mask] += p;
    }
}

std::uint64_t draw_binomial(Rng &rng, std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) {
        return 0;
    }
    if (p >= 1.0) {
        return n;
    }
    std::binomial_distribution<std::uint64_t> dist(n, p);
    return dist(rng);
}

}  // namespace

void ExperimentConfig::validate() const {
    require(!phases.empty(), "phases", "must be nonempty");
    for (const double phi : phases) {
        require(std::isfinite(phi), "phases", "must be finite");
    }
    require(pulses_per_point > 0, "pulses_per_point", "must be positive");
    require(rep_rate > 0.0 && std::isfinite(rep_rate), "rep_rate", "must be positive");
    require(pair_prob >= 0.0 && pair_prob <= 1.0, "pair_prob", "must lie in [0, 1]");
    require(ea_ratio >= 0.0 && ea_ratio <= 1.0, "ea_ratio", "must lie in [0, 1]");
    require(v2 >= 0.0 && v2 <= 1.0, "v2", "must lie in [0, 1]");
    require(det_efficiency > 0.0 && det_efficiency <= 1.0, "det_efficiency",
            "must lie in (0, 1]");
    require(dark_prob >= 0.0 && dark_prob < 1.0, "dark_prob", "must lie in [0, 1)");
}

std::vector<PatternProbability> outcome_distribution(const StateVector &s,
                                                     const DetectorNetwork &net) {
    if (!check_isometry(net).isometric) {
        throw ValidationError("outcome_distribution: network '" + net.label() +
                              "' is not an isometry; sampling needs a lossless network");
    }
    const std::size_t m = net.size();
    const int n = static_cast<int>(s.n_total());
    std::map<Occupation, Complex> total;
    for (int k = 0; k <= n; ++k) {
        const Complex amp = s[static_cast<std::size_t>(k)];
        if (amp == Complex{0.0, 0.0}) {
            continue;
        }
        std::map<Occupation, Complex> poly{{Occupation(m, 0), Complex{1.0, 0.0}}};
        for (int photon = 0; photon < n; ++photon) {
            const bool horizontal = photon < n - k;
            std::map<Occupation, Complex> next;
            for (const auto &[occ, c] : poly) {
                for (std::size_t j = 0; j < m; ++j) {
                    const Complex coef = horizontal ? net[j].alpha() : net[j].beta();
                    if (coef == Complex{0.0, 0.0}) {
                        continue;
                    }
                    Occupation bumped = occ;
                    ++bumped[j];
                    next[bumped] += c * coef;
                }
            }
            poly = std::move(next);
        }
        const Complex scale = amp / sqrt_factorials(n - k, k);
        for (const auto &[occ, c] : poly) {
            total[occ] += scale * c;
        }
    }
    std::vector<PatternProbability> out;
    out.reserve(total.size());
    double sum = 0.0;
    for (const auto &[occ, c] : total) {
        double weight = std::norm(c);
        for (const int nj : occ) {
            for (int i = 2; i <= nj; ++i) {
                weight *= i;
            }
        }
        sum += weight;
        out.push_back({occ, weight});
    }
    if (std::abs(sum - 1.0) > kDistributionTolerance) {
        throw NumericalError("outcome_distribution: probabilities sum to " + std::to_string(sum));
    }
    return out;
}

PatternSampler::PatternSampler(std::vector<PatternProbability> distribution)
    : dist_(std::move(distribution)) {
    if (dist_.empty()) {
        throw ValidationError("PatternSampler: empty distribution");
    }
    cumulative_.reserve(dist_.size());
    double acc = 0.0;
    for (const auto &p : dist_) {
        acc += p.probability;
        cumulative_.push_back(acc);
    }
    for (auto &c : cumulative_) {
        c /= acc;
    }
    cumulative_.back() = 1.0;
}

PatternSampler::PatternSampler(const StateVector &s, const DetectorNetwork &net)
    : PatternSampler(outcome_distribution(s, net)) {}

const std::vector<int> &PatternSampler::sample(Rng &rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                           dist_.size() - 1);
    return dist_[idx].occupation;
}

std::vector<int> sample_pattern(const StateVector &s, const DetectorNetwork &net, Rng &rng) {
    return PatternSampler(s, net).sample(rng);
}

namespace {

std::vector<PatternProbability> pair_table(const ExperimentConfig &cfg, double phase) {
    const auto net = noon4_network();
    const double v = cfg.v2;
    const auto coherent = outcome_distribution(apply_phase(make_pdc_n(1), {phase}), net);
    const auto h2 = outcome_distribution(make_basis(2, 0), net);
    const auto v2 = outcome_distribution(make_basis(2, 2), net);
    const double incoherent = (1.0 - v) / 2.0;
    return mixture({{v, &coherent}, {incoherent, &h2}, {incoherent, &v2}});
}

std::vector<PatternProbability> quadruple_table(const ExperimentConfig &cfg, double phase) {
    const auto net = noon4_network();
    const double v = cfg.v2;
    const auto coherent = outcome_distribution(apply_phase(make_pdc4(), {phase}), net);
    const auto h4 = outcome_distribution(make_basis(4, 0), net);
    const auto v4 = outcome_distribution(make_basis(4, 4), net);
    const auto mixed22 = outcome_distribution(make_basis(4, 2), net);
    // Weights chosen so a quadruple's four-fold fringe has visibility
    // 9 v^2 / (12 - 4v + v^2) and mean (12 - 4v + v^2)/128.
    const double w_coherent = v * v;
    const double w_edges = std::max(0.0, 1.0 - v / 3.0 - 2.0 * v * v / 3.0);
    const double w_middle = std::max(0.0, v * (1.0 - v) / 3.0);
    return mixture({{w_coherent, &coherent},
                    {w_edges / 2.0, &h4},
                    {w_edges / 2.0, &v4},
                    {w_middle, &mixed22}});
}

std::vector<double> pair_number_distribution(double mean, double ea_ratio) {
    std::vector<double> p{0.0};
    double poisson = std::exp(-mean);
    double tail = 0.0;
    for (int k = 1; k <= kMaxPairs; ++k) {
        poisson *= mean / k;
        double pk = poisson;
        if (k == 2) {
            pk *= 1.0 + ea_ratio;
        }
        if (k > 2 && pk < kNegligiblePairProb) {
            break;
        }
        p.push_back(pk);
        tail += pk;
    }
    while (p.size() < 3) {
        p.push_back(0.0);
    }
    p[0] = std::max(0.0, 1.0 - tail);
    return p;
}

}  // namespace

PulseModel::PulseModel(const ExperimentConfig &cfg, double phase)
    : efficiency_(cfg.det_efficiency),
      dark_(cfg.dark_prob),
      pair_probs_(pair_number_distribution(cfg.pair_prob, cfg.ea_ratio)),
      quad_share_(2.0 * cfg.ea_ratio / (1.0 + cfg.ea_ratio)),
      pair_(pair_table(cfg, phase)),
      quad_(quadruple_table(cfg, phase)) {
    const double p0 = pair_probs_[0];
    active_ = 1.0 - p0 * std::pow(1.0 - dark_, static_cast<double>(kDetectors));
    double acc = 0.0;
    pair_cumulative_.assign(pair_probs_.size(), 0.0);
    for (std::size_t k = 1; k < pair_probs_.size(); ++k) {
        acc += pair_probs_[k];
        pair_cumulative_[k] = acc;
    }
    if (acc > 0.0) {
        for (auto &c : pair_cumulative_) {
            c /= acc;
        }
        pair_cumulative_.back() = 1.0;
    }
    compute_click_distribution();
}

void PulseModel::compute_click_distribution() {
    clicks_.fill(0.0);
    const Occupation empty(kDetectors, 0);
    accumulate_clicks(clicks_, pair_probs_[0], empty, efficiency_, dark_);
    for (const auto &p : pair_.distribution()) {
        accumulate_clicks(clicks_, pair_probs_[1] * p.probability, p.occupation, efficiency_,
                          dark_);
    }
    if (pair_probs_[2] > 0.0) {
        const auto two_pairs = convolve(pair_.distribution(), pair_.distribution());
        for (const auto &p : two_pairs) {
            accumulate_clicks(clicks_, pair_probs_[2] * (1.0 - quad_share_) * p.probability,
                              p.occupation, efficiency_, dark_);
        }
        for (const auto &p : quad_.distribution()) {
            accumulate_clicks(clicks_, pair_probs_[2] * quad_share_ * p.probability,
                              p.occupation, efficiency_, dark_);
        }
    }
    if (pair_probs_.size() <= 3) {
        return;
    }
    // k >= 3 independent pairs. silent[S] = P(no photon of one pair detected
    // in detector set S); the probability that exactly the complement of S
    // clicks follows by inclusion-exclusion over supersets of S.
    std::array<double, 16> silent_one_pair{};
    for (unsigned s = 0; s < 16; ++s) {
        for (const auto &p : pair_.distribution()) {
            int in_s = 0;
            for (std::size_t j = 0; j < kDetectors; ++j) {
                if ((s >> j) & 1U) {
                    in_s += p.occupation[j];
                }
            }
            silent_one_pair[s] += p.probability * std::pow(1.0 - efficiency_, in_s);
        }
    }
    for (std::size_t k = 3; k < pair_probs_.size(); ++k) {
        std::array<double, 16> silent_at_least{};
        for (unsigned s = 0; s < 16; ++s) {
            const int size = std::popcount(s);
            silent_at_least[s] = std::pow(silent_one_pair[s], static_cast<double>(k)) *
                                 std::pow(1.0 - dark_, size);
        }
        for (unsigned s = 0; s < 16; ++s) {
            double exact = 0.0;
            for (unsigned u = s; u < 16; u = (u + 1) | s) {
                const int extra = std::popcount(u) - std::popcount(s);
                exact += (extra % 2 == 0 ? 1.0 : -1.0) * silent_at_least[u];
            }
            clicks_[kAllClicks & ~s] += pair_probs_[k] * std::max(0.0, exact);
        }
    }
}

PulseOutcome PulseModel::emit(int pairs, Rng &rng) const {
    PulseOutcome out;
    out.pairs = pairs;
    out.emitted = 2 * pairs;
    if (pairs == 2 && quad_share_ > 0.0 &&
        std::uniform_real_distribution<double>(0.0, 1.0)(rng) < quad_share_) {
        const auto &occ = quad_.sample(rng);
        for (std::size_t j = 0; j < kDetectors; ++j) {
            out.arrived[j] += occ[j];
        }
        return out;
    }
    for (int i = 0; i < pairs; ++i) {
        const auto &occ = pair_.sample(rng);
        for (std::size_t j = 0; j < kDetectors; ++j) {
            out.arrived[j] += occ[j];
        }
    }
    return out;
}

void PulseModel::detect(PulseOutcome &out, Rng &rng) const {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::size_t j = 0; j < kDetectors; ++j) {
        int detected = out.arrived[j];
        if (efficiency_ < 1.0 && detected > 0) {
            detected = std::binomial_distribution<int>(detected, efficiency_)(rng);
        }
        out.detected[j] = detected;
        const bool dark = dark_ > 0.0 && uniform(rng) < dark_;
        if (detected > 0 || dark) {
            out.clicks |= 1U << j;
        }
    }
}

PulseOutcome PulseModel::fire(Rng &rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    int pairs = 0;
    double acc = pair_probs_[0];
    while (u >= acc && pairs + 1 < static_cast<int>(pair_probs_.size())) {
        ++pairs;
        acc += pair_probs_[static_cast<std::size_t>(pairs)];
    }
    PulseOutcome out = emit(pairs, rng);
    detect(out, rng);
    return out;
}

PulseOutcome PulseModel::fire_active(Rng &rng) const {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double p0 = pair_probs_[0];
    const double quiet = std::pow(1.0 - dark_, static_cast<double>(kDetectors));
    const double dark_only = p0 * (1.0 - quiet);
    if (uniform(rng) * active_ < dark_only) {
        // At least one dark count: pick the first firing detector, then the
        // later ones independently.
        PulseOutcome out;
        const double v = uniform(rng) * (1.0 - quiet);
        double acc = 0.0;
        std::size_t first = kDetectors - 1;
        for (std::size_t j = 0; j < kDetectors; ++j) {
            acc += std::pow(1.0 - dark_, static_cast<double>(j)) * dark_;
            if (v < acc) {
                first = j;
                break;
            }
        }
        out.clicks = 1U << first;
        for (std::size_t j = first + 1; j < kDetectors; ++j) {
            if (uniform(rng) < dark_) {
                out.clicks |= 1U << j;
            }
        }
        return out;
    }
    const double u = uniform(rng);
    const auto it = std::upper_bound(pair_cumulative_.begin() + 1, pair_cumulative_.end(), u);
    const int pairs = static_cast<int>(
        std::min<std::ptrdiff_t>(it - pair_cumulative_.begin(),
                                 static_cast<std::ptrdiff_t>(pair_cumulative_.size()) - 1));
    PulseOutcome out = emit(std::max(pairs, 1), rng);
    detect(out, rng);
    return out;
}

void tally_clicks(CountRecord &record, unsigned clicks, std::uint64_t times) {
    if (times == 0 || clicks == 0) {
        return;
    }
    for (std::size_t j = 0; j < kDetectors; ++j) {
        if ((clicks >> j) & 1U) {
            record.counts[static_cast<std::size_t>(Channel::kSingleA) + j] += times;
        }
    }
    for (std::size_t c = 0; c < kNumPairChannels; ++c) {
        const auto [first, second] = kPairDetectors[c];
        if (((clicks >> first) & 1U) && ((clicks >> second) & 1U)) {
            record.counts[c] += times;
        }
    }
    if (clicks == kAllClicks) {
        record[Channel::kFourfold] += times;
    }
}

CountRecord simulate_point(const ExperimentConfig &cfg, std::size_t index) {
    Rng rng = make_stream(cfg.seed, index);
    const PulseModel model(cfg, cfg.phases.at(index));
    CountRecord record;
    record.phase = cfg.phases[index];
    record.duration = cfg.duration();

    if (cfg.method == SimulationMethod::kAggregated) {
        // Sequential-binomial multinomial over click masks 15..1; mask 0
        // takes the remainder.
        const auto &p = model.click_distribution();
        double remaining_mass = 0.0;
        for (const double q : p) {
            remaining_mass += q;
        }
        std::uint64_t remaining = cfg.pulses_per_point;
        for (unsigned mask = 15; mask >= 1 && remaining > 0; --mask) {
            const double conditional = remaining_mass > 0.0 ? p[mask] / remaining_mass : 0.0;
            const std::uint64_t n = draw_binomial(rng, remaining, conditional);
            tally_clicks(record, mask, n);
            remaining -= n;
            remaining_mass -= p[mask];
        }
        return record;
    }

    const std::uint64_t active = draw_binomial(rng, cfg.pulses_per_point, model.active_probability());
    for (std::uint64_t i = 0; i < active; ++i) {
        tally_clicks(record, model.fire_active(rng).clicks);
    }
    return record;
}

CountDataset simulate_counts(const ExperimentConfig &cfg) {
    cfg.validate();
    CountDataset ds;
    ds.points.resize(cfg.phases.size());
    const auto count = static_cast<std::ptrdiff_t>(cfg.phases.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            ds.points[static_cast<std::size_t>(i)] =
                simulate_point(cfg, static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(noonlab_simulate_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return ds;
}

CountDataset simulate_counts_serial(const ExperimentConfig &cfg) {
    cfg.validate();
    CountDataset ds;
    ds.points.reserve(cfg.phases.size());
    for (std::size_t i = 0; i < cfg.phases.size(); ++i) {
        ds.points.push_back(simulate_point(cfg, i));
    }
    return ds;
}

double expected_fourfold_per_pulse(const ExperimentConfig &cfg) {
    constexpr int kSamples = 128;
    double acc = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double phi = std::numbers::pi * i / kSamples;
        acc += PulseModel(cfg, phi).click_distribution()[kAllClicks];
    }
    return acc / kSamples;
}

std::uint64_t pulses_for_fourfold_level(const ExperimentConfig &cfg, double target_counts) {
    if (!(target_counts > 0.0)) {
        throw ValidationError("pulses_for_fourfold_level: target must be positive");
    }
    const double per_pulse = expected_fourfold_per_pulse(cfg);
    if (!(per_pulse > 0.0)) {
        throw ValidationError("pulses_for_fourfold_level: configuration yields no four-folds");
    }
    return static_cast<std::uint64_t>(std::ceil(target_counts / per_pulse));
}

std::vector<AccidentalPoint> derive_accidental_dataset(const CorrectedDataset &ds,
                                                       double rep_rate) {
    if (!(rep_rate > 0.0)) {
        throw ValidationError("derive_accidental_dataset: rep_rate must be positive");
    }
    std::vector<AccidentalPoint> out;
    out.reserve(ds.points.size());
    for (const auto &p : ds.points) {
        if (!(p.duration > 0.0)) {
            throw ValidationError("derive_accidental_dataset: point at phase " +
                                  std::to_string(p.phase) + " has nonpositive duration");
        }
        std::array<double, kNumPairChannels> rate{};
        std::array<double, kNumPairChannels> sigma{};
        for (std::size_t c = 0; c < kNumPairChannels; ++c) {
            rate[c] = p.values[c] / p.duration;
            sigma[c] = p.sigmas[c] / p.duration;
        }
        // Pairings (AB, CD), (AC, BD), (AD, CB) are channel indices
        // (0, 1), (2, 3), (4, 5).
        double r4 = 0.0;
        double var = 0.0;
        for (std::size_t c = 0; c < kNumPairChannels; c += 2) {
            r4 += rate[c] * rate[c + 1];
            var += std::pow(rate[c + 1] * sigma[c], 2) + std::pow(rate[c] * sigma[c + 1], 2);
        }
        out.push_back({p.phase, p.duration, r4 / rep_rate, std::sqrt(var) / rep_rate});
    }
    return out;
}

std::vector<AccidentalPoint> derive_accidental_dataset(const CountDataset &ds, double rep_rate) {
    return derive_accidental_dataset(to_corrected(ds), rep_rate);
}

std::vector<FringePoint> accidental_series(std::span<const AccidentalPoint> points) {
    std::vector<FringePoint> out;
    out.reserve(points.size());
    for (const auto &p : points) {
        FringePoint pt{p.phase, p.rate * p.duration, std::nullopt};
        if (p.sigma_rate > 0.0) {
            pt.sigma = p.sigma_rate * p.duration;
        }
        out.push_back(pt);
    }
    return out;
}

}  // namespace noonlab
