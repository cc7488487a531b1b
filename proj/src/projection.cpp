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

#include "noonlab/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "noonlab/error.hpp"
#include "noonlab/roots.hpp"

namespace noonlab {

namespace {

constexpr double kRootTolerance = 1e-10;
constexpr double kArgTieTolerance = 1e-9;
// End coefficients of the binary form below this fraction of the largest one
// are treated as zero (roots at 0 or at infinity).
constexpr double kVanishingCoefficient = 1e-13;

LinearForm phased(Complex alpha, Complex beta) {
    const double mag = std::abs(alpha);
    if (mag > 0.0) {
        const Complex unit = std::conj(alpha) / mag;
        return LinearForm(alpha * unit, beta * unit);
    }
    const Complex unit = std::conj(beta) / std::abs(beta);
    return LinearForm(alpha * unit, beta * unit);
}

// arg in (-pi, pi], with values within the tie tolerance of -pi folded to pi.
double canonical_arg(Complex t) {
    const double a = std::arg(t);
    return a <= -std::numbers::pi + kArgTieTolerance ? std::numbers::pi : a;
}

struct RootedForm {
    std::optional<Complex> root;
    LinearForm form;
};

bool root_order(const RootedForm &lhs, const RootedForm &rhs) {
    if (!lhs.root || !rhs.root) {
        return lhs.root.has_value() && !rhs.root.has_value();
    }
    const double la = std::abs(*lhs.root) == 0.0 ? 0.0 : canonical_arg(*lhs.root);
    const double ra = std::abs(*rhs.root) == 0.0 ? 0.0 : canonical_arg(*rhs.root);
    if (std::abs(la - ra) > kArgTieTolerance) {
        return la < ra;
    }
    return std::abs(*lhs.root) < std::abs(*rhs.root);
}

}  // namespace

LinearForm::LinearForm(Complex alpha, Complex beta) {
    const double norm2 = std::norm(alpha) + std::norm(beta);
    if (norm2 == 0.0 || !std::isfinite(norm2)) {
        throw ValidationError("LinearForm: coefficients must be finite and not both zero");
    }
    const double scale = std::sqrt(0.5 / norm2);
    coeffs_ = {alpha * scale, beta * scale};
}

DetectorNetwork::DetectorNetwork(std::vector<LinearForm> forms, std::string label)
    : forms_(std::move(forms)), label_(std::move(label)) {
    if (forms_.empty()) {
        throw ValidationError("DetectorNetwork: needs at least one detector");
    }
}

std::vector<ModeCoefficients> DetectorNetwork::coefficients() const {
    std::vector<ModeCoefficients> out;
    out.reserve(forms_.size());
    for (const auto &f : forms_) {
        out.push_back(f.coeffs());
    }
    return out;
}

IsometryReport check_isometry(const DetectorNetwork &net, double tol) {
    IsometryReport r;
    for (const auto &f : net.forms()) {
        r.alpha_norm += std::norm(f.alpha());
        r.beta_norm += std::norm(f.beta());
        r.cross += f.alpha() * std::conj(f.beta());
    }
    r.isometric = std::abs(r.alpha_norm - 1.0) <= tol && std::abs(r.beta_norm - 1.0) <= tol &&
                  std::abs(r.cross) <= tol;
    const double scale = std::max(r.alpha_norm, r.beta_norm);
    r.isometric_up_to_scale =
        std::abs(r.alpha_norm - r.beta_norm) <= tol * scale && std::abs(r.cross) <= tol * scale;
    return r;
}

DetectorNetwork noon4_network() {
    using namespace std::complex_literals;
    return DetectorNetwork({LinearForm(1.0, -1.0), LinearForm(1.0, 1.0), LinearForm(1.0, -1.0i),
                            LinearForm(1.0, 1.0i)},
                           "noon4");
}

SynthesisResult synthesize_network(const StateVector &target) {
    const int n = static_cast<int>(target.n_total());
    if (n < 1) {
        throw ValidationError("synthesize_network: target must have at least one photon");
    }
    std::vector<Complex> f(static_cast<std::size_t>(n) + 1);
    double largest = 0.0;
    for (int k = 0; k <= n; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        f[idx] = std::conj(target[idx]) / sqrt_factorials(n - k, k);
        largest = std::max(largest, std::abs(f[idx]));
    }
    const double cutoff = kVanishingCoefficient * largest;
    std::size_t low = 0;
    while (std::abs(f[low]) <= cutoff) {
        ++low;
    }
    std::size_t high = f.size() - 1;
    while (std::abs(f[high]) <= cutoff) {
        --high;
    }

    std::vector<RootedForm> rooted;
    rooted.reserve(f.size() - 1);
    for (std::size_t i = 0; i < low; ++i) {
        rooted.push_back({Complex{0.0, 0.0}, LinearForm(0.0, 1.0)});
    }
    for (std::size_t i = high; i + 1 < f.size(); ++i) {
        rooted.push_back({std::nullopt, LinearForm(1.0, 0.0)});
    }
    int clustered = 0;
    if (high > low) {
        const std::span<const Complex> middle(f.data() + low, high - low + 1);
        const auto found = find_roots(middle, kRootTolerance);
        if (!found.converged) {
            throw NumericalError("synthesize_network: root refinement did not converge");
        }
        clustered = found.clustered;
        for (const auto &t : found.roots) {
            rooted.push_back({t, phased(-t, 1.0)});
        }
    }
    std::stable_sort(rooted.begin(), rooted.end(), root_order);

    std::vector<LinearForm> forms;
    std::vector<std::optional<Complex>> roots;
    for (auto &r : rooted) {
        forms.push_back(r.form);
        roots.push_back(r.root);
    }
    DetectorNetwork net(std::move(forms), "synthesized-" + std::to_string(n));
    const auto coeffs = net.coefficients();
    const Complex kappa = vacuum_overlap(coeffs, target);
    if (kappa == Complex{0.0, 0.0}) {
        throw NumericalError("synthesize_network: proportionality constant vanished");
    }
    auto iso = check_isometry(net);
    return {std::move(net), kappa, std::move(roots), iso, clustered};
}

double nfold_coincidence_prob(const DetectorNetwork &net, const StateVector &s) {
    if (net.size() != s.n_total()) {
        throw ValidationError("nfold_coincidence_prob: " + std::to_string(net.size()) +
                              " detectors for a " + std::to_string(s.n_total()) +
                              "-photon state");
    }
    return std::norm(vacuum_overlap(net.coefficients(), s));
}

double pairwise_coincidence_prob(const LinearForm &first, const LinearForm &second,
                                 const StateVector &s2) {
    if (s2.n_total() != 2) {
        throw ValidationError("pairwise_coincidence_prob: state has " +
                              std::to_string(s2.n_total()) + " photons, expected 2");
    }
    const ModeCoefficients pair[] = {first.coeffs(), second.coeffs()};
    return std::norm(vacuum_overlap(pair, s2));
}

std::vector<double> nfold_sweep(const DetectorNetwork &net, const StateVector &s,
                                std::span<const double> phases) {
    if (net.size() != s.n_total()) {
        throw ValidationError("nfold_sweep: network size does not match photon number");
    }
    const auto coeffs = net.coefficients();
    std::vector<double> out(phases.size());
    const auto count = static_cast<std::ptrdiff_t>(phases.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        out[idx] = std::norm(vacuum_overlap(coeffs, apply_phase(s, {phases[idx]})));
    }
    return out;
}

std::vector<double> nfold_sweep_serial(const DetectorNetwork &net, const StateVector &s,
                                       std::span<const double> phases) {
    std::vector<double> out;
    out.reserve(phases.size());
    for (const double phi : phases) {
        out.push_back(nfold_coincidence_prob(net, apply_phase(s, {phi})));
    }
    return out;
}

}  // namespace noonlab
