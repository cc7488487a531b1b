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
 * @file projection.hpp
 * Detector networks for N-fold state projection. Detector j sees
 * b_j = alpha_j a_H + beta_j a_V (vacuum-port terms never produce clicks and
 * are dropped), and the N-fold coincidence probability of a network on |s> is
 * |<0| prod_j b_j |s>|^2.
 */
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noonlab/fock.hpp"

namespace noonlab {

/// One detector's mode coefficients, scaled to |alpha|^2 + |beta|^2 = 1/2.
class LinearForm {
   public:
    /// Rescales (alpha, beta); throws ValidationError for (0, 0).
    LinearForm(Complex alpha, Complex beta);

    [[nodiscard]] Complex alpha() const { return coeffs_.alpha; }
    [[nodiscard]] Complex beta() const { return coeffs_.beta; }
    [[nodiscard]] const ModeCoefficients &coeffs() const { return coeffs_; }

   private:
    ModeCoefficients coeffs_;
};

/// Ordered list of detectors; at least one.
class DetectorNetwork {
   public:
    DetectorNetwork(std::vector<LinearForm> forms, std::string label);

    [[nodiscard]] std::size_t size() const { return forms_.size(); }
    [[nodiscard]] std::span<const LinearForm> forms() const { return forms_; }
    [[nodiscard]] const LinearForm &operator[](std::size_t j) const { return forms_[j]; }
    [[nodiscard]] const std::string &label() const { return label_; }
    [[nodiscard]] std::vector<ModeCoefficients> coefficients() const;

   private:
    std::vector<LinearForm> forms_;
    std::string label_;
};

/// Detector indices of the four-detector NOON network.
enum Detector : std::size_t { kA = 0, kB = 1, kC = 2, kD = 3 };

/**
 * Column norms and cross term of the 2-column coefficient matrix.
 * A lossless network needs sum|alpha|^2 = sum|beta|^2 = 1 and
 * sum alpha conj(beta) = 0.
 */
struct IsometryReport {
    double alpha_norm = 0.0;
    double beta_norm = 0.0;
    Complex cross{0.0, 0.0};
    bool isometric = false;
    /// Columns orthogonal and of equal norm, so a uniform rescale fixes it.
    bool isometric_up_to_scale = false;
};

IsometryReport check_isometry(const DetectorNetwork &net, double tol = 1e-9);

/// A = (H - V)/2, B = (H + V)/2, C = (H - iV)/2, D = (H + iV)/2.
DetectorNetwork noon4_network();

struct SynthesisResult {
    DetectorNetwork network;
    /// vacuum_overlap(network, s) = kappa * inner_product(target, s).
    Complex kappa;
    /// Zero of each form in t = y/x; nullopt for a pure-H form (zero at infinity).
    std::vector<std::optional<Complex>> roots;
    IsometryReport isometry;
    int clustered_roots = 0;
};

/**
 * Detector network projecting onto an arbitrary N-photon target.
 *
 * The binary form F(x, y) = sum_k conj(c_k) x^(N-k) y^k / sqrt((N-k)! k!)
 * is split into N linear factors. Each factor's zero t = y/x comes from the
 * companion matrix of F(1, t) with Aberth refinement; y^m and x^m factors from
 * vanishing end coefficients give pure V and pure H detectors. Forms are
 * phased so alpha is real and nonnegative, and ordered by arg(t) then |t|
 * with pure-H detectors last.
 */
SynthesisResult synthesize_network(const StateVector &target);

/// |<0| prod_j b_j |s>|^2. Network size must equal s.n_total().
double nfold_coincidence_prob(const DetectorNetwork &net, const StateVector &s);

/// Same quantity for a detector pair on a two-photon state.
double pairwise_coincidence_prob(const LinearForm &first, const LinearForm &second,
                                 const StateVector &s2);

/// nfold_coincidence_prob(net, apply_phase(s, phi)) for every phase. OpenMP.
std::vector<double> nfold_sweep(const DetectorNetwork &net, const StateVector &s,
                                std::span<const double> phases);
/// Serial reference for nfold_sweep.
std::vector<double> nfold_sweep_serial(const DetectorNetwork &net, const StateVector &s,
                                       std::span<const double> phases);

}  // namespace noonlab
