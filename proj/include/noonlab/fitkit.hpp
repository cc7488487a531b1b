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
 * @file fitkit.hpp
 * Weighted least-squares fits of bg + n0 (1 - vis cos(k phi + theta)) and
 * background subtraction of count datasets.
 */
#pragma once

#include <optional>
#include <span>

#include "noonlab/dataset.hpp"
#include "noonlab/error.hpp"

namespace noonlab {

struct FitOptions {
    /// Harmonic k of the fringe.
    int harmonic = 4;
    /// Holds theta at this value instead of fitting it.
    std::optional<double> fix_theta;
    /// Residual background, held fixed (it is not separable from n0 and vis).
    double background = 0.0;
    int max_iterations = 200;
};

struct FringeFit {
    double n0 = 0.0;
    double vis = 0.0;
    /// In [0, 2pi).
    double theta = 0.0;
    double bg = 0.0;
    int harmonic = 0;
    double sigma_n0 = 0.0;
    double sigma_vis = 0.0;
    double sigma_theta = 0.0;
    double residual_rms = 0.0;
    double chi2 = 0.0;
    int dof = 0;
    int iterations = 0;
    /// vis outside [0, 1]; only possible with a fixed theta.
    bool vis_out_of_range = false;
    /// No modulation in the data, so theta is unidentifiable (reported as 0).
    bool degenerate = false;

    /// Model value at phi.
    [[nodiscard]] double operator()(double phi) const;
};

/// Thrown when Levenberg-Marquardt does not converge; carries the best fit seen.
class FitDidNotConverge : public NumericalError {
   public:
    explicit FitDidNotConverge(FringeFit best);
    [[nodiscard]] const FringeFit &best() const { return best_; }

   private:
    FringeFit best_;
};

/**
 * Fits bg + n0 (1 - vis cos(k phi + theta)) to the points.
 *
 * Weights are 1/sigma^2 where a point carries sigma and 1/max(value, 1)
 * otherwise. Seeded from the discrete Fourier component at harmonic k, then
 * refined by Levenberg-Marquardt; the parameter covariance is the inverse of
 * J^T W J. With theta free, vis is reported nonnegative.
 *
 * Needs at least 4 distinct phases spanning pi/k or more (half a fringe
 * period); throws ValidationError otherwise.
 */
FringeFit fit_fringe(std::span<const FringePoint> points, const FitOptions &options);

/**
 * signal - background, per point and channel, with the background rescaled
 * to the signal's duration. Negative results are clamped to 0 and flagged.
 * Sigmas are the Poisson errors of both inputs added in quadrature, floored
 * at one count.
 *
 * Phase grids must agree to 1e-9 rad; throws ValidationError otherwise.
 */
CorrectedDataset subtract_background(const CountDataset &signal, const CountDataset &background);

}  // namespace noonlab
