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
 * @file vismodel.hpp
 * Four-photon visibility as a function of pair distinguishability, its
 * inversion, and the accidental four-fold rate built from pair rates.
 *
 * Notation: a_acc is the two-pair accidental weight, e_ovl (<= a_acc) the
 * overlap weight between the two pairs, v2 the two-photon visibility.
 */
#pragma once

#include "noonlab/error.hpp"

namespace noonlab {

struct OverlapParams {
    double a_acc = 1.0;
    double e_ovl = 0.0;
    double v2 = 1.0;

    /// Builds params with a_acc = 1 and e_ovl = ratio.
    static OverlapParams from_ratio(double ratio, double v2);
    /// Throws ValidationError unless 0 <= e_ovl <= a_acc, a_acc > 0, v2 in [0, 1].
    void validate() const;
    [[nodiscard]] double ratio() const { return e_ovl / a_acc; }
};

/// Two-photon coincidence rates (counts/s) and the pump repetition rate (Hz).
struct PairRates {
    double r_ab = 0.0;
    double r_cd = 0.0;
    double r_ac = 0.0;
    double r_bd = 0.0;
    double r_ad = 0.0;
    double r_cb = 0.0;
    double rep_rate = 0.0;

    void validate() const;
};

/// A value with its one-sigma uncertainty.
struct Estimate {
    double value = 0.0;
    double sigma = 0.0;
};

/// V4 = 3(A + 2E) v2^2 / [(6 + v2^2) A + 2E(3 - 2 v2)].
double v4_of(const OverlapParams &params);

/// Closed-form V4 at E = 0 and E = A for the given v2.
double v4_lower_bound(double v2);
double v4_upper_bound(double v2);

/**
 * E/A from an observed four-photon visibility.
 *
 * Throws ValidationError when v4 lies outside [v4_lower_bound, v4_upper_bound]
 * (with a 1e-12 allowance), naming the violated bound.
 */
double ea_from_visibility(double v4, double v2);

/// First-order propagation of sigma_v4 and sigma_v2 through ea_from_visibility.
Estimate ea_from_visibility(Estimate v4, Estimate v2);

/// (R_AB R_CD + R_AC R_BD + R_AD R_CB) / R.
double accidental_fourfold(const PairRates &rates);

/**
 * E/A from the measured four-fold rate and the accidental rate:
 * R4 = R4_acc (1 + 2E/A).
 *
 * Throws ValidationError when r4_accidental <= 0 and ModelInconsistency when
 * the measured rate is below the accidental rate.
 */
double ea_from_rates(double r4_measured, double r4_accidental);

/// First-order propagation of both rate uncertainties.
Estimate ea_from_rates(Estimate r4_measured, Estimate r4_accidental);

/// 1 - v4_of(params) cos(4 phi).
double fringe_model(const OverlapParams &params, double phi);

class ModelInconsistency : public ValidationError {
   public:
    ModelInconsistency(double r4_measured, double r4_accidental);
    [[nodiscard]] double r4_measured() const { return measured_; }
    [[nodiscard]] double r4_accidental() const { return accidental_; }

   private:
    double measured_;
    double accidental_;
};

}  // namespace noonlab
