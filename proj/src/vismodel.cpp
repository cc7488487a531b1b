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

#include "noonlab/vismodel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace noonlab {

namespace {

constexpr double kBoundAllowance = 1e-12;

std::string describe(double measured, double accidental) {
    std::ostringstream os;
    os.precision(17);
    os << "ea_from_rates: measured four-fold rate " << measured
       << " is below the accidental rate " << accidental << "; the overlap model does not apply";
    return os.str();
}

void require_v2(double v2) {
    if (!(v2 >= 0.0 && v2 <= 1.0)) {
        throw ValidationError("v2 must lie in [0, 1]");
    }
}

}  // namespace

ModelInconsistency::ModelInconsistency(double r4_measured, double r4_accidental)
    : ValidationError(describe(r4_measured, r4_accidental)),
      measured_(r4_measured),
      accidental_(r4_accidental) {}

OverlapParams OverlapParams::from_ratio(double ratio, double v2) {
    OverlapParams p{1.0, ratio, v2};
    p.validate();
    return p;
}

void OverlapParams::validate() const {
    if (!(a_acc > 0.0) || !std::isfinite(a_acc)) {
        throw ValidationError("OverlapParams: a_acc must be positive");
    }
    if (!(e_ovl >= 0.0 && e_ovl <= a_acc)) {
        throw ValidationError("OverlapParams: need 0 <= e_ovl <= a_acc");
    }
    require_v2(v2);
}

void PairRates::validate() const {
    if (!(rep_rate > 0.0) || !std::isfinite(rep_rate)) {
        throw ValidationError("PairRates: rep_rate must be positive");
    }
    for (const double r : {r_ab, r_cd, r_ac, r_bd, r_ad, r_cb}) {
        if (!(r >= 0.0) || !(r < rep_rate)) {
            throw ValidationError("PairRates: each pair rate must lie in [0, rep_rate)");
        }
    }
}

double v4_of(const OverlapParams &params) {
    params.validate();
    const double v2sq = params.v2 * params.v2;
    const double num = 3.0 * (params.a_acc + 2.0 * params.e_ovl) * v2sq;
    const double den =
        (6.0 + v2sq) * params.a_acc + 2.0 * params.e_ovl * (3.0 - 2.0 * params.v2);
    return num / den;
}

double v4_lower_bound(double v2) {
    require_v2(v2);
    const double v2sq = v2 * v2;
    return 3.0 * v2sq / (6.0 + v2sq);
}

double v4_upper_bound(double v2) {
    require_v2(v2);
    const double v2sq = v2 * v2;
    return 9.0 * v2sq / (12.0 - 4.0 * v2 + v2sq);
}

double ea_from_visibility(double v4, double v2) {
    if (!(v2 > 0.0 && v2 <= 1.0)) {
        throw ValidationError("ea_from_visibility: v2 must lie in (0, 1]");
    }
    const double lo = v4_lower_bound(v2);
    const double hi = v4_upper_bound(v2);
    if (!(v4 >= lo - kBoundAllowance)) {
        std::ostringstream os;
        os << "ea_from_visibility: v4 = " << v4 << " is below the lower bound " << lo
           << " (fully distinguishable pairs) for v2 = " << v2;
        throw ValidationError(os.str());
    }
    if (!(v4 <= hi + kBoundAllowance)) {
        std::ostringstream os;
        os << "ea_from_visibility: v4 = " << v4 << " exceeds the upper bound " << hi
           << " (fully overlapping pairs) for v2 = " << v2;
        throw ValidationError(os.str());
    }
    const double v2sq = v2 * v2;
    const double num = 3.0 * v2sq - v4 * (6.0 + v2sq);
    const double den = 2.0 * v4 * (3.0 - 2.0 * v2) - 6.0 * v2sq;
    const double r = num / den;
    // Only the allowance can push r out of [0, 1].
    return std::min(1.0, std::max(0.0, r));
}

Estimate ea_from_visibility(Estimate v4, Estimate v2) {
    const double r = ea_from_visibility(v4.value, v2.value);
    const double v = v2.value;
    const double vsq = v * v;
    const double num = 3.0 * vsq - v4.value * (6.0 + vsq);
    const double den = 2.0 * v4.value * (3.0 - 2.0 * v) - 6.0 * vsq;
    const double dnum_dv4 = -(6.0 + vsq);
    const double dden_dv4 = 2.0 * (3.0 - 2.0 * v);
    const double dnum_dv2 = 6.0 * v - 2.0 * v4.value * v;
    const double dden_dv2 = -4.0 * v4.value - 12.0 * v;
    const double dr_dv4 = (dnum_dv4 * den - num * dden_dv4) / (den * den);
    const double dr_dv2 = (dnum_dv2 * den - num * dden_dv2) / (den * den);
    return {r, std::hypot(dr_dv4 * v4.sigma, dr_dv2 * v2.sigma)};
}

double accidental_fourfold(const PairRates &rates) {
    rates.validate();
    return (rates.r_ab * rates.r_cd + rates.r_ac * rates.r_bd + rates.r_ad * rates.r_cb) /
           rates.rep_rate;
}

double ea_from_rates(double r4_measured, double r4_accidental) {
    if (!(r4_accidental > 0.0)) {
        throw ValidationError("ea_from_rates: accidental rate must be positive");
    }
    if (!(r4_measured >= r4_accidental)) {
        throw ModelInconsistency(r4_measured, r4_accidental);
    }
    return (r4_measured / r4_accidental - 1.0) / 2.0;
}

Estimate ea_from_rates(Estimate r4_measured, Estimate r4_accidental) {
    const double r = ea_from_rates(r4_measured.value, r4_accidental.value);
    const double d_measured = 0.5 / r4_accidental.value;
    const double d_accidental =
        -0.5 * r4_measured.value / (r4_accidental.value * r4_accidental.value);
    return {r, std::hypot(d_measured * r4_measured.sigma, d_accidental * r4_accidental.sigma)};
}

double fringe_model(const OverlapParams &params, double phi) {
    return 1.0 - v4_of(params) * std::cos(4.0 * phi);
}

}  // namespace noonlab
