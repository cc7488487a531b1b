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
 * @file metrology.hpp
 * Phase estimation with projection onto NOON states: success probability,
 * the phase uncertainty sqrt((2 - P) / P) / N, the smallest phase shift that
 * makes a state orthogonal to itself, and power-law fits over sweeps.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noonlab/error.hpp"
#include "noonlab/fock.hpp"

namespace noonlab {

struct PhasePlan {
    int n_photons = 0;
    /// Projection success probability, in (0, 1].
    double p_success = 0.0;
    /// Smallest phase shift giving an orthogonal state.
    double phi_orth = 0.0;
    double dphi = 0.0;
};

/**
 * |<target|probe>|^2, or its maximum over a phase shift applied to probe.
 *
 * The optimized objective is a trigonometric polynomial of degree N; it is
 * scanned at 4N+1 phases and the best local maxima are refined by Brent.
 */
double projection_success(const StateVector &target, const StateVector &probe,
                          bool optimize_phase);

/// sqrt((2 - p) / p) / n. Requires 0 < p <= 1 and n >= 1.
double phase_uncertainty(double p_success, int n_photons);

/// f(phi) = <s|s(phi)> = sum_k |s_k|^2 exp(i k phi).
Complex self_overlap(const StateVector &s, double phi);

/// |f| at phi_start + j * step for j = 0..count-1. OpenMP-parallel.
std::vector<double> self_overlap_grid(const StateVector &s, double phi_start, double step,
                                      std::size_t count);
/// Serial reference for self_overlap_grid; results are bit-identical.
std::vector<double> self_overlap_grid_serial(const StateVector &s, double phi_start,
                                             double step, std::size_t count);

/// No phase in (0, 2pi] makes the state orthogonal to itself.
class OrthogonalPhaseNotFound : public NumericalError {
   public:
    explicit OrthogonalPhaseNotFound(double min_abs_overlap);
    /// Smallest |f| seen on the scan grid.
    [[nodiscard]] double min_abs_overlap() const { return min_abs_overlap_; }

   private:
    double min_abs_overlap_;
};

/**
 * Smallest phi > 0 with |f(phi)| < 1e-10.
 *
 * |f| is scanned on a grid of 10^4 N points over (0, 2pi], in chunks so the
 * scan stops at the first zero; grid minima are refined by Brent on |f|^2
 * and polished by Newton steps on f.
 */
double orthogonal_phase(const StateVector &s);

struct ScalingPoint {
    double n = 0.0;
    double dphi = 0.0;
};

/// Least-squares slope of log(dphi) against log(n). At least 3 points.
double scaling_exponent(std::span<const ScalingPoint> points);

enum class StateFamily { kNoon, kPdc };

/// Parses "noon" or "pdc".
StateFamily family_from_name(const std::string &name);

struct MetrologyRow {
    /// Family parameter: photon number for NOON, pair count for PDC.
    int n = 0;
    PhasePlan plan;
    /// phi_orth * n_photons / pi.
    double phi_const_photons = 0.0;
    /// phi_orth * n / pi.
    double phi_const_family = 0.0;
};

struct MetrologySweep {
    StateFamily family = StateFamily::kNoon;
    std::vector<MetrologyRow> rows;
    /// Slope of log dphi against log n.
    double exponent = 0.0;
};

/// Phase plan for one member of a family, projected onto the NOON state of
/// the same photon number with the phase optimized.
MetrologyRow metrology_row(StateFamily family, int n);

/// Rows for each n; the exponent needs at least 3 of them.
MetrologySweep metrology_sweep(StateFamily family, std::span<const int> ns);

}  // namespace noonlab
