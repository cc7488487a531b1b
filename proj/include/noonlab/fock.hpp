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
 * @file fock.hpp
 * Two-mode photon-number states |N-k, k> (H photons, V photons) and the exact
 * algebra used by every other module: construction, phase shifts, inner
 * products and vacuum overlaps with products of annihilation operators.
 *
 * Phase convention: a single-photon H-V phase difference phi multiplies the
 * amplitude of |N-k, k> by exp(i k phi), i.e. the V mode carries the phase.
 * Every module relies on this convention.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace noonlab {

using Complex = std::complex<double>;

/// Tolerance on sum |amps|^2 = 1 after construction.
inline constexpr double kNormTolerance = 1e-12;

/// Single-photon phase difference between H and V, in radians.
struct PhaseShift {
    double radians = 0.0;
};

/// Coefficients of alpha * a_H + beta * a_V.
struct ModeCoefficients {
    Complex alpha;
    Complex beta;
};

/**
 * Pure two-mode state with a fixed total photon number N.
 *
 * amps()[k] is the coefficient of |N-k, k>, so the vector has N+1 entries.
 * The constructor normalizes; the deviation of the squared norm from 1 seen
 * before normalizing is kept for diagnostics.
 */
class StateVector {
   public:
    /// Throws ValidationError for an empty or all-zero (or non-finite) vector.
    explicit StateVector(std::vector<Complex> amps);

    [[nodiscard]] std::size_t n_total() const { return amps_.size() - 1; }
    [[nodiscard]] std::span<const Complex> amps() const { return amps_; }
    [[nodiscard]] const Complex &operator[](std::size_t k) const { return amps_[k]; }
    [[nodiscard]] double norm_deviation() const { return norm_deviation_; }

   private:
    std::vector<Complex> amps_;
    double norm_deviation_ = 0.0;
};

/// (|n,0> + sign |0,n>)/sqrt(2). n >= 1, sign must be +1 or -1.
StateVector make_noon(int n, int sign);

/// Basis state |n_total - k, k>.
StateVector make_basis(int n_total, int k);

/// Four-photon part of the two-crystal down-conversion state:
/// sqrt(3/8)(|4,0> + |0,4>) + (1/2)|2,2>.
StateVector make_pdc4();

/**
 * n_pairs-pair down-conversion state over 2*n_pairs photons:
 * amps[2n] = sqrt((2N-2n)!(2n)!) / (2^N (N-n)! n!), odd entries zero.
 *
 * Exact integer arithmetic up to 10 pairs, log-gamma beyond.
 */
StateVector make_pdc_n(int n_pairs);

/// amps[k] -> amps[k] * exp(i k phi).
StateVector apply_phase(const StateVector &s, PhaseShift phi);

/// sum_k conj(a_k) b_k. Throws ValidationError when photon numbers differ.
Complex inner_product(const StateVector &a, const StateVector &b);

/**
 * Coefficients of the homogeneous polynomial prod_j (alpha_j x + beta_j y).
 * Entry k is the coefficient of x^(N-k) y^k with N = forms.size().
 */
std::vector<Complex> product_polynomial(std::span<const ModeCoefficients> forms);

/**
 * <0| prod_j (alpha_j a_H + beta_j a_V) |s>.
 *
 * Equal to sum_k s_k sqrt((N-k)! k!) C[k] with C the product polynomial.
 * Throws ValidationError unless forms.size() == s.n_total().
 */
Complex vacuum_overlap(std::span<const ModeCoefficients> forms, const StateVector &s);

/// sqrt(p! q!), accurate to a few ulp; overflows once p! q! exceeds about 1e616.
double sqrt_factorials(int p, int q);

namespace detail {
/// Squared PDC amplitudes for even indices, computed with exact integers.
/// Valid for n_pairs <= 10.
std::vector<double> pdc_weights_exact(int n_pairs);
/// Same quantity through lgamma.
std::vector<double> pdc_weights_log(int n_pairs);
}  // namespace detail

}  // namespace noonlab
