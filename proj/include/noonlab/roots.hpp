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

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace noonlab {

struct PolynomialRoots {
    std::vector<std::complex<double>> roots;
    /// Roots near another root, or with a Newton correction above tol
    /// (multiple roots, located only to about eps^(1/m)).
    int clustered = 0;
    int aberth_iterations = 0;
    bool converged = false;
};

/**
 * Roots of c[0] + c[1] t + ... + c[d] t^d.
 *
 * Companion-matrix eigenvalues seed a simultaneous Aberth-Ehrlich iteration,
 * which runs until every correction is below tol relative to the root size.
 * The refined roots replace the seeds only if prod (t - z_j) matches the
 * monic coefficients at least as well. converged means that match is within
 * tol of the largest coefficient. Clustered roots are still returned; the
 * count is reported. The leading coefficient must be nonzero and d >= 1.
 */
PolynomialRoots find_roots(std::span<const std::complex<double>> coeffs, double tol = 1e-10);

}  // namespace noonlab
