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

#include "noonlab/roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "noonlab/error.hpp"

namespace noonlab {

namespace {

using Complex = std::complex<double>;

constexpr int kMaxAberthIterations = 100;

// p(z) and p'(z) by Horner.
std::pair<Complex, Complex> evaluate(std::span<const Complex> c, Complex z) {
    Complex p = c.back();
    Complex dp{0.0, 0.0};
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[i];
    }
    return {p, dp};
}

// Rounding level of p(z): a few ulp of sum |c_j| |z|^j.
double rounding_floor(std::span<const Complex> c, Complex z) {
    const double r = std::abs(z);
    double acc = std::abs(c.back());
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        acc = acc * r + std::abs(c[i]);
    }
    return 16.0 * std::numeric_limits<double>::epsilon() * acc;
}

// Largest coefficient error of prod (t - z_j) against the monic input,
// relative to its largest coefficient.
double backward_error(std::span<const Complex> c, std::span<const Complex> z) {
    std::vector<Complex> prod{1.0};
    for (const Complex r : z) {
        std::vector<Complex> next(prod.size() + 1);
        for (std::size_t i = 0; i < prod.size(); ++i) {
            next[i + 1] += prod[i];
            next[i] -= r * prod[i];
        }
        prod = std::move(next);
    }
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Complex monic = c[i] / c.back();
        err = std::max(err, std::abs(prod[i] - monic));
        scale = std::max(scale, std::abs(monic));
    }
    return err / scale;
}

std::vector<Complex> companion_eigenvalues(std::span<const Complex> c) {
    const auto d = static_cast<Eigen::Index>(c.size() - 1);
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i) {
        companion(i, i - 1) = 1.0;
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        companion(i, d - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("find_roots: companion eigenvalue solver did not converge");
    }
    const auto &ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

PolynomialRoots find_roots(std::span<const Complex> coeffs, double tol) {
    if (coeffs.size() < 2) {
        throw ValidationError("find_roots: polynomial degree must be >= 1");
    }
    if (coeffs.back() == Complex{0.0, 0.0}) {
        throw ValidationError("find_roots: leading coefficient is zero");
    }
    PolynomialRoots out;
    out.roots = companion_eigenvalues(coeffs);
    const std::vector<Complex> seeds = out.roots;
    auto &z = out.roots;
    const std::size_t d = z.size();

    // Roots closer than this are treated as one cluster: Aberth's repulsion
    // term is unreliable there, so those roots keep their eigenvalue seeds.
    const double cluster_radius = 1e-6;
    std::vector<bool> clustered(d, false);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (i != j && std::abs(z[i] - z[j]) < cluster_radius * (1.0 + std::abs(z[i]))) {
                clustered[i] = true;
            }
        }
    }
    out.clustered = static_cast<int>(std::count(clustered.begin(), clustered.end(), true));

    for (int iter = 0; iter < kMaxAberthIterations; ++iter) {
        double worst = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            if (clustered[i]) {
                continue;
            }
            const auto [p, dp] = evaluate(coeffs, z[i]);
            if (std::abs(p) <= rounding_floor(coeffs, z[i])) {
                continue;
            }
            if (dp == Complex{0.0, 0.0}) {
                clustered[i] = true;
                continue;
            }
            const Complex ratio = p / dp;
            Complex repulsion{0.0, 0.0};
            for (std::size_t j = 0; j < d; ++j) {
                if (j != i) {
                    repulsion += 1.0 / (z[i] - z[j]);
                }
            }
            const Complex step = ratio / (1.0 - ratio * repulsion);
            z[i] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[i])));
        }
        out.aberth_iterations = iter + 1;
        if (worst < tol * 1e-3) {
            out.converged = true;
            break;
        }
    }
    // Near a multiple root Aberth steps can scatter the cluster; the
    // eigenvalue seeds are then the better factorization.
    const double refined_error = backward_error(coeffs, z);
    const double seed_error = backward_error(coeffs, seeds);
    if (seed_error < refined_error) {
        z = seeds;
    }
    const double error = std::min(seed_error, refined_error);
    // Roots whose Newton correction stays above tol are only located to
    // about eps^(1/m) for multiplicity m.
    for (std::size_t i = 0; i < d; ++i) {
        if (clustered[i]) {
            continue;
        }
        const auto [p, dp] = evaluate(coeffs, z[i]);
        const bool small_step = p == Complex{0.0, 0.0} ||
                                (dp != Complex{0.0, 0.0} &&
                                 std::abs(p / dp) / (1.0 + std::abs(z[i])) < tol);
        clustered[i] = !small_step;
    }
    out.converged = error < tol;
    out.clustered = static_cast<int>(std::count(clustered.begin(), clustered.end(), true));
    return out;
}

}  // namespace noonlab
