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

#include <algorithm>
#include <random>

#include "gtest/gtest.h"
#include "noonlab/error.hpp"

using namespace noonlab;
using C = std::complex<double>;

namespace {

// Ascending coefficients of prod (t - r_j).
std::vector<C> from_roots(const std::vector<C> &roots) {
    std::vector<C> c{1.0};
    for (const C r : roots) {
        std::vector<C> next(c.size() + 1);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

double match_error(std::vector<C> got, std::vector<C> want) {
    double worst = 0.0;
    for (const C w : want) {
        auto it = std::min_element(got.begin(), got.end(), [&](C a, C b) {
            return std::abs(a - w) < std::abs(b - w);
        });
        worst = std::max(worst, std::abs(*it - w));
        got.erase(it);
    }
    return worst;
}

}  // namespace

TEST(roots, quartic_units) {
    const std::vector<C> c{-1.0, 0.0, 0.0, 0.0, 1.0};
    const auto r = find_roots(c);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(match_error(r.roots, {1.0, -1.0, C{0, 1}, C{0, -1}}), 1e-14);
    EXPECT_EQ(r.clustered, 0);
}

TEST(roots, random_polynomials) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (int d = 1; d <= 12; ++d) {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<C> want;
            for (int j = 0; j < d; ++j) {
                want.emplace_back(g(rng), g(rng));
            }
            const auto r = find_roots(from_roots(want));
            EXPECT_TRUE(r.converged);
            EXPECT_LT(match_error(r.roots, want), 1e-8) << "degree " << d;
        }
    }
}

TEST(roots, repeated_roots_reported) {
    const auto r = find_roots(from_roots({2.0, 2.0, C{0, 1}}));
    EXPECT_EQ(r.roots.size(), 3u);
    EXPECT_GE(r.clustered, 2);
    EXPECT_LT(match_error(r.roots, {2.0, 2.0, C{0, 1}}), 1e-6);
}

TEST(roots, high_multiplicity_roots_are_backward_stable) {
    // (1 + t^2)^m: roots +-i of multiplicity m are only located to about
    // eps^(1/m), but the product of the factors reproduces the coefficients.
    for (int m = 2; m <= 24; ++m) {
        std::vector<C> want(static_cast<std::size_t>(m), C{0, 1});
        want.insert(want.end(), static_cast<std::size_t>(m), C{0, -1});
        const std::vector<C> coeffs = from_roots(want);
        const auto r = find_roots(coeffs);
        ASSERT_TRUE(r.converged) << m;
        EXPECT_EQ(r.clustered, 2 * m) << m;
        const std::vector<C> back = from_roots(r.roots);
        double scale = 0.0;
        for (const C c : coeffs) {
            scale = std::max(scale, std::abs(c));
        }
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            EXPECT_LT(std::abs(back[i] - coeffs[i]), 1e-10 * scale) << m << " " << i;
        }
    }
}

TEST(roots, rejects_degenerate_input) {
    EXPECT_THROW(find_roots(std::vector<C>{1.0}), ValidationError);
    EXPECT_THROW(find_roots(std::vector<C>{1.0, 0.0}), ValidationError);
}
