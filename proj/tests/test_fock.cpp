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

#include "noonlab/fock.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "noonlab/error.hpp"
#include "oracles/oracles.hpp"

using namespace noonlab;

namespace {

std::vector<ModeCoefficients> to_modes(const std::vector<std::pair<Complex, Complex>> &forms) {
    std::vector<ModeCoefficients> out;
    for (const auto &[a, b] : forms) {
        out.push_back({a, b});
    }
    return out;
}

}  // namespace

TEST(fock, make_noon_amplitudes) {
    const double h = 1.0 / std::sqrt(2.0);
    const StateVector s = make_noon(4, -1);
    ASSERT_EQ(s.n_total(), 4u);
    EXPECT_DOUBLE_EQ(s[0].real(), h);
    EXPECT_DOUBLE_EQ(s[4].real(), -h);
    for (std::size_t k = 1; k < 4; ++k) {
        EXPECT_EQ(s[k], Complex{});
    }
    const StateVector one = make_noon(1, -1);
    EXPECT_DOUBLE_EQ(one[0].real(), h);
    EXPECT_DOUBLE_EQ(one[1].real(), -h);
    const StateVector two = make_noon(2, 1);
    EXPECT_DOUBLE_EQ(two[2].real(), h);
    EXPECT_EQ(two[1], Complex{});
}

TEST(fock, make_noon_rejects_bad_input) {
    EXPECT_THROW(make_noon(0, 1), ValidationError);
    EXPECT_THROW(make_noon(3, 0), ValidationError);
    EXPECT_THROW(make_noon(3, 2), ValidationError);
}

TEST(fock, state_vector_normalizes_and_records_deviation) {
    const StateVector s({Complex{3.0, 0.0}, Complex{0.0, 4.0}});
    EXPECT_NEAR(s[0].real(), 0.6, 1e-15);
    EXPECT_NEAR(s[1].imag(), 0.8, 1e-15);
    EXPECT_NEAR(s.norm_deviation(), 24.0, 1e-12);
    EXPECT_THROW(StateVector({}), ValidationError);
    EXPECT_THROW(StateVector({Complex{}, Complex{}}), ValidationError);
    EXPECT_THROW(StateVector({Complex{NAN, 0.0}}), ValidationError);
}

TEST(fock, make_pdc4_matches_closed_form) {
    const StateVector s = make_pdc4();
    ASSERT_EQ(s.n_total(), 4u);
    EXPECT_NEAR(s[0].real(), std::sqrt(3.0 / 8.0), 1e-15);
    EXPECT_NEAR(s[4].real(), 0.61237243569579, 1e-13);
    EXPECT_NEAR(s[2].real(), 0.5, 1e-15);
    double norm = 0.0;
    for (const auto &a : s.amps()) {
        norm += std::norm(a);
    }
    EXPECT_NEAR(norm, 1.0, 1e-15);
}

TEST(fock, make_pdc_n_small_cases) {
    const StateVector one = make_pdc_n(1);
    EXPECT_NEAR(one[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(one[2].real(), 1.0 / std::sqrt(2.0), 1e-15);
    const StateVector two = make_pdc_n(2);
    EXPECT_NEAR(std::norm(two[0]), 3.0 / 8.0, 1e-15);
    EXPECT_NEAR(std::norm(two[2]), 1.0 / 4.0, 1e-15);
    EXPECT_NEAR(std::norm(two[4]), 3.0 / 8.0, 1e-15);
    const StateVector pdc4 = make_pdc4();
    for (std::size_t k = 0; k <= 4; ++k) {
        EXPECT_NEAR(std::abs(two[k] - pdc4[k]), 0.0, 1e-15);
    }
    EXPECT_THROW(make_pdc_n(0), ValidationError);
}

TEST(fock, make_pdc_n_matches_bruteforce_expansion) {
    for (int n = 1; n <= 40; ++n) {
        const StateVector s = make_pdc_n(n);
        const auto ref = oracle::pdc_bruteforce(n);
        ASSERT_EQ(s.n_total() + 1, ref.size());
        for (std::size_t k = 0; k < ref.size(); ++k) {
            EXPECT_NEAR(s[k].real(), ref[k], 1e-12) << "n=" << n << " k=" << k;
            EXPECT_EQ(s[k].imag(), 0.0);
        }
    }
}

TEST(fock, pdc_weights_exact_and_log_agree_at_ten_pairs) {
    const auto exact = detail::pdc_weights_exact(10);
    const auto logw = detail::pdc_weights_log(10);
    ASSERT_EQ(exact.size(), logw.size());
    for (std::size_t i = 0; i < exact.size(); ++i) {
        EXPECT_NEAR(logw[i], exact[i], 1e-13 * exact[i]);
    }
}

TEST(fock, make_pdc_n_large_is_normalized) {
    for (const int n : {64, 128, 256, 512}) {
        const StateVector s = make_pdc_n(n);
        double norm = 0.0;
        for (const auto &a : s.amps()) {
            ASSERT_TRUE(std::isfinite(a.real()));
            norm += std::norm(a);
        }
        EXPECT_NEAR(norm, 1.0, 1e-12);
        EXPECT_LT(s.norm_deviation(), 1e-12);
    }
}

TEST(fock, apply_phase_convention) {
    const double phi = 0.37;
    const StateVector s = apply_phase(make_pdc4(), {phi});
    EXPECT_NEAR(std::abs(s[2] - std::polar(0.5, 2 * phi)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s[4] - std::polar(std::sqrt(3.0 / 8.0), 4 * phi)), 0.0, 1e-15);
    const StateVector noon = apply_phase(make_noon(4, -1), {std::numbers::pi / 4});
    EXPECT_NEAR(std::abs(noon[4] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    const StateVector same = apply_phase(make_pdc4(), {0.0});
    for (std::size_t k = 0; k <= 4; ++k) {
        EXPECT_EQ(same[k], make_pdc4()[k]);
    }
}

TEST(fock, apply_phase_preserves_magnitudes) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const StateVector s(oracle::random_amps(7, rng));
        const StateVector t = apply_phase(s, {std::uniform_real_distribution<>(-20, 20)(rng)});
        for (std::size_t k = 0; k <= 7; ++k) {
            EXPECT_NEAR(std::abs(t[k]), std::abs(s[k]), 1e-15);
        }
    }
}

TEST(fock, inner_product_examples) {
    EXPECT_NEAR(std::abs(inner_product(make_noon(4, -1), make_pdc4())), 0.0, 1e-15);
    const StateVector shifted = apply_phase(make_pdc4(), {std::numbers::pi / 4});
    EXPECT_NEAR(std::abs(inner_product(make_noon(4, -1), shifted)),
                std::sqrt(2.0) * std::sqrt(3.0 / 8.0), 1e-15);
    EXPECT_THROW(inner_product(make_noon(3, 1), make_noon(4, 1)), ValidationError);
}

TEST(fock, inner_product_properties) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const StateVector a(oracle::random_amps(5, rng));
        const StateVector b(oracle::random_amps(5, rng));
        EXPECT_NEAR(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))), 0.0, 1e-15);
        EXPECT_NEAR(inner_product(a, a).real(), 1.0, 1e-14);
        const double phi = std::uniform_real_distribution<>(0, 7)(rng);
        EXPECT_LE(std::abs(inner_product(a, apply_phase(a, {phi}))), 1.0 + 1e-14);
    }
    // NOON: |overlap| = |cos(N phi / 2)|.
    for (int n = 1; n <= 8; ++n) {
        for (const double phi : {0.1, 0.7, 1.3, 2.9}) {
            const StateVector s = make_noon(n, 1);
            EXPECT_NEAR(std::abs(inner_product(s, apply_phase(s, {phi}))),
                        std::abs(std::cos(n * phi / 2)), 1e-14);
        }
    }
}

TEST(fock, vacuum_overlap_examples) {
    using namespace std::complex_literals;
    const std::vector<ModeCoefficients> net{{1.0, -1.0}, {1.0, 1.0}, {1.0, -1i}, {1.0, 1i}};
    EXPECT_NEAR(std::abs(vacuum_overlap(net, make_noon(4, -1))), std::sqrt(48.0), 1e-13);
    EXPECT_NEAR(std::norm(vacuum_overlap(net, make_noon(4, -1))) / 256.0, 3.0 / 16.0, 1e-15);

    const std::vector<ModeCoefficients> hh{{1.0, 0.0}, {1.0, 0.0}};
    EXPECT_NEAR(std::abs(vacuum_overlap(hh, make_basis(2, 0)) - std::sqrt(2.0)), 0.0, 1e-15);

    const std::vector<ModeCoefficients> ab{{1.0, -1.0}, {1.0, 1.0}};
    for (const double phi : {0.0, 0.4, 1.1}) {
        const StateVector s2 = apply_phase(make_pdc_n(1), {phi});
        const Complex expect = 1.0 - std::polar(1.0, 2 * phi);
        EXPECT_NEAR(std::abs(vacuum_overlap(ab, s2) - expect), 0.0, 1e-14);
    }
    EXPECT_THROW(vacuum_overlap(ab, make_pdc4()), ValidationError);
}

TEST(fock, vacuum_overlap_matches_operator_oracle) {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 8; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto amps = oracle::random_amps(n, rng);
            std::vector<std::pair<Complex, Complex>> forms;
            for (int j = 0; j < n; ++j) {
                const auto f = oracle::random_amps(1, rng);
                forms.emplace_back(f[0], f[1]);
            }
            const Complex ref = oracle::vacuum_overlap(forms, amps);
            const Complex got = vacuum_overlap(to_modes(forms), StateVector(amps));
            EXPECT_NEAR(std::abs(got - ref), 0.0, 1e-12 * (1.0 + std::abs(ref)));
        }
    }
}

TEST(fock, vacuum_overlap_is_permutation_invariant_and_multilinear) {
    std::mt19937_64 rng(8);
    const StateVector s(oracle::random_amps(5, rng));
    std::vector<ModeCoefficients> forms;
    for (int j = 0; j < 5; ++j) {
        const auto f = oracle::random_amps(1, rng);
        forms.push_back({f[0], f[1]});
    }
    const Complex base = vacuum_overlap(forms, s);
    auto perm = forms;
    std::sort(perm.begin(), perm.end(),
              [](const auto &x, const auto &y) { return x.alpha.real() < y.alpha.real(); });
    do {
        EXPECT_NEAR(std::abs(vacuum_overlap(perm, s) - base), 0.0, 1e-13);
    } while (std::next_permutation(perm.begin(), perm.end(), [](const auto &x, const auto &y) {
        return x.alpha.real() < y.alpha.real();
    }));

    // Linear in the first form.
    const ModeCoefficients u{Complex{0.3, -0.2}, Complex{1.1, 0.4}};
    const ModeCoefficients w{Complex{-0.7, 0.5}, Complex{0.2, 0.9}};
    const Complex lambda{0.6, -1.3};
    auto f1 = forms;
    auto f2 = forms;
    auto f3 = forms;
    f1[0] = u;
    f2[0] = w;
    f3[0] = {u.alpha + lambda * w.alpha, u.beta + lambda * w.beta};
    EXPECT_NEAR(
        std::abs(vacuum_overlap(f3, s) - vacuum_overlap(f1, s) - lambda * vacuum_overlap(f2, s)),
        0.0, 1e-13);
}

TEST(fock, vacuum_overlap_of_pure_h_forms_is_sqrt_factorial) {
    for (int n = 1; n <= 20; ++n) {
        const std::vector<ModeCoefficients> forms(static_cast<std::size_t>(n), {1.0, 0.0});
        const Complex v = vacuum_overlap(forms, make_basis(n, 0));
        EXPECT_NEAR(v.real(), std::sqrt(oracle::factorial(n)), 1e-14 * std::sqrt(oracle::factorial(n)));
    }
}

TEST(fock, sqrt_factorials_against_lgamma) {
    for (const auto &[p, q] : std::vector<std::pair<int, int>>{{0, 0}, {5, 3}, {100, 70}, {200, 100}, {300, 0}}) {
        const double ref = 0.5 * (std::lgamma(p + 1.0) + std::lgamma(q + 1.0));
        EXPECT_NEAR(std::log(sqrt_factorials(p, q)), ref, 1e-12 * std::max(1.0, ref));
    }
}

TEST(fock, product_polynomial_of_noon_network) {
    using namespace std::complex_literals;
    const std::vector<ModeCoefficients> net{
        {0.5, -0.5}, {0.5, 0.5}, {0.5, -0.5i}, {0.5, 0.5i}};
    const auto poly = product_polynomial(net);
    ASSERT_EQ(poly.size(), 5u);
    EXPECT_NEAR(std::abs(poly[0] - 1.0 / 16), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(poly[4] + 1.0 / 16), 0.0, 1e-16);
    for (const std::size_t k : {1u, 2u, 3u}) {
        EXPECT_NEAR(std::abs(poly[k]), 0.0, 1e-16);
    }
}
