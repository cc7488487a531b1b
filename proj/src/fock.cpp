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

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "noonlab/error.hpp"

namespace noonlab {

namespace {

constexpr int kExactPdcLimit = 10;
constexpr int kFactorialTableSize = 171;  // 170! is the last finite double

const std::array<double, kFactorialTableSize> &factorial_table() {
    static const auto table = [] {
        std::array<double, kFactorialTableSize> t{};
        t[0] = 1.0;
        for (int i = 1; i < kFactorialTableSize; ++i) {
            t[i] = t[i - 1] * static_cast<double>(i);
        }
        return t;
    }();
    return table;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n - k) {
        k = n - k;
    }
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // r * (n - k + i) is divisible by i at every step.
        r = r * (n - k + i) / i;
    }
    return r;
}

std::vector<Complex> from_weights(const std::vector<double> &weights) {
    std::vector<Complex> amps(2 * (weights.size() - 1) + 1, Complex{0.0, 0.0});
    for (std::size_t n = 0; n < weights.size(); ++n) {
        amps[2 * n] = std::sqrt(weights[n]);
    }
    return amps;
}

}  // namespace

StateVector::StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
    if (amps_.empty()) {
        throw ValidationError("StateVector: amplitude list is empty");
    }
    double norm2 = 0.0;
    for (const auto &a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ValidationError("StateVector: non-finite amplitude");
        }
        norm2 += std::norm(a);
    }
    if (norm2 == 0.0) {
        throw ValidationError("StateVector: zero vector cannot be normalized");
    }
    norm_deviation_ = std::abs(norm2 - 1.0);
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto &a : amps_) {
        a *= scale;
    }
}

StateVector make_noon(int n, int sign) {
    if (n < 1) {
        throw ValidationError("make_noon: photon number must be >= 1, got " + std::to_string(n));
    }
    if (sign != 1 && sign != -1) {
        throw ValidationError("make_noon: sign must be +1 or -1");
    }
    std::vector<Complex> amps(static_cast<std::size_t>(n) + 1, Complex{0.0, 0.0});
    amps.front() = M_SQRT1_2;
    amps.back() = sign * M_SQRT1_2;
    return StateVector(std::move(amps));
}

StateVector make_basis(int n_total, int k) {
    if (n_total < 0 || k < 0 || k > n_total) {
        throw ValidationError("make_basis: need 0 <= k <= n_total");
    }
    std::vector<Complex> amps(static_cast<std::size_t>(n_total) + 1, Complex{0.0, 0.0});
    amps[static_cast<std::size_t>(k)] = 1.0;
    return StateVector(std::move(amps));
}

StateVector make_pdc4() {
    const double edge = std::sqrt(3.0 / 8.0);
    return StateVector({edge, 0.0, 0.5, 0.0, edge});
}

namespace detail {

std::vector<double> pdc_weights_exact(int n_pairs) {
    if (n_pairs < 1 || n_pairs > kExactPdcLimit) {
        throw ValidationError("pdc_weights_exact: n_pairs out of [1, 10]");
    }
    const auto pairs = static_cast<std::uint64_t>(n_pairs);
    // |amp_2n|^2 = C(2N-2n, N-n) C(2n, n) / 4^N; the division is by a power
    // of two, so each weight is exactly representable.
    const double denom = std::ldexp(1.0, 2 * n_pairs);
    std::vector<double> w(pairs + 1);
    for (std::uint64_t n = 0; n <= pairs; ++n) {
        const std::uint64_t num = binomial(2 * (pairs - n), pairs - n) * binomial(2 * n, n);
        w[n] = static_cast<double>(num) / denom;
    }
    return w;
}

std::vector<double> pdc_weights_log(int n_pairs) {
    if (n_pairs < 1) {
        throw ValidationError("pdc_weights_log: n_pairs must be >= 1");
    }
    const double big_n = n_pairs;
    std::vector<double> w(static_cast<std::size_t>(n_pairs) + 1);
    for (int n = 0; n <= n_pairs; ++n) {
        const double m = n_pairs - n;
        const double log_w = std::lgamma(2.0 * m + 1.0) + std::lgamma(2.0 * n + 1.0) -
                             2.0 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) -
                             2.0 * big_n * std::log(2.0);
        w[static_cast<std::size_t>(n)] = std::exp(log_w);
    }
    return w;
}

}  // namespace detail

StateVector make_pdc_n(int n_pairs) {
    if (n_pairs < 1) {
        throw ValidationError("make_pdc_n: n_pairs must be >= 1, got " + std::to_string(n_pairs));
    }
    const auto weights = n_pairs <= kExactPdcLimit ? detail::pdc_weights_exact(n_pairs)
                                                   : detail::pdc_weights_log(n_pairs);
    return StateVector(from_weights(weights));
}

StateVector apply_phase(const StateVector &s, PhaseShift phi) {
    std::vector<Complex> out(s.amps().begin(), s.amps().end());
    for (std::size_t k = 1; k < out.size(); ++k) {
        out[k] *= std::polar(1.0, static_cast<double>(k) * phi.radians);
    }
    return StateVector(std::move(out));
}

Complex inner_product(const StateVector &a, const StateVector &b) {
    if (a.n_total() != b.n_total()) {
        throw ValidationError("inner_product: photon numbers differ (" +
                              std::to_string(a.n_total()) + " vs " + std::to_string(b.n_total()) +
                              ")");
    }
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < a.amps().size(); ++k) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

std::vector<Complex> product_polynomial(std::span<const ModeCoefficients> forms) {
    std::vector<Complex> poly{Complex{1.0, 0.0}};
    poly.reserve(forms.size() + 1);
    for (const auto &f : forms) {
        poly.push_back(Complex{0.0, 0.0});
        for (std::size_t k = poly.size() - 1; k > 0; --k) {
            poly[k] = f.alpha * poly[k] + f.beta * poly[k - 1];
        }
        poly[0] *= f.alpha;
    }
    return poly;
}

Complex vacuum_overlap(std::span<const ModeCoefficients> forms, const StateVector &s) {
    if (forms.size() != s.n_total()) {
        throw ValidationError("vacuum_overlap: " + std::to_string(forms.size()) +
                              " forms for a " + std::to_string(s.n_total()) + "-photon state");
    }
    const auto poly = product_polynomial(forms);
    const int n = static_cast<int>(s.n_total());
    Complex acc{0.0, 0.0};
    for (int k = 0; k <= n; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        if (s[idx] == Complex{0.0, 0.0}) {
            continue;
        }
        acc += s[idx] * sqrt_factorials(n - k, k) * poly[idx];
    }
    return acc;
}

double sqrt_factorials(int p, int q) {
    if (p < 0 || q < 0) {
        throw ValidationError("sqrt_factorials: negative argument");
    }
    const auto &table = factorial_table();
    if (p < kFactorialTableSize && q < kFactorialTableSize) {
        return std::sqrt(table[static_cast<std::size_t>(p)]) *
               std::sqrt(table[static_cast<std::size_t>(q)]);
    }
    return std::exp(0.5 * (std::lgamma(p + 1.0) + std::lgamma(q + 1.0)));
}

}  // namespace noonlab
