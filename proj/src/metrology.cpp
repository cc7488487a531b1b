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

#include "noonlab/metrology.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

namespace noonlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kZeroTolerance = 1e-10;
constexpr std::size_t kGridPerPhoton = 10000;
constexpr std::size_t kChunk = 1 << 14;
constexpr int kBrentBits = std::numeric_limits<double>::digits;
constexpr std::uintmax_t kBrentIterations = 200;
constexpr int kMaxCandidates = 4;

std::vector<double> weights(const StateVector &s) {
    std::vector<double> w;
    w.reserve(s.amps().size());
    for (const auto &a : s.amps()) {
        w.push_back(std::norm(a));
    }
    return w;
}

// sum_k w_k z^k and its phi-derivative, z = exp(i phi), by Horner.
Complex poly(std::span<const double> w, double phi) {
    const Complex z = std::polar(1.0, phi);
    Complex acc{0.0, 0.0};
    for (std::size_t k = w.size(); k-- > 0;) {
        acc = acc * z + w[k];
    }
    return acc;
}

Complex poly_derivative(std::span<const double> w, double phi) {
    const Complex z = std::polar(1.0, phi);
    Complex acc{0.0, 0.0};
    for (std::size_t k = w.size(); k-- > 1;) {
        acc = acc * z + static_cast<double>(k) * w[k];
    }
    return Complex{0.0, 1.0} * z * acc;
}

// Refines a grid minimum of |f| at phi within +-h; nullopt if it is not a zero.
std::optional<double> refine_zero(std::span<const double> w, double phi, double h) {
    const auto objective = [&](double x) { return std::norm(poly(w, x)); };
    std::uintmax_t iterations = kBrentIterations;
    double x = boost::math::tools::brent_find_minima(objective, phi - h, phi + h, kBrentBits,
                                                     iterations)
                   .first;
    for (int i = 0; i < 20; ++i) {
        const Complex f = poly(w, x);
        if (std::abs(f) < kZeroTolerance * 1e-3) {
            break;
        }
        const Complex df = poly_derivative(w, x);
        if (std::abs(df) == 0.0) {
            break;
        }
        const double step = (f / df).real();
        if (std::abs(step) > h) {
            break;
        }
        x -= step;
    }
    if (std::abs(poly(w, x)) < kZeroTolerance && x > 0.0) {
        return x;
    }
    return std::nullopt;
}

}  // namespace

double projection_success(const StateVector &target, const StateVector &probe,
                          bool optimize_phase) {
    if (target.n_total() != probe.n_total()) {
        throw ValidationError("projection_success: photon numbers differ (" +
                              std::to_string(target.n_total()) + " vs " +
                              std::to_string(probe.n_total()) + ")");
    }
    if (!optimize_phase || target.n_total() == 0) {
        return std::min(std::norm(inner_product(target, probe)), 1.0);
    }
    // g(phi) = |sum_k c_k exp(i k phi)|^2, c_k = conj(t_k) p_k.
    std::vector<Complex> c;
    for (std::size_t k = 0; k < target.amps().size(); ++k) {
        c.push_back(std::conj(target[k]) * probe[k]);
    }
    const auto g = [&](double phi) {
        const Complex z = std::polar(1.0, phi);
        Complex acc{0.0, 0.0};
        for (std::size_t k = c.size(); k-- > 0;) {
            acc = acc * z + c[k];
        }
        return std::norm(acc);
    };
    const std::size_t n_scan = 4 * target.n_total() + 1;
    const double h = kTwoPi / static_cast<double>(n_scan);
    std::vector<double> values(n_scan);
    for (std::size_t j = 0; j < n_scan; ++j) {
        values[j] = g(static_cast<double>(j) * h);
    }
    std::vector<std::size_t> peaks;
    for (std::size_t j = 0; j < n_scan; ++j) {
        const double prev = values[(j + n_scan - 1) % n_scan];
        const double next = values[(j + 1) % n_scan];
        if (values[j] >= prev && values[j] >= next) {
            peaks.push_back(j);
        }
    }
    std::sort(peaks.begin(), peaks.end(),
              [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    if (peaks.size() > static_cast<std::size_t>(kMaxCandidates)) {
        peaks.resize(kMaxCandidates);
    }
    double best = *std::max_element(values.begin(), values.end());
    for (const std::size_t j : peaks) {
        const double phi = static_cast<double>(j) * h;
        std::uintmax_t iterations = kBrentIterations;
        const auto r = boost::math::tools::brent_find_minima([&](double x) { return -g(x); },
                                                             phi - h, phi + h, kBrentBits,
                                                             iterations);
        best = std::max(best, -r.second);
    }
    return std::min(best, 1.0);
}

double phase_uncertainty(double p_success, int n_photons) {
    if (!(p_success > 0.0) || p_success > 1.0) {
        throw ValidationError("phase_uncertainty: p_success must be in (0, 1], got " +
                              std::to_string(p_success));
    }
    if (n_photons < 1) {
        throw ValidationError("phase_uncertainty: n_photons must be >= 1");
    }
    return std::sqrt((2.0 - p_success) / p_success) / n_photons;
}

Complex self_overlap(const StateVector &s, double phi) { return poly(weights(s), phi); }

std::vector<double> self_overlap_grid(const StateVector &s, double phi_start, double step,
                                      std::size_t count) {
    const std::vector<double> w = weights(s);
    std::vector<double> out(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        out[static_cast<std::size_t>(j)] =
            std::abs(poly(w, phi_start + static_cast<double>(j) * step));
    }
    return out;
}

std::vector<double> self_overlap_grid_serial(const StateVector &s, double phi_start,
                                             double step, std::size_t count) {
    const std::vector<double> w = weights(s);
    std::vector<double> out(count);
    for (std::size_t j = 0; j < count; ++j) {
        out[j] = std::abs(poly(w, phi_start + static_cast<double>(j) * step));
    }
    return out;
}

OrthogonalPhaseNotFound::OrthogonalPhaseNotFound(double min_abs_overlap)
    : NumericalError("orthogonal_phase: no orthogonal phase shift; min |<s|s(phi)>| = " +
                     std::to_string(min_abs_overlap)),
      min_abs_overlap_(min_abs_overlap) {}

double orthogonal_phase(const StateVector &s) {
    const std::size_t n = s.n_total();
    if (n == 0) {
        throw OrthogonalPhaseNotFound(1.0);
    }
    const std::vector<double> w = weights(s);
    const std::size_t total = kGridPerPhoton * n;
    const double h = kTwoPi / static_cast<double>(total);
    // Near a simple zero |f| <= |f'| h / 2 and |f'| <= n.
    const double candidate_level = static_cast<double>(n) * h;
    double min_seen = std::numeric_limits<double>::infinity();

    // Grid points j = 1..total; the chunk keeps one point of overlap on each
    // side so local minima at chunk edges are seen.
    for (std::size_t first = 1; first <= total; first += kChunk) {
        const std::size_t last = std::min(first + kChunk - 1, total);
        const std::size_t count = last - first + 3;
        const std::vector<double> a =
            self_overlap_grid(s, static_cast<double>(first - 1) * h, h, count);
        for (std::size_t i = 1; i + 1 < count; ++i) {
            min_seen = std::min(min_seen, a[i]);
            if (a[i] > candidate_level || a[i] > a[i - 1] || a[i] > a[i + 1]) {
                continue;
            }
            const double phi = static_cast<double>(first - 1 + i) * h;
            if (const auto root = refine_zero(w, phi, h)) {
                return *root;
            }
        }
    }
    throw OrthogonalPhaseNotFound(min_seen);
}

double scaling_exponent(std::span<const ScalingPoint> points) {
    if (points.size() < 3) {
        throw ValidationError("scaling_exponent: need at least 3 points");
    }
    double sx = 0.0;
    double sy = 0.0;
    for (const auto &p : points) {
        if (!(p.n > 0.0) || !(p.dphi > 0.0)) {
            throw ValidationError("scaling_exponent: n and dphi must be positive");
        }
        sx += std::log(p.n);
        sy += std::log(p.dphi);
    }
    const auto m = static_cast<double>(points.size());
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto &p : points) {
        const double dx = std::log(p.n) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(p.dphi) - my);
    }
    if (sxx == 0.0) {
        throw ValidationError("scaling_exponent: all n are equal");
    }
    return sxy / sxx;
}

StateFamily family_from_name(const std::string &name) {
    if (name == "noon") {
        return StateFamily::kNoon;
    }
    if (name == "pdc") {
        return StateFamily::kPdc;
    }
    throw ValidationError("unknown state family '" + name + "' (expected noon or pdc)");
}

MetrologyRow metrology_row(StateFamily family, int n) {
    if (n < 1) {
        throw ValidationError("metrology_row: n must be >= 1");
    }
    const int photons = family == StateFamily::kNoon ? n : 2 * n;
    const StateVector probe = family == StateFamily::kNoon ? make_noon(n, 1) : make_pdc_n(n);
    const StateVector target = make_noon(photons, 1);

    MetrologyRow row;
    row.n = n;
    row.plan.n_photons = photons;
    row.plan.p_success = projection_success(target, probe, true);
    row.plan.phi_orth = orthogonal_phase(probe);
    row.plan.dphi = phase_uncertainty(row.plan.p_success, photons);
    row.phi_const_photons = row.plan.phi_orth * photons / std::numbers::pi;
    row.phi_const_family = row.plan.phi_orth * n / std::numbers::pi;
    return row;
}

MetrologySweep metrology_sweep(StateFamily family, std::span<const int> ns) {
    if (ns.empty()) {
        throw ValidationError("metrology_sweep: empty range");
    }
    MetrologySweep sweep;
    sweep.family = family;
    std::vector<ScalingPoint> points;
    for (const int n : ns) {
        sweep.rows.push_back(metrology_row(family, n));
        points.push_back({static_cast<double>(n), sweep.rows.back().plan.dphi});
    }
    sweep.exponent = points.size() >= 3 ? scaling_exponent(points)
                                        : std::numeric_limits<double>::quiet_NaN();
    return sweep;
}

}  // namespace noonlab
