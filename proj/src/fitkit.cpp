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

#include "noonlab/fitkit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <vector>

namespace noonlab {

namespace {

constexpr double kPhaseMatchTolerance = 1e-9;
// Modulation amplitude below this fraction of the mean level counts as none.
constexpr double kDegenerateAmplitude = 1e-12;

double wrap_angle(double theta) {
    const double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) {
        t += two_pi;
    }
    // fmod of a value just below 2pi can round to 2pi.
    return t >= two_pi ? 0.0 : t;
}

struct Problem {
    std::vector<double> phi;
    std::vector<double> y;  // background already removed
    std::vector<double> w;
    int k = 0;
};

// Parameter vector: n0, vis, theta (theta omitted when fixed).
struct Model {
    const Problem &prob;
    bool free_theta;
    double fixed_theta;

    [[nodiscard]] Eigen::Index size() const { return free_theta ? 3 : 2; }

    [[nodiscard]] double theta(const Eigen::VectorXd &p) const {
        return free_theta ? p(2) : fixed_theta;
    }

    [[nodiscard]] double chi2(const Eigen::VectorXd &p) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < prob.y.size(); ++i) {
            const double u = prob.k * prob.phi[i] + theta(p);
            const double r = prob.y[i] - p(0) * (1.0 - p(1) * std::cos(u));
            acc += prob.w[i] * r * r;
        }
        return acc;
    }

    // Normal equations J^T W J and gradient J^T W r.
    void normal_equations(const Eigen::VectorXd &p, Eigen::MatrixXd &jtj,
                          Eigen::VectorXd &jtr) const {
        const Eigen::Index n = size();
        jtj = Eigen::MatrixXd::Zero(n, n);
        jtr = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd grad(n);
        for (std::size_t i = 0; i < prob.y.size(); ++i) {
            const double u = prob.k * prob.phi[i] + theta(p);
            const double c = std::cos(u);
            const double r = prob.y[i] - p(0) * (1.0 - p(1) * c);
            grad(0) = 1.0 - p(1) * c;
            grad(1) = -p(0) * c;
            if (free_theta) {
                grad(2) = p(0) * p(1) * std::sin(u);
            }
            jtj.noalias() += prob.w[i] * grad * grad.transpose();
            jtr.noalias() += prob.w[i] * r * grad;
        }
    }
};

FringeFit finish(const Model &model, const Eigen::VectorXd &p, int iterations, bool degenerate,
                 double background) {
    FringeFit fit;
    fit.n0 = p(0);
    fit.vis = p(1);
    fit.theta = model.theta(p);
    fit.bg = background;
    fit.harmonic = model.prob.k;
    fit.iterations = iterations;
    fit.degenerate = degenerate;
    fit.chi2 = model.chi2(p);
    fit.dof = static_cast<int>(model.prob.y.size()) - static_cast<int>(model.size());

    Eigen::MatrixXd jtj;
    Eigen::VectorXd jtr;
    model.normal_equations(p, jtj, jtr);
    const Eigen::MatrixXd cov = jtj.completeOrthogonalDecomposition().pseudoInverse();
    fit.sigma_n0 = std::sqrt(std::max(0.0, cov(0, 0)));
    fit.sigma_vis = std::sqrt(std::max(0.0, cov(1, 1)));
    fit.sigma_theta = model.free_theta ? std::sqrt(std::max(0.0, cov(2, 2))) : 0.0;

    double rss = 0.0;
    for (std::size_t i = 0; i < model.prob.y.size(); ++i) {
        const double u = model.prob.k * model.prob.phi[i] + fit.theta;
        const double r = model.prob.y[i] - p(0) * (1.0 - p(1) * std::cos(u));
        rss += r * r;
    }
    fit.residual_rms = std::sqrt(rss / static_cast<double>(model.prob.y.size()));

    if (model.free_theta && fit.vis < 0.0) {
        fit.vis = -fit.vis;
        fit.theta += std::numbers::pi;
    }
    fit.theta = wrap_angle(fit.theta);
    fit.vis_out_of_range = fit.vis < 0.0 || fit.vis > 1.0;
    return fit;
}

// Levenberg-Marquardt from p; returns iterations used, or -1 without convergence.
int levenberg_marquardt(const Model &model, Eigen::VectorXd &p, int max_iterations) {
    double lambda = 1e-3;
    double current = model.chi2(p);
    Eigen::MatrixXd jtj;
    Eigen::VectorXd jtr;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        model.normal_equations(p, jtj, jtr);
        bool improved = false;
        for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
            const Eigen::VectorXd step = damped.ldlt().solve(jtr);
            const Eigen::VectorXd trial = p + step;
            const double next = model.chi2(trial);
            if (std::isfinite(next) && next <= current) {
                const double gain = current - next;
                const bool small_step =
                    step.norm() <= 1e-13 * (p.norm() + 1e-13) || gain <= 1e-15 * current;
                p = trial;
                current = next;
                lambda = std::max(lambda / 10.0, 1e-12);
                improved = true;
                if (small_step) {
                    return iter;
                }
            } else {
                lambda *= 10.0;
            }
        }
        if (!improved) {
            // No downhill step at any damping: p is a minimum to rounding.
            return iter;
        }
    }
    return -1;
}

}  // namespace

double FringeFit::operator()(double phi) const {
    return bg + n0 * (1.0 - vis * std::cos(harmonic * phi + theta));
}

FitDidNotConverge::FitDidNotConverge(FringeFit best)
    : NumericalError("fit_fringe: Levenberg-Marquardt did not converge; best chi2 " +
                     std::to_string(best.chi2) + ", vis " + std::to_string(best.vis)),
      best_(best) {}

FringeFit fit_fringe(std::span<const FringePoint> points, const FitOptions &options) {
    const int k = options.harmonic;
    if (k < 1) {
        throw ValidationError("fit_fringe: harmonic must be a positive integer");
    }
    std::set<double> distinct;
    for (const auto &pt : points) {
        if (!std::isfinite(pt.phi) || !std::isfinite(pt.value)) {
            throw ValidationError("fit_fringe: non-finite point");
        }
        if (pt.sigma && !(*pt.sigma > 0.0)) {
            throw ValidationError("fit_fringe: point sigma must be positive");
        }
        distinct.insert(pt.phi);
    }
    if (distinct.size() < 4) {
        throw ValidationError("fit_fringe: need at least 4 distinct phase points, got " +
                              std::to_string(distinct.size()));
    }
    const double span = *distinct.rbegin() - *distinct.begin();
    if (span < std::numbers::pi / k - 1e-12) {
        throw ValidationError("fit_fringe: phases span " + std::to_string(span) +
                              " rad, less than half a fringe period (" +
                              std::to_string(std::numbers::pi / k) + ")");
    }

    Problem prob;
    prob.k = k;
    for (const auto &pt : points) {
        prob.phi.push_back(pt.phi);
        prob.y.push_back(pt.value - options.background);
        const double var = pt.sigma ? (*pt.sigma) * (*pt.sigma) : std::max(pt.value, 1.0);
        prob.w.push_back(1.0 / var);
    }

    // Seed from the Fourier component at harmonic k:
    // y = n0 - n0 vis cos(theta) cos(k phi) + n0 vis sin(theta) sin(k phi).
    const auto n = static_cast<double>(prob.y.size());
    double mean = 0.0;
    double cos_part = 0.0;
    double sin_part = 0.0;
    for (std::size_t i = 0; i < prob.y.size(); ++i) {
        mean += prob.y[i] / n;
        cos_part += 2.0 * prob.y[i] * std::cos(k * prob.phi[i]) / n;
        sin_part += 2.0 * prob.y[i] * std::sin(k * prob.phi[i]) / n;
    }
    const double amplitude = std::hypot(cos_part, sin_part);
    const double scale = std::max(std::abs(mean), 1e-300);

    bool free_theta = !options.fix_theta.has_value();
    bool degenerate = false;
    double theta0 = options.fix_theta.value_or(std::atan2(sin_part, -cos_part));
    if (free_theta && amplitude <= kDegenerateAmplitude * scale) {
        free_theta = false;
        degenerate = true;
        theta0 = 0.0;
    }

    const Model model{prob, free_theta, theta0};
    Eigen::VectorXd p(model.size());
    p(0) = mean;
    p(1) = mean != 0.0 ? (free_theta ? amplitude / mean : -cos_part / (mean * std::cos(theta0) + 0.0))
                       : 0.0;
    if (!free_theta && !degenerate && std::abs(std::cos(theta0)) < 1e-3) {
        p(1) = mean != 0.0 ? sin_part / (mean * std::sin(theta0)) : 0.0;
    }
    if (degenerate || !std::isfinite(p(1))) {
        p(1) = 0.0;
    }
    if (free_theta) {
        p(2) = theta0;
    }

    const int iterations = levenberg_marquardt(model, p, options.max_iterations);
    FringeFit fit = finish(model, p, std::max(iterations, options.max_iterations), degenerate,
                           options.background);
    if (iterations < 0) {
        throw FitDidNotConverge(fit);
    }
    fit.iterations = iterations;
    if (free_theta && std::abs(fit.n0 * fit.vis) <= kDegenerateAmplitude * scale) {
        fit.degenerate = true;
    }
    return fit;
}

CorrectedDataset subtract_background(const CountDataset &signal, const CountDataset &background) {
    if (signal.points.size() != background.points.size()) {
        throw ValidationError("subtract_background: signal has " +
                              std::to_string(signal.points.size()) + " points, background " +
                              std::to_string(background.points.size()));
    }
    CorrectedDataset out;
    out.points.reserve(signal.points.size());
    for (std::size_t i = 0; i < signal.points.size(); ++i) {
        const auto &s = signal.points[i];
        const auto &b = background.points[i];
        if (std::abs(s.phase - b.phase) > kPhaseMatchTolerance) {
            throw ValidationError("subtract_background: phase grids differ at point " +
                                  std::to_string(i));
        }
        if (!(s.duration > 0.0) || !(b.duration > 0.0)) {
            throw ValidationError("subtract_background: durations must be positive");
        }
        const double ratio = s.duration / b.duration;
        CorrectedRecord r;
        r.phase = s.phase;
        r.duration = s.duration;
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            const auto sig = static_cast<double>(s.counts[c]);
            const auto bg = static_cast<double>(b.counts[c]);
            const double diff = sig - ratio * bg;
            r.clamped[c] = diff < 0.0;
            r.values[c] = std::max(diff, 0.0);
            // Floor of one count, as in the unweighted Poisson case.
            r.sigmas[c] = std::sqrt(std::max(sig + ratio * ratio * bg, 1.0));
        }
        out.points.push_back(r);
    }
    return out;
}

}  // namespace noonlab
