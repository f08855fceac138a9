// Copyright 2026 The lpnq Authors
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

#include "lpnq/readout.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace lpnq {

namespace {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// P(v > t) for v ~ N(mu, sigma^2), with sigma = 0 as a point mass.
double upper_tail(double t, double mu, double sigma) {
    if (sigma == 0) {
        return mu > t ? 1.0 : 0.0;
    }
    return 1.0 - normal_cdf((t - mu) / sigma);
}

}  // namespace

void ReadoutParams::validate() const {
    if (!std::isfinite(mu0) || !std::isfinite(mu1) || mu1 < mu0) {
        throw std::invalid_argument("readout means must be finite with mu1 >= mu0");
    }
    if (!std::isfinite(sigma0) || !std::isfinite(sigma1) || sigma0 < 0 || sigma1 < 0) {
        throw std::invalid_argument("readout sigmas must be finite and non-negative");
    }
}

double sample_voltage(bool bit, const ReadoutParams &params, RandomStream &rng) {
    double mu = bit ? params.mu1 : params.mu0;
    double sigma = bit ? params.sigma1 : params.sigma0;
    if (sigma == 0) {
        return mu;
    }
    return mu + sigma * rng.normal();
}

double sigma_from_eta(double eta) {
    if (!(eta > 0 && eta < 0.5)) {
        throw std::domain_error("sigma_from_eta requires eta in (0, 0.5)");
    }
    boost::math::normal_distribution<double> standard;
    return 0.5 / boost::math::quantile(standard, 1 - eta);
}

double eta_from_sigma(double sigma) {
    if (!(sigma > 0)) {
        throw std::domain_error("eta_from_sigma requires sigma > 0");
    }
    return normal_cdf(-0.5 / sigma);
}

ReadoutParams readout_params_for_eta(double eta) {
    if (eta == 0) {
        return {0, 1, 0, 0};
    }
    if (eta == 0.5) {
        return {0, 0, 1, 1};
    }
    double sigma = sigma_from_eta(eta);
    return {0, 1, sigma, sigma};
}

std::vector<ReadoutParams> readout_params_for_noise(const NoiseModel &noise) {
    std::vector<ReadoutParams> out;
    out.push_back(readout_params_for_eta(noise.eta_a));
    for (double e : noise.eta_d) {
        out.push_back(readout_params_for_eta(e));
    }
    return out;
}

CalibrationSet generate_calibration(const NoiseModel &noise, size_t shots, RandomStream &rng) {
    if (shots < 100) {
        throw std::invalid_argument("calibration needs at least 100 shots per point");
    }
    auto truth = readout_params_for_noise(noise);

    auto estimate = [shots](const ReadoutParams &p, bool bit, RandomStream stream, double &mean, double &sd) {
        std::vector<double> v(shots);
        for (auto &x : v) {
            x = sample_voltage(bit, p, stream);
        }
        double sum = 0;
        for (double x : v) {
            sum += x;
        }
        mean = sum / static_cast<double>(shots);
        double ss = 0;
        for (double x : v) {
            ss += (x - mean) * (x - mean);
        }
        sd = std::sqrt(ss / static_cast<double>(shots - 1));
    };

    // Point 0 is the collective ground state; point 1 + q excites only qubit q.
    CalibrationSet cal;
    cal.shots_per_point = shots;
    RandomStream ground = rng.split(0);
    for (size_t q = 0; q < truth.size(); q++) {
        ReadoutParams est;
        estimate(truth[q], false, ground.split(q), est.mu0, est.sigma0);
        estimate(truth[q], true, rng.split(1 + q), est.mu1, est.sigma1);
        cal.qubits.push_back(est);
    }
    return cal;
}

QueryRecord sample_record(const ShotOutcome &shot, const std::vector<ReadoutParams> &truth, RandomStream &rng) {
    QueryRecord rec;
    rec.v_a = sample_voltage(shot.a, truth[0], rng);
    rec.v_d.resize(truth.size() - 1);
    for (size_t i = 0; i < rec.v_d.size(); i++) {
        rec.v_d[i] = sample_voltage(((shot.d >> i) & 1) != 0, truth[1 + i], rng);
    }
    return rec;
}

double rescale(double v, const ReadoutParams &params) {
    return (v - params.mu0) / (params.mu1 - params.mu0);
}

ReadoutParams rescaled(const ReadoutParams &params) {
    double gap = std::abs(params.mu1 - params.mu0);
    if (gap == 0) {
        throw std::domain_error("cannot rescale a readout whose means coincide");
    }
    return {0, 1, params.sigma0 / gap, params.sigma1 / gap};
}

double assignment_error(const ReadoutParams &params) {
    double t = params.midpoint();
    return 0.5 * upper_tail(t, params.mu0, params.sigma0) + 0.5 * (1 - upper_tail(t, params.mu1, params.sigma1));
}

Moments mixture_moments(const ReadoutParams &params, double eta_a) {
    if (!(eta_a >= 0 && eta_a <= 1)) {
        throw std::invalid_argument("mixture weight must be in [0, 1]");
    }
    double gap = params.mu1 - params.mu0;
    double mean = (1 - eta_a) * params.mu1 + eta_a * params.mu0;
    double var = (1 - eta_a) * params.sigma1 * params.sigma1 + eta_a * params.sigma0 * params.sigma0 +
                 eta_a * (1 - eta_a) * gap * gap;
    return {mean, var};
}

double calibrated_threshold(const ReadoutParams &params, double eta_a, double queries) {
    if (!(eta_a >= 0 && eta_a <= 0.5)) {
        throw std::invalid_argument("calibrated_threshold requires eta_a in [0, 0.5]");
    }
    if (!(queries >= 1)) {
        throw std::invalid_argument("calibrated_threshold requires queries >= 1");
    }
    double m0 = params.mu0;
    double v0 = params.sigma0 * params.sigma0;
    auto [m1, v1] = mixture_moments(params, eta_a);
    if (m1 == m0) {
        throw std::domain_error("calibrated_threshold: the two distributions have the same mean");
    }
    if (std::abs(v0 - v1) <= 1e-9) {
        return 0.5 * (m0 + m1);
    }

    // A noiseless component would have infinite log-density; floor it relative to the gap.
    double floor = 1e-12 * (m1 - m0) * (m1 - m0);
    v0 = std::max(v0, floor);
    v1 = std::max(v1, floor);

    if (std::isinf(queries)) {
        // Limit of the crossing as both variances shrink: equal standardized distance.
        double s0 = std::sqrt(v0);
        double s1 = std::sqrt(v1);
        return (m0 * s1 + m1 * s0) / (s0 + s1);
    }
    v0 /= queries;
    v1 /= queries;

    // (x - m0)^2 / v0 + ln v0 = (x - m1)^2 / v1 + ln v1
    double a = 1 / v0 - 1 / v1;
    double b = -2 * (m0 / v0 - m1 / v1);
    double c = m0 * m0 / v0 - m1 * m1 / v1 + std::log(v0 / v1);
    double disc = b * b - 4 * a * c;
    double lo = std::min(m0, m1);
    double hi = std::max(m0, m1);
    if (disc < 0) {
        return 0.5 * (m0 + m1);
    }
    double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    for (double root : {q / a, c / q}) {
        if (root > lo && root < hi) {
            return root;
        }
    }
    return 0.5 * (m0 + m1);
}

}  // namespace lpnq
