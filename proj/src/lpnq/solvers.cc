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

#include "lpnq/solvers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ranges>
#include <stdexcept>
#include <string>

namespace lpnq {

std::string_view solver_name(SolverId id) {
    switch (id) {
        case SolverId::CDigital:
            return "c_digital";
        case SolverId::QDigital:
            return "q_digital";
        case SolverId::CBayes:
            return "c_bayes";
        case SolverId::QAnalog:
            return "q_analog";
        case SolverId::QPrimeAnalog:
            return "qprime_analog";
    }
    throw std::invalid_argument("unknown solver id");
}

SolverId parse_solver(std::string_view text) {
    for (auto id : {SolverId::CDigital, SolverId::QDigital, SolverId::CBayes, SolverId::QAnalog,
                    SolverId::QPrimeAnalog}) {
        if (solver_name(id) == text) {
            return id;
        }
    }
    throw std::invalid_argument("unknown solver '" + std::string(text) + "'");
}

OracleMode solver_mode(SolverId id) {
    return id == SolverId::CDigital || id == SolverId::CBayes ? OracleMode::Classical : OracleMode::Quantum;
}

PreparedPool::PreparedPool(int n, std::span<const QueryRecord> records, const CalibrationSet &calibration,
                           double eta_a)
    : n_(n), num_keys_(size_t{1} << n) {
    if (calibration.n() != n) {
        throw std::invalid_argument("calibration does not match the register size");
    }
    if (!(eta_a >= 0 && eta_a <= 0.5)) {
        throw std::invalid_argument("eta_a must be in [0, 0.5]");
    }

    std::vector<double> thresholds(n + 1);
    std::vector<ReadoutParams> unit(n + 1);
    std::vector<double> bayes_sigma(n + 1);
    for (int q = 0; q <= n; q++) {
        const auto &p = calibration.qubits[q];
        thresholds[q] = p.midpoint();
        unit[q] = rescaled(p);
        double pooled = std::sqrt(0.5 * (unit[q].sigma0 * unit[q].sigma0 + unit[q].sigma1 * unit[q].sigma1));
        bayes_sigma[q] = std::max(pooled, kMinBayesSigma);
    }
    for (int i = 0; i < n; i++) {
        q_thresholds_.push_back(calibrated_threshold(unit[1 + i], eta_a));
        qprime_thresholds_.push_back(calibrated_threshold(unit[1 + i], 0.5));
    }

    size_t m = records.size();
    digital_a_.resize(m);
    digital_d_.resize(m);
    disagree_.resize(m);
    log_likelihood_.resize(m * num_keys_);
    rescaled_d_.resize(m * n);

    std::vector<double> data_term(num_keys_);
    for (size_t r = 0; r < m; r++) {
        const auto &rec = records[r];
        if (static_cast<int>(rec.v_d.size()) != n) {
            throw std::invalid_argument("query record has the wrong number of data voltages");
        }
        if (!std::isfinite(rec.v_a) || !std::all_of(rec.v_d.begin(), rec.v_d.end(), [](double v) {
                return std::isfinite(v);
            })) {
            throw std::invalid_argument("query record contains a non-finite voltage");
        }

        bool a = digitize(rec.v_a, thresholds[0]);
        uint32_t d = 0;
        for (int i = 0; i < n; i++) {
            if (digitize(rec.v_d[i], thresholds[1 + i])) {
                d |= 1u << i;
            }
            rescaled_d_[r * n + i] = rescale(rec.v_d[i], calibration.qubits[1 + i]);
        }
        digital_a_[r] = a;
        digital_d_[r] = d;

        uint64_t mask = 0;
        for (uint32_t k = 0; k < num_keys_; k++) {
            bool predicted = (__builtin_popcount(d & k) & 1) != 0;
            if (predicted != a) {
                mask |= uint64_t{1} << k;
            }
        }
        disagree_[r] = mask;

        // log sum_D exp[-(V_A - D.k mod 2)^2 / 2 s_A^2 - sum_i (V_Di - D_i)^2 / 2 s_i^2]
        double va = rescale(rec.v_a, calibration.qubits[0]);
        double two_var_a = 2 * bayes_sigma[0] * bayes_sigma[0];
        double anc[2] = {-(va * va) / two_var_a, -((va - 1) * (va - 1)) / two_var_a};
        for (uint32_t dd = 0; dd < num_keys_; dd++) {
            double t = 0;
            for (int i = 0; i < n; i++) {
                double diff = rescaled_d_[r * n + i] - static_cast<double>((dd >> i) & 1);
                t -= diff * diff / (2 * bayes_sigma[1 + i] * bayes_sigma[1 + i]);
            }
            data_term[dd] = t;
        }
        for (uint32_t k = 0; k < num_keys_; k++) {
            double best = -std::numeric_limits<double>::infinity();
            for (uint32_t dd = 0; dd < num_keys_; dd++) {
                best = std::max(best, data_term[dd] + anc[__builtin_popcount(dd & k) & 1]);
            }
            double sum = 0;
            for (uint32_t dd = 0; dd < num_keys_; dd++) {
                sum += std::exp(data_term[dd] + anc[__builtin_popcount(dd & k) & 1] - best);
            }
            log_likelihood_[r * num_keys_ + k] = best + std::log(sum);
        }
    }
}

namespace {

/// Uniform choice among the candidates; `tie_broken` is set when there is more than one.
KeyEstimate pick(int n, const std::vector<uint32_t> &candidates, double score, RandomStream &rng) {
    KeyEstimate est;
    est.score = score;
    est.tie_broken = candidates.size() > 1;
    uint32_t choice = est.tie_broken ? candidates[rng.below(candidates.size())] : candidates[0];
    est.key = Key(n, choice);
    return est;
}

KeyEstimate random_key(int n, RandomStream &rng) {
    KeyEstimate est;
    est.key = Key(n, static_cast<uint32_t>(rng.below(uint64_t{1} << n)));
    est.tie_broken = true;
    return est;
}

}  // namespace

template <typename Indices>
KeyEstimate PreparedPool::reduce_c_digital(const Indices &indices, RandomStream &rng) const {
    std::vector<uint32_t> distance(num_keys_, 0);
    for (auto r : indices) {
        uint64_t mask = disagree_[r];
        for (uint32_t k = 0; k < num_keys_; k++) {
            distance[k] += (mask >> k) & 1;
        }
    }
    uint32_t best = *std::min_element(distance.begin(), distance.end());
    std::vector<uint32_t> candidates;
    for (uint32_t k = 0; k < num_keys_; k++) {
        if (distance[k] == best) {
            candidates.push_back(k);
        }
    }
    return pick(n_, candidates, best, rng);
}

template <typename Indices>
KeyEstimate PreparedPool::reduce_q_digital(const Indices &indices, RandomStream &rng) const {
    std::vector<uint32_t> ones(n_, 0);
    uint32_t kept = 0;
    for (auto r : indices) {
        if (!digital_a_[r]) {
            continue;
        }
        kept++;
        uint32_t d = digital_d_[r];
        for (int i = 0; i < n_; i++) {
            ones[i] += (d >> i) & 1;
        }
    }
    if (kept == 0) {
        return random_key(n_, rng);
    }
    KeyEstimate est;
    uint32_t bits = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; i++) {
        int64_t m = 2 * static_cast<int64_t>(ones[i]) - kept;
        margin = std::min(margin, static_cast<double>(std::abs(m)));
        bool bit;
        if (m == 0) {
            bit = rng.coin();
            est.tie_broken = true;
        } else {
            bit = m > 0;
        }
        bits |= static_cast<uint32_t>(bit) << i;
    }
    est.key = Key(n_, bits);
    est.score = margin;
    return est;
}

template <typename Indices>
KeyEstimate PreparedPool::reduce_c_bayes(const Indices &indices, RandomStream &rng) const {
    // Uniform prior p_0(k); accumulate log p_m(k | V) record by record.
    std::vector<double> log_post(num_keys_, 0.0);
    for (auto r : indices) {
        const double *row = &log_likelihood_[r * num_keys_];
        for (uint32_t k = 0; k < num_keys_; k++) {
            log_post[k] += row[k];
        }
    }
    double best = *std::max_element(log_post.begin(), log_post.end());
    std::vector<uint32_t> candidates;
    for (uint32_t k = 0; k < num_keys_; k++) {
        if (log_post[k] == best) {
            candidates.push_back(k);
        }
    }
    return pick(n_, candidates, best, rng);
}

template <typename Indices>
KeyEstimate PreparedPool::reduce_analog(const Indices &indices, bool postselect, const std::vector<double> &thresholds,
                                        RandomStream &rng) const {
    std::vector<double> sum(n_, 0.0);
    uint32_t kept = 0;
    for (auto r : indices) {
        if (postselect && !digital_a_[r]) {
            continue;
        }
        kept++;
        const double *v = &rescaled_d_[r * n_];
        for (int i = 0; i < n_; i++) {
            sum[i] += v[i];
        }
    }
    if (kept == 0) {
        return random_key(n_, rng);
    }
    KeyEstimate est;
    uint32_t bits = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; i++) {
        double avg = sum[i] / kept;
        margin = std::min(margin, std::abs(avg - thresholds[i]));
        if (digitize(avg, thresholds[i])) {
            bits |= 1u << i;
        }
    }
    est.key = Key(n_, bits);
    est.score = margin;
    return est;
}

template <typename Indices>
KeyEstimate PreparedPool::dispatch(SolverId id, const Indices &indices, RandomStream &rng) const {
    switch (id) {
        case SolverId::CDigital:
            return reduce_c_digital(indices, rng);
        case SolverId::QDigital:
            return reduce_q_digital(indices, rng);
        case SolverId::CBayes:
            return reduce_c_bayes(indices, rng);
        case SolverId::QAnalog:
            return reduce_analog(indices, true, q_thresholds_, rng);
        case SolverId::QPrimeAnalog:
            return reduce_analog(indices, false, qprime_thresholds_, rng);
    }
    throw std::invalid_argument("unknown solver id");
}

KeyEstimate PreparedPool::solve(SolverId id, std::span<const uint32_t> indices, RandomStream &rng) const {
    return dispatch(id, indices, rng);
}

KeyEstimate PreparedPool::solve_all(SolverId id, RandomStream &rng) const {
    return dispatch(id, std::views::iota(size_t{0}, size()), rng);
}

namespace {

KeyEstimate solve_batch(SolverId id, const QueryBatch &batch, double eta_a, RandomStream &rng) {
    PreparedPool pool(batch.n, batch.records, batch.calibration, eta_a);
    return pool.solve_all(id, rng);
}

}  // namespace

KeyEstimate solve_c_digital(const QueryBatch &batch, RandomStream &rng) {
    if (batch.records.empty()) {
        throw std::invalid_argument("solve_c_digital: empty batch");
    }
    return solve_batch(SolverId::CDigital, batch, 0, rng);
}

KeyEstimate solve_q_digital(const QueryBatch &batch, RandomStream &rng) {
    return solve_batch(SolverId::QDigital, batch, 0, rng);
}

KeyEstimate solve_c_bayes(const QueryBatch &batch, RandomStream &rng) {
    if (batch.records.empty()) {
        throw std::invalid_argument("solve_c_bayes: empty batch");
    }
    return solve_batch(SolverId::CBayes, batch, 0, rng);
}

KeyEstimate solve_q_analog(const QueryBatch &batch, double eta_a, RandomStream &rng) {
    return solve_batch(SolverId::QAnalog, batch, eta_a, rng);
}

KeyEstimate solve_qprime_analog(const QueryBatch &batch, RandomStream &rng) {
    return solve_batch(SolverId::QPrimeAnalog, batch, 0.5, rng);
}

}  // namespace lpnq
