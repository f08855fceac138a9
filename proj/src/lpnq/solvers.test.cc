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

#include <cmath>
#include <map>

#include "gtest/gtest.h"
#include "lpnq/stats.h"

using namespace lpnq;

namespace {

CalibrationSet flat_calibration(int n, double sigma) {
    CalibrationSet cal;
    cal.shots_per_point = 100;
    cal.qubits.assign(n + 1, ReadoutParams{0, 1, sigma, sigma});
    return cal;
}

QueryRecord exact_record(bool a, uint32_t d, int n) {
    QueryRecord r;
    r.v_a = a ? 1 : 0;
    for (int i = 0; i < n; i++) {
        r.v_d.push_back(static_cast<double>((d >> i) & 1));
    }
    return r;
}

std::vector<QueryRecord> noiseless_records(const Key &key, OracleMode mode, size_t count, RandomStream &rng) {
    auto circuit = build_circuit(key, mode);
    NoiseModel noise = NoiseModel::uniform(key.size(), 0, 0, 0);
    std::vector<QueryRecord> out;
    for (size_t m = 0; m < count; m++) {
        auto shot = sample_shot(circuit, noise, rng);
        out.push_back(exact_record(shot.a, shot.d, key.size()));
    }
    return out;
}

KeyEstimate run(SolverId id, int n, const std::vector<QueryRecord> &records, const CalibrationSet &cal,
                RandomStream &rng, double eta_a = 0) {
    QueryBatch batch{n, records, cal};
    switch (id) {
        case SolverId::CDigital:
            return solve_c_digital(batch, rng);
        case SolverId::QDigital:
            return solve_q_digital(batch, rng);
        case SolverId::CBayes:
            return solve_c_bayes(batch, rng);
        case SolverId::QAnalog:
            return solve_q_analog(batch, eta_a, rng);
        case SolverId::QPrimeAnalog:
            return solve_qprime_analog(batch, rng);
    }
    throw std::logic_error("unreachable");
}

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// P(Bin(n, p) >= k)
double binomial_upper_tail(int n, double p, int k) {
    double total = 0;
    for (int j = k; j <= n; j++) {
        total += std::exp(log_choose(n, j) + j * std::log(p) + (n - j) * std::log1p(-p));
    }
    return total;
}

double binomial_pmf(int n, double p, int k) {
    return std::exp(log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
}

/// Exact error probability of disagreement minimization for n = 2 when each
/// label is flipped with probability q and ties are broken uniformly.
///
/// Queries with d = 00 do not separate keys. A query with d != 0 separates the
/// truth from the two wrong keys e with d.e = 1, moving their distance by +1
/// (label intact) or -1 (label flipped) relative to the truth.
double exact_c_digital_error(int queries, double q) {
    double total = 0;
    for (int m1 = 0; m1 <= queries; m1++) {
        for (int m2 = 0; m1 + m2 <= queries; m2++) {
            for (int m3 = 0; m1 + m2 + m3 <= queries; m3++) {
                int m0 = queries - m1 - m2 - m3;
                double log_w = std::lgamma(queries + 1.0) - std::lgamma(m0 + 1.0) - std::lgamma(m1 + 1.0) -
                               std::lgamma(m2 + 1.0) - std::lgamma(m3 + 1.0) + queries * std::log(0.25);
                double w = std::exp(log_w);
                for (int p1 = 0; p1 <= m1; p1++) {
                    double w1 = w * binomial_pmf(m1, 1 - q, p1);
                    for (int p2 = 0; p2 <= m2; p2++) {
                        double w2 = w1 * binomial_pmf(m2, 1 - q, p2);
                        for (int p3 = 0; p3 <= m3; p3++) {
                            double w3 = w2 * binomial_pmf(m3, 1 - q, p3);
                            int s1 = 2 * p1 - m1, s2 = 2 * p2 - m2, s3 = 2 * p3 - m3;
                            int delta[3] = {s1 + s3, s2 + s3, s1 + s2};
                            bool lost = false;
                            int ties = 0;
                            for (int dj : delta) {
                                lost = lost || dj < 0;
                                ties += dj == 0;
                            }
                            total += w3 * (lost ? 1.0 : 1.0 - 1.0 / (1 + ties));
                        }
                    }
                }
            }
        }
    }
    return total;
}

/// Textbook posterior over keys from true readout parameters, used as an
/// independent reference for the Bayesian solver.
uint32_t reference_bayes(int n, const std::vector<double> &va, const std::vector<std::vector<double>> &vd,
                         double sigma_a, double sigma_d, RandomStream &rng) {
    uint32_t keys = 1u << n;
    std::vector<double> log_post(keys, 0);
    for (size_t m = 0; m < va.size(); m++) {
        for (uint32_t k = 0; k < keys; k++) {
            double sum = 0;
            for (uint32_t d = 0; d < keys; d++) {
                double parity = __builtin_parity(d & k);
                double e = std::pow(va[m] - parity, 2) / (2 * sigma_a * sigma_a);
                for (int i = 0; i < n; i++) {
                    e += std::pow(vd[m][i] - ((d >> i) & 1), 2) / (2 * sigma_d * sigma_d);
                }
                sum += std::exp(-e);
            }
            log_post[k] += std::log(sum);
        }
    }
    double best = -INFINITY;
    std::vector<uint32_t> arg;
    for (uint32_t k = 0; k < keys; k++) {
        if (log_post[k] > best) {
            best = log_post[k];
            arg = {k};
        } else if (log_post[k] == best) {
            arg.push_back(k);
        }
    }
    return arg[rng.below(arg.size())];
}

}  // namespace

TEST(solver_names, round_trip) {
    for (auto id : {SolverId::CDigital, SolverId::QDigital, SolverId::CBayes, SolverId::QAnalog,
                    SolverId::QPrimeAnalog}) {
        ASSERT_EQ(parse_solver(solver_name(id)), id);
    }
    ASSERT_THROW(parse_solver("bkw"), std::invalid_argument);
    ASSERT_EQ(solver_mode(SolverId::CBayes), OracleMode::Classical);
    ASSERT_EQ(solver_mode(SolverId::QPrimeAnalog), OracleMode::Quantum);
}

TEST(solve_c_digital, noiseless_recovery) {
    RandomStream rng(1);
    Key key = Key::from_string("10");
    auto records = noiseless_records(key, OracleMode::Classical, 40, rng);
    auto est = run(SolverId::CDigital, 2, records, flat_calibration(2, 0.1), rng);
    ASSERT_EQ(est.key, key);
    ASSERT_EQ(est.score, 0.0);
    ASSERT_FALSE(est.tie_broken);
}

TEST(solve_c_digital, uniform_tie_break) {
    // d = (1, 0), a = 1 is explained equally well by keys 10 and 11.
    std::vector<QueryRecord> records = {exact_record(true, 0b01, 2)};
    auto cal = flat_calibration(2, 0.1);
    std::map<std::string, int> counts;
    RandomStream root(2);
    for (int t = 0; t < 1000; t++) {
        RandomStream rng = root.split(t);
        auto est = run(SolverId::CDigital, 2, records, cal, rng);
        ASSERT_TRUE(est.tie_broken);
        counts[est.key.str()]++;
    }
    ASSERT_EQ(counts.size(), 2u);
    ASSERT_NEAR(counts["10"] / 1000.0, 0.5, 0.03);
    ASSERT_NEAR(counts["11"] / 1000.0, 0.5, 0.03);
}

TEST(solve_c_digital, equals_exhaustive_maximum_likelihood) {
    // Every dataset of up to 4 digital queries for n = 2. Under independent
    // label flips with rate q < 1/2, the likelihood of key k is
    // prod_m (q if label disagrees else 1 - q).
    const double q = 0.3;
    auto cal = flat_calibration(2, 0.1);
    for (int queries = 1; queries <= 4; queries++) {
        size_t datasets = size_t{1} << (3 * queries);
        for (size_t code = 0; code < datasets; code++) {
            std::vector<QueryRecord> records;
            for (int m = 0; m < queries; m++) {
                auto o = ShotOutcome::from_index((code >> (3 * m)) & 7);
                records.push_back(exact_record(o.a, o.d, 2));
            }
            std::vector<double> lik(4, 1.0);
            for (uint32_t k = 0; k < 4; k++) {
                for (const auto &r : records) {
                    uint32_t d = (r.v_d[0] > 0.5) | ((r.v_d[1] > 0.5) << 1);
                    bool label = r.v_a > 0.5;
                    lik[k] *= (__builtin_parity(d & k) != 0) == label ? 1 - q : q;
                }
            }
            double best = *std::max_element(lik.begin(), lik.end());
            int winners = 0;
            for (double l : lik) {
                winners += std::abs(l - best) < 1e-15;
            }
            RandomStream rng(code);
            auto est = run(SolverId::CDigital, 2, records, cal, rng);
            ASSERT_NEAR(lik[est.key.bits()], best, 1e-15) << queries << " " << code;
            ASSERT_EQ(est.tie_broken, winners > 1);
        }
    }
}

TEST(solve_c_digital, error_matches_exact_enumeration) {
    const double q = 0.3;
    Key truth = Key::from_string("11");
    auto cal = flat_calibration(2, 0.1);
    for (int queries : {5, 20, 200}) {
        double exact = queries <= 20 ? exact_c_digital_error(queries, q) : -1;
        auto counts = estimate_error_fresh(4000, RandomStream(queries), [&](RandomStream &rng) {
            std::vector<QueryRecord> records;
            for (int m = 0; m < queries; m++) {
                auto d = static_cast<uint32_t>(rng.below(4));
                bool a = truth.parity_with(d) != rng.bernoulli(q);
                records.push_back(exact_record(a, d, 2));
            }
            return !(run(SolverId::CDigital, 2, records, cal, rng).key == truth);
        });
        auto iv = jeffreys_interval(counts.failures, counts.trials, 0.999);
        if (exact >= 0) {
            ASSERT_GE(exact, iv.lo) << queries;
            ASSERT_LE(exact, iv.hi) << queries;
        } else {
            // Each wrong key has expected margin 0.4 per separating query; the
            // error probability is far below one in 4000.
            ASSERT_LE(counts.failures, 2u);
        }
    }
}

TEST(solve_q_digital, noiseless_recovery) {
    RandomStream rng(3);
    auto cal = flat_calibration(3, 0.1);
    for (const auto &key : Key::all(3)) {
        auto records = noiseless_records(key, OracleMode::Quantum, 16, rng);
        auto est = run(SolverId::QDigital, 3, records, cal, rng);
        ASSERT_EQ(est.key, key);
    }
}

TEST(solve_q_digital, nothing_postselected) {
    std::vector<QueryRecord> records(5, exact_record(false, 0b11, 2));
    auto cal = flat_calibration(2, 0.1);
    std::map<uint32_t, int> counts;
    RandomStream root(4);
    for (int t = 0; t < 4000; t++) {
        RandomStream rng = root.split(t);
        auto est = run(SolverId::QDigital, 2, records, cal, rng);
        ASSERT_TRUE(est.tie_broken);
        counts[est.key.bits()]++;
    }
    for (uint32_t k = 0; k < 4; k++) {
        ASSERT_NEAR(counts[k] / 4000.0, 0.25, 0.03);
    }
}

TEST(solve_q_digital, majority_error_is_binomial_tail) {
    auto cal = flat_calibration(1, 0.1);
    struct Case {
        int kept;
        double flip;
    };
    for (auto tc : {Case{99, 0.3}, Case{99, 0.45}, Case{98, 0.45}}) {
        double exact = binomial_upper_tail(tc.kept, tc.flip, tc.kept / 2 + 1);
        if (tc.kept % 2 == 0) {
            exact += 0.5 * binomial_pmf(tc.kept, tc.flip, tc.kept / 2);
        }
        auto counts = estimate_error_fresh(20000, RandomStream(tc.kept * 100 + 7), [&](RandomStream &rng) {
            std::vector<QueryRecord> records;
            for (int m = 0; m < tc.kept; m++) {
                records.push_back(exact_record(true, rng.bernoulli(tc.flip) ? 0 : 1, 1));
            }
            return run(SolverId::QDigital, 1, records, cal, rng).key.bits() != 1;
        });
        auto iv = jeffreys_interval(counts.failures, counts.trials, 0.999);
        ASSERT_GE(exact, iv.lo) << tc.kept << " " << tc.flip;
        ASSERT_LE(exact, iv.hi) << tc.kept << " " << tc.flip;
    }
}

TEST(solve_c_bayes, likelihood_dominance) {
    // (d = 01, a = 1) rules out keys with k_2 = 0; (d = 10, a = 0) rules out k_1 = 1.
    std::vector<QueryRecord> records = {exact_record(true, 0b10, 2), exact_record(false, 0b01, 2)};
    RandomStream rng(5);
    auto est = run(SolverId::CBayes, 2, records, flat_calibration(2, 0.1), rng);
    ASSERT_EQ(est.key, Key::from_string("01"));
    ASSERT_FALSE(est.tie_broken);
}

TEST(solve_c_bayes, zero_queries_is_uniform) {
    auto cal = flat_calibration(2, 0.3);
    std::vector<QueryRecord> none;
    PreparedPool pool(2, none, cal, 0);
    std::map<uint32_t, int> counts;
    RandomStream root(6);
    for (int t = 0; t < 4000; t++) {
        RandomStream rng = root.split(t);
        auto est = pool.solve(SolverId::CBayes, {}, rng);
        ASSERT_TRUE(est.tie_broken);
        counts[est.key.bits()]++;
    }
    for (uint32_t k = 0; k < 4; k++) {
        ASSERT_NEAR(counts[k] / 4000.0, 0.25, 0.03);
    }
}

TEST(solve_c_bayes, rejects_bad_batches) {
    RandomStream rng(7);
    auto cal = flat_calibration(2, 0.3);
    std::vector<QueryRecord> none;
    ASSERT_THROW(run(SolverId::CBayes, 2, none, cal, rng), std::invalid_argument);
    ASSERT_THROW(run(SolverId::CDigital, 2, none, cal, rng), std::invalid_argument);
    std::vector<QueryRecord> bad = {exact_record(true, 1, 2)};
    bad[0].v_d[1] = NAN;
    ASSERT_THROW(run(SolverId::CBayes, 2, bad, cal, rng), std::invalid_argument);
    std::vector<QueryRecord> short_record = {exact_record(true, 1, 1)};
    ASSERT_THROW(run(SolverId::CBayes, 2, short_record, cal, rng), std::invalid_argument);
}

TEST(solve_c_bayes, error_matches_reference_posterior) {
    // Reference: simulate the generative model directly and apply the posterior
    // with the true readout parameters. Solver: oracle sampler, readout sampler
    // and estimated calibration.
    Key truth = Key::from_string("11");
    struct Case {
        double sigma;
        int queries;
    };
    for (auto tc : {Case{0.304, 50}, Case{0.6, 12}}) {
        const size_t replicates = 10000;
        auto reference = estimate_error_fresh(replicates, RandomStream(11), [&](RandomStream &rng) {
            std::vector<double> va;
            std::vector<std::vector<double>> vd;
            for (int m = 0; m < tc.queries; m++) {
                auto d = static_cast<uint32_t>(rng.below(4));
                va.push_back(truth.parity_with(d) + tc.sigma * rng.normal());
                vd.push_back({(d & 1) + tc.sigma * rng.normal(), ((d >> 1) & 1) + tc.sigma * rng.normal()});
            }
            return reference_bayes(2, va, vd, tc.sigma, tc.sigma, rng) != truth.bits();
        });

        NoiseModel noise = NoiseModel::uniform(2, 0, eta_from_sigma(tc.sigma), eta_from_sigma(tc.sigma));
        auto truth_params = readout_params_for_noise(noise);
        auto circuit = build_circuit(truth, OracleMode::Classical);
        RandomStream cal_rng(12);
        auto cal = generate_calibration(noise, kDefaultCalibrationShots, cal_rng);
        auto solver = estimate_error_fresh(replicates, RandomStream(13), [&](RandomStream &rng) {
            std::vector<QueryRecord> records;
            for (int m = 0; m < tc.queries; m++) {
                records.push_back(sample_record(sample_shot(circuit, noise, rng), truth_params, rng));
            }
            return !(run(SolverId::CBayes, 2, records, cal, rng).key == truth);
        });
        auto a = jeffreys_interval(reference.failures, replicates, 0.95);
        auto b = jeffreys_interval(solver.failures, replicates, 0.95);
        ASSERT_LE(a.lo, b.hi) << tc.sigma << " ref " << reference.failures << " solver " << solver.failures;
        ASSERT_LE(b.lo, a.hi) << tc.sigma << " ref " << reference.failures << " solver " << solver.failures;
    }
}

TEST(solve_q_analog, noiseless_recovery) {
    RandomStream rng(14);
    auto cal = flat_calibration(3, 0.0);
    for (const auto &key : Key::all(3)) {
        auto records = noiseless_records(key, OracleMode::Quantum, 16, rng);
        ASSERT_EQ(run(SolverId::QAnalog, 3, records, cal, rng, 0.05).key, key);
        ASSERT_EQ(run(SolverId::QPrimeAnalog, 3, records, cal, rng).key, key);
    }
}

TEST(solve_q_analog, mixture_mean_shifts_towards_zero) {
    // Kept records have d = 1 with probability 0.8 and d = 0 otherwise; both
    // voltage distributions have variance 0.25.
    const double eta_a = 0.2;
    CalibrationSet cal = flat_calibration(1, 0.5);
    cal.qubits[0] = {0, 1, 0, 0};
    RandomStream rng(15);
    std::vector<QueryRecord> records;
    double sum = 0;
    const int count = 100000;
    for (int m = 0; m < count; m++) {
        bool d = !rng.bernoulli(eta_a);
        QueryRecord r;
        r.v_a = 1;
        r.v_d = {d + 0.5 * rng.normal()};
        sum += r.v_d[0];
        records.push_back(r);
    }
    ASSERT_NEAR(sum / count, 0.8, 0.01);
    PreparedPool pool(1, records, cal, eta_a);
    ASSERT_DOUBLE_EQ(pool.q_threshold(0), calibrated_threshold({0, 1, 0.5, 0.5}, eta_a));
    ASSERT_LT(pool.q_threshold(0), 0.5);
    ASSERT_EQ(pool.solve_all(SolverId::QAnalog, rng).key.bits(), 1u);
}

TEST(solve_q_analog, zero_key_and_empty_postselection) {
    RandomStream rng(16);
    auto cal = flat_calibration(3, 0.3);
    NoiseModel noise = NoiseModel::uniform(3, 0, 0.2, 0.2);
    auto truth = readout_params_for_noise(noise);
    auto circuit = build_circuit(Key(3, 0), OracleMode::Quantum);
    std::vector<QueryRecord> records;
    for (int m = 0; m < 2000; m++) {
        records.push_back(sample_record(sample_shot(circuit, noise, rng), truth, rng));
    }
    for (double eta : {0.0, 0.2, 0.5}) {
        ASSERT_EQ(run(SolverId::QAnalog, 3, records, cal, rng, eta).key.bits(), 0u);
    }
    std::vector<QueryRecord> unselected(4, exact_record(false, 0, 3));
    auto est = run(SolverId::QAnalog, 3, unselected, cal, rng, 0.1);
    ASSERT_TRUE(est.tie_broken);
}

TEST(solve_qprime_analog, half_mixture_recovers_bit) {
    // Noiseless records: half have d = 0, half d = k, so <V_Di> -> k_i / 2.
    std::vector<QueryRecord> records;
    for (int m = 0; m < 10; m++) {
        records.push_back(exact_record(false, 0, 2));
        records.push_back(exact_record(true, 0b01, 2));
    }
    CalibrationSet cal = flat_calibration(2, 0.0);
    RandomStream rng(17);
    PreparedPool pool(2, records, cal, 0.05);
    ASSERT_LT(pool.qprime_threshold(0), 0.5);
    ASSERT_GT(pool.qprime_threshold(0), 0.0);
    auto est = pool.solve_all(SolverId::QPrimeAnalog, rng);
    ASSERT_EQ(est.key.str(), "10");
    ASSERT_FALSE(est.tie_broken);
}

TEST(solvers, permutation_equivariance) {
    // Swapping D_1 and D_3 in records and calibration swaps k_1 and k_3 in every estimate.
    const int n = 3;
    NoiseModel noise = NoiseModel::uniform(n, 0.05, 0.1, 0.25);
    noise.eta_d = {0.2, 0.25, 0.3};
    auto truth_params = readout_params_for_noise(noise);
    RandomStream rng(18);
    auto cal = generate_calibration(noise, 1000, rng);
    CalibrationSet swapped_cal = cal;
    std::swap(swapped_cal.qubits[1], swapped_cal.qubits[3]);
    auto swap_bits = [](uint32_t k) { return (k & 2u) | ((k & 1u) << 2) | ((k >> 2) & 1u); };

    for (auto mode : {OracleMode::Classical, OracleMode::Quantum}) {
        for (const auto &key : Key::all(n)) {
            auto circuit = build_circuit(key, mode);
            std::vector<QueryRecord> records, swapped;
            for (int m = 0; m < 60; m++) {
                auto r = sample_record(sample_shot(circuit, noise, rng), truth_params, rng);
                records.push_back(r);
                std::swap(r.v_d[0], r.v_d[2]);
                swapped.push_back(r);
            }
            for (auto id : {SolverId::CDigital, SolverId::QDigital, SolverId::CBayes, SolverId::QAnalog,
                            SolverId::QPrimeAnalog}) {
                RandomStream r1(19), r2(19);
                auto a = run(id, n, records, cal, r1, 0.1);
                auto b = run(id, n, swapped, swapped_cal, r2, 0.1);
                ASSERT_EQ(a.tie_broken, b.tie_broken);
                if (!a.tie_broken) {
                    ASSERT_EQ(swap_bits(a.key.bits()), b.key.bits()) << solver_name(id) << " " << key.str();
                }
            }
        }
    }
}

TEST(prepared_pool, subset_matches_batch) {
    const int n = 2;
    NoiseModel noise = NoiseModel::uniform(n, 0.12, 0.05, 0.3);
    auto truth_params = readout_params_for_noise(noise);
    RandomStream rng(20);
    auto cal = generate_calibration(noise, 1000, rng);
    auto circuit = build_circuit(Key(n, 3), OracleMode::Quantum);
    std::vector<QueryRecord> records;
    for (int m = 0; m < 100; m++) {
        records.push_back(sample_record(sample_shot(circuit, noise, rng), truth_params, rng));
    }
    PreparedPool pool(n, records, cal, 0.05);
    std::vector<uint32_t> indices = {3, 17, 42, 99, 0, 58, 61};
    std::vector<QueryRecord> subset;
    for (auto i : indices) {
        subset.push_back(records[i]);
    }
    for (auto id : {SolverId::CDigital, SolverId::QDigital, SolverId::CBayes, SolverId::QAnalog,
                    SolverId::QPrimeAnalog}) {
        RandomStream r1(21), r2(21);
        auto a = pool.solve(id, indices, r1);
        auto b = run(id, n, subset, cal, r2, 0.05);
        ASSERT_EQ(a.key, b.key) << solver_name(id);
        ASSERT_NEAR(a.score, b.score, 1e-9) << solver_name(id);
        ASSERT_EQ(a.tie_broken, b.tie_broken);
    }
}
