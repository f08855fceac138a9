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

#ifndef LPNQ_SOLVERS_H
#define LPNQ_SOLVERS_H

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lpnq/oracle.h"
#include "lpnq/random.h"
#include "lpnq/readout.h"

namespace lpnq {

enum class SolverId {
    CDigital,      // disagreement minimization on digitized bits
    QDigital,      // postselect a = 1, bitwise majority vote
    CBayes,        // posterior over keys from analog voltages
    QAnalog,       // postselect a = 1, average data voltages, calibrated thresholds
    QPrimeAnalog,  // QAnalog without postselection
};

std::string_view solver_name(SolverId id);
SolverId parse_solver(std::string_view text);
/// Oracle mode whose records the solver consumes.
OracleMode solver_mode(SolverId id);

struct QueryBatch {
    int n;
    std::span<const QueryRecord> records;
    const CalibrationSet &calibration;
};

struct KeyEstimate {
    Key key;
    /// Distance for CDigital, smallest vote margin for QDigital, log-posterior
    /// for CBayes, smallest |average - threshold| for the analog quantum solvers.
    double score = 0;
    bool tie_broken = false;
};

KeyEstimate solve_c_digital(const QueryBatch &batch, RandomStream &rng);
KeyEstimate solve_q_digital(const QueryBatch &batch, RandomStream &rng);
KeyEstimate solve_c_bayes(const QueryBatch &batch, RandomStream &rng);
KeyEstimate solve_q_analog(const QueryBatch &batch, double eta_a, RandomStream &rng);
KeyEstimate solve_qprime_analog(const QueryBatch &batch, RandomStream &rng);

/// Smallest rescaled sigma used by the Bayesian likelihood; a noiseless
/// calibration would otherwise divide by zero.
constexpr double kMinBayesSigma = 1e-6;

/// Per-record features of a fixed query pool, computed once so that many
/// resampled subsets can be solved cheaply.
///
/// Every solver is a reduction over per-record features: digitized bits and a
/// disagreement mask for CDigital, a per-key log-likelihood row for CBayes, and
/// rescaled data voltages for the analog quantum solvers. The batch-level
/// solve_* functions run the same reductions over the whole batch.
class PreparedPool {
   public:
    /// `eta_a` is the ancilla assignment error assumed by the QAnalog thresholds.
    PreparedPool(int n, std::span<const QueryRecord> records, const CalibrationSet &calibration, double eta_a);

    int n() const {
        return n_;
    }
    size_t size() const {
        return digital_a_.size();
    }

    /// Solves using only the records at `indices`.
    KeyEstimate solve(SolverId id, std::span<const uint32_t> indices, RandomStream &rng) const;
    KeyEstimate solve_all(SolverId id, RandomStream &rng) const;

    double q_threshold(int i) const {
        return q_thresholds_[i];
    }
    double qprime_threshold(int i) const {
        return qprime_thresholds_[i];
    }

   private:
    template <typename Indices>
    KeyEstimate dispatch(SolverId id, const Indices &indices, RandomStream &rng) const;
    template <typename Indices>
    KeyEstimate reduce_c_digital(const Indices &indices, RandomStream &rng) const;
    template <typename Indices>
    KeyEstimate reduce_q_digital(const Indices &indices, RandomStream &rng) const;
    template <typename Indices>
    KeyEstimate reduce_c_bayes(const Indices &indices, RandomStream &rng) const;
    template <typename Indices>
    KeyEstimate reduce_analog(const Indices &indices, bool postselect, const std::vector<double> &thresholds,
                              RandomStream &rng) const;

    int n_;
    size_t num_keys_;
    std::vector<uint8_t> digital_a_;
    std::vector<uint32_t> digital_d_;
    std::vector<uint64_t> disagree_;    // bit k set when key k mispredicts the ancilla
    std::vector<double> log_likelihood_;  // num_keys_ entries per record
    std::vector<double> rescaled_d_;      // n_ entries per record
    std::vector<double> q_thresholds_;
    std::vector<double> qprime_thresholds_;
};

}  // namespace lpnq

#endif
