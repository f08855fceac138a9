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

#ifndef LPNQ_HARNESS_CAMPAIGN_H
#define LPNQ_HARNESS_CAMPAIGN_H

#include <functional>
#include <vector>

#include "lpnq/harness/config.h"
#include "lpnq/readout.h"
#include "lpnq/stats.h"

namespace lpnq {

struct SolverResult {
    SolverId solver;
    ErrorCurve curve;
    NInterval n_target;
};

struct KeyResult {
    Key key;
    /// Same order as ExperimentConfig::solvers.
    std::vector<SolverResult> solvers;
};

struct PointResult {
    NoisePoint point;
    std::vector<KeyResult> keys;
    /// Key-averaged curve and interval-averaged N at target, per solver.
    std::vector<SolverResult> average;
};

struct CampaignResult {
    ExperimentConfig config;
    std::vector<PointResult> points;
};

/// Calibration and query pool for one (noise point, key, mode).
struct PoolData {
    size_t point;
    Key key;
    OracleMode mode;
    CalibrationSet calibration;
    std::vector<QueryRecord> records;
};

using PoolSink = std::function<void(const PoolData &)>;

constexpr size_t kPoolBlock = 1000;

/// Root stream of one pool: seed -> point -> key bits -> mode. Children:
/// split(1) calibration, split(2).split(block) records, split(3) resampling.
RandomStream pool_stream(uint64_t master_seed, size_t point, const Key &key, OracleMode mode);

PoolData simulate_pool(const ExperimentConfig &config, const NoisePoint &point, const Key &key, OracleMode mode,
                       size_t threads);

/// Ancilla misassignment rate implied by a calibration, clamped to [0, 0.5].
/// Used as eta_a by the postselected analog solver.
double postselection_error(const CalibrationSet &calibration);

/// Generates every pool of the campaign without solving, in output order.
void simulate_pools(const ExperimentConfig &config, size_t threads, const PoolSink &sink);

/// Generates pools, resamples every solver over the N grid and reduces the
/// counts to curves and N-at-target intervals. Pools are handed to `sink`
/// (if set) in a fixed order before they are released.
CampaignResult run_campaign(const ExperimentConfig &config, size_t threads, const PoolSink &sink = {});

}  // namespace lpnq

#endif
