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

#include "lpnq/harness/campaign.h"

#include <algorithm>

namespace lpnq {

RandomStream pool_stream(uint64_t master_seed, size_t point, const Key &key, OracleMode mode) {
    return RandomStream(master_seed).split(point).split(key.bits()).split(mode == OracleMode::Classical ? 0 : 1);
}

PoolData simulate_pool(const ExperimentConfig &config, const NoisePoint &point, const Key &key, OracleMode mode,
                       size_t threads) {
    PoolData pool{point.index, key, mode, {}, {}};
    RandomStream root = pool_stream(config.master_seed, point.index, key, mode);
    RandomStream cal_rng = root.split(1);
    pool.calibration = generate_calibration(point.noise, config.calibration_shots, cal_rng);

    auto circuit = build_circuit(key, mode);
    auto truth = readout_params_for_noise(point.noise);
    pool.records.resize(config.pool_size);
    size_t blocks = (config.pool_size + kPoolBlock - 1) / kPoolBlock;
    RandomStream record_root = root.split(2);
    parallel_for(blocks, threads, [&](size_t b) {
        RandomStream rng = record_root.split(b);
        size_t end = std::min(config.pool_size, (b + 1) * kPoolBlock);
        for (size_t i = b * kPoolBlock; i < end; i++) {
            pool.records[i] = sample_record(sample_shot(circuit, point.noise, rng), truth, rng);
        }
    });
    return pool;
}

double postselection_error(const CalibrationSet &calibration) {
    return std::clamp(assignment_error(calibration.ancilla()), 0.0, 0.5);
}

void simulate_pools(const ExperimentConfig &config, size_t threads, const PoolSink &sink) {
    config.validate();
    for (const auto &point : config.noise_points()) {
        for (const auto &key : config.keys()) {
            for (auto mode : config.modes()) {
                sink(simulate_pool(config, point, key, mode, threads));
            }
        }
    }
}

CampaignResult run_campaign(const ExperimentConfig &config, size_t threads, const PoolSink &sink) {
    config.validate();
    CampaignResult result{config, {}};
    auto grid = config.grid();
    double level = config.level();
    auto keys = config.keys();

    for (const auto &point : config.noise_points()) {
        PointResult pr{point, {}, {}};
        for (const auto &key : keys) {
            KeyResult kr{key, {}};
            kr.solvers.resize(config.solvers.size());
            for (auto mode : config.modes()) {
                PoolData pool = simulate_pool(config, point, key, mode, threads);
                if (sink) {
                    sink(pool);
                }
                std::vector<SolverId> ids;
                std::vector<size_t> slots;
                for (size_t s = 0; s < config.solvers.size(); s++) {
                    if (solver_mode(config.solvers[s]) == mode) {
                        ids.push_back(config.solvers[s]);
                        slots.push_back(s);
                    }
                }
                PreparedPool prepared(config.n, pool.records, pool.calibration, postselection_error(pool.calibration));
                RandomStream rs = pool_stream(config.master_seed, point.index, key, mode).split(3);
                auto counts = resample_failures(prepared, key, ids, grid, config.resample_trials, rs, threads);
                for (size_t j = 0; j < ids.size(); j++) {
                    std::vector<FailureCount> column;
                    for (const auto &row : counts) {
                        column.push_back(row[j]);
                    }
                    SolverResult sr{ids[j], build_error_curve(grid, column, level, key, ids[j]), {}};
                    sr.n_target = n_at_target(sr.curve, config.p_target);
                    kr.solvers[slots[j]] = std::move(sr);
                }
            }
            pr.keys.push_back(std::move(kr));
        }
        for (size_t s = 0; s < config.solvers.size(); s++) {
            std::vector<ErrorCurve> curves;
            std::vector<NInterval> intervals;
            for (const auto &kr : pr.keys) {
                curves.push_back(kr.solvers[s].curve);
                intervals.push_back(kr.solvers[s].n_target);
            }
            pr.average.push_back({config.solvers[s], average_curves(curves), average_over_keys(intervals)});
        }
        result.points.push_back(std::move(pr));
    }
    return result;
}

}  // namespace lpnq
