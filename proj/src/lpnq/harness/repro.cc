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

#include "lpnq/harness/repro.h"

#include "lpnq/stats.h"

namespace lpnq {

namespace {

// Device-like defaults: ancilla readout behind a parametric amplifier, data
// readout limited by crosstalk, CNOT fidelity 91%.
constexpr double kEtaA = 0.05;
constexpr double kEtaD = 0.3;
constexpr double kGateFidelity = 0.91;

ExperimentConfig base(int n, std::vector<SolverId> solvers, uint64_t seed) {
    ExperimentConfig c;
    c.n = n;
    c.solvers = std::move(solvers);
    c.gate_fidelity = kGateFidelity;
    c.eta_a = kEtaA;
    c.eta_d.assign(n, kEtaD);
    c.pool_size = kDefaultPoolSize;
    c.calibration_shots = kDefaultCalibrationShots;
    c.resample_trials = kDefaultResampleTrials;
    c.n_grid = default_n_grid(kDefaultPoolSize, 4);
    c.master_seed = seed;
    return c;
}

}  // namespace

std::vector<ReproRun> repro_runs(std::string_view figure, uint64_t seed) {
    using enum SolverId;
    std::vector<ReproRun> runs;
    if (figure == "fig2") {
        runs.push_back({"n2", base(2, {CDigital, QDigital}, seed)});
    } else if (figure == "fig3") {
        for (int n : {2, 3}) {
            runs.push_back({"n" + std::to_string(n), base(n, {CDigital, QDigital, CBayes, QAnalog}, seed)});
        }
    } else if (figure == "fig4") {
        ExperimentConfig a = base(3, {CBayes, QAnalog, QPrimeAnalog}, seed);
        a.sweep = SweepSpec{"eta_a", {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5}};
        a.emit_records = false;
        runs.push_back({"eta_a", a});
        ExperimentConfig d = base(3, {CBayes, QAnalog}, seed);
        d.sweep = SweepSpec{"eta_d", {0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4}};
        d.emit_records = false;
        runs.push_back({"eta_d", d});
    } else {
        throw ConfigError("unknown figure '" + std::string(figure) + "' (expected fig2, fig3 or fig4)");
    }
    for (auto &r : runs) {
        r.config.validate();
    }
    return runs;
}

}  // namespace lpnq
