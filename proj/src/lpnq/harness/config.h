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

#ifndef LPNQ_HARNESS_CONFIG_H
#define LPNQ_HARNESS_CONFIG_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lpnq/oracle.h"
#include "lpnq/solvers.h"

namespace lpnq {

/// Invalid experiment configuration. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// One swept noise parameter: eta_a, eta_d, two_qubit_depol, gate_fidelity or idle_depol.
struct SweepSpec {
    std::string param;
    std::vector<double> values;
};

struct NoisePoint {
    size_t index;
    /// Value of the swept parameter (0 without a sweep).
    double value;
    NoiseModel noise;
};

struct ExperimentConfig {
    int n = 2;
    /// Explicit keys; empty means all 2^n keys.
    std::vector<Key> key_list;
    /// Keep only keys with k_n = 0.
    bool restrict_last_zero = false;
    std::vector<SolverId> solvers;

    /// Base noise. gate_fidelity, when set, overrides two_qubit_depol.
    double two_qubit_depol = 0;
    std::optional<double> gate_fidelity;
    double idle_depol = 0;
    double eta_a = 0;
    std::vector<double> eta_d;

    std::optional<SweepSpec> sweep;

    size_t pool_size = 10000;
    size_t calibration_shots = 10000;
    size_t resample_trials = 2000;
    /// Empty means the default log-spaced grid up to pool_size.
    std::vector<size_t> n_grid;
    double p_target = 0.01;
    /// Empty means 1 - 0.05 / 2^n.
    std::optional<double> credible_level;
    uint64_t master_seed = 0;
    /// Write every query record to records.ndjson.
    bool emit_records = true;

    std::vector<Key> keys() const;
    /// Oracle modes needed by the solvers, Classical first.
    std::vector<OracleMode> modes() const;
    std::vector<NoisePoint> noise_points() const;
    std::vector<size_t> grid() const;
    double level() const;

    /// Throws ConfigError describing the first problem found.
    void validate() const;
};

/// Parses and validates a config object. A manifest written by the harness is
/// accepted too (its "config" member is used). Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json &j);

/// Complete, normalized form with every default spelled out.
nlohmann::json config_to_json(const ExperimentConfig &config);

ExperimentConfig load_config(const std::filesystem::path &path);

/// 64-bit FNV-1a of the normalized JSON text.
uint64_t config_hash(const ExperimentConfig &config);
uint64_t fnv1a(std::string_view bytes);

}  // namespace lpnq

#endif
