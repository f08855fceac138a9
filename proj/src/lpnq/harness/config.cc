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

#include "lpnq/harness/config.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "lpnq/stats.h"

namespace lpnq {

namespace {

const std::set<std::string> kSweepParams = {"eta_a", "eta_d", "two_qubit_depol", "gate_fidelity", "idle_depol"};

void check_keys(const nlohmann::json &obj, const std::set<std::string> &allowed, const std::string &where) {
    for (const auto &item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("unknown field '" + item.key() + "' in " + where);
        }
    }
}

void apply(NoiseModel &noise, const std::string &param, double value, int n) {
    if (param == "eta_a") {
        noise.eta_a = value;
    } else if (param == "eta_d") {
        noise.eta_d.assign(n, value);
    } else if (param == "two_qubit_depol") {
        noise.two_qubit_depol = value;
    } else if (param == "gate_fidelity") {
        noise.two_qubit_depol = depol_from_fidelity(value);
    } else if (param == "idle_depol") {
        noise.idle_depol = value;
    } else {
        throw ConfigError("unknown sweep parameter '" + param + "'");
    }
}

}  // namespace

std::vector<Key> ExperimentConfig::keys() const {
    std::vector<Key> out = key_list.empty() ? Key::all(n) : key_list;
    if (restrict_last_zero) {
        std::erase_if(out, [this](const Key &k) { return k.bit(n - 1); });
    }
    return out;
}

std::vector<OracleMode> ExperimentConfig::modes() const {
    std::vector<OracleMode> out;
    for (auto mode : {OracleMode::Classical, OracleMode::Quantum}) {
        if (std::any_of(solvers.begin(), solvers.end(), [mode](SolverId s) { return solver_mode(s) == mode; })) {
            out.push_back(mode);
        }
    }
    return out;
}

std::vector<NoisePoint> ExperimentConfig::noise_points() const {
    NoiseModel base;
    base.two_qubit_depol = gate_fidelity ? depol_from_fidelity(*gate_fidelity) : two_qubit_depol;
    base.idle_depol = idle_depol;
    base.eta_a = eta_a;
    base.eta_d = eta_d;
    if (!sweep) {
        return {NoisePoint{0, 0, base}};
    }
    std::vector<NoisePoint> out;
    for (size_t i = 0; i < sweep->values.size(); i++) {
        NoisePoint p{i, sweep->values[i], base};
        apply(p.noise, sweep->param, sweep->values[i], n);
        out.push_back(p);
    }
    return out;
}

std::vector<size_t> ExperimentConfig::grid() const {
    return n_grid.empty() ? default_n_grid(pool_size) : n_grid;
}

double ExperimentConfig::level() const {
    return credible_level ? *credible_level : default_credible_level(n);
}

void ExperimentConfig::validate() const {
    if (n < 1 || n > kMaxRegisterSize) {
        throw ConfigError("n must be in [1, " + std::to_string(kMaxRegisterSize) + "]");
    }
    for (const auto &k : key_list) {
        if (k.size() != n) {
            throw ConfigError("key '" + k.str() + "' does not have n bits");
        }
    }
    auto ks = keys();
    if (ks.empty()) {
        throw ConfigError("the key list is empty");
    }
    std::set<uint32_t> seen;
    for (const auto &k : ks) {
        if (!seen.insert(k.bits()).second) {
            throw ConfigError("duplicate key '" + k.str() + "'");
        }
    }
    if (solvers.empty()) {
        throw ConfigError("no solvers requested");
    }
    std::set<SolverId> unique(solvers.begin(), solvers.end());
    if (unique.size() != solvers.size()) {
        throw ConfigError("duplicate solver");
    }
    if (sweep) {
        if (!kSweepParams.count(sweep->param)) {
            throw ConfigError("unknown sweep parameter '" + sweep->param + "'");
        }
        if (sweep->values.empty()) {
            throw ConfigError("sweep has no values");
        }
    }
    try {
        for (const auto &p : noise_points()) {
            p.noise.validate(n);
        }
    } catch (const ConfigError &) {
        throw;
    } catch (const std::exception &e) {
        throw ConfigError(std::string("noise: ") + e.what());
    }
    if (pool_size < 1) {
        throw ConfigError("pool_size must be positive");
    }
    if (calibration_shots < 100) {
        throw ConfigError("calibration_shots must be at least 100");
    }
    if (resample_trials < 1) {
        throw ConfigError("resample_trials must be positive");
    }
    auto g = grid();
    if (g.empty()) {
        throw ConfigError("n_grid is empty");
    }
    for (size_t i = 0; i < g.size(); i++) {
        if (g[i] < 1 || g[i] > pool_size) {
            throw ConfigError("n_grid entries must lie in [1, pool_size]");
        }
        if (i > 0 && g[i] <= g[i - 1]) {
            throw ConfigError("n_grid must be strictly increasing");
        }
    }
    if (!(p_target > 0 && p_target < 1)) {
        throw ConfigError("p_target must be in (0, 1)");
    }
    double lv = level();
    if (!(lv > 0 && lv < 1)) {
        throw ConfigError("credible_level must be in (0, 1)");
    }
}

ExperimentConfig config_from_json(const nlohmann::json &input) {
    if (!input.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    if (input.contains("config") && input.contains("config_hash")) {
        return config_from_json(input.at("config"));
    }
    check_keys(input,
               {"n", "keys", "restrict_last_zero", "solvers", "noise", "sweep", "pool_size", "calibration_shots",
                "resample_trials", "n_grid", "p_target", "credible_level", "master_seed", "emit_records"},
               "config");
    ExperimentConfig c;
    try {
        c.n = input.at("n").get<int>();
        if (c.n < 1 || c.n > kMaxRegisterSize) {
            throw ConfigError("n must be in [1, " + std::to_string(kMaxRegisterSize) + "]");
        }
        if (input.contains("keys")) {
            const auto &keys = input.at("keys");
            if (keys.is_string()) {
                if (keys.get<std::string>() != "all") {
                    throw ConfigError("keys must be \"all\" or a list of bit strings");
                }
            } else {
                if (!keys.is_array() || keys.empty()) {
                    throw ConfigError("the key list is empty");
                }
                for (const auto &k : keys) {
                    c.key_list.push_back(Key::from_string(k.get<std::string>()));
                }
            }
        }
        c.restrict_last_zero = input.value("restrict_last_zero", false);
        for (const auto &s : input.at("solvers")) {
            c.solvers.push_back(parse_solver(s.get<std::string>()));
        }

        const auto &noise = input.at("noise");
        if (!noise.is_object()) {
            throw ConfigError("noise must be an object");
        }
        check_keys(noise, {"gate_fidelity", "two_qubit_depol", "idle_depol", "eta_a", "eta_d"}, "noise");
        if (noise.contains("gate_fidelity") && noise.contains("two_qubit_depol")) {
            throw ConfigError("give either gate_fidelity or two_qubit_depol, not both");
        }
        if (noise.contains("gate_fidelity")) {
            c.gate_fidelity = noise.at("gate_fidelity").get<double>();
            if (!(*c.gate_fidelity > 0.5 && *c.gate_fidelity <= 1)) {
                throw ConfigError("gate_fidelity must be in (0.5, 1]");
            }
        }
        c.two_qubit_depol = noise.value("two_qubit_depol", 0.0);
        c.idle_depol = noise.value("idle_depol", 0.0);
        c.eta_a = noise.value("eta_a", 0.0);
        if (noise.contains("eta_d") && noise.at("eta_d").is_array()) {
            c.eta_d = noise.at("eta_d").get<std::vector<double>>();
        } else {
            c.eta_d.assign(c.n, noise.value("eta_d", 0.0));
        }

        if (input.contains("sweep")) {
            const auto &sw = input.at("sweep");
            check_keys(sw, {"param", "values"}, "sweep");
            c.sweep = SweepSpec{sw.at("param").get<std::string>(), sw.at("values").get<std::vector<double>>()};
        }
        c.pool_size = input.value("pool_size", c.pool_size);
        c.calibration_shots = input.value("calibration_shots", c.calibration_shots);
        c.resample_trials = input.value("resample_trials", c.resample_trials);
        if (input.contains("n_grid")) {
            c.n_grid = input.at("n_grid").get<std::vector<size_t>>();
            if (c.n_grid.empty()) {
                throw ConfigError("n_grid is empty");
            }
        }
        c.p_target = input.value("p_target", c.p_target);
        if (input.contains("credible_level")) {
            c.credible_level = input.at("credible_level").get<double>();
        }
        c.master_seed = input.value("master_seed", c.master_seed);
        c.emit_records = input.value("emit_records", c.emit_records);
    } catch (const ConfigError &) {
        throw;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    c.validate();
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig &c) {
    nlohmann::json j;
    j["n"] = c.n;
    if (c.key_list.empty()) {
        j["keys"] = "all";
    } else {
        auto &keys = j["keys"] = nlohmann::json::array();
        for (const auto &k : c.key_list) {
            keys.push_back(k.str());
        }
    }
    j["restrict_last_zero"] = c.restrict_last_zero;
    auto &solvers = j["solvers"] = nlohmann::json::array();
    for (auto s : c.solvers) {
        solvers.push_back(std::string(solver_name(s)));
    }
    auto &noise = j["noise"];
    if (c.gate_fidelity) {
        noise["gate_fidelity"] = *c.gate_fidelity;
    } else {
        noise["two_qubit_depol"] = c.two_qubit_depol;
    }
    noise["idle_depol"] = c.idle_depol;
    noise["eta_a"] = c.eta_a;
    noise["eta_d"] = c.eta_d;
    if (c.sweep) {
        j["sweep"] = {{"param", c.sweep->param}, {"values", c.sweep->values}};
    }
    j["pool_size"] = c.pool_size;
    j["calibration_shots"] = c.calibration_shots;
    j["resample_trials"] = c.resample_trials;
    j["n_grid"] = c.grid();
    j["p_target"] = c.p_target;
    j["credible_level"] = c.level();
    j["master_seed"] = c.master_seed;
    j["emit_records"] = c.emit_records;
    return j;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path.string() + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("cannot parse '" + path.string() + "': " + e.what());
    }
    return config_from_json(j);
}

uint64_t fnv1a(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t config_hash(const ExperimentConfig &config) {
    return fnv1a(config_to_json(config).dump());
}

}  // namespace lpnq
