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

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "lpnq/bounds.h"
#include "lpnq/harness/campaign.h"
#include "lpnq/harness/outputs.h"
#include "lpnq/harness/repro.h"

using namespace lpnq;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;

struct CommonOptions {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::string out = "lpnq-out";
    size_t threads = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App *cmd, CommonOptions &opt, bool needs_config, bool writes) {
    auto *c = cmd->add_option("--config", opt.config_path, "Experiment config (JSON) or a manifest.json from an earlier run");
    if (needs_config) {
        c->required();
    }
    cmd->add_option("--seed", opt.seed, "Override the master seed");
    if (writes) {
        cmd->add_option("--out", opt.out, "Output directory")->capture_default_str();
    }
    cmd->add_option("--threads", opt.threads, "Worker threads")->check(CLI::Range(size_t{1}, size_t{1024}));
}

ExperimentConfig load(const CommonOptions &opt) {
    ExperimentConfig config = load_config(opt.config_path);
    if (opt.seed) {
        config.master_seed = *opt.seed;
    }
    config.validate();
    return config;
}

void run_and_write(const ExperimentConfig &config, const std::filesystem::path &dir, size_t threads) {
    PoolWriter writer(dir, config);
    auto result = run_campaign(config, threads, std::ref(writer));
    write_outputs(result, dir, writer.files());
    std::cout << summary_csv(result);
}

void cmd_simulate(const CommonOptions &opt) {
    auto config = load(opt);
    std::filesystem::path dir = opt.out;
    PoolWriter writer(dir, config);
    simulate_pools(config, opt.threads, std::ref(writer));
    write_text(dir / "manifest.json", make_manifest(config, writer.files()).dump(2) + "\n");
    std::cout << "wrote " << writer.records_written() << " records to " << dir.string() << "\n";
}

void cmd_curve(const CommonOptions &opt) {
    auto config = load(opt);
    if (config.sweep) {
        throw ConfigError("curve evaluates a single noise point; use the sweep subcommand for configs with a sweep");
    }
    run_and_write(config, opt.out, opt.threads);
}

void cmd_sweep(const CommonOptions &opt) {
    auto config = load(opt);
    if (!config.sweep) {
        throw ConfigError("sweep needs a \"sweep\" entry in the config");
    }
    run_and_write(config, opt.out, opt.threads);
}

void cmd_repro(const CommonOptions &opt, const std::string &figure) {
    uint64_t seed = opt.seed.value_or(0);
    for (const auto &run : repro_runs(figure, seed)) {
        std::filesystem::path dir = std::filesystem::path(opt.out) / run.name;
        std::cerr << figure << "/" << run.name << " -> " << dir.string() << "\n";
        run_and_write(run.config, dir, opt.threads);
    }
}

struct SolveOptions {
    std::string key;
    size_t queries = 100;
    size_t offset = 0;
    size_t point = 0;
    std::string pool_dir;
};

// Loads one pool from the NDJSON files written by `simulate`.
PoolData read_pool(const std::filesystem::path &dir, size_t point, const Key &key, OracleMode mode) {
    PoolData pool{point, key, mode, {}, {}};
    auto matches = [&](const json &j) {
        return j.at("point").get<size_t>() == point && j.at("key").get<std::string>() == key.str() &&
               j.at("mode").get<std::string>() == mode_name(mode);
    };
    std::ifstream cal(dir / "calibration.ndjson");
    std::ifstream rec(dir / "records.ndjson");
    if (!cal || !rec) {
        throw std::runtime_error("cannot read calibration.ndjson/records.ndjson in '" + dir.string() + "'");
    }
    bool found = false;
    for (std::string line; std::getline(cal, line);) {
        auto j = json::parse(line);
        if (!matches(j)) {
            continue;
        }
        pool.calibration.shots_per_point = j.at("shots_per_point");
        for (const auto &q : j.at("qubits")) {
            pool.calibration.qubits.push_back({q.at("mu0"), q.at("mu1"), q.at("sigma0"), q.at("sigma1")});
        }
        found = true;
    }
    if (!found) {
        throw ConfigError("no " + std::string(mode_name(mode)) + " pool for key " + key.str() + " in '" + dir.string() +
                          "'");
    }
    for (std::string line; std::getline(rec, line);) {
        auto j = json::parse(line);
        if (matches(j)) {
            pool.records.push_back({j.at("v_a"), j.at("v_d").get<std::vector<double>>()});
        }
    }
    return pool;
}

void cmd_solve(const CommonOptions &opt, const SolveOptions &s) {
    auto config = load(opt);
    auto points = config.noise_points();
    if (s.point >= points.size()) {
        throw ConfigError("--point out of range");
    }
    Key key = config.keys().front();
    if (!s.key.empty()) {
        try {
            key = Key::from_string(s.key);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("bad --key: ") + e.what());
        }
    }
    if (key.size() != config.n) {
        throw ConfigError("--key must have " + std::to_string(config.n) + " bits");
    }
    if (s.queries < 1) {
        throw ConfigError("--queries must be positive");
    }

    json out = json::array();
    for (auto mode : config.modes()) {
        PoolData pool = s.pool_dir.empty() ? simulate_pool(config, points[s.point], key, mode, opt.threads)
                                           : read_pool(s.pool_dir, s.point, key, mode);
        if (s.offset + s.queries > pool.records.size()) {
            throw ConfigError("batch exceeds the pool (" + std::to_string(pool.records.size()) + " records)");
        }
        std::span<const QueryRecord> batch(pool.records.data() + s.offset, s.queries);
        PreparedPool prepared(config.n, batch, pool.calibration, postselection_error(pool.calibration));
        for (auto id : config.solvers) {
            if (solver_mode(id) != mode) {
                continue;
            }
            RandomStream rng = pool_stream(config.master_seed, s.point, key, mode).split(4).split(static_cast<uint64_t>(id));
            auto est = prepared.solve_all(id, rng);
            out.push_back({{"solver", solver_name(id)},
                           {"key", key.str()},
                           {"estimate", est.key.str()},
                           {"correct", est.key == key},
                           {"score", est.score},
                           {"tie_broken", est.tie_broken},
                           {"queries", s.queries}});
        }
    }
    std::cout << out.dump(2) << "\n";
}

void cmd_bounds(const std::string &config_path, BoundParams p, std::optional<double> n_prime) {
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            throw ConfigError("cannot read '" + config_path + "'");
        }
        json j;
        try {
            j = json::parse(in);
            for (const auto &[k, v] : j.items()) {
                if (k == "n") p.n = v.get<int>();
                else if (k == "eta_a") p.eta_a = v.get<double>();
                else if (k == "eta_d") p.eta_d = v.get<double>();
                else if (k == "sigma") p.sigma = v.get<double>();
                else if (k == "delta") p.delta = v.get<double>();
                else if (k == "delta_prime") p.delta_prime = v.get<double>();
                else if (k == "delta_dprime") p.delta_dprime = v.get<double>();
                else throw ConfigError("unknown bounds field '" + k + "'");
            }
        } catch (const json::exception &e) {
            throw ConfigError(std::string("bad bounds config: ") + e.what());
        }
    }
    try {
        p.validate();
    } catch (const std::logic_error &e) {
        throw ConfigError(e.what());
    }
    double ps = postselected_bound(p);
    double np = no_postselect_bound(p);
    double at = n_prime.value_or(std::ceil(ps));
    auto typ = typicality_probability(p.eta_bar_a(), at, p.delta_prime);
    json out = {{"params",
                 {{"n", p.n},
                  {"eta_a", p.eta_a},
                  {"eta_d", p.eta_d},
                  {"sigma", p.sigma},
                  {"delta", p.delta},
                  {"delta_prime", p.delta_prime},
                  {"delta_dprime", p.delta_dprime}}},
                {"postselected", ps},
                {"no_postselect", np},
                {"typicality", {{"n_prime", at}, {"probability", typ.value}, {"clamped", typ.clamped}}}};
    std::cout << out.dump(2) << "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"lpnq: noisy parity-oracle simulator and solver benchmark"};
    app.require_subcommand(1);

    CommonOptions common;

    auto *simulate = app.add_subcommand("simulate", "Generate calibration data and query pools");
    add_common(simulate, common, true, true);

    SolveOptions solve_opt;
    auto *solve = app.add_subcommand("solve", "Run the configured solvers on one batch of queries");
    add_common(solve, common, true, false);
    solve->add_option("--key", solve_opt.key, "Secret key, k_1 first (default: first key of the config)");
    solve->add_option("--queries,-N", solve_opt.queries, "Batch size")->capture_default_str();
    solve->add_option("--offset", solve_opt.offset, "Index of the first record of the batch")->capture_default_str();
    solve->add_option("--point", solve_opt.point, "Noise point index")->capture_default_str();
    solve->add_option("--pool", solve_opt.pool_dir, "Read the pool from a `simulate` output directory");

    auto *curve = app.add_subcommand("curve", "Error curves and N at target for one noise point");
    add_common(curve, common, true, true);

    auto *sweep = app.add_subcommand("sweep", "Error curves over a one-parameter noise sweep");
    add_common(sweep, common, true, true);

    BoundParams bp;
    std::string bounds_config;
    std::optional<double> n_prime;
    auto *bounds = app.add_subcommand("bounds", "Evaluate the query-count bounds of the analog quantum solvers");
    bounds->add_option("--config", bounds_config, "JSON object with any of the fields below");
    bounds->add_option("--n", bp.n)->capture_default_str();
    bounds->add_option("--eta-a", bp.eta_a)->capture_default_str();
    bounds->add_option("--eta-d", bp.eta_d)->capture_default_str();
    bounds->add_option("--sigma", bp.sigma)->capture_default_str();
    bounds->add_option("--delta", bp.delta)->capture_default_str();
    bounds->add_option("--delta-prime", bp.delta_prime)->capture_default_str();
    bounds->add_option("--delta-dprime", bp.delta_dprime)->capture_default_str();
    bounds->add_option("--n-prime", n_prime, "Postselected count for the typicality bound (default: postselected bound)");

    std::string figure;
    auto *repro = app.add_subcommand("repro", "Canned campaigns: fig2, fig3 or fig4");
    repro->add_option("figure", figure)->required()->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
    add_common(repro, common, false, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*simulate) {
            cmd_simulate(common);
        } else if (*solve) {
            cmd_solve(common, solve_opt);
        } else if (*curve) {
            cmd_curve(common);
        } else if (*sweep) {
            cmd_sweep(common);
        } else if (*bounds) {
            cmd_bounds(bounds_config, bp, n_prime);
        } else if (*repro) {
            cmd_repro(common, figure);
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
