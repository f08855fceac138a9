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

#include "lpnq/harness/outputs.h"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace lpnq {

namespace {

std::ofstream open_out(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    return out;
}

std::string hex64(uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

void append_curve_rows(std::string &out, const SolverResult &sr) {
    std::string solver(solver_name(sr.solver));
    std::string key = sr.curve.key_label();
    for (const auto &p : sr.curve.points) {
        out += solver + "," + key + "," + std::to_string(p.n_queries) + "," + format_number(p.p_hat) + "," +
               format_number(p.lo) + "," + format_number(p.hi) + "," + format_number(p.lo_mono) + "," +
               format_number(p.hi_mono) + "\n";
    }
}

}  // namespace

PoolWriter::PoolWriter(const std::filesystem::path &dir, const ExperimentConfig &config)
    : config_(config), points_(config.noise_points()) {
    std::filesystem::create_directories(dir);
    if (config.emit_records) {
        records_ = open_out(dir / "records.ndjson");
    }
    calibration_ = open_out(dir / "calibration.ndjson");
}

void PoolWriter::operator()(const PoolData &pool) {
    const auto &point = points_.at(pool.point);
    std::string mode(mode_name(pool.mode));
    std::string key = pool.key.str();
    std::string param = config_.sweep ? config_.sweep->param : "none";

    nlohmann::json cal;
    cal["point"] = pool.point;
    cal["sweep_param"] = param;
    cal["sweep_value"] = point.value;
    cal["key"] = key;
    cal["mode"] = mode;
    cal["shots_per_point"] = pool.calibration.shots_per_point;
    auto &qubits = cal["qubits"] = nlohmann::json::array();
    for (const auto &q : pool.calibration.qubits) {
        qubits.push_back({{"mu0", q.mu0}, {"mu1", q.mu1}, {"sigma0", q.sigma0}, {"sigma1", q.sigma1}});
    }
    calibration_ << cal.dump() << '\n';

    if (!config_.emit_records) {
        return;
    }
    uint64_t mode_tag = pool.mode == OracleMode::Classical ? 0 : 1;
    for (size_t i = 0; i < pool.records.size(); i++) {
        const auto &r = pool.records[i];
        nlohmann::json line;
        line["point"] = pool.point;
        line["sweep_param"] = param;
        line["sweep_value"] = point.value;
        line["key"] = key;
        line["mode"] = mode;
        line["index"] = i;
        line["v_a"] = r.v_a;
        line["v_d"] = r.v_d;
        // Stream path from the master seed down to the record block.
        line["seed"] = {config_.master_seed, pool.point, pool.key.bits(), mode_tag, 2, i / kPoolBlock};
        records_ << line.dump() << '\n';
    }
    records_written_ += pool.records.size();
    if (!records_) {
        throw std::runtime_error("failed writing records.ndjson");
    }
}

std::vector<std::string> PoolWriter::files() const {
    std::vector<std::string> out = {"calibration.ndjson"};
    if (config_.emit_records) {
        out.push_back("records.ndjson");
    }
    return out;
}

std::string format_number(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string curve_file_name(const ExperimentConfig &config, size_t point, bool key_average) {
    std::string base = key_average ? "curves_avg" : "curves";
    if (!config.sweep) {
        return base + ".csv";
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "_p%02zu", point);
    return base + buf + ".csv";
}

std::string curves_csv(const PointResult &point, bool key_average) {
    std::string out = "solver,key,N,p_hat,lo,hi,lo_mono,hi_mono\n";
    if (key_average) {
        for (const auto &sr : point.average) {
            append_curve_rows(out, sr);
        }
    } else {
        for (const auto &kr : point.keys) {
            for (const auto &sr : kr.solvers) {
                append_curve_rows(out, sr);
            }
        }
    }
    return out;
}

std::string summary_csv(const CampaignResult &result) {
    std::string out = "sweep_param,value,solver,key,N1pct_lo,N1pct_hi,censored\n";
    const auto &config = result.config;
    std::string param = config.sweep ? config.sweep->param : "none";
    auto row = [&](const PointResult &pr, const SolverResult &sr) {
        out += param + "," + format_number(pr.point.value) + "," + std::string(solver_name(sr.solver)) + "," +
               sr.curve.key_label() + "," + format_number(sr.n_target.lo) + "," + format_number(sr.n_target.hi) +
               "," + (sr.n_target.censored ? "1" : "0") + "\n";
    };
    for (const auto &pr : result.points) {
        for (size_t s = 0; s < config.solvers.size(); s++) {
            for (const auto &kr : pr.keys) {
                row(pr, kr.solvers[s]);
            }
            row(pr, pr.average[s]);
        }
    }
    return out;
}

nlohmann::json make_manifest(const ExperimentConfig &config, const std::vector<std::string> &files) {
    nlohmann::json m;
    m["config"] = config_to_json(config);
    m["config_hash"] = hex64(config_hash(config));
    m["master_seed"] = config.master_seed;
    m["files"] = files;
    return m;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    auto out = open_out(path);
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

void write_outputs(const CampaignResult &result, const std::filesystem::path &dir,
                   const std::vector<std::string> &extra_files) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> files = extra_files;
    for (size_t i = 0; i < result.points.size(); i++) {
        for (bool avg : {false, true}) {
            std::string name = curve_file_name(result.config, i, avg);
            write_text(dir / name, curves_csv(result.points[i], avg));
            files.push_back(name);
        }
    }
    write_text(dir / "summary.csv", summary_csv(result));
    files.push_back("summary.csv");
    write_text(dir / "manifest.json", make_manifest(result.config, files).dump(2) + "\n");
}

}  // namespace lpnq
