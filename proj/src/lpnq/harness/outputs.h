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

#ifndef LPNQ_HARNESS_OUTPUTS_H
#define LPNQ_HARNESS_OUTPUTS_H

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lpnq/harness/campaign.h"

namespace lpnq {

/// Streams pools to records.ndjson (one object per query, if enabled) and
/// calibration.ndjson (one object per pool).
class PoolWriter {
   public:
    PoolWriter(const std::filesystem::path &dir, const ExperimentConfig &config);

    void operator()(const PoolData &pool);

    /// File names written so far, relative to the output directory.
    std::vector<std::string> files() const;
    size_t records_written() const {
        return records_written_;
    }

   private:
    const ExperimentConfig &config_;
    std::vector<NoisePoint> points_;
    std::ofstream records_;
    std::ofstream calibration_;
    size_t records_written_ = 0;
};

/// Shortest text that reads back to the same double.
std::string format_number(double x);

/// CSV with columns solver,key,N,p_hat,lo,hi,lo_mono,hi_mono.
std::string curves_csv(const PointResult &point, bool key_average);

/// CSV with columns sweep_param,value,solver,key,N1pct_lo,N1pct_hi,censored.
/// Key-averaged rows use key "avg".
std::string summary_csv(const CampaignResult &result);

nlohmann::json make_manifest(const ExperimentConfig &config, const std::vector<std::string> &files);

/// Curve files (one pair per noise point), summary.csv and manifest.json.
/// `extra_files` are listed in the manifest as well. Throws std::runtime_error on I/O failure.
void write_outputs(const CampaignResult &result, const std::filesystem::path &dir,
                   const std::vector<std::string> &extra_files = {});

/// "curves.csv", or "curves_p03.csv" for point 3 of a sweep.
std::string curve_file_name(const ExperimentConfig &config, size_t point, bool key_average);

void write_text(const std::filesystem::path &path, const std::string &text);

}  // namespace lpnq

#endif
