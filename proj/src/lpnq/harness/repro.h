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

#ifndef LPNQ_HARNESS_REPRO_H
#define LPNQ_HARNESS_REPRO_H

#include <string>
#include <string_view>
#include <vector>

#include "lpnq/harness/config.h"

namespace lpnq {

/// One canned campaign; its outputs go to <out>/<name>.
struct ReproRun {
    std::string name;
    ExperimentConfig config;
};

/// Canned campaigns for "fig2", "fig3" and "fig4" with the given master seed.
/// Throws ConfigError for any other name.
std::vector<ReproRun> repro_runs(std::string_view figure, uint64_t seed);

}  // namespace lpnq

#endif
