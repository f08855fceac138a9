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

#ifndef LPNQ_STATS_H
#define LPNQ_STATS_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpnq/oracle.h"
#include "lpnq/random.h"
#include "lpnq/solvers.h"

namespace lpnq {

constexpr size_t kDefaultPoolSize = 10000;
constexpr size_t kDefaultResampleTrials = 2000;
constexpr double kDefaultTargetError = 0.01;

/// Per-key credible level 1 - 0.05 / 2^n, so that all 2^n intervals cover
/// simultaneously with probability >= 95% by the union bound.
double default_credible_level(int n);

struct FailureCount {
    uint64_t failures = 0;
    uint64_t trials = 0;

    double rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(trials);
    }
};

/// Solves `trials` subsets of size `n_queries`, drawn uniformly without
/// replacement from the pool, and counts wrong keys.
///
/// Every trial draws from its own child of `rng`, so the count does not
/// depend on `threads`. Throws std::invalid_argument when n_queries exceeds the pool.
FailureCount estimate_error(const PreparedPool &pool, const Key &truth, SolverId solver, size_t n_queries,
                            size_t trials, const RandomStream &rng, size_t threads = 1);

/// Failure counts for several solvers sharing each resampled subset.
/// Result is indexed [grid point][solver]; grid point g uses rng.split(g).
std::vector<std::vector<FailureCount>> resample_failures(const PreparedPool &pool, const Key &truth,
                                                         std::span<const SolverId> solvers,
                                                         std::span<const size_t> n_grid, size_t trials,
                                                         const RandomStream &rng, size_t threads = 1);

/// Fresh-simulation counterpart of estimate_error: `trial_fails(rng)` simulates
/// and solves one independent dataset, returning true on a wrong key.
FailureCount estimate_error_fresh(size_t trials, const RandomStream &rng,
                                  const std::function<bool(RandomStream &)> &trial_fails, size_t threads = 1);

struct Interval {
    double lo;
    double hi;
};

/// Equal-tailed interval of Beta(failures + 1/2, trials - failures + 1/2).
/// lo is 0 when failures == 0 and hi is 1 when failures == trials.
Interval jeffreys_interval(uint64_t failures, uint64_t trials, double level);

/// Weighted least-squares non-increasing fit (pool adjacent violators).
std::vector<double> antitonic_pava(std::span<const double> values, std::span<const double> weights);

struct CurvePoint {
    size_t n_queries;
    double p_hat;
    double lo;
    double hi;
    double lo_mono;
    double hi_mono;
};

struct ErrorCurve {
    std::vector<CurvePoint> points;
    /// Empty for key-averaged curves.
    std::optional<Key> key;
    SolverId solver = SolverId::CDigital;

    std::string key_label() const {
        return key ? key->str() : std::string("avg");
    }
};

/// Credible intervals at every grid point plus antitonic fits of both bounds.
ErrorCurve build_error_curve(std::span<const size_t> n_grid, std::span<const FailureCount> counts, double level,
                             std::optional<Key> key, SolverId solver);

/// Pointwise average of per-key curves over the same grid.
ErrorCurve average_curves(std::span<const ErrorCurve> curves);

struct NInterval {
    double lo;
    double hi;
    /// hi did not reach the target inside the measured range and is pinned at the largest N.
    bool censored;
};

/// Crossing of lo_mono (-> lo) and hi_mono (-> hi) with p_target, interpolated
/// linearly in (log N, log p). Segments touching p = 0 interpolate linearly in p.
/// lo is capped at hi.
NInterval n_at_target(const ErrorCurve &curve, double p_target = kDefaultTargetError);

/// Interval arithmetic mean; any censored input censors the result.
/// Throws std::invalid_argument on an empty list.
NInterval average_over_keys(std::span<const NInterval> intervals);

/// 10 log-spaced points per decade from 1 to `max_n`, rounded and deduplicated.
std::vector<size_t> default_n_grid(size_t max_n = kDefaultPoolSize, int per_decade = 10);

}  // namespace lpnq

#endif
