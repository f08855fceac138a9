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

#include "lpnq/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace lpnq {

double default_credible_level(int n) {
    return 1.0 - 0.05 / std::ldexp(1.0, n);
}

namespace {

constexpr size_t kTrialsPerTask = 250;

}  // namespace

std::vector<std::vector<FailureCount>> resample_failures(const PreparedPool &pool, const Key &truth,
                                                         std::span<const SolverId> solvers,
                                                         std::span<const size_t> n_grid, size_t trials,
                                                         const RandomStream &rng, size_t threads) {
    for (size_t n : n_grid) {
        if (n > pool.size()) {
            throw std::invalid_argument("resample size " + std::to_string(n) + " exceeds pool of " +
                                        std::to_string(pool.size()));
        }
    }
    size_t blocks = (trials + kTrialsPerTask - 1) / kTrialsPerTask;
    size_t tasks = n_grid.size() * blocks;
    // tasks x solvers failure counts, reduced after the parallel section.
    std::vector<uint64_t> partial(tasks * solvers.size(), 0);

    parallel_for(tasks, threads, [&](size_t task) {
        size_t g = task / blocks;
        size_t block = task % blocks;
        size_t n = n_grid[g];
        RandomStream grid_stream = rng.split(g);
        std::vector<uint32_t> perm(pool.size());
        std::iota(perm.begin(), perm.end(), 0u);

        size_t end = std::min(trials, (block + 1) * kTrialsPerTask);
        for (size_t t = block * kTrialsPerTask; t < end; t++) {
            RandomStream trial = grid_stream.split(t);
            RandomStream subset_rng = trial.split(0);
            // Partial Fisher-Yates; the swaps are undone afterwards so every
            // trial starts from the identity permutation.
            std::vector<uint32_t> swapped(n);
            for (size_t i = 0; i < n; i++) {
                size_t j = i + subset_rng.below(perm.size() - i);
                swapped[i] = static_cast<uint32_t>(j);
                std::swap(perm[i], perm[j]);
            }
            std::span<const uint32_t> subset(perm.data(), n);
            for (size_t s = 0; s < solvers.size(); s++) {
                RandomStream tie_rng = trial.split(1 + s);
                if (!(pool.solve(solvers[s], subset, tie_rng).key == truth)) {
                    partial[task * solvers.size() + s]++;
                }
            }
            for (size_t i = n; i-- > 0;) {
                std::swap(perm[i], perm[swapped[i]]);
            }
        }
    });

    std::vector<std::vector<FailureCount>> out(n_grid.size(), std::vector<FailureCount>(solvers.size()));
    for (size_t task = 0; task < tasks; task++) {
        size_t g = task / blocks;
        for (size_t s = 0; s < solvers.size(); s++) {
            out[g][s].failures += partial[task * solvers.size() + s];
        }
    }
    for (auto &row : out) {
        for (auto &c : row) {
            c.trials = trials;
        }
    }
    return out;
}

FailureCount estimate_error(const PreparedPool &pool, const Key &truth, SolverId solver, size_t n_queries,
                            size_t trials, const RandomStream &rng, size_t threads) {
    SolverId solvers[] = {solver};
    size_t grid[] = {n_queries};
    return resample_failures(pool, truth, solvers, grid, trials, rng, threads)[0][0];
}

FailureCount estimate_error_fresh(size_t trials, const RandomStream &rng,
                                  const std::function<bool(RandomStream &)> &trial_fails, size_t threads) {
    std::vector<uint8_t> failed(trials, 0);
    parallel_for(trials, threads, [&](size_t t) {
        RandomStream stream = rng.split(t);
        failed[t] = trial_fails(stream);
    });
    FailureCount out;
    out.trials = trials;
    for (auto f : failed) {
        out.failures += f;
    }
    return out;
}

Interval jeffreys_interval(uint64_t failures, uint64_t trials, double level) {
    if (failures > trials) {
        throw std::invalid_argument("jeffreys_interval: failures exceed trials");
    }
    if (!(level > 0 && level < 1)) {
        throw std::invalid_argument("jeffreys_interval: level must be in (0, 1)");
    }
    if (trials == 0) {
        return {0, 1};
    }
    double a = static_cast<double>(failures) + 0.5;
    double b = static_cast<double>(trials - failures) + 0.5;
    double tail = 0.5 * (1 - level);
    Interval out;
    out.lo = failures == 0 ? 0.0 : boost::math::ibeta_inv(a, b, tail);
    out.hi = failures == trials ? 1.0 : boost::math::ibeta_inv(a, b, 1 - tail);
    return out;
}

std::vector<double> antitonic_pava(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size()) {
        throw std::invalid_argument("antitonic_pava: values and weights differ in length");
    }
    struct Block {
        double mean;
        double weight;
        size_t count;
    };
    std::vector<Block> blocks;
    for (size_t i = 0; i < values.size(); i++) {
        if (!(weights[i] > 0)) {
            throw std::invalid_argument("antitonic_pava: weights must be positive");
        }
        blocks.push_back({values[i], weights[i], 1});
        // Non-increasing fit: a block may not exceed its left neighbour.
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean < blocks.back().mean) {
            Block right = blocks.back();
            blocks.pop_back();
            Block &left = blocks.back();
            double w = left.weight + right.weight;
            left.mean = (left.mean * left.weight + right.mean * right.weight) / w;
            left.weight = w;
            left.count += right.count;
        }
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto &b : blocks) {
        out.insert(out.end(), b.count, b.mean);
    }
    return out;
}

ErrorCurve build_error_curve(std::span<const size_t> n_grid, std::span<const FailureCount> counts, double level,
                             std::optional<Key> key, SolverId solver) {
    if (n_grid.size() != counts.size()) {
        throw std::invalid_argument("build_error_curve: grid and counts differ in length");
    }
    for (size_t i = 1; i < n_grid.size(); i++) {
        if (n_grid[i] <= n_grid[i - 1]) {
            throw std::invalid_argument("build_error_curve: N grid must be strictly increasing");
        }
    }
    ErrorCurve curve;
    curve.key = key;
    curve.solver = solver;
    std::vector<double> lo, hi, w;
    for (size_t i = 0; i < n_grid.size(); i++) {
        auto iv = jeffreys_interval(counts[i].failures, counts[i].trials, level);
        curve.points.push_back({n_grid[i], counts[i].rate(), iv.lo, iv.hi, 0, 0});
        lo.push_back(iv.lo);
        hi.push_back(iv.hi);
        w.push_back(static_cast<double>(std::max<uint64_t>(counts[i].trials, 1)));
    }
    auto lo_mono = antitonic_pava(lo, w);
    auto hi_mono = antitonic_pava(hi, w);
    for (size_t i = 0; i < curve.points.size(); i++) {
        curve.points[i].lo_mono = lo_mono[i];
        curve.points[i].hi_mono = hi_mono[i];
    }
    return curve;
}

ErrorCurve average_curves(std::span<const ErrorCurve> curves) {
    if (curves.empty()) {
        throw std::invalid_argument("average_curves: no curves");
    }
    ErrorCurve avg;
    avg.solver = curves[0].solver;
    avg.points = curves[0].points;
    for (auto &p : avg.points) {
        p.p_hat = p.lo = p.hi = p.lo_mono = p.hi_mono = 0;
    }
    double scale = 1.0 / static_cast<double>(curves.size());
    for (const auto &c : curves) {
        if (c.points.size() != avg.points.size()) {
            throw std::invalid_argument("average_curves: curves use different grids");
        }
        for (size_t i = 0; i < c.points.size(); i++) {
            if (c.points[i].n_queries != avg.points[i].n_queries) {
                throw std::invalid_argument("average_curves: curves use different grids");
            }
            avg.points[i].p_hat += scale * c.points[i].p_hat;
            avg.points[i].lo += scale * c.points[i].lo;
            avg.points[i].hi += scale * c.points[i].hi;
            avg.points[i].lo_mono += scale * c.points[i].lo_mono;
            avg.points[i].hi_mono += scale * c.points[i].hi_mono;
        }
    }
    return avg;
}

namespace {

/// First N where a non-increasing curve reaches `target`; `reached` is false if it never does.
double crossing(const std::vector<double> &ns, const std::vector<double> &ps, double target, bool &reached) {
    reached = true;
    if (ps[0] <= target) {
        return ns[0];
    }
    for (size_t j = 1; j < ps.size(); j++) {
        if (ps[j] > target) {
            continue;
        }
        double x0 = std::log(ns[j - 1]);
        double x1 = std::log(ns[j]);
        double t;
        if (ps[j] > 0) {
            t = (std::log(target) - std::log(ps[j - 1])) / (std::log(ps[j]) - std::log(ps[j - 1]));
        } else {
            t = (target - ps[j - 1]) / (ps[j] - ps[j - 1]);
        }
        return std::exp(x0 + t * (x1 - x0));
    }
    reached = false;
    return ns.back();
}

}  // namespace

NInterval n_at_target(const ErrorCurve &curve, double p_target) {
    if (curve.points.empty()) {
        throw std::invalid_argument("n_at_target: empty curve");
    }
    if (!(p_target > 0 && p_target < 1)) {
        throw std::invalid_argument("n_at_target: target must be in (0, 1)");
    }
    std::vector<double> ns, lo, hi;
    for (const auto &p : curve.points) {
        ns.push_back(static_cast<double>(p.n_queries));
        lo.push_back(p.lo_mono);
        hi.push_back(p.hi_mono);
    }
    bool lo_reached, hi_reached;
    NInterval out;
    out.lo = crossing(ns, lo, p_target, lo_reached);
    out.hi = crossing(ns, hi, p_target, hi_reached);
    // A segment where lo_mono reaches 0 is interpolated linearly in p and can
    // cross later than the log-log hi_mono on the same segment.
    out.lo = std::min(out.lo, out.hi);
    out.censored = !hi_reached;
    return out;
}

NInterval average_over_keys(std::span<const NInterval> intervals) {
    if (intervals.empty()) {
        throw std::invalid_argument("average_over_keys: empty list");
    }
    NInterval out{0, 0, false};
    for (const auto &iv : intervals) {
        out.lo += iv.lo;
        out.hi += iv.hi;
        out.censored = out.censored || iv.censored;
    }
    out.lo /= static_cast<double>(intervals.size());
    out.hi /= static_cast<double>(intervals.size());
    return out;
}

std::vector<size_t> default_n_grid(size_t max_n, int per_decade) {
    if (max_n < 1 || per_decade < 1) {
        throw std::invalid_argument("default_n_grid: bad arguments");
    }
    std::vector<size_t> grid;
    for (int i = 0;; i++) {
        double x = std::pow(10.0, static_cast<double>(i) / per_decade);
        auto n = static_cast<size_t>(std::llround(x));
        if (n > max_n) {
            break;
        }
        if (grid.empty() || n > grid.back()) {
            grid.push_back(n);
        }
    }
    return grid;
}

}  // namespace lpnq
