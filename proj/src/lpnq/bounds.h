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

#ifndef LPNQ_BOUNDS_H
#define LPNQ_BOUNDS_H

namespace lpnq {

/// Parameters of the query-count bounds for the analog quantum solvers.
struct BoundParams {
    int n = 3;
    double eta_a = 0.05;
    double eta_d = 0.0;
    /// Per-query voltage standard deviation in rescaled units.
    double sigma = 0.304;
    /// Target failure probability.
    double delta = 0.01;
    /// Typicality slack on the number of correct postselections, in (0, 1/3).
    double delta_prime = 0.05;
    /// Typicality slack on the number of postselected queries, in [0, 1).
    double delta_dprime = 0.05;

    /// max{eta_a, 1 - eta_a}.
    double eta_bar_a() const {
        return eta_a > 0.5 ? eta_a : 1 - eta_a;
    }

    /// Throws std::invalid_argument for out-of-range fields and
    /// std::domain_error when a denominator of the bounds vanishes.
    void validate() const;
};

/// Queries sufficient for the postselected soft-averaging solver:
/// N = 4 sigma^2 / [(1 - d'')^2 (1 - 3 d')^2 (1/2 - eta_d)^2 eta_bar_a^2] * ln(n / (2 delta)).
double postselected_bound(const BoundParams &p);

/// Queries sufficient without postselection (eta_a is ignored):
/// N = 8 sigma^2 / [(1 - 3 d')^2 (1/2 - eta_d)^2] * ln(n / (2 delta)).
double no_postselect_bound(const BoundParams &p);

struct ClampedProbability {
    double value;
    /// The raw expression fell outside [0, 1] and was clamped.
    bool clamped;
};

/// Chernoff lower bound 1 - 2 exp(-d'^2 eta_bar_a N' / 3) on the probability
/// that the number of correct postselections is typical.
ClampedProbability typicality_probability(double eta_bar_a, double n_prime, double delta_prime);

}  // namespace lpnq

#endif
