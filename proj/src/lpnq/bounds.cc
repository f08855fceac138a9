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

#include "lpnq/bounds.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpnq {

void BoundParams::validate() const {
    if (n < 1) {
        throw std::invalid_argument("bounds: n must be positive");
    }
    if (!(sigma > 0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("bounds: sigma must be positive");
    }
    if (!(delta > 0 && delta < 1)) {
        throw std::invalid_argument("bounds: delta must be in (0, 1)");
    }
    if (!(eta_a >= 0 && eta_a <= 1) || !(eta_d >= 0)) {
        throw std::invalid_argument("bounds: error rates out of range");
    }
    if (!(delta_prime >= 0) || !(delta_dprime >= 0)) {
        throw std::invalid_argument("bounds: slacks must be non-negative");
    }
    if (eta_d >= 0.5) {
        throw std::domain_error("bounds: eta_d >= 0.5 leaves no signal; the bound diverges");
    }
    if (1 - 3 * delta_prime <= 0) {
        throw std::domain_error("bounds: delta' must be below 1/3");
    }
    if (1 - delta_dprime <= 0) {
        throw std::domain_error("bounds: delta'' must be below 1");
    }
}

double postselected_bound(const BoundParams &p) {
    p.validate();
    double gap = 0.5 - p.eta_d;
    double eb = p.eta_bar_a();
    double denom = std::pow(1 - p.delta_dprime, 2) * std::pow(1 - 3 * p.delta_prime, 2) * gap * gap * eb * eb;
    return 4 * p.sigma * p.sigma / denom * std::log(p.n / (2 * p.delta));
}

double no_postselect_bound(const BoundParams &p) {
    p.validate();
    double gap = 0.5 - p.eta_d;
    double denom = std::pow(1 - 3 * p.delta_prime, 2) * gap * gap;
    return 8 * p.sigma * p.sigma / denom * std::log(p.n / (2 * p.delta));
}

ClampedProbability typicality_probability(double eta_bar_a, double n_prime, double delta_prime) {
    if (!(n_prime >= 1)) {
        throw std::invalid_argument("typicality_probability: n_prime must be at least 1");
    }
    double raw = 1 - 2 * std::exp(-delta_prime * delta_prime * eta_bar_a * n_prime / 3);
    double value = std::clamp(raw, 0.0, 1.0);
    return {value, value != raw};
}

}  // namespace lpnq
