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

#ifndef LPNQ_READOUT_H
#define LPNQ_READOUT_H

#include <cstddef>
#include <limits>
#include <vector>

#include "lpnq/oracle.h"
#include "lpnq/random.h"

namespace lpnq {

/// Gaussian voltage distributions for |0> and |1> of one qubit.
///
/// A zero sigma is a noiseless readout. mu0 == mu1 is a blind readout that
/// carries no information about the state (assignment error 0.5).
struct ReadoutParams {
    double mu0 = 0;
    double mu1 = 1;
    double sigma0 = 0;
    double sigma1 = 0;

    double midpoint() const {
        return 0.5 * (mu0 + mu1);
    }

    /// Throws std::invalid_argument unless mu1 >= mu0 and both sigmas are finite and non-negative.
    void validate() const;
};

/// One oracle query's analog record. Entry i - 1 of v_d belongs to D_i.
struct QueryRecord {
    double v_a = 0;
    std::vector<double> v_d;
};

/// Per-qubit readout estimates. Entry 0 is the ancilla, entry i is D_i.
struct CalibrationSet {
    std::vector<ReadoutParams> qubits;
    size_t shots_per_point = 0;

    int n() const {
        return static_cast<int>(qubits.size()) - 1;
    }
    const ReadoutParams &ancilla() const {
        return qubits.at(0);
    }
    const ReadoutParams &data(int i) const {
        return qubits.at(1 + i);
    }
};

constexpr size_t kDefaultCalibrationShots = 10000;

double sample_voltage(bool bit, const ReadoutParams &params, RandomStream &rng);

/// Equal-sigma readout with means 0 and 1 and midpoint threshold: sigma = 0.5 / Phi^-1(1 - eta).
/// Defined on (0, 0.5); throws std::domain_error outside.
double sigma_from_eta(double eta);
double eta_from_sigma(double sigma);

/// True readout distributions used by the simulator for an assignment error.
/// eta = 0 gives a noiseless readout, eta = 0.5 a blind one.
ReadoutParams readout_params_for_eta(double eta);

/// True readout distributions of every qubit, ancilla first.
std::vector<ReadoutParams> readout_params_for_noise(const NoiseModel &noise);

/// Samples the n + 2 calibration states (ground and each single-qubit excitation)
/// `shots` times each and estimates per-qubit means and standard deviations.
CalibrationSet generate_calibration(const NoiseModel &noise, size_t shots, RandomStream &rng);

/// Voltage record for a measured outcome.
QueryRecord sample_record(const ShotOutcome &shot, const std::vector<ReadoutParams> &truth, RandomStream &rng);

/// 1 iff v > threshold; a tie digitizes to 0.
inline bool digitize(double v, double threshold) {
    return v > threshold;
}

/// Maps voltages so that the calibrated |0> and |1> means become 0 and 1.
double rescale(double v, const ReadoutParams &params);
/// Calibration expressed in the rescaled units of `rescale`.
ReadoutParams rescaled(const ReadoutParams &params);

/// Probability of misassigning the state at the midpoint threshold, averaged over |0> and |1>.
double assignment_error(const ReadoutParams &params);

struct Moments {
    double mean;
    double variance;
};

/// Moments of the mixture eta_a * P0 + (1 - eta_a) * P1 (law of total variance).
Moments mixture_moments(const ReadoutParams &params, double eta_a);

/// Threshold for the average of `queries` voltages: the equal-likelihood
/// crossing, between the two means, of Gaussians with the moments of P0 and of
/// the eta_a mixture and variances divided by `queries`.
///
/// The default (infinite) is the large-N limit (m0 s1 + m1 s0) / (s0 + s1),
/// which does not depend on the number of queries; the analog solvers use it.
/// queries = 1 gives the single-shot crossing.
///
/// Throws std::domain_error when the two means coincide.
double calibrated_threshold(const ReadoutParams &params, double eta_a,
                            double queries = std::numeric_limits<double>::infinity());

}  // namespace lpnq

#endif
