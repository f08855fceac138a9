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

#ifndef LPNQ_ORACLE_H
#define LPNQ_ORACLE_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lpnq/random.h"

namespace lpnq {

constexpr int kMaxRegisterSize = 6;

/// Hidden parity key k = (k_1, ..., k_n).
///
/// Stored as a bit mask where bit (i - 1) holds k_i. The text form lists
/// k_1 first, so Key::from_string("01") has k_2 = 1.
class Key {
   public:
    Key() = default;
    Key(int n, uint32_t bits);

    static Key from_string(std::string_view text);
    static std::vector<Key> all(int n);

    int size() const {
        return n_;
    }
    uint32_t bits() const {
        return bits_;
    }
    /// k_{i+1} (zero-based index).
    bool bit(int i) const {
        return ((bits_ >> i) & 1) != 0;
    }
    int weight() const;
    std::string str() const;

    /// Parity of (d . k) for a data mask d in the same layout.
    bool parity_with(uint32_t d) const {
        return (__builtin_popcount(d & bits_) & 1) != 0;
    }

    bool operator==(const Key &other) const = default;

   private:
    int n_ = 1;
    uint32_t bits_ = 0;
};

enum class OracleMode { Classical, Quantum };

std::string_view mode_name(OracleMode mode);
OracleMode parse_mode(std::string_view text);

struct NoiseModel {
    /// Depolarizing probability applied after every CNOT.
    double two_qubit_depol = 0;
    /// Single-qubit depolarizing probability on every qubit just before measurement.
    double idle_depol = 0;
    /// Readout assignment error of the ancilla.
    double eta_a = 0;
    /// Readout assignment error of each data qubit (length n).
    std::vector<double> eta_d;

    static NoiseModel uniform(int n, double two_qubit_depol, double eta_a, double eta_d);

    /// Throws std::invalid_argument when a field is out of range or eta_d has the wrong length.
    void validate(int n) const;
};

/// Qubit 0 is the ancilla A, qubit i (1..n) is the data qubit D_i.
enum class GateKind { H, CNOT };

struct Gate {
    GateKind kind;
    int target;
    int control = -1;

    bool operator==(const Gate &other) const = default;
};

struct CircuitSpec {
    int n = 0;
    OracleMode mode = OracleMode::Classical;
    Key key;
    std::vector<Gate> gates;

    int num_qubits() const {
        return n + 1;
    }
    int cnot_count() const;
};

/// Measured bits before any readout noise. Bit (i - 1) of `d` holds d_i.
struct ShotOutcome {
    bool a = false;
    uint32_t d = 0;

    /// Index into an outcome table: bit 0 is a, bit i is d_i.
    uint32_t index() const {
        return (a ? 1u : 0u) | (d << 1);
    }
    static ShotOutcome from_index(uint32_t index) {
        return ShotOutcome{(index & 1) != 0, index >> 1};
    }
};

/// H on every data qubit, CNOT(D_i -> A) for each k_i = 1, then H on all
/// qubits in Quantum mode.
CircuitSpec build_circuit(const Key &key, OracleMode mode);

/// Draws one outcome of the noisy circuit by Pauli-frame sampling.
///
/// The all-zero string is in the support of every circuit of this family, so it
/// serves as the reference sample. A uniformly random Z frame at preparation
/// randomizes the branch; depolarizing events are multiplied into the frame.
ShotOutcome sample_shot(const CircuitSpec &circuit, const NoiseModel &noise, RandomStream &rng);

/// Exact outcome probabilities indexed by ShotOutcome::index(), computed by
/// evolving the full density operator. Throws std::length_error for n > 6.
std::vector<double> exact_outcome_distribution(const CircuitSpec &circuit, const NoiseModel &noise);

/// Two-qubit depolarizing probability matching an average gate fidelity:
/// p = (1 - F) * d / (d - 1) with d = 4.
double depol_from_fidelity(double avg_fidelity);

}  // namespace lpnq

#endif
