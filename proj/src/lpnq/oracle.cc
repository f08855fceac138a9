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

#include "lpnq/oracle.h"

#include <cmath>
#include <stdexcept>

namespace lpnq {

Key::Key(int n, uint32_t bits) : n_(n), bits_(bits) {
    if (n < 1 || n > kMaxRegisterSize) {
        throw std::invalid_argument("key size must be in [1, " + std::to_string(kMaxRegisterSize) + "]");
    }
    if ((bits >> n) != 0) {
        throw std::invalid_argument("key bits exceed register size");
    }
}

Key Key::from_string(std::string_view text) {
    uint32_t bits = 0;
    for (size_t i = 0; i < text.size(); i++) {
        if (text[i] == '1') {
            bits |= 1u << i;
        } else if (text[i] != '0') {
            throw std::invalid_argument("key must be a string of 0/1 characters, got '" + std::string(text) + "'");
        }
    }
    return Key(static_cast<int>(text.size()), bits);
}

std::vector<Key> Key::all(int n) {
    std::vector<Key> keys;
    for (uint32_t b = 0; b < (1u << n); b++) {
        keys.emplace_back(n, b);
    }
    return keys;
}

int Key::weight() const {
    return __builtin_popcount(bits_);
}

std::string Key::str() const {
    std::string out(n_, '0');
    for (int i = 0; i < n_; i++) {
        if (bit(i)) {
            out[i] = '1';
        }
    }
    return out;
}

std::string_view mode_name(OracleMode mode) {
    return mode == OracleMode::Classical ? "classical" : "quantum";
}

OracleMode parse_mode(std::string_view text) {
    if (text == "classical") {
        return OracleMode::Classical;
    }
    if (text == "quantum") {
        return OracleMode::Quantum;
    }
    throw std::invalid_argument("unknown oracle mode '" + std::string(text) + "'");
}

NoiseModel NoiseModel::uniform(int n, double two_qubit_depol, double eta_a, double eta_d) {
    NoiseModel noise;
    noise.two_qubit_depol = two_qubit_depol;
    noise.eta_a = eta_a;
    noise.eta_d.assign(n, eta_d);
    return noise;
}

void NoiseModel::validate(int n) const {
    auto in_range = [](double x, double lo, double hi, bool hi_open) {
        return std::isfinite(x) && x >= lo && (hi_open ? x < hi : x <= hi);
    };
    if (!in_range(two_qubit_depol, 0, 1, true)) {
        throw std::invalid_argument("two_qubit_depol must be in [0, 1)");
    }
    if (!in_range(idle_depol, 0, 1, true)) {
        throw std::invalid_argument("idle_depol must be in [0, 1)");
    }
    if (!in_range(eta_a, 0, 0.5, false)) {
        throw std::invalid_argument("eta_a must be in [0, 0.5]");
    }
    if (static_cast<int>(eta_d.size()) != n) {
        throw std::invalid_argument("eta_d must have one entry per data qubit");
    }
    for (double e : eta_d) {
        if (!in_range(e, 0, 0.5, false)) {
            throw std::invalid_argument("eta_d entries must be in [0, 0.5]");
        }
    }
}

int CircuitSpec::cnot_count() const {
    int count = 0;
    for (const auto &g : gates) {
        count += g.kind == GateKind::CNOT;
    }
    return count;
}

CircuitSpec build_circuit(const Key &key, OracleMode mode) {
    CircuitSpec circuit;
    circuit.n = key.size();
    circuit.mode = mode;
    circuit.key = key;
    for (int i = 1; i <= circuit.n; i++) {
        circuit.gates.push_back({GateKind::H, i});
    }
    for (int i = 1; i <= circuit.n; i++) {
        if (key.bit(i - 1)) {
            circuit.gates.push_back({GateKind::CNOT, 0, i});
        }
    }
    if (mode == OracleMode::Quantum) {
        circuit.gates.push_back({GateKind::H, 0});
        for (int i = 1; i <= circuit.n; i++) {
            circuit.gates.push_back({GateKind::H, i});
        }
    }
    return circuit;
}

namespace {

struct PauliFrame {
    uint32_t x = 0;
    uint32_t z = 0;

    void h(int q) {
        uint32_t m = 1u << q;
        uint32_t bx = x & m;
        uint32_t bz = z & m;
        x = (x & ~m) | bz;
        z = (z & ~m) | bx;
    }

    void cnot(int c, int t) {
        x ^= ((x >> c) & 1) << t;
        z ^= ((z >> t) & 1) << c;
    }

    /// Multiplies in a Pauli given as (x, z) bits on qubit q.
    void apply(int q, uint32_t px, uint32_t pz) {
        x ^= px << q;
        z ^= pz << q;
    }
};

}  // namespace

ShotOutcome sample_shot(const CircuitSpec &circuit, const NoiseModel &noise, RandomStream &rng) {
    int nq = circuit.num_qubits();
    PauliFrame frame;
    // Z is a stabilizer of |0>, so a random Z frame leaves the state unchanged
    // while randomizing every measurement that the circuit makes nondeterministic.
    frame.z = static_cast<uint32_t>(rng() >> (64 - nq));

    for (const auto &g : circuit.gates) {
        if (g.kind == GateKind::H) {
            frame.h(g.target);
            continue;
        }
        frame.cnot(g.control, g.target);
        if (noise.two_qubit_depol > 0 && rng.bernoulli(noise.two_qubit_depol)) {
            // 1..15 encodes (x_c, z_c, x_t, z_t); zero would be the identity.
            auto p = static_cast<uint32_t>(1 + rng.below(15));
            frame.apply(g.control, (p >> 3) & 1, (p >> 2) & 1);
            frame.apply(g.target, (p >> 1) & 1, p & 1);
        }
    }
    if (noise.idle_depol > 0) {
        for (int q = 0; q < nq; q++) {
            if (rng.bernoulli(noise.idle_depol)) {
                auto p = static_cast<uint32_t>(1 + rng.below(3));
                frame.apply(q, (p >> 1) & 1, p & 1);
            }
        }
    }
    return ShotOutcome::from_index(frame.x);
}

namespace {

/// Real density matrix. Every operator in this circuit family (H, CNOT, and
/// Pauli conjugation) maps real matrices to real matrices.
class DensityMatrix {
   public:
    explicit DensityMatrix(int num_qubits) : dim_(size_t{1} << num_qubits), data_(dim_ * dim_, 0.0) {
        data_[0] = 1.0;
    }

    double &at(size_t r, size_t c) {
        return data_[r * dim_ + c];
    }
    double at(size_t r, size_t c) const {
        return data_[r * dim_ + c];
    }
    size_t dim() const {
        return dim_;
    }

    void h(int q) {
        const double s = 1.0 / std::sqrt(2.0);
        size_t m = size_t{1} << q;
        // Rows, then columns.
        for (size_t r = 0; r < dim_; r++) {
            if (r & m) {
                continue;
            }
            for (size_t c = 0; c < dim_; c++) {
                double a = at(r, c);
                double b = at(r | m, c);
                at(r, c) = s * (a + b);
                at(r | m, c) = s * (a - b);
            }
        }
        for (size_t r = 0; r < dim_; r++) {
            for (size_t c = 0; c < dim_; c++) {
                if (c & m) {
                    continue;
                }
                double a = at(r, c);
                double b = at(r, c | m);
                at(r, c) = s * (a + b);
                at(r, c | m) = s * (a - b);
            }
        }
    }

    void cnot(int control, int target) {
        std::vector<double> out(data_.size());
        for (size_t r = 0; r < dim_; r++) {
            for (size_t c = 0; c < dim_; c++) {
                out[flip(r, control, target) * dim_ + flip(c, control, target)] = at(r, c);
            }
        }
        data_ = std::move(out);
    }

    /// P rho P^dagger for P = X^x Z^z (the phase of Y cancels).
    std::vector<double> conjugated(uint32_t px, uint32_t pz) const {
        std::vector<double> out(data_.size());
        for (size_t r = 0; r < dim_; r++) {
            for (size_t c = 0; c < dim_; c++) {
                int sign = __builtin_popcountll((r & pz) ^ (c & pz)) & 1;
                out[(r ^ px) * dim_ + (c ^ px)] = sign ? -at(r, c) : at(r, c);
            }
        }
        return out;
    }

    /// rho -> (1 - p) rho + p / |paulis| * sum_P P rho P.
    void mix_paulis(double p, const std::vector<std::pair<uint32_t, uint32_t>> &paulis) {
        if (p == 0) {
            return;
        }
        std::vector<double> out(data_.size());
        for (size_t i = 0; i < out.size(); i++) {
            out[i] = (1 - p) * data_[i];
        }
        double w = p / static_cast<double>(paulis.size());
        for (const auto &[px, pz] : paulis) {
            auto term = conjugated(px, pz);
            for (size_t i = 0; i < out.size(); i++) {
                out[i] += w * term[i];
            }
        }
        data_ = std::move(out);
    }

   private:
    static size_t flip(size_t index, int control, int target) {
        return index ^ (((index >> control) & 1) << target);
    }

    size_t dim_;
    std::vector<double> data_;
};

}  // namespace

std::vector<double> exact_outcome_distribution(const CircuitSpec &circuit, const NoiseModel &noise) {
    if (circuit.n > kMaxRegisterSize) {
        throw std::length_error("exact_outcome_distribution supports at most 6 data qubits");
    }
    int nq = circuit.num_qubits();
    DensityMatrix rho(nq);
    for (const auto &g : circuit.gates) {
        if (g.kind == GateKind::H) {
            rho.h(g.target);
            continue;
        }
        rho.cnot(g.control, g.target);
        std::vector<std::pair<uint32_t, uint32_t>> paulis;
        for (uint32_t p = 1; p < 16; p++) {
            uint32_t px = (((p >> 3) & 1) << g.control) | (((p >> 1) & 1) << g.target);
            uint32_t pz = (((p >> 2) & 1) << g.control) | ((p & 1) << g.target);
            paulis.emplace_back(px, pz);
        }
        rho.mix_paulis(noise.two_qubit_depol, paulis);
    }
    for (int q = 0; q < nq; q++) {
        rho.mix_paulis(noise.idle_depol, {{1u << q, 0}, {1u << q, 1u << q}, {0, 1u << q}});
    }

    std::vector<double> probs(rho.dim());
    for (size_t i = 0; i < rho.dim(); i++) {
        probs[i] = rho.at(i, i);
    }
    return probs;
}

double depol_from_fidelity(double avg_fidelity) {
    if (!(avg_fidelity > 0.5 && avg_fidelity <= 1.0)) {
        throw std::invalid_argument("average gate fidelity must be in (0.5, 1]");
    }
    constexpr double d = 4;
    return (1 - avg_fidelity) * d / (d - 1);
}

}  // namespace lpnq
