// Copyright 2026 The qecsim Authors
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

#ifndef QECSIM_STATEVECTOR_HPP
#define QECSIM_STATEVECTOR_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qecsim/circuit.hpp"
#include "qecsim/rng.hpp"

namespace qecsim {

using cd = std::complex<double>;

inline constexpr size_t kDenseCap = 26;

namespace kernels {

// Big-endian: qubit 0 is the most significant bit of the basis index.
inline size_t bit_of(size_t num_qubits, uint32_t q) { return size_t{1} << (num_qubits - 1 - q); }

inline void apply_1q(std::span<cd> amps, size_t n, uint32_t q, const cd m[2][2]) {
    size_t b = bit_of(n, q);
    for (size_t i = 0; i < amps.size(); i++) {
        if (i & b) continue;
        cd a0 = amps[i], a1 = amps[i | b];
        amps[i] = m[0][0] * a0 + m[0][1] * a1;
        amps[i | b] = m[1][0] * a0 + m[1][1] * a1;
    }
}

inline void apply_cx(std::span<cd> amps, size_t n, uint32_t c, uint32_t t) {
    size_t bc = bit_of(n, c), bt = bit_of(n, t);
    for (size_t i = 0; i < amps.size(); i++) {
        if ((i & bc) && !(i & bt)) std::swap(amps[i], amps[i | bt]);
    }
}

inline void apply_cz(std::span<cd> amps, size_t n, uint32_t a, uint32_t b) {
    size_t ba = bit_of(n, a), bb = bit_of(n, b);
    for (size_t i = 0; i < amps.size(); i++) {
        if ((i & ba) && (i & bb)) amps[i] = -amps[i];
    }
}

inline void matrix_of(const Gate &g, cd m[2][2]) {
    const double r = std::sqrt(0.5);
    const cd i1(0, 1);
    double h = g.angle / 2;
    switch (g.kind) {
        case GateKind::H: m[0][0] = r, m[0][1] = r, m[1][0] = r, m[1][1] = -r; break;
        case GateKind::S: m[0][0] = 1, m[0][1] = 0, m[1][0] = 0, m[1][1] = i1; break;
        case GateKind::Sdg: m[0][0] = 1, m[0][1] = 0, m[1][0] = 0, m[1][1] = -i1; break;
        case GateKind::X: m[0][0] = 0, m[0][1] = 1, m[1][0] = 1, m[1][1] = 0; break;
        case GateKind::Y: m[0][0] = 0, m[0][1] = -i1, m[1][0] = i1, m[1][1] = 0; break;
        case GateKind::Z: m[0][0] = 1, m[0][1] = 0, m[1][0] = 0, m[1][1] = -1; break;
        case GateKind::RX:
            m[0][0] = std::cos(h), m[0][1] = -i1 * std::sin(h), m[1][0] = -i1 * std::sin(h), m[1][1] = std::cos(h);
            break;
        case GateKind::RY: m[0][0] = std::cos(h), m[0][1] = -std::sin(h), m[1][0] = std::sin(h), m[1][1] = std::cos(h); break;
        case GateKind::RZ:
            m[0][0] = std::exp(-i1 * h), m[0][1] = 0, m[1][0] = 0, m[1][1] = std::exp(i1 * h);
            break;
        default: throw std::invalid_argument("gate has no single-qubit matrix");
    }
}

inline void apply_unitary_gate(std::span<cd> amps, size_t n, const Gate &g) {
    if (g.max_operand() >= n) throw std::out_of_range("operand out of range");
    switch (g.kind) {
        case GateKind::CX: apply_cx(amps, n, g.q0, g.q1); return;
        case GateKind::CZ: apply_cz(amps, n, g.q0, g.q1); return;
        case GateKind::MeasureZ:
        case GateKind::Reset: throw std::invalid_argument("measurement is not a unitary gate");
        default: {
            cd m[2][2];
            matrix_of(g, m);
            apply_1q(amps, n, g.q0, m);
        }
    }
}

}  // namespace kernels

class StateVector {
   public:
    explicit StateVector(size_t num_qubits) : n_(num_qubits) {
        if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
        if (num_qubits > kDenseCap) throw std::invalid_argument("width exceeds dense cap");
        amps_.assign(size_t{1} << num_qubits, cd(0));
        amps_[0] = 1;
    }

    static StateVector from_amplitudes(std::vector<cd> amps) {
        size_t n = 0;
        while ((size_t{1} << n) < amps.size()) n++;
        if ((size_t{1} << n) != amps.size() || n == 0) throw std::invalid_argument("amplitude count not a power of two");
        StateVector s(n);
        s.amps_ = std::move(amps);
        return s;
    }

    size_t num_qubits() const { return n_; }
    const std::vector<cd> &amplitudes() const { return amps_; }
    std::vector<cd> &amplitudes() { return amps_; }
    cd amplitude(size_t index) const { return amps_[index]; }

    double norm_squared() const {
        double s = 0;
        for (const cd &a : amps_) s += std::norm(a);
        return s;
    }

    void apply(const Gate &g) { kernels::apply_unitary_gate(amps_, n_, g); }

    void apply(const Circuit &c) {
        for (const Gate &g : c.gates()) apply(g);
    }

    // Probability of qubit q reading 1.
    double prob_one(uint32_t q) const {
        size_t b = kernels::bit_of(n_, q);
        double p = 0;
        for (size_t i = 0; i < amps_.size(); i++) {
            if (i & b) p += std::norm(amps_[i]);
        }
        return p;
    }

    // Projects qubit q onto `outcome` and renormalizes.
    void collapse(uint32_t q, bool outcome) {
        size_t b = kernels::bit_of(n_, q);
        double keep = 0;
        for (size_t i = 0; i < amps_.size(); i++) {
            if (bool(i & b) != outcome) {
                amps_[i] = 0;
            } else {
                keep += std::norm(amps_[i]);
            }
        }
        double s = 1 / std::sqrt(keep);
        for (cd &a : amps_) a *= s;
    }

    bool measure(uint32_t q, Rng &rng) {
        if (q >= n_) throw std::out_of_range("operand out of range");
        double p1 = prob_one(q);
        bool r = uniform01(rng) < p1;
        if (p1 <= 0) r = false;
        if (p1 >= 1) r = true;
        collapse(q, r);
        return r;
    }

    std::string dump() const {
        if (n_ > 5) throw std::invalid_argument("amplitude dump limited to 5 qubits");
        std::ostringstream out;
        for (size_t i = 0; i < amps_.size(); i++) {
            for (size_t k = 0; k < n_; k++) out << ((i >> (n_ - 1 - k)) & 1);
            out << ' ' << amps_[i].real() << (amps_[i].imag() < 0 ? "" : "+") << amps_[i].imag() << "i\n";
        }
        return out.str();
    }

   private:
    size_t n_;
    std::vector<cd> amps_;
};

inline StateVector init_state(size_t num_qubits) { return StateVector(num_qubits); }

inline StateVector apply_gate(StateVector s, const Gate &g) {
    s.apply(g);
    return s;
}

// Outcome probabilities keyed by the listed qubits read in list order (first listed = most significant).
inline std::map<uint64_t, double> outcome_distribution(const StateVector &s, const std::vector<uint32_t> &qubits) {
    for (size_t i = 0; i < qubits.size(); i++) {
        if (qubits[i] >= s.num_qubits()) throw std::out_of_range("operand out of range");
        for (size_t j = 0; j < i; j++) {
            if (qubits[i] == qubits[j]) throw std::invalid_argument("duplicate indices");
        }
    }
    std::map<uint64_t, double> out;
    const auto &a = s.amplitudes();
    size_t n = s.num_qubits();
    for (size_t i = 0; i < a.size(); i++) {
        double p = std::norm(a[i]);
        if (p == 0) continue;
        uint64_t key = 0;
        for (uint32_t q : qubits) key = (key << 1) | ((i >> (n - 1 - q)) & 1);
        out[key] += p;
    }
    return out;
}

// Dense vector form of outcome_distribution.
inline std::vector<double> outcome_probabilities(const StateVector &s, const std::vector<uint32_t> &qubits) {
    std::vector<double> out(size_t{1} << qubits.size(), 0.0);
    for (auto [k, p] : outcome_distribution(s, qubits)) out[k] = p;
    return out;
}

// Samples every qubit; returns the basis index (qubit 0 most significant) and collapses.
inline uint64_t measure_all(StateVector &s, Rng &rng) {
    const auto &a = s.amplitudes();
    double u = uniform01(rng);
    double acc = 0;
    size_t pick = a.size() - 1;
    for (size_t i = 0; i < a.size(); i++) {
        acc += std::norm(a[i]);
        if (u < acc) {
            pick = i;
            break;
        }
    }
    while (std::norm(a[pick]) == 0 && pick > 0) pick--;
    auto &m = s.amplitudes();
    cd phase = m[pick] / std::abs(m[pick]);
    std::fill(m.begin(), m.end(), cd(0));
    m[pick] = phase;
    return pick;
}

inline std::string bitstring(uint64_t value, size_t bits) {
    std::string s(bits, '0');
    for (size_t k = 0; k < bits; k++) {
        if ((value >> (bits - 1 - k)) & 1) s[k] = '1';
    }
    return s;
}

}  // namespace qecsim

#endif
