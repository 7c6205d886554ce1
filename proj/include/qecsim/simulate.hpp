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

#ifndef QECSIM_SIMULATE_HPP
#define QECSIM_SIMULATE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "qecsim/circuit.hpp"
#include "qecsim/noise.hpp"
#include "qecsim/statevector.hpp"
#include "qecsim/tableau.hpp"

namespace qecsim {

using MeasurementRecord = std::vector<uint8_t>;

namespace detail {

inline Gate pauli_gate(Pauli p, uint32_t q) {
    switch (p) {
        case Pauli::X: return X(q);
        case Pauli::Y: return Y(q);
        case Pauli::Z: return Z(q);
        default: throw std::invalid_argument("identity fault");
    }
}

template <typename Sim, typename MeasureFn, typename ResetFn>
MeasurementRecord run_with_faults(const Circuit &c, const std::vector<FaultRealization> &faults, Sim &sim,
                                  MeasureFn &&measure, ResetFn &&reset) {
    MeasurementRecord record;
    record.reserve(c.classical_bits());
    size_t f = 0;
    for (size_t i = 0; i < c.size(); i++) {
        const Gate &g = c[i];
        if (f < faults.size() && faults[f].location < i) throw std::invalid_argument("faults must be sorted by location");
        if (g.kind == GateKind::MeasureZ) {
            for (; f < faults.size() && faults[f].location == i; f++) sim.apply(pauli_gate(faults[f].pauli, faults[f].qubit));
            record.push_back(measure(g.q0));
            continue;
        }
        if (g.kind == GateKind::Reset) {
            reset(g.q0);
        } else {
            sim.apply(g);
        }
        for (; f < faults.size() && faults[f].location == i; f++) sim.apply(pauli_gate(faults[f].pauli, faults[f].qubit));
    }
    if (f != faults.size()) throw std::invalid_argument("fault location beyond circuit");
    return record;
}

}  // namespace detail

// Executes a Clifford circuit on a fresh tableau. Returns MeasureZ outcomes in order.
inline MeasurementRecord run_clifford_circuit(const Circuit &c, const std::vector<FaultRealization> &faults, Rng &rng) {
    if (!is_clifford(c)) throw std::invalid_argument("non-Clifford gate in tableau backend");
    Tableau t(std::max<size_t>(c.width(), 1));
    return detail::run_with_faults(
        c, faults, t, [&](uint32_t q) -> uint8_t { return t.measure_z(q, rng).outcome; },
        [&](uint32_t q) { t.reset(q, rng); });
}

// Dense-backend counterpart of run_clifford_circuit; accepts rotations.
inline MeasurementRecord run_statevector_circuit(const Circuit &c, const std::vector<FaultRealization> &faults, Rng &rng) {
    if (c.width() > kDenseCap) throw std::invalid_argument("backend capacity exceeded: circuit wider than dense cap");
    StateVector s(std::max<size_t>(c.width(), 1));
    return detail::run_with_faults(
        c, faults, s, [&](uint32_t q) -> uint8_t { return s.measure(q, rng); },
        [&](uint32_t q) {
            if (s.measure(q, rng)) s.apply(X(q));
        });
}

// Shot histogram of the measurement record (first MeasureZ = most significant
// bit). When every measurement is terminal and there is no Reset, the unitary
// prefix is simulated once and copied per shot.
inline std::map<uint64_t, size_t> sample_clifford_counts(const Circuit &c, size_t shots, Rng &rng) {
    if (!is_clifford(c)) throw std::invalid_argument("non-Clifford gate in tableau backend");
    if (c.classical_bits() > 63) throw std::invalid_argument("too many measurements for a histogram key");
    size_t first = c.size();
    for (size_t i = 0; i < c.size(); i++) {
        if (c[i].kind == GateKind::MeasureZ) {
            first = i;
            break;
        }
    }
    bool terminal = true;
    for (size_t i = first; i < c.size(); i++) terminal &= c[i].kind == GateKind::MeasureZ;
    for (size_t i = 0; i < first; i++) terminal &= c[i].kind != GateKind::Reset;
    std::map<uint64_t, size_t> counts;
    auto key = [](const MeasurementRecord &r) {
        uint64_t k = 0;
        for (uint8_t b : r) k = (k << 1) | b;
        return k;
    };
    if (!terminal) {
        for (size_t s = 0; s < shots; s++) counts[key(run_clifford_circuit(c, {}, rng))]++;
        return counts;
    }
    Tableau prefix(std::max<size_t>(c.width(), 1));
    for (size_t i = 0; i < first; i++) prefix.apply(c[i]);
    MeasurementRecord r(c.size() - first);
    for (size_t s = 0; s < shots; s++) {
        Tableau t = prefix;
        for (size_t i = first; i < c.size(); i++) r[i - first] = t.measure_z(c[i].q0, rng).outcome;
        counts[key(r)]++;
    }
    return counts;
}

}  // namespace qecsim

#endif
