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

#ifndef QECSIM_PROTECT_HPP
#define QECSIM_PROTECT_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qecsim/circuit.hpp"
#include "qecsim/code.hpp"
#include "qecsim/pauli.hpp"
#include "qecsim/simulate.hpp"

namespace qecsim {

// CSS encoder data. The X-type generators are row reduced so each row owns a
// pivot qubit absent from every other row; logical X is reduced to avoid
// every pivot and the input qubit is taken from its support.
struct EncoderPlan {
    uint32_t input_qubit = 0;
    std::vector<uint32_t> logical_x_support;
    std::vector<PauliString> rows;
    std::vector<uint32_t> pivots;
};

inline EncoderPlan plan_encoder(const StabilizerCode &code) {
    EncoderPlan plan;
    for (size_t i : code.generators_of_type(StabilizerType::X)) plan.rows.push_back(code.stabilizer_generators[i]);
    size_t r = 0;
    for (uint32_t q = 0; q < code.n && r < plan.rows.size(); q++) {
        size_t hit = r;
        while (hit < plan.rows.size() && !plan.rows[hit].x(q)) hit++;
        if (hit == plan.rows.size()) continue;
        std::swap(plan.rows[r], plan.rows[hit]);
        for (size_t j = 0; j < plan.rows.size(); j++) {
            if (j != r && plan.rows[j].x(q)) plan.rows[j] *= plan.rows[r];
        }
        plan.pivots.push_back(q);
        r++;
    }
    if (r != plan.rows.size()) throw std::logic_error("dependent X generators");
    PauliString lx = code.logical_x;
    for (size_t i = 0; i < plan.pivots.size(); i++) {
        if (lx.x(plan.pivots[i])) lx *= plan.rows[i];
    }
    plan.logical_x_support = lx.support();
    plan.input_qubit = plan.logical_x_support.front();
    return plan;
}

namespace detail {

inline void append_encoder(Circuit &c, const StabilizerCode &code, const std::vector<uint32_t> &phys, bool with_input) {
    EncoderPlan plan = plan_encoder(code);
    if (with_input) {
        for (uint32_t q : plan.logical_x_support) {
            if (q != plan.input_qubit) c.append(CX(phys[plan.input_qubit], phys[q]));
        }
    }
    for (size_t i = 0; i < plan.pivots.size(); i++) {
        uint32_t p = plan.pivots[i];
        c.append(H(phys[p]));
        for (uint32_t q : plan.rows[i].support()) {
            if (q != p) c.append(CX(phys[p], phys[q]));
        }
    }
}

// Appends one extraction round; returns the classical bit of each generator.
inline std::vector<size_t> append_round(Circuit &c, const StabilizerCode &code, const std::vector<uint32_t> &phys,
                                        const std::vector<uint32_t> &ancillas, const AncillaPolicy &policy) {
    size_t m = code.num_generators();
    if (ancillas.empty()) throw std::invalid_argument("pool size must be at least 1");
    if (policy.kind == AncillaPolicy::Kind::OnePerGenerator && ancillas.size() < m) {
        throw std::invalid_argument("not enough ancillas for one per generator");
    }
    if (!policy.reset_before_reuse && m > ancillas.size()) throw std::invalid_argument("pool exhausted without Reset");
    std::vector<size_t> bits;
    for (size_t i = 0; i < m; i++) {
        uint32_t a = ancillas[i % ancillas.size()];
        bool x_type = code.types[i] == StabilizerType::X;
        if (policy.reset_before_reuse) c.append(R(a));
        if (x_type) c.append(H(a));
        for (uint32_t q : code.extraction_order[i]) c.append(x_type ? CX(a, phys[q]) : CX(phys[q], a));
        if (x_type) c.append(H(a));
        bits.push_back(c.classical_bits());
        c.append(M(a));
    }
    return bits;
}

inline std::vector<uint32_t> iota_qubits(uint32_t start, size_t count) {
    std::vector<uint32_t> v(count);
    for (size_t i = 0; i < count; i++) v[i] = start + uint32_t(i);
    return v;
}

}  // namespace detail

// Maps a one-qubit state on data qubit plan_encoder(code).input_qubit (others |0>) to the logical state.
inline Circuit encoder_circuit(const StabilizerCode &code) {
    Circuit c(code.n);
    detail::append_encoder(c, code, detail::iota_qubits(0, code.n), true);
    return c;
}

// Data qubits 0..n-1, ancillas after.
inline Circuit syndrome_extraction_circuit(const StabilizerCode &code, const AncillaPolicy &policy) {
    size_t anc = policy.kind == AncillaPolicy::Kind::OnePerGenerator ? code.num_generators() : policy.pool_size;
    if (anc == 0) throw std::invalid_argument("pool size must be at least 1");
    Circuit c(code.n + anc);
    detail::append_round(c, code, detail::iota_qubits(0, code.n), detail::iota_qubits(uint32_t(code.n), anc), policy);
    return c;
}

namespace detail {

inline void append_logical_gate(Circuit &c, const StabilizerCode &code, GateKind kind,
                                const std::vector<std::vector<uint32_t>> &phys) {
    if (!code.supports(kind) || kind == GateKind::MeasureZ) {
        throw std::invalid_argument("unsupported logical gate " + std::string(gate_name(kind)) + " for " +
                                    std::string(code_name(code.name)));
    }
    const auto &p = phys[0];
    switch (kind) {
        case GateKind::X:
        case GateKind::Y:
        case GateKind::Z: {
            PauliString s(code.n);
            if (kind != GateKind::Z) s *= code.logical_x;
            if (kind != GateKind::X) s *= code.logical_z;
            for (uint32_t q : s.support()) {
                Pauli pl = s.get(q);
                c.append(Gate::one(pl == Pauli::X ? GateKind::X : pl == Pauli::Z ? GateKind::Z : GateKind::Y, p[q]));
            }
            break;
        }
        case GateKind::H:
            for (uint32_t q = 0; q < code.n; q++) c.append(H(p[q]));
            break;
        case GateKind::S:
            for (uint32_t q = 0; q < code.n; q++) c.append(Sdg(p[q]));
            break;
        case GateKind::Sdg:
            for (uint32_t q = 0; q < code.n; q++) c.append(S(p[q]));
            break;
        case GateKind::CX:
            if (phys.size() != 2) throw std::invalid_argument("logical CX needs two patches");
            for (uint32_t q = 0; q < code.n; q++) c.append(CX(phys[0][q], phys[1][q]));
            break;
        default: throw std::invalid_argument("unsupported logical gate");
    }
}

}  // namespace detail

// Transversal realization on patch data qubits (patch i occupies [i*n, (i+1)*n)).
inline Circuit logical_gate(const StabilizerCode &code, GateKind kind, size_t patches = 1) {
    if (!code.supports(kind) || kind == GateKind::MeasureZ) throw std::invalid_argument("unsupported logical gate");
    if (size_t(gate_arity(kind)) != patches) throw std::invalid_argument("patch count does not match gate arity");
    Circuit c(code.n * patches);
    std::vector<std::vector<uint32_t>> phys;
    for (size_t i = 0; i < patches; i++) phys.push_back(detail::iota_qubits(uint32_t(i * code.n), code.n));
    detail::append_logical_gate(c, code, kind, phys);
    return c;
}

struct PlanEvent {
    enum class Kind : uint8_t { Gate, Round };
    Kind kind = Kind::Gate;
    GateKind gate = GateKind::H;
    uint32_t patch0 = 0;
    uint32_t patch1 = 0;
    std::vector<size_t> bits;
};

struct PatchLayout {
    std::vector<uint32_t> data;
    std::vector<uint32_t> ancillas;
};

struct ProtectedCircuitPlan {
    StabilizerCode code;
    size_t logical_qubits = 0;
    std::vector<PatchLayout> patches;
    std::vector<PlanEvent> schedule;
    // Classical bit of each patch's data readout, indexed by final position.
    std::vector<std::vector<size_t>> readout_bits;
    // Logical qubit read into each output bit.
    std::vector<uint32_t> output_qubits;
    Circuit total;
};

inline ProtectedCircuitPlan assemble_protected_circuit(const Circuit &logical, const StabilizerCode &code,
                                                       size_t rounds_per_layer = 1) {
    if (!is_clifford(logical)) throw std::invalid_argument("non-Clifford logical circuit");
    if (logical.width() == 0 || logical.width() > 2) throw std::invalid_argument("logical circuit must have 1 or 2 qubits");
    const size_t nq = logical.width();
    ProtectedCircuitPlan plan;
    plan.code = code;
    plan.logical_qubits = nq;
    size_t block = code.n + code.ancilla_count;
    plan.total = Circuit(nq * block);
    std::vector<std::vector<uint32_t>> pos_to_phys;
    for (size_t i = 0; i < nq; i++) {
        PatchLayout p;
        p.data = detail::iota_qubits(uint32_t(i * block), code.n);
        p.ancillas = detail::iota_qubits(uint32_t(i * block + code.n), code.ancilla_count);
        pos_to_phys.push_back(p.data);
        plan.patches.push_back(std::move(p));
    }

    std::vector<Gate> gates;
    bool measured_seen = false;
    for (const Gate &g : logical.gates()) {
        if (g.kind == GateKind::MeasureZ) {
            measured_seen = true;
            plan.output_qubits.push_back(g.q0);
            continue;
        }
        if (measured_seen) throw std::invalid_argument("logical measurements must be terminal");
        if (g.kind == GateKind::Reset || !code.supports(g.kind)) {
            throw std::invalid_argument("unsupported logical gate " + std::string(gate_name(g.kind)) + " for " +
                                        std::string(code_name(code.name)));
        }
        gates.push_back(g);
    }
    if (plan.output_qubits.empty()) {
        for (uint32_t q = 0; q < nq; q++) plan.output_qubits.push_back(q);
    }

    // As-soon-as-possible logical layers.
    std::vector<size_t> level(nq, 0);
    std::vector<std::vector<Gate>> layers;
    for (const Gate &g : gates) {
        size_t l = level[g.q0];
        if (g.arity() == 2) l = std::max(l, level[g.q1]);
        if (layers.size() <= l) layers.resize(l + 1);
        layers[l].push_back(g);
        level[g.q0] = l + 1;
        if (g.arity() == 2) level[g.q1] = l + 1;
    }

    for (size_t i = 0; i < nq; i++) detail::append_encoder(plan.total, code, pos_to_phys[i], false);

    auto rounds = [&]() {
        for (size_t r = 0; r < rounds_per_layer; r++) {
            for (uint32_t i = 0; i < nq; i++) {
                PlanEvent e;
                e.kind = PlanEvent::Kind::Round;
                e.patch0 = i;
                e.bits = detail::append_round(plan.total, code, pos_to_phys[i], plan.patches[i].ancillas, code.default_policy);
                plan.schedule.push_back(std::move(e));
            }
        }
    };

    for (const auto &layer : layers) {
        for (const Gate &g : layer) {
            PlanEvent e;
            e.kind = PlanEvent::Kind::Gate;
            e.gate = g.kind;
            e.patch0 = g.q0;
            e.patch1 = g.arity() == 2 ? g.q1 : g.q0;
            std::vector<std::vector<uint32_t>> phys = {pos_to_phys[g.q0]};
            if (g.arity() == 2) phys.push_back(pos_to_phys[g.q1]);
            detail::append_logical_gate(plan.total, code, g.kind, phys);
            if (g.kind == GateKind::H) {
                std::vector<uint32_t> next(code.n);
                for (size_t p = 0; p < code.n; p++) next[code.h_relabel[p]] = pos_to_phys[g.q0][p];
                pos_to_phys[g.q0] = next;
            }
            plan.schedule.push_back(std::move(e));
        }
        rounds();
    }
    if (layers.empty()) rounds();

    for (size_t i = 0; i < nq; i++) {
        std::vector<size_t> bits_by_phys(plan.total.width(), 0);
        for (uint32_t q : plan.patches[i].data) {
            bits_by_phys[q] = plan.total.classical_bits();
            plan.total.append(M(q));
        }
        std::vector<size_t> by_pos(code.n);
        for (size_t p = 0; p < code.n; p++) by_pos[p] = bits_by_phys[pos_to_phys[i][p]];
        plan.readout_bits.push_back(std::move(by_pos));
    }
    return plan;
}

namespace detail {

// Conjugates a position-space Pauli by one logical gate of the plan.
inline void transform_pauli(const StabilizerCode &code, const PlanEvent &e, std::vector<PauliString> &paulis) {
    PauliString &f = paulis[e.patch0];
    switch (e.gate) {
        case GateKind::H: {
            PauliString next(code.n);
            for (size_t p = 0; p < code.n; p++) {
                next.set_x(code.h_relabel[p], f.z(p));
                next.set_z(code.h_relabel[p], f.x(p));
            }
            f = next;
            break;
        }
        case GateKind::S:
        case GateKind::Sdg:
            for (size_t p = 0; p < code.n; p++) {
                if (f.x(p)) f.flip_z(p);
            }
            break;
        case GateKind::CX: {
            PauliString &t = paulis[e.patch1];
            for (size_t p = 0; p < code.n; p++) {
                if (f.x(p)) t.flip_x(p);
                if (t.z(p)) f.flip_z(p);
            }
            break;
        }
        default: break;
    }
}

}  // namespace detail

// Replays the schedule on a classical Pauli frame per patch (in position
// coordinates) and returns one logical bit per output qubit.
//
// A round's residual syndrome (measured xor frame) is decoded into a
// candidate. The candidate is committed to the frame once the following round
// reports the same residual, so a fault landing mid-round or a flipped
// ancilla readout is not trusted on a single observation. The final data
// readout is decoded directly.
inline std::vector<uint8_t> decode_and_readout(const ProtectedCircuitPlan &plan, const MeasurementRecord &record) {
    if (record.size() != plan.total.classical_bits()) throw std::invalid_argument("record length mismatch");
    const StabilizerCode &code = plan.code;
    const SyndromeTable &table = decoder_instance(code.name);
    std::vector<PauliString> frame(plan.logical_qubits, PauliString(code.n));
    std::vector<PauliString> pending(plan.logical_qubits, PauliString(code.n));
    std::vector<uint8_t> residual(code.num_generators());
    for (const PlanEvent &e : plan.schedule) {
        if (e.kind == PlanEvent::Kind::Gate) {
            detail::transform_pauli(code, e, frame);
            detail::transform_pauli(code, e, pending);
            continue;
        }
        PauliString &f = frame[e.patch0];
        for (size_t i = 0; i < residual.size(); i++) {
            residual[i] = record[e.bits[i]] ^ !f.commutes(code.stabilizer_generators[i]);
        }
        if (code.syndrome(pending[e.patch0]) == residual) {
            f *= table.correction(residual);
            pending[e.patch0] = PauliString(code.n);
        } else {
            pending[e.patch0] = table.correction(residual);
        }
    }
    std::vector<uint8_t> logical(plan.logical_qubits);
    for (size_t i = 0; i < plan.logical_qubits; i++) {
        PauliString observed(code.n);
        for (size_t p = 0; p < code.n; p++) observed.set_x(p, record[plan.readout_bits[i][p]] ^ frame[i].x(p));
        uint32_t s = 0;
        for (size_t k = 0; k < table.x_checks().size(); k++) {
            s |= uint32_t(!observed.commutes(code.stabilizer_generators[table.x_checks()[k]])) << k;
        }
        for (uint32_t q : table.x_correction(s)) observed.flip_x(q);
        logical[i] = !observed.commutes(code.logical_z);
    }
    std::vector<uint8_t> out;
    for (uint32_t q : plan.output_qubits) out.push_back(logical[q]);
    return out;
}

}  // namespace qecsim

#endif
