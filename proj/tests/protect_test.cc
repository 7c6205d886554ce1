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

#include "qecsim/protect.hpp"

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace qecsim;

namespace {

const CodeName kCodes[] = {CodeName::Steane, CodeName::D3Surface, CodeName::D5Surface};

Circuit logical(size_t width, std::initializer_list<Gate> gates) {
    Circuit c(width);
    for (const Gate &g : gates) c.append(g);
    for (uint32_t q = 0; q < width; q++) c.append(M(q));
    return c;
}

std::vector<uint8_t> run_once(const ProtectedCircuitPlan &plan, const std::vector<FaultRealization> &faults, Rng &rng) {
    return decode_and_readout(plan, run_clifford_circuit(plan.total, faults, rng));
}

Tableau run_unitary(const Circuit &c) {
    Tableau t(c.width());
    for (const Gate &g : c.gates()) t.apply(g);
    return t;
}

}  // namespace

TEST(encoder, zero_and_plus) {
    for (CodeName k : kCodes) {
        const auto &code = code_instance(k);
        Circuit enc = encoder_circuit(code);
        ASSERT_TRUE(is_clifford(enc));
        Tableau zero = run_unitary(enc);
        for (const auto &g : code.stabilizer_generators) ASSERT_EQ(zero.expectation(g), 1);
        ASSERT_EQ(zero.expectation(code.logical_z), 1);

        Circuit plus_in(code.n);
        plus_in.append(H(plan_encoder(code).input_qubit));
        Tableau plus = run_unitary(compose(plus_in, enc));
        for (const auto &g : code.stabilizer_generators) ASSERT_EQ(plus.expectation(g), 1);
        ASSERT_EQ(plus.expectation(code.logical_x), 1);

        Circuit one_in(code.n);
        one_in.append(X(plan_encoder(code).input_qubit));
        ASSERT_EQ(run_unitary(compose(one_in, enc)).expectation(code.logical_z), -1);
    }
}

TEST(encoder, inverse_round_trip) {
    Rng rng(1);
    for (CodeName k : {CodeName::Steane, CodeName::D3Surface}) {
        const auto &code = code_instance(k);
        uint32_t in = plan_encoder(code).input_qubit;
        for (int trial = 0; trial < 5; trial++) {
            Circuit prep(code.n);
            prep.append(RY(in, 2 * M_PI * uniform01(rng))).append(RZ(in, 2 * M_PI * uniform01(rng)));
            StateVector a(code.n);
            a.apply(prep);
            StateVector b = a;
            b.apply(encoder_circuit(code));
            b.apply(inverse(encoder_circuit(code)));
            cd overlap = 0;
            for (size_t i = 0; i < a.amplitudes().size(); i++) overlap += std::conj(a.amplitude(i)) * b.amplitude(i);
            ASSERT_NEAR(std::abs(overlap), 1.0, 1e-10);
        }
    }
}

TEST(extraction, qubit_counts) {
    ASSERT_EQ(syndrome_extraction_circuit(code_instance(CodeName::Steane), AncillaPolicy::reuse_pool(3)).width(), 10u);
    ASSERT_EQ(syndrome_extraction_circuit(code_instance(CodeName::D3Surface), AncillaPolicy::one_per_generator()).width(),
              17u);
    ASSERT_THROW(syndrome_extraction_circuit(code_instance(CodeName::Steane), AncillaPolicy::reuse_pool(0)),
                 std::invalid_argument);
    ASSERT_THROW(syndrome_extraction_circuit(code_instance(CodeName::Steane), AncillaPolicy::reuse_pool(3, false)),
                 std::invalid_argument);
    ASSERT_EQ(syndrome_extraction_circuit(code_instance(CodeName::Steane), AncillaPolicy::reuse_pool(6, false)).width(),
              13u);
}

TEST(extraction, steane_syndromes) {
    const auto &code = code_instance(CodeName::Steane);
    Circuit enc = encoder_circuit(code);
    enc.widen(10);
    Circuit round = syndrome_extraction_circuit(code, AncillaPolicy::reuse_pool(3));
    Rng rng(2);
    ASSERT_EQ(run_clifford_circuit(compose(enc, round), {}, rng), MeasurementRecord(6, 0));

    std::set<MeasurementRecord> seen;
    for (uint32_t q = 0; q < 7; q++) {
        // X on data qubit q right after encoding.
        Circuit c = enc;
        std::vector<FaultRealization> f = {{c.size() - 1, q, Pauli::X}};
        auto rec = run_clifford_circuit(compose(c, round), f, rng);
        for (size_t i = 0; i < 6; i++) {
            bool want = code.types[i] == StabilizerType::Z && code.stabilizer_generators[i].z(q);
            ASSERT_EQ(rec[i], want);
        }
        seen.insert(rec);
    }
    ASSERT_EQ(seen.size(), 7u);
}

TEST(logical_gate, contracts) {
    ASSERT_THROW(logical_gate(code_instance(CodeName::D3Surface), GateKind::S), std::invalid_argument);
    try {
        assemble_protected_circuit(logical(1, {S(0)}), code_instance(CodeName::D5Surface));
        FAIL();
    } catch (const std::invalid_argument &e) {
        ASSERT_NE(std::string(e.what()).find("unsupported logical gate"), std::string::npos);
    }
    ASSERT_THROW(assemble_protected_circuit(logical(1, {RX(0, 0.2)}), code_instance(CodeName::Steane)),
                 std::invalid_argument);
    ASSERT_EQ(logical_gate(code_instance(CodeName::Steane), GateKind::CX, 2).size(), 7u);
    ASSERT_EQ(logical_gate(code_instance(CodeName::Steane), GateKind::S)[0].kind, GateKind::Sdg);
}

TEST(assemble, degenerate_schedule) {
    const auto &code = code_instance(CodeName::Steane);
    auto plan = assemble_protected_circuit(logical(1, {}), code, 1);
    ASSERT_EQ(plan.total.width(), 10u);
    ASSERT_EQ(plan.schedule.size(), 1u);
    ASSERT_EQ(plan.total.classical_bits(), 6u + 7u);
    ASSERT_TRUE(is_clifford(plan.total));
}

TEST(assemble, layouts) {
    auto d5 = assemble_protected_circuit(logical(2, {H(0), CX(0, 1)}), code_instance(CodeName::D5Surface));
    ASSERT_EQ(metrics(d5.total).qubits, 2u * (25 + 24));
    ASSERT_EQ(d5.patches.size(), 2u);
    for (uint32_t a : d5.patches[0].data) {
        for (uint32_t b : d5.patches[1].data) ASSERT_NE(a, b);
    }
    auto st = assemble_protected_circuit(logical(1, {H(0)}), code_instance(CodeName::Steane));
    ASSERT_EQ(metrics(st.total).qubits, 10u);
}

TEST(decode_and_readout, noiseless_logical_values) {
    Rng rng(3);
    for (CodeName k : kCodes) {
        const auto &code = code_instance(k);
        auto plan = assemble_protected_circuit(logical(1, {X(0)}), code);
        auto record = run_clifford_circuit(plan.total, {}, rng);
        for (const auto &e : plan.schedule) {
            if (e.kind != PlanEvent::Kind::Round) continue;
            for (size_t b : e.bits) ASSERT_EQ(record[b], 0);
        }
        ASSERT_EQ(decode_and_readout(plan, record), (std::vector<uint8_t>{1}));
        ASSERT_THROW(decode_and_readout(plan, MeasurementRecord(3)), std::invalid_argument);

        auto cx = assemble_protected_circuit(logical(2, {X(0), CX(0, 1)}), code);
        ASSERT_EQ(run_once(cx, {}, rng), (std::vector<uint8_t>{1, 1}));
        auto hh = assemble_protected_circuit(logical(2, {H(0), X(1), H(0), CX(1, 0)}), code);
        ASSERT_EQ(run_once(hh, {}, rng), (std::vector<uint8_t>{1, 1}));
    }
}

TEST(decode_and_readout, single_x_fault_anywhere_on_steane_data) {
    const auto &code = code_instance(CodeName::Steane);
    auto plan = assemble_protected_circuit(logical(1, {X(0)}), code);
    Rng rng(4);
    std::set<uint32_t> data(plan.patches[0].data.begin(), plan.patches[0].data.end());
    size_t cases = 0;
    for (size_t loc = 0; loc < plan.total.size(); loc++) {
        // Faults on data qubits placed after encoding, including just before readout.
        if (plan.total[loc].kind == GateKind::MeasureZ && !data.count(plan.total[loc].q0)) continue;
        for (uint32_t q : data) {
            if (loc < 12) continue;
            ASSERT_EQ(run_once(plan, {{loc, q, Pauli::X}}, rng), (std::vector<uint8_t>{1})) << loc << " " << q;
            cases++;
        }
    }
    ASSERT_GT(cases, 100u);
}

TEST(decode_and_readout, weight_one_between_rounds) {
    Rng rng(5);
    for (CodeName k : kCodes) {
        const auto &code = code_instance(k);
        for (const Circuit &lc : {logical(1, {H(0), H(0)}), logical(1, {X(0), H(0), H(0)})}) {
            auto plan = assemble_protected_circuit(lc, code);
            auto expected = run_once(plan, {}, rng);
            // After the first round and after the last round.
            size_t first_round_end = 0;
            for (size_t b = plan.schedule[1].bits.back(), i = 0; i < plan.total.size(); i++) {
                if (plan.total[i].kind == GateKind::MeasureZ && b-- == 0) {
                    first_round_end = i;
                    break;
                }
            }
            size_t last_round_end = plan.total.size() - code.n - 1;
            for (size_t loc : {first_round_end, last_round_end}) {
                for (uint32_t q = 0; q < code.n; q++) {
                    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
                        ASSERT_EQ(run_once(plan, {{loc, plan.patches[0].data[q], p}}, rng), expected)
                            << code_name(k) << " loc " << loc << " q " << q;
                    }
                }
            }
        }
    }
}

TEST(decode_and_readout, two_faults_may_fail_on_d3) {
    const auto &code = code_instance(CodeName::D3Surface);
    auto plan = assemble_protected_circuit(logical(1, {X(0)}), code);
    Rng rng(6);
    size_t loc = plan.total.size() - code.n - 1;
    // Two X errors along logical X flip the outcome.
    auto out = run_once(plan, {{loc, 0, Pauli::X}, {loc, 3, Pauli::X}}, rng);
    ASSERT_EQ(out, (std::vector<uint8_t>{0}));
}

TEST(assemble, logical_algebra_matches_statevector) {
    Rng rng(7);
    for (CodeName k : {CodeName::Steane, CodeName::D3Surface}) {
        const auto &code = code_instance(k);
        std::vector<GateKind> set = code.logical_gate_set();
        for (int trial = 0; trial < 12; trial++) {
            size_t width = 1 + uniform_below(rng, 2);
            Circuit lc(width);
            size_t gates = uniform_below(rng, 7);
            for (size_t i = 0; i < gates; i++) {
                GateKind g = set[uniform_below(rng, set.size())];
                if (g == GateKind::CX && width == 1) g = GateKind::H;
                if (g == GateKind::CX) {
                    uint32_t a = uint32_t(uniform_below(rng, 2));
                    lc.append(CX(a, 1 - a));
                } else {
                    lc.append(Gate::one(g, uint32_t(uniform_below(rng, width))));
                }
            }
            StateVector s(width);
            s.apply(lc);
            std::vector<uint32_t> qs;
            for (uint32_t q = 0; q < width; q++) qs.push_back(q);
            auto exact = outcome_distribution(s, qs);
            for (uint32_t q = 0; q < width; q++) lc.append(M(q));
            auto plan = assemble_protected_circuit(lc, code);
            std::map<uint64_t, double> freq;
            const int shots = 2000;
            for (int i = 0; i < shots; i++) {
                auto out = run_once(plan, {}, rng);
                uint64_t key = 0;
                for (uint8_t b : out) key = key * 2 + b;
                freq[key] += 1.0 / shots;
            }
            ASSERT_LE(test_util::tvd(exact, freq), 0.05) << code_name(k) << "\n" << to_text(lc);
        }
    }
}
