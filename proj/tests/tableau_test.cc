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

#include "qecsim/tableau.hpp"

#include "gtest/gtest.h"
#include "qecsim/frame.hpp"
#include "qecsim/simulate.hpp"
#include "test_util.hpp"

using namespace qecsim;

TEST(tableau, init) {
    ASSERT_EQ(tableau_init(1).stabilizer(0), "+Z");
    auto t = tableau_init(3);
    ASSERT_EQ(t.stabilizer(0), "+ZII");
    ASSERT_EQ(t.stabilizer(1), "+IZI");
    ASSERT_EQ(t.stabilizer(2), "+IIZ");
    ASSERT_TRUE(t.is_symplectic());
}

TEST(tableau, conjugation) {
    ASSERT_EQ(apply_clifford(tableau_init(1), H(0)).stabilizer(0), "+X");
    auto t = apply_clifford(tableau_init(2), CX(0, 1));
    ASSERT_EQ(t.stabilizer(0), "+ZI");
    ASSERT_EQ(t.stabilizer(1), "+ZZ");
    try {
        apply_clifford(tableau_init(1), RX(0, 0.3));
        FAIL();
    } catch (const std::invalid_argument &e) {
        ASSERT_STREQ(e.what(), "non-Clifford gate in tableau backend");
    }
}

TEST(tableau, single_qubit_images) {
    // Heisenberg images of X and Z under each gate, read from the destabilizer/stabilizer rows.
    struct Case {
        Gate g;
        const char *x_image;
        const char *z_image;
    };
    Case cases[] = {{H(0), "+Z", "+X"}, {S(0), "+Y", "+Z"},  {Sdg(0), "-Y", "+Z"},
                    {X(0), "+X", "-Z"}, {Y(0), "-X", "-Z"}, {Z(0), "-X", "+Z"}};
    for (const auto &c : cases) {
        auto t = apply_clifford(tableau_init(1), c.g);
        ASSERT_EQ(t.destabilizer(0), c.x_image) << gate_name(c.g.kind);
        ASSERT_EQ(t.stabilizer(0), c.z_image) << gate_name(c.g.kind);
    }
    auto t = apply_clifford(tableau_init(2), CZ(0, 1));
    ASSERT_EQ(t.destabilizer(0), "+XZ");
    ASSERT_EQ(t.destabilizer(1), "+ZX");
}

TEST(tableau, apply_pauli) {
    auto t = tableau_init(1);
    t.apply_pauli(PauliString::from_string("X"));
    ASSERT_EQ(t.stabilizer(0), "-Z");
    auto u = tableau_init(1);
    u.apply_pauli(PauliString::from_string("Z"));
    ASSERT_EQ(u.stabilizer(0), "+Z");

    Rng rng(1);
    auto v = tableau_init(4);
    Circuit c = test_util::random_clifford(rng, 4, 30);
    for (const Gate &g : c.gates()) v.apply(g);
    auto w = v;
    auto p = PauliString::from_string("XYZI");
    w.apply_pauli(p);
    w.apply_pauli(p);
    ASSERT_EQ(v, w);
}

TEST(tableau, measure) {
    Rng rng(2);
    auto t = tableau_init(1);
    auto m = t.measure_z(0, rng);
    ASSERT_FALSE(m.outcome);
    ASSERT_TRUE(m.deterministic);

    size_t ones = 0;
    const size_t shots = 100000;
    for (size_t i = 0; i < shots; i++) {
        auto u = apply_clifford(tableau_init(1), H(0));
        auto first = u.measure_z(0, rng);
        ASSERT_FALSE(first.deterministic);
        auto second = u.measure_z(0, rng);
        ASSERT_TRUE(second.deterministic);
        ASSERT_EQ(first.outcome, second.outcome);
        ones += first.outcome;
    }
    ASSERT_NEAR(double(ones) / shots, 0.5, 0.01);
}

TEST(tableau, expectation) {
    auto t = apply_clifford(apply_clifford(tableau_init(2), H(0)), CX(0, 1));
    ASSERT_EQ(t.expectation(PauliString::from_string("XX")), 1);
    ASSERT_EQ(t.expectation(PauliString::from_string("ZZ")), 1);
    ASSERT_EQ(t.expectation(PauliString::from_string("YY")), -1);
    ASSERT_EQ(t.expectation(PauliString::from_string("ZI")), 0);
}

TEST(tableau, symplectic_preserved) {
    Rng rng(3);
    for (int i = 0; i < 50; i++) {
        size_t n = 1 + uniform_below(rng, 9);
        Tableau t(n);
        Circuit c = test_util::random_clifford(rng, n, 40);
        for (const Gate &g : c.gates()) {
            t.apply(g);
            ASSERT_TRUE(t.is_symplectic());
            if (uniform_below(rng, 8) == 0) {
                t.measure_z(uint32_t(uniform_below(rng, n)), rng);
                ASSERT_TRUE(t.is_symplectic());
            }
        }
    }
}

TEST(tableau, reset) {
    Rng rng(4);
    for (int i = 0; i < 20; i++) {
        auto t = apply_clifford(apply_clifford(tableau_init(2), H(0)), CX(0, 1));
        t.reset(0, rng);
        auto m = t.measure_z(0, rng);
        ASSERT_TRUE(m.deterministic);
        ASSERT_FALSE(m.outcome);
    }
}

TEST(run_clifford_circuit, bell_pair) {
    Rng rng(5);
    Circuit c(2);
    c.append(H(0)).append(CX(0, 1)).append(M(0)).append(M(1));
    for (int i = 0; i < 200; i++) {
        auto r = run_clifford_circuit(c, {}, rng);
        ASSERT_EQ(r[0], r[1]);
    }
}

TEST(run_clifford_circuit, fault_before_measure) {
    Rng rng(6);
    Circuit c(1);
    c.append(M(0));
    auto r = run_clifford_circuit(c, {{0, 0, Pauli::X}}, rng);
    ASSERT_EQ(r, (MeasurementRecord{1}));
    Circuit d(1);
    d.append(H(0));
    d.append(M(0));
    ASSERT_THROW(run_clifford_circuit(append_gate(d, RX(0, 1)), {}, rng), std::invalid_argument);
}

TEST(run_clifford_circuit, determinism) {
    Rng a(7), b(7), g(8);
    Circuit c = test_util::random_clifford(g, 6, 60);
    for (uint32_t q = 0; q < 6; q++) c.append(M(q));
    for (int i = 0; i < 20; i++) ASSERT_EQ(run_clifford_circuit(c, {}, a), run_clifford_circuit(c, {}, b));
}

TEST(run_clifford_circuit, matches_statevector_small) {
    Rng rng(9);
    for (int i = 0; i < 10; i++) {
        size_t n = 2 + uniform_below(rng, 9);
        Circuit c = test_util::random_clifford(rng, n, 1 + uniform_below(rng, 100));
        std::vector<uint32_t> measured;
        size_t k = 1 + uniform_below(rng, 4);
        while (measured.size() < k) {
            uint32_t q = uint32_t(uniform_below(rng, n));
            if (std::find(measured.begin(), measured.end(), q) == measured.end()) measured.push_back(q);
        }
        StateVector s(n);
        s.apply(c);
        auto exact = outcome_distribution(s, measured);
        for (uint32_t q : measured) c.append(M(q));
        const size_t shots = 20000;
        std::map<uint64_t, double> freq;
        for (auto [key, count] : sample_clifford_counts(c, shots, rng)) freq[key] = double(count) / shots;
        ASSERT_LE(test_util::tvd(exact, freq), 0.03);
    }
}

TEST(run_clifford_circuit, midcircuit_reset_matches_statevector) {
    Rng rng(10);
    Circuit c(3);
    c.append(H(0)).append(CX(0, 1)).append(CX(1, 2)).append(R(0)).append(H(0)).append(M(0)).append(M(1)).append(M(2));
    std::map<uint64_t, double> a, b;
    for (int i = 0; i < 20000; i++) {
        auto r1 = run_clifford_circuit(c, {}, rng);
        auto r2 = run_statevector_circuit(c, {}, rng);
        a[r1[0] * 4 + r1[1] * 2 + r1[2]] += 1.0 / 20000;
        b[r2[0] * 4 + r2[1] * 2 + r2[2]] += 1.0 / 20000;
        ASSERT_EQ(r1[1], r1[2]);
    }
    ASSERT_LE(test_util::tvd(a, b), 0.03);
}

namespace {

// Random Clifford circuit with interleaved mid-circuit measurements and resets.
Circuit random_dynamic(Rng &rng, size_t n, size_t gates) {
    Circuit base = test_util::random_clifford(rng, n, gates);
    Circuit c(n);
    for (const Gate &g : base.gates()) {
        c.append(g);
        uint64_t r = uniform_below(rng, 10);
        if (r == 0) c.append(M(uint32_t(uniform_below(rng, n))));
        if (r == 1) c.append(R(uint32_t(uniform_below(rng, n))));
    }
    for (uint32_t q = 0; q < n; q++) c.append(M(q));
    return c;
}

std::map<uint64_t, double> frame_histogram(const Circuit &c, const NoiseModel &noise, size_t shots, Rng &rng) {
    FrameSampler sampler(c, rng);
    FaultSampler faults(c, noise);
    std::map<uint64_t, double> h;
    for (size_t done = 0; done < shots; done += 64) {
        std::vector<std::vector<FaultRealization>> f(64);
        for (auto &lane : f) lane = faults.sample(rng);
        auto words = sampler.run_batch(f, rng);
        for (size_t lane = 0; lane < 64; lane++) {
            uint64_t k = 0;
            for (uint64_t w : words) k = (k << 1) | ((w >> lane) & 1);
            h[k] += 1.0 / shots;
        }
    }
    return h;
}

std::map<uint64_t, double> tableau_histogram(const Circuit &c, const NoiseModel &noise, size_t shots, Rng &rng) {
    FaultSampler faults(c, noise);
    std::map<uint64_t, double> h;
    for (size_t s = 0; s < shots; s++) {
        uint64_t k = 0;
        for (uint8_t b : run_clifford_circuit(c, faults.sample(rng), rng)) k = (k << 1) | b;
        h[k] += 1.0 / shots;
    }
    return h;
}

}  // namespace

TEST(frame_sampler, matches_tableau_noiseless) {
    Rng rng(11);
    for (int i = 0; i < 20; i++) {
        size_t n = 2 + uniform_below(rng, 4);
        Circuit c = random_dynamic(rng, n, 30);
        if (c.classical_bits() > 12) continue;
        NoiseModel none{ErrorMode::D, 0.0};
        ASSERT_LE(test_util::tvd(frame_histogram(c, none, 12800, rng), tableau_histogram(c, none, 12800, rng)), 0.05);
    }
}

TEST(frame_sampler, matches_tableau_noisy) {
    Rng rng(12);
    for (ErrorMode mode : {ErrorMode::D, ErrorMode::BP, ErrorMode::BPD}) {
        for (int i = 0; i < 5; i++) {
            Circuit c = random_dynamic(rng, 3, 25);
            if (c.classical_bits() > 10) continue;
            NoiseModel noise{mode, 0.05};
            ASSERT_LE(test_util::tvd(frame_histogram(c, noise, 12800, rng), tableau_histogram(c, noise, 12800, rng)),
                      0.05)
                << mode_name(mode);
        }
    }
}

TEST(frame_sampler, deterministic_records_match) {
    // Deterministic outcomes: every lane equals the tableau run with the same faults.
    Rng rng(13);
    Circuit c(4);
    c.append(CX(0, 1)).append(CX(1, 2)).append(M(2)).append(R(2)).append(CX(0, 3)).append(M(3)).append(M(0));
    FrameSampler sampler(c, rng);
    std::vector<std::vector<FaultRealization>> f(64);
    for (size_t lane = 0; lane < 64; lane++) {
        if (lane & 1) f[lane].push_back({0, 0, Pauli::X});
        if (lane & 2) f[lane].push_back({2, 2, Pauli::Y});
        if (lane & 4) f[lane].push_back({4, 3, Pauli::Z});
    }
    auto words = sampler.run_batch(f, rng);
    for (size_t lane = 0; lane < 64; lane++) {
        ASSERT_EQ(FrameSampler::lane_record(words, lane), run_clifford_circuit(c, f[lane], rng)) << lane;
    }
}
