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

#ifndef QECSIM_FRAME_HPP
#define QECSIM_FRAME_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qecsim/simulate.hpp"

namespace qecsim {

// Pauli-frame sampler for noisy Clifford circuits. One noiseless reference
// shot is taken on the tableau; each batch then tracks 64 Pauli frames at once
// (one bit lane per shot) and flips the reference outcomes where a frame
// carries X on the measured qubit. Z components start random and are
// re-randomized after every measurement and reset so that random outcomes
// stay correctly distributed.
class FrameSampler {
   public:
    static constexpr size_t kLanes = 64;

    FrameSampler(const Circuit &c, Rng &rng) : circuit_(c) {
        if (!is_clifford(c)) throw std::invalid_argument("non-Clifford gate in tableau backend");
        reference_ = run_clifford_circuit(c, {}, rng);
    }

    const Circuit &circuit() const { return circuit_; }
    const MeasurementRecord &reference() const { return reference_; }

    // faults[lane] must be sorted by location; at most 64 lanes. Returns one
    // word per classical bit, bit `lane` holding that shot's outcome.
    std::vector<uint64_t> run_batch(const std::vector<std::vector<FaultRealization>> &faults, Rng &rng) const {
        if (faults.size() > kLanes) throw std::invalid_argument("too many lanes");
        struct Event {
            size_t location;
            uint32_t qubit;
            Pauli pauli;
            uint64_t mask;
        };
        std::vector<Event> events;
        for (size_t lane = 0; lane < faults.size(); lane++) {
            for (const auto &f : faults[lane]) {
                if (f.location >= circuit_.size()) throw std::invalid_argument("fault location beyond circuit");
                events.push_back({f.location, f.qubit, f.pauli, uint64_t{1} << lane});
            }
        }
        std::stable_sort(events.begin(), events.end(),
                         [](const Event &a, const Event &b) { return a.location < b.location; });

        const size_t n = std::max<size_t>(circuit_.width(), 1);
        std::vector<uint64_t> x(n, 0), z(n), out;
        for (auto &w : z) w = rng();
        out.reserve(circuit_.classical_bits());
        size_t e = 0;
        auto inject = [&](size_t i) {
            for (; e < events.size() && events[e].location == i; e++) {
                const Event &ev = events[e];
                if (ev.pauli == Pauli::X || ev.pauli == Pauli::Y) x[ev.qubit] ^= ev.mask;
                if (ev.pauli == Pauli::Z || ev.pauli == Pauli::Y) z[ev.qubit] ^= ev.mask;
            }
        };
        for (size_t i = 0; i < circuit_.size(); i++) {
            const Gate &g = circuit_[i];
            switch (g.kind) {
                case GateKind::H: std::swap(x[g.q0], z[g.q0]); break;
                case GateKind::S:
                case GateKind::Sdg: z[g.q0] ^= x[g.q0]; break;
                case GateKind::CX:
                    x[g.q1] ^= x[g.q0];
                    z[g.q0] ^= z[g.q1];
                    break;
                case GateKind::CZ:
                    z[g.q0] ^= x[g.q1];
                    z[g.q1] ^= x[g.q0];
                    break;
                case GateKind::MeasureZ: {
                    inject(i);
                    uint64_t ref = reference_[out.size()] ? ~uint64_t{0} : 0;
                    out.push_back(ref ^ x[g.q0]);
                    z[g.q0] ^= rng();
                    continue;
                }
                case GateKind::Reset:
                    x[g.q0] = 0;
                    z[g.q0] = rng();
                    break;
                default: break;
            }
            inject(i);
        }
        return out;
    }

    static MeasurementRecord lane_record(const std::vector<uint64_t> &words, size_t lane) {
        MeasurementRecord r(words.size());
        for (size_t i = 0; i < words.size(); i++) r[i] = (words[i] >> lane) & 1;
        return r;
    }

   private:
    Circuit circuit_;
    MeasurementRecord reference_;
};

}  // namespace qecsim

#endif
