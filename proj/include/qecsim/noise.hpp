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

#ifndef QECSIM_NOISE_HPP
#define QECSIM_NOISE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qecsim/circuit.hpp"
#include "qecsim/pauli.hpp"
#include "qecsim/rng.hpp"

namespace qecsim {

enum class ErrorMode : uint8_t { D, BP, BPD };

inline std::string_view mode_name(ErrorMode m) {
    switch (m) {
        case ErrorMode::D: return "D";
        case ErrorMode::BP: return "BP";
        case ErrorMode::BPD: return "BPD";
    }
    return "?";
}

inline ErrorMode parse_mode(std::string_view s) {
    if (s == "D") return ErrorMode::D;
    if (s == "BP") return ErrorMode::BP;
    if (s == "BPD") return ErrorMode::BPD;
    throw std::invalid_argument("unknown error mode '" + std::string(s) + "'");
}

struct NoiseModel {
    ErrorMode mode = ErrorMode::D;
    double p = 0;

    NoiseModel() = default;
    NoiseModel(ErrorMode m, double prob) : mode(m), p(prob) {
        if (!(prob >= 0 && prob <= 1)) throw std::invalid_argument("error probability must lie in [0, 1]");
    }
};

// A Pauli on `qubit` attached to gate `location`. For MeasureZ locations it
// acts just before the measurement, otherwise just after the gate.
struct FaultRealization {
    size_t location = 0;
    uint32_t qubit = 0;
    Pauli pauli = Pauli::X;
    bool operator==(const FaultRealization &) const = default;
};

inline size_t fault_location_count(const Circuit &c) {
    size_t l = 0;
    for (const Gate &g : c.gates()) l += g.arity();
    return l;
}

// Precomputes the flat (gate, operand) location list so that per-shot sampling
// costs O(number of faults) via geometric skipping.
class FaultSampler {
   public:
    FaultSampler(const Circuit &c, NoiseModel model) : model_(model) {
        for (size_t i = 0; i < c.size(); i++) {
            const Gate &g = c[i];
            sites_.push_back({i, g.q0});
            if (g.arity() == 2) sites_.push_back({i, g.q1});
        }
    }

    size_t location_count() const { return sites_.size(); }

    std::vector<FaultRealization> sample(Rng &rng) const {
        std::vector<FaultRealization> out;
        double p = model_.p;
        if (p <= 0 || sites_.empty()) return out;
        if (model_.mode == ErrorMode::D) {
            for_each_firing(rng, [&](size_t k) { out.push_back(make(k, random_pauli(rng))); });
            return out;
        }
        std::vector<size_t> xs, zs;
        for_each_firing(rng, [&](size_t k) { xs.push_back(k); });
        for_each_firing(rng, [&](size_t k) { zs.push_back(k); });
        std::vector<size_t> ds;
        std::vector<Pauli> dp;
        if (model_.mode == ErrorMode::BPD) {
            for_each_firing(rng, [&](size_t k) {
                ds.push_back(k);
                dp.push_back(random_pauli(rng));
            });
        }
        size_t i = 0, j = 0, d = 0;
        constexpr size_t kEnd = std::numeric_limits<size_t>::max();
        while (true) {
            size_t a = i < xs.size() ? xs[i] : kEnd;
            size_t b = j < zs.size() ? zs[j] : kEnd;
            size_t c = d < ds.size() ? ds[d] : kEnd;
            size_t k = std::min({a, b, c});
            if (k == kEnd) break;
            if (a == k || b == k) {
                Pauli pl = (a == k && b == k) ? Pauli::Y : (a == k ? Pauli::X : Pauli::Z);
                out.push_back(make(k, pl));
                if (a == k) i++;
                if (b == k) j++;
                continue;
            }
            out.push_back(make(k, dp[d]));
            d++;
        }
        return out;
    }

   private:
    struct Site {
        size_t gate;
        uint32_t qubit;
    };

    FaultRealization make(size_t k, Pauli p) const { return {sites_[k].gate, sites_[k].qubit, p}; }

    static Pauli random_pauli(Rng &rng) {
        static constexpr Pauli kXYZ[3] = {Pauli::X, Pauli::Y, Pauli::Z};
        return kXYZ[uniform_below(rng, 3)];
    }

    template <typename F>
    void for_each_firing(Rng &rng, F &&f) const {
        double p = model_.p;
        size_t n = sites_.size();
        if (p >= 1) {
            for (size_t k = 0; k < n; k++) f(k);
            return;
        }
        double log_q = std::log1p(-p);
        size_t k = 0;
        while (true) {
            double u = 1 - uniform01(rng);
            double gap = std::floor(std::log(u) / log_q);
            if (gap >= double(n - k)) return;
            k += size_t(gap);
            f(k);
            k++;
            if (k >= n) return;
        }
    }

    NoiseModel model_;
    std::vector<Site> sites_;
};

inline std::vector<FaultRealization> sample_faults(const Circuit &c, const NoiseModel &model, Rng &rng) {
    return FaultSampler(c, model).sample(rng);
}

// Expected length of the sampled fault list.
inline double expected_fault_count(const Circuit &c, const NoiseModel &model) {
    double l = double(fault_location_count(c));
    double p = model.p;
    switch (model.mode) {
        case ErrorMode::D: return l * p;
        case ErrorMode::BP: return l * (2 * p - p * p);
        case ErrorMode::BPD: return l * ((2 * p - p * p) + p);
    }
    return 0;
}

}  // namespace qecsim

#endif
