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

#ifndef QECSIM_RNG_HPP
#define QECSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace qecsim {

using Rng = std::mt19937_64;

// The std distributions are implementation defined; these are not, so seeds
// reproduce across standard libraries.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng &rng, double p) { return uniform01(rng) < p; }

inline uint64_t uniform_below(Rng &rng, uint64_t n) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline double standard_normal(Rng &rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t v) { return splitmix64(seed ^ splitmix64(v)); }

inline uint64_t hash_combine(uint64_t seed, std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return hash_combine(seed, h);
}

}  // namespace qecsim

#endif
