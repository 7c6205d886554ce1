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

#ifndef QECSIM_PAULI_HPP
#define QECSIM_PAULI_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qecsim {

enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline char pauli_char(Pauli p) { return "IXZY"[static_cast<int>(p)]; }

inline size_t words_for(size_t n) { return (n + 63) / 64; }

// Pauli string over n qubits, up to sign.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(size_t n) : n_(n), x_(words_for(n), 0), z_(words_for(n), 0) {}

    static PauliString from_string(std::string_view s) {
        PauliString p(s.size());
        for (size_t i = 0; i < s.size(); i++) {
            switch (s[i]) {
                case 'I': case '_': break;
                case 'X': p.set(i, Pauli::X); break;
                case 'Y': p.set(i, Pauli::Y); break;
                case 'Z': p.set(i, Pauli::Z); break;
                default: throw std::invalid_argument("bad Pauli character");
            }
        }
        return p;
    }

    static PauliString on_support(size_t n, const std::vector<uint32_t> &support, Pauli p) {
        PauliString s(n);
        for (uint32_t q : support) s.set(q, p);
        return s;
    }

    size_t size() const { return n_; }
    bool x(size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1; }
    bool z(size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1; }
    Pauli get(size_t q) const { return static_cast<Pauli>(int(x(q)) | (int(z(q)) << 1)); }

    void set_x(size_t q, bool v) { set_bit(x_, q, v); }
    void set_z(size_t q, bool v) { set_bit(z_, q, v); }
    void set(size_t q, Pauli p) {
        if (q >= n_) throw std::out_of_range("operand out of range");
        set_x(q, int(p) & 1);
        set_z(q, int(p) & 2);
    }
    void flip_x(size_t q) { x_[q >> 6] ^= uint64_t{1} << (q & 63); }
    void flip_z(size_t q) { z_[q >> 6] ^= uint64_t{1} << (q & 63); }

    const std::vector<uint64_t> &xs() const { return x_; }
    const std::vector<uint64_t> &zs() const { return z_; }
    std::vector<uint64_t> &xs() { return x_; }
    std::vector<uint64_t> &zs() { return z_; }

    size_t weight() const {
        size_t w = 0;
        for (size_t i = 0; i < x_.size(); i++) w += std::popcount(x_[i] | z_[i]);
        return w;
    }
    bool is_identity() const { return weight() == 0; }

    bool commutes(const PauliString &o) const {
        size_t c = 0;
        for (size_t i = 0; i < x_.size(); i++) c += std::popcount((x_[i] & o.z_[i]) ^ (z_[i] & o.x_[i]));
        return (c & 1) == 0;
    }

    // Product up to phase.
    PauliString &operator*=(const PauliString &o) {
        for (size_t i = 0; i < x_.size(); i++) {
            x_[i] ^= o.x_[i];
            z_[i] ^= o.z_[i];
        }
        return *this;
    }
    PauliString operator*(const PauliString &o) const {
        PauliString r = *this;
        r *= o;
        return r;
    }

    bool operator==(const PauliString &o) const = default;

    std::vector<uint32_t> support() const {
        std::vector<uint32_t> s;
        for (uint32_t q = 0; q < n_; q++) {
            if (x(q) || z(q)) s.push_back(q);
        }
        return s;
    }

    std::string str() const {
        std::string s(n_, 'I');
        for (size_t q = 0; q < n_; q++) s[q] = pauli_char(get(q));
        return s;
    }

   private:
    static void set_bit(std::vector<uint64_t> &w, size_t q, bool v) {
        uint64_t m = uint64_t{1} << (q & 63);
        if (v) {
            w[q >> 6] |= m;
        } else {
            w[q >> 6] &= ~m;
        }
    }

    size_t n_ = 0;
    std::vector<uint64_t> x_;
    std::vector<uint64_t> z_;
};

}  // namespace qecsim

#endif
