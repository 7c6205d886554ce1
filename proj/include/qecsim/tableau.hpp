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

#ifndef QECSIM_TABLEAU_HPP
#define QECSIM_TABLEAU_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qecsim/circuit.hpp"
#include "qecsim/pauli.hpp"
#include "qecsim/rng.hpp"

namespace qecsim {

struct MeasureResult {
    bool outcome;
    bool deterministic;
};

// Aaronson-Gottesman stabilizer tableau. Rows 0..n-1 are destabilizers,
// n..2n-1 stabilizers, row 2n is scratch. Y is the row letter for x=z=1.
class Tableau {
   public:
    explicit Tableau(size_t num_qubits) : n_(num_qubits), w_(words_for(num_qubits)) {
        if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
        size_t rows = 2 * n_ + 1;
        x_.assign(rows * w_, 0);
        z_.assign(rows * w_, 0);
        r_.assign(rows, 0);
        for (size_t i = 0; i < n_; i++) {
            set(x_, i, i);
            set(z_, n_ + i, i);
        }
    }

    size_t num_qubits() const { return n_; }

    void apply(const Gate &g) {
        if (g.max_operand() >= n_) throw std::out_of_range("operand out of range");
        switch (g.kind) {
            case GateKind::H: h(g.q0); break;
            case GateKind::S: s(g.q0); break;
            case GateKind::Sdg: sdg(g.q0); break;
            case GateKind::X: pauli_phase(g.q0, false, true); break;
            case GateKind::Z: pauli_phase(g.q0, true, false); break;
            case GateKind::Y: pauli_phase(g.q0, true, true); break;
            case GateKind::CX: cx(g.q0, g.q1); break;
            case GateKind::CZ:
                h(g.q1);
                cx(g.q0, g.q1);
                h(g.q1);
                break;
            case GateKind::Reset: reset(g.q0, reset_rng_); break;
            case GateKind::MeasureZ: throw std::invalid_argument("use measure_z for measurements");
            default: throw std::invalid_argument("non-Clifford gate in tableau backend");
        }
    }

    // apply() draws Reset randomness from an internal stream; simulators pass their own.
    void reset(uint32_t q, Rng &rng) {
        MeasureResult m = measure_z(q, rng);
        if (m.outcome) pauli_phase(q, false, true);
    }

    void apply_pauli(uint32_t q, Pauli p) {
        if (q >= n_) throw std::out_of_range("operand out of range");
        switch (p) {
            case Pauli::I: break;
            case Pauli::X: pauli_phase(q, false, true); break;
            case Pauli::Z: pauli_phase(q, true, false); break;
            case Pauli::Y: pauli_phase(q, true, true); break;
        }
    }

    void apply_pauli(const PauliString &p) {
        if (p.size() > n_) throw std::out_of_range("Pauli support exceeds width");
        for (uint32_t q : p.support()) apply_pauli(q, p.get(q));
    }

    MeasureResult measure_z(uint32_t a, Rng &rng) {
        if (a >= n_) throw std::out_of_range("operand out of range");
        size_t wa = a >> 6;
        uint64_t ma = uint64_t{1} << (a & 63);
        size_t p = 2 * n_;
        for (size_t i = n_; i < 2 * n_; i++) {
            if (x_[i * w_ + wa] & ma) {
                p = i;
                break;
            }
        }
        if (p < 2 * n_) {
            for (size_t i = 0; i < 2 * n_; i++) {
                if (i != p && (x_[i * w_ + wa] & ma)) rowsum(i, p);
            }
            copy_row(p - n_, p);
            clear_row(p);
            z_[p * w_ + wa] |= ma;
            bool outcome = rng() & 1;
            r_[p] = outcome;
            return {outcome, false};
        }
        size_t s = 2 * n_;
        clear_row(s);
        for (size_t i = 0; i < n_; i++) {
            if (x_[i * w_ + wa] & ma) rowsum(s, i + n_);
        }
        return {bool(r_[s]), true};
    }

    // +1 or -1 if the Pauli has a definite value on the state, 0 if random.
    int expectation(const PauliString &p) {
        if (p.size() != n_) throw std::invalid_argument("Pauli width mismatch");
        for (size_t i = n_; i < 2 * n_; i++) {
            if (!row_commutes(i, p)) return 0;
        }
        size_t s = 2 * n_;
        clear_row(s);
        for (size_t i = 0; i < n_; i++) {
            if (!row_commutes(i, p)) rowsum(s, i + n_);
        }
        for (size_t k = 0; k < w_; k++) {
            if (x_[s * w_ + k] != p.xs()[k] || z_[s * w_ + k] != p.zs()[k]) return 0;
        }
        return r_[s] ? -1 : 1;
    }

    std::string row_string(size_t row) const {
        std::string out(1, r_[row] ? '-' : '+');
        for (size_t q = 0; q < n_; q++) {
            bool x = get(x_, row, q), z = get(z_, row, q);
            out += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
        }
        return out;
    }
    std::string stabilizer(size_t i) const { return row_string(n_ + i); }
    std::string destabilizer(size_t i) const { return row_string(i); }

    bool is_symplectic() const {
        for (size_t i = 0; i < 2 * n_; i++) {
            for (size_t j = i + 1; j < 2 * n_; j++) {
                bool anti = !rows_commute(i, j);
                bool want = (j == i + n_);
                if (anti != want) return false;
            }
        }
        return true;
    }

    bool operator==(const Tableau &o) const { return n_ == o.n_ && x_ == o.x_ && z_ == o.z_ && r_ == o.r_; }

   private:
    static bool get_bit(const std::vector<uint64_t> &v, size_t idx, size_t q) { return (v[idx + (q >> 6)] >> (q & 63)) & 1; }
    bool get(const std::vector<uint64_t> &v, size_t row, size_t q) const { return get_bit(v, row * w_, q); }
    void set(std::vector<uint64_t> &v, size_t row, size_t q) { v[row * w_ + (q >> 6)] |= uint64_t{1} << (q & 63); }

    void clear_row(size_t row) {
        for (size_t k = 0; k < w_; k++) x_[row * w_ + k] = z_[row * w_ + k] = 0;
        r_[row] = 0;
    }
    void copy_row(size_t dst, size_t src) {
        for (size_t k = 0; k < w_; k++) {
            x_[dst * w_ + k] = x_[src * w_ + k];
            z_[dst * w_ + k] = z_[src * w_ + k];
        }
        r_[dst] = r_[src];
    }

    bool rows_commute(size_t i, size_t j) const {
        size_t c = 0;
        for (size_t k = 0; k < w_; k++) {
            c += std::popcount((x_[i * w_ + k] & z_[j * w_ + k]) ^ (z_[i * w_ + k] & x_[j * w_ + k]));
        }
        return (c & 1) == 0;
    }
    bool row_commutes(size_t i, const PauliString &p) const {
        size_t c = 0;
        for (size_t k = 0; k < w_; k++) c += std::popcount((x_[i * w_ + k] & p.zs()[k]) ^ (z_[i * w_ + k] & p.xs()[k]));
        return (c & 1) == 0;
    }

    // row h <- row i * row h, with the phase exponent tracked mod 4.
    void rowsum(size_t h, size_t i) {
        int plus = 0, minus = 0;
        for (size_t k = 0; k < w_; k++) {
            uint64_t x1 = x_[i * w_ + k], z1 = z_[i * w_ + k];
            uint64_t x2 = x_[h * w_ + k], z2 = z_[h * w_ + k];
            uint64_t p = (x1 & z1 & z2 & ~x2) | (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2);
            uint64_t m = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2);
            plus += std::popcount(p);
            minus += std::popcount(m);
            x_[h * w_ + k] = x1 ^ x2;
            z_[h * w_ + k] = z1 ^ z2;
        }
        int total = 2 * r_[h] + 2 * r_[i] + plus - minus;
        total = ((total % 4) + 4) % 4;
        r_[h] = total == 2;
    }

    void h(uint32_t q) {
        size_t wq = q >> 6, sh = q & 63;
        for (size_t row = 0; row < 2 * n_; row++) {
            uint64_t &xw = x_[row * w_ + wq];
            uint64_t &zw = z_[row * w_ + wq];
            uint64_t xb = (xw >> sh) & 1, zb = (zw >> sh) & 1;
            r_[row] ^= xb & zb;
            uint64_t diff = (xb ^ zb) << sh;
            xw ^= diff;
            zw ^= diff;
        }
    }
    void s(uint32_t q) {
        size_t wq = q >> 6, sh = q & 63;
        for (size_t row = 0; row < 2 * n_; row++) {
            uint64_t xb = (x_[row * w_ + wq] >> sh) & 1, zb = (z_[row * w_ + wq] >> sh) & 1;
            r_[row] ^= xb & zb;
            z_[row * w_ + wq] ^= xb << sh;
        }
    }
    void sdg(uint32_t q) {
        size_t wq = q >> 6, sh = q & 63;
        for (size_t row = 0; row < 2 * n_; row++) {
            uint64_t xb = (x_[row * w_ + wq] >> sh) & 1, zb = (z_[row * w_ + wq] >> sh) & 1;
            r_[row] ^= xb & (zb ^ 1);
            z_[row * w_ + wq] ^= xb << sh;
        }
    }
    // Flips the sign of rows with a set x bit (if on_x) xor a set z bit (if on_z).
    void pauli_phase(uint32_t q, bool on_x, bool on_z) {
        size_t wq = q >> 6, sh = q & 63;
        for (size_t row = 0; row < 2 * n_; row++) {
            uint64_t f = 0;
            if (on_x) f ^= (x_[row * w_ + wq] >> sh) & 1;
            if (on_z) f ^= (z_[row * w_ + wq] >> sh) & 1;
            r_[row] ^= f;
        }
    }
    void cx(uint32_t a, uint32_t b) {
        size_t wa = a >> 6, sa = a & 63, wb = b >> 6, sb = b & 63;
        for (size_t row = 0; row < 2 * n_; row++) {
            uint64_t *xr = &x_[row * w_], *zr = &z_[row * w_];
            uint64_t xa = (xr[wa] >> sa) & 1, za = (zr[wa] >> sa) & 1;
            uint64_t xb = (xr[wb] >> sb) & 1, zb = (zr[wb] >> sb) & 1;
            r_[row] ^= xa & zb & (xb ^ za ^ 1);
            xr[wb] ^= xa << sb;
            zr[wa] ^= zb << sa;
        }
    }

    size_t n_;
    size_t w_;
    Rng reset_rng_{0};
    std::vector<uint64_t> x_;
    std::vector<uint64_t> z_;
    std::vector<uint8_t> r_;
};

inline Tableau tableau_init(size_t num_qubits) { return Tableau(num_qubits); }

inline Tableau apply_clifford(Tableau t, const Gate &g) {
    t.apply(g);
    return t;
}

}  // namespace qecsim

#endif
