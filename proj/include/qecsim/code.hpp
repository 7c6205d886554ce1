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

#ifndef QECSIM_CODE_HPP
#define QECSIM_CODE_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qecsim/circuit.hpp"
#include "qecsim/pauli.hpp"

namespace qecsim {

enum class CodeName : uint8_t { None, Steane, D3Surface, D5Surface };

inline std::string_view code_name(CodeName c) {
    switch (c) {
        case CodeName::None: return "None";
        case CodeName::Steane: return "Steane";
        case CodeName::D3Surface: return "D3Surface";
        case CodeName::D5Surface: return "D5Surface";
    }
    return "?";
}

inline CodeName parse_code(std::string_view s) {
    for (CodeName c : {CodeName::None, CodeName::Steane, CodeName::D3Surface, CodeName::D5Surface}) {
        if (code_name(c) == s) return c;
    }
    throw std::invalid_argument("unknown code '" + std::string(s) + "'");
}

struct AncillaPolicy {
    enum class Kind : uint8_t { OnePerGenerator, ReusePool };
    Kind kind = Kind::OnePerGenerator;
    size_t pool_size = 0;
    bool reset_before_reuse = true;

    static AncillaPolicy one_per_generator() { return {Kind::OnePerGenerator, 0, true}; }
    static AncillaPolicy reuse_pool(size_t size, bool reset = true) { return {Kind::ReusePool, size, reset}; }
};

enum class StabilizerType : uint8_t { X, Z };

// One logical qubit in a CSS code. Generators list X-type checks first.
// Positions index data qubits; extraction_order gives each generator's
// CX order over its support.
struct StabilizerCode {
    CodeName name = CodeName::Steane;
    size_t n = 0;
    size_t k = 1;
    size_t d = 0;
    std::vector<PauliString> stabilizer_generators;
    std::vector<StabilizerType> types;
    std::vector<std::vector<uint32_t>> extraction_order;
    PauliString logical_x;
    PauliString logical_z;
    size_t ancilla_count = 0;
    AncillaPolicy default_policy;
    // Logical H is transversal H followed by relabeling position p as h_relabel[p].
    std::vector<uint32_t> h_relabel;
    bool supports_phase_gate = false;

    size_t num_generators() const { return stabilizer_generators.size(); }

    std::vector<size_t> generators_of_type(StabilizerType t) const {
        std::vector<size_t> out;
        for (size_t i = 0; i < types.size(); i++) {
            if (types[i] == t) out.push_back(i);
        }
        return out;
    }

    std::vector<GateKind> logical_gate_set() const {
        if (supports_phase_gate) {
            return {GateKind::H, GateKind::S, GateKind::Sdg, GateKind::X, GateKind::Y, GateKind::Z, GateKind::CX};
        }
        return {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::CX};
    }

    bool supports(GateKind k) const {
        auto set = logical_gate_set();
        return std::find(set.begin(), set.end(), k) != set.end() || k == GateKind::MeasureZ;
    }

    // Bit i set when the error anticommutes with generator i.
    std::vector<uint8_t> syndrome(const PauliString &e) const {
        std::vector<uint8_t> s(num_generators());
        for (size_t i = 0; i < s.size(); i++) s[i] = !e.commutes(stabilizer_generators[i]);
        return s;
    }
};

namespace detail {

inline StabilizerCode make_steane() {
    StabilizerCode c;
    c.name = CodeName::Steane;
    c.n = 7;
    c.d = 3;
    // Rows of the Hamming (7,4) parity-check matrix; column j is j+1 in binary.
    const std::vector<std::vector<uint32_t>> checks = {{3, 4, 5, 6}, {1, 2, 5, 6}, {0, 2, 4, 6}};
    for (auto t : {StabilizerType::X, StabilizerType::Z}) {
        for (const auto &s : checks) {
            c.stabilizer_generators.push_back(PauliString::on_support(7, s, t == StabilizerType::X ? Pauli::X : Pauli::Z));
            c.types.push_back(t);
            c.extraction_order.push_back(s);
        }
    }
    c.logical_x = PauliString::on_support(7, {0, 1, 2}, Pauli::X);
    c.logical_z = PauliString::on_support(7, {0, 1, 2}, Pauli::Z);
    c.ancilla_count = 3;
    c.default_policy = AncillaPolicy::reuse_pool(3);
    for (uint32_t i = 0; i < 7; i++) c.h_relabel.push_back(i);
    c.supports_phase_gate = true;
    return c;
}

// Rotated layout: data (r, c) at position r*d + c. Plaquette (i, j) for
// 0 <= i, j <= d touches data (i-1, j-1), (i-1, j), (i, j-1), (i, j); it is
// X-type when i+j is even. Weight-2 X checks sit on the top and bottom edges,
// Z checks on the left and right. Logical X runs down column 0, logical Z
// along row 0.
inline StabilizerCode make_rotated_surface(size_t d) {
    StabilizerCode c;
    c.name = d == 3 ? CodeName::D3Surface : CodeName::D5Surface;
    c.n = d * d;
    c.d = d;
    auto pos = [d](size_t r, size_t col) { return uint32_t(r * d + col); };
    auto add = [&](size_t i, size_t j, StabilizerType t) {
        // Corners in reading order: TL, TR, BL, BR.
        int corners[4][2] = {{int(i) - 1, int(j) - 1}, {int(i) - 1, int(j)}, {int(i), int(j) - 1}, {int(i), int(j)}};
        // X checks sweep rows so hook errors run parallel to logical Z; Z checks sweep columns.
        const int order_x[4] = {0, 1, 2, 3};
        const int order_z[4] = {0, 2, 1, 3};
        std::vector<uint32_t> support;
        for (int k = 0; k < 4; k++) {
            int idx = t == StabilizerType::X ? order_x[k] : order_z[k];
            int r = corners[idx][0], col = corners[idx][1];
            if (r < 0 || col < 0 || r >= int(d) || col >= int(d)) continue;
            support.push_back(pos(r, col));
        }
        c.stabilizer_generators.push_back(PauliString::on_support(c.n, support, t == StabilizerType::X ? Pauli::X : Pauli::Z));
        c.types.push_back(t);
        c.extraction_order.push_back(support);
    };
    for (auto t : {StabilizerType::X, StabilizerType::Z}) {
        for (size_t i = 0; i <= d; i++) {
            for (size_t j = 0; j <= d; j++) {
                bool x_type = (i + j) % 2 == 0;
                if (x_type != (t == StabilizerType::X)) continue;
                bool bulk = i >= 1 && i <= d - 1 && j >= 1 && j <= d - 1;
                bool edge_x = (i == 0 || i == d) && j >= 1 && j <= d - 1;
                bool edge_z = (j == 0 || j == d) && i >= 1 && i <= d - 1;
                if (bulk || (x_type && edge_x) || (!x_type && edge_z)) add(i, j, t);
            }
        }
    }
    std::vector<uint32_t> col0, row0;
    for (size_t r = 0; r < d; r++) col0.push_back(pos(r, 0));
    for (size_t col = 0; col < d; col++) row0.push_back(pos(0, col));
    c.logical_x = PauliString::on_support(c.n, col0, Pauli::X);
    c.logical_z = PauliString::on_support(c.n, row0, Pauli::Z);
    c.ancilla_count = c.num_generators();
    c.default_policy = AncillaPolicy::one_per_generator();
    // Quarter turn (r, c) -> (c, d-1-r) restores the standard layout after transversal H.
    c.h_relabel.resize(c.n);
    for (size_t r = 0; r < d; r++) {
        for (size_t col = 0; col < d; col++) c.h_relabel[pos(r, col)] = pos(col, d - 1 - r);
    }
    c.supports_phase_gate = false;
    return c;
}

}  // namespace detail

inline StabilizerCode build_code(CodeName kind) {
    switch (kind) {
        case CodeName::Steane: return detail::make_steane();
        case CodeName::D3Surface: return detail::make_rotated_surface(3);
        case CodeName::D5Surface: return detail::make_rotated_surface(5);
        default: throw std::invalid_argument("no stabilizer code for '" + std::string(code_name(kind)) + "'");
    }
}

// Shared immutable instances.
inline const StabilizerCode &code_instance(CodeName kind) {
    static const StabilizerCode steane = build_code(CodeName::Steane);
    static const StabilizerCode d3 = build_code(CodeName::D3Surface);
    static const StabilizerCode d5 = build_code(CodeName::D5Surface);
    switch (kind) {
        case CodeName::Steane: return steane;
        case CodeName::D3Surface: return d3;
        case CodeName::D5Surface: return d5;
        default: throw std::invalid_argument("no stabilizer code for '" + std::string(code_name(kind)) + "'");
    }
}

// Minimum-weight lookup decoder, split by error type as the codes are CSS.
// x_part maps syndromes of the Z-type checks to X corrections; z_part maps
// syndromes of the X-type checks to Z corrections.
class SyndromeTable {
   public:
    explicit SyndromeTable(const StabilizerCode &code) : n_(code.n), num_generators_(code.num_generators()) {
        x_checks_ = code.generators_of_type(StabilizerType::Z);
        z_checks_ = code.generators_of_type(StabilizerType::X);
        x_part_ = build_part(code, x_checks_, &x_weight_);
        z_part_ = build_part(code, z_checks_, &z_weight_);
        max_weight_ = (code.d - 1) / 2;
    }

    size_t max_weight() const { return max_weight_; }
    size_t fill_weight() const { return std::max(x_weight_, z_weight_); }
    const std::vector<size_t> &x_checks() const { return x_checks_; }
    const std::vector<size_t> &z_checks() const { return z_checks_; }

    // X correction for the given Z-check syndrome bits (bit k = k-th Z-type generator).
    const std::vector<uint32_t> &x_correction(uint32_t syndrome_bits) const { return x_part_.at(syndrome_bits); }
    const std::vector<uint32_t> &z_correction(uint32_t syndrome_bits) const { return z_part_.at(syndrome_bits); }

    size_t x_entries() const { return x_part_.size(); }
    size_t z_entries() const { return z_part_.size(); }

    // Correction for a full syndrome ordered like the code's generators.
    PauliString correction(const std::vector<uint8_t> &syndrome) const {
        if (syndrome.size() != num_generators_) throw std::invalid_argument("syndrome length mismatch");
        uint32_t sx = 0, sz = 0;
        for (size_t k = 0; k < x_checks_.size(); k++) sx |= uint32_t(syndrome[x_checks_[k]]) << k;
        for (size_t k = 0; k < z_checks_.size(); k++) sz |= uint32_t(syndrome[z_checks_[k]]) << k;
        PauliString c(n_);
        for (uint32_t q : x_correction(sx)) c.flip_x(q);
        for (uint32_t q : z_correction(sz)) c.flip_z(q);
        return c;
    }

    // Rows for every single-type syndrome; full corrections are products of one X row and one Z row.
    void write_csv(std::ostream &out) const {
        out << "syndrome_bits,correction_pauli\n";
        auto emit = [&](const std::vector<size_t> &checks, const std::vector<std::vector<uint32_t>> &part, Pauli p) {
            for (uint32_t s = 0; s < part.size(); s++) {
                std::string bits(num_generators_, '0');
                for (size_t k = 0; k < checks.size(); k++) {
                    if ((s >> k) & 1) bits[checks[k]] = '1';
                }
                if (s == 0 && p == Pauli::Z) continue;
                out << bits << ',' << PauliString::on_support(n_, part[s], p).str() << '\n';
            }
        };
        emit(x_checks_, x_part_, Pauli::X);
        emit(z_checks_, z_part_, Pauli::Z);
    }

   private:
    static std::vector<std::vector<uint32_t>> build_part(const StabilizerCode &code, const std::vector<size_t> &checks,
                                                         size_t *fill_weight) {
        size_t m = checks.size();
        size_t n = code.n;
        std::vector<uint32_t> column(n, 0);
        for (size_t k = 0; k < m; k++) {
            for (uint32_t q : code.stabilizer_generators[checks[k]].support()) column[q] |= uint32_t{1} << k;
        }
        std::vector<std::vector<uint32_t>> table(size_t{1} << m);
        std::vector<uint8_t> filled(table.size(), 0);
        filled[0] = 1;
        size_t remaining = table.size() - 1;
        *fill_weight = 0;
        std::vector<uint32_t> combo;
        for (size_t w = 1; w <= n && remaining > 0; w++) {
            combo.resize(w);
            for (size_t i = 0; i < w; i++) combo[i] = uint32_t(i);
            while (true) {
                uint32_t s = 0;
                for (uint32_t q : combo) s ^= column[q];
                if (!filled[s]) {
                    filled[s] = 1;
                    table[s] = combo;
                    remaining--;
                    *fill_weight = w;
                }
                // Next combination in lexicographic order.
                size_t i = w;
                while (i > 0 && combo[i - 1] == n - w + i - 1) i--;
                if (i == 0) break;
                combo[i - 1]++;
                for (size_t j = i; j < w; j++) combo[j] = combo[j - 1] + 1;
            }
        }
        if (remaining > 0) throw std::logic_error("syndrome space not reachable by data errors");
        return table;
    }

    size_t n_;
    size_t num_generators_;
    size_t max_weight_ = 0;
    size_t x_weight_ = 0;
    size_t z_weight_ = 0;
    std::vector<size_t> x_checks_;
    std::vector<size_t> z_checks_;
    std::vector<std::vector<uint32_t>> x_part_;
    std::vector<std::vector<uint32_t>> z_part_;
};

inline SyndromeTable build_decoder(const StabilizerCode &code) { return SyndromeTable(code); }

inline const SyndromeTable &decoder_instance(CodeName kind) {
    static const SyndromeTable steane(code_instance(CodeName::Steane));
    static const SyndromeTable d3(code_instance(CodeName::D3Surface));
    static const SyndromeTable d5(code_instance(CodeName::D5Surface));
    switch (kind) {
        case CodeName::Steane: return steane;
        case CodeName::D3Surface: return d3;
        case CodeName::D5Surface: return d5;
        default: throw std::invalid_argument("no decoder for '" + std::string(code_name(kind)) + "'");
    }
}

// True when e acts trivially on the code space.
inline bool in_stabilizer_group(const StabilizerCode &code, const PauliString &e) {
    for (const auto &g : code.stabilizer_generators) {
        if (!e.commutes(g)) return false;
    }
    return e.commutes(code.logical_x) && e.commutes(code.logical_z);
}

}  // namespace qecsim

#endif
