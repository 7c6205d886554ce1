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

#ifndef QECSIM_CIRCUIT_HPP
#define QECSIM_CIRCUIT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qecsim {

enum class GateKind : uint8_t { H, S, Sdg, X, Y, Z, CX, CZ, RX, RY, RZ, MeasureZ, Reset };

inline constexpr GateKind kAllGateKinds[] = {
    GateKind::H,  GateKind::S,  GateKind::Sdg, GateKind::X,  GateKind::Y,        GateKind::Z,    GateKind::CX,
    GateKind::CZ, GateKind::RX, GateKind::RY,  GateKind::RZ, GateKind::MeasureZ, GateKind::Reset};

inline std::string_view gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::S: return "S";
        case GateKind::Sdg: return "SDG";
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::CX: return "CX";
        case GateKind::CZ: return "CZ";
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::MeasureZ: return "M";
        case GateKind::Reset: return "R";
    }
    return "?";
}

inline GateKind parse_gate_kind(std::string_view s) {
    for (GateKind k : kAllGateKinds) {
        if (gate_name(k) == s) return k;
    }
    throw std::invalid_argument("unknown gate kind '" + std::string(s) + "'");
}

inline constexpr int gate_arity(GateKind k) { return (k == GateKind::CX || k == GateKind::CZ) ? 2 : 1; }

inline constexpr bool is_rotation(GateKind k) { return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ; }

inline constexpr bool is_unitary_kind(GateKind k) { return k != GateKind::MeasureZ && k != GateKind::Reset; }

inline double reduce_angle(double a) {
    if (!std::isfinite(a)) throw std::invalid_argument("rotation angle must be finite");
    constexpr double two_pi = 2 * std::numbers::pi;
    double r = std::fmod(a, two_pi);
    if (r < 0) r += two_pi;
    if (r >= two_pi) r = 0;
    return r;
}

struct Gate {
    GateKind kind = GateKind::H;
    uint32_t q0 = 0;
    uint32_t q1 = 0;
    double angle = 0;

    static Gate one(GateKind k, uint32_t q, double angle = 0) {
        if (gate_arity(k) != 1) throw std::invalid_argument("gate needs two operands");
        Gate g{k, q, 0, 0};
        if (is_rotation(k)) g.angle = reduce_angle(angle);
        return g;
    }
    static Gate two(GateKind k, uint32_t a, uint32_t b) {
        if (gate_arity(k) != 2) throw std::invalid_argument("gate needs one operand");
        if (a == b) throw std::invalid_argument("duplicate operands");
        return Gate{k, a, b, 0};
    }

    int arity() const { return gate_arity(kind); }
    uint32_t max_operand() const { return arity() == 2 ? std::max(q0, q1) : q0; }
    bool operator==(const Gate &o) const {
        return kind == o.kind && q0 == o.q0 && (arity() == 1 || q1 == o.q1) && angle == o.angle;
    }
};

inline Gate H(uint32_t q) { return Gate::one(GateKind::H, q); }
inline Gate S(uint32_t q) { return Gate::one(GateKind::S, q); }
inline Gate Sdg(uint32_t q) { return Gate::one(GateKind::Sdg, q); }
inline Gate X(uint32_t q) { return Gate::one(GateKind::X, q); }
inline Gate Y(uint32_t q) { return Gate::one(GateKind::Y, q); }
inline Gate Z(uint32_t q) { return Gate::one(GateKind::Z, q); }
inline Gate RX(uint32_t q, double a) { return Gate::one(GateKind::RX, q, a); }
inline Gate RY(uint32_t q, double a) { return Gate::one(GateKind::RY, q, a); }
inline Gate RZ(uint32_t q, double a) { return Gate::one(GateKind::RZ, q, a); }
inline Gate M(uint32_t q) { return Gate::one(GateKind::MeasureZ, q); }
inline Gate R(uint32_t q) { return Gate::one(GateKind::Reset, q); }
inline Gate CX(uint32_t a, uint32_t b) { return Gate::two(GateKind::CX, a, b); }
inline Gate CZ(uint32_t a, uint32_t b) { return Gate::two(GateKind::CZ, a, b); }

struct CircuitMetrics {
    size_t qubits = 0;
    size_t gate_count = 0;
    size_t depth = 0;
    bool operator==(const CircuitMetrics &) const = default;
};

// Ordered gate list. The k-th MeasureZ writes classical bit k.
class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(size_t width) : width_(width) {}

    size_t width() const { return width_; }
    const std::vector<Gate> &gates() const { return gates_; }
    size_t size() const { return gates_.size(); }
    size_t classical_bits() const { return classical_bits_; }
    bool empty() const { return gates_.empty(); }
    const Gate &operator[](size_t i) const { return gates_[i]; }

    Circuit &append(const Gate &g) {
        if (g.arity() == 2 && g.q0 == g.q1) throw std::invalid_argument("duplicate operands");
        if (g.max_operand() >= width_) throw std::out_of_range("operand out of range");
        gates_.push_back(g);
        if (g.kind == GateKind::MeasureZ) classical_bits_++;
        return *this;
    }

    Circuit &append(const Circuit &other) {
        for (const Gate &g : other.gates_) append(g);
        return *this;
    }

    void widen(size_t width) { width_ = std::max(width_, width); }

    bool operator==(const Circuit &o) const { return width_ == o.width_ && gates_ == o.gates_; }

   private:
    size_t width_ = 0;
    size_t classical_bits_ = 0;
    std::vector<Gate> gates_;
};

inline Circuit append_gate(Circuit c, const Gate &g) {
    c.append(g);
    return c;
}

// Runs left, then right with right's qubit i relabeled to qubit_map[i]. An empty map means identity.
inline Circuit compose(const Circuit &left, const Circuit &right, const std::vector<uint32_t> &qubit_map = {}) {
    std::vector<uint32_t> map = qubit_map;
    if (map.empty()) {
        for (uint32_t i = 0; i < right.width(); i++) map.push_back(i);
    }
    if (map.size() < right.width()) throw std::invalid_argument("qubit map shorter than right circuit width");
    std::vector<uint32_t> sorted = map;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("qubit map not injective");
    }
    size_t width = left.width();
    if (!map.empty()) width = std::max<size_t>(width, sorted.back() + 1);
    Circuit out(width);
    out.append(left);
    for (Gate g : right.gates()) {
        g.q0 = map[g.q0];
        if (g.arity() == 2) g.q1 = map[g.q1];
        out.append(g);
    }
    return out;
}

inline CircuitMetrics metrics(const Circuit &c) {
    std::vector<size_t> level(c.width(), 0);
    size_t depth = 0;
    for (const Gate &g : c.gates()) {
        size_t l = level[g.q0];
        if (g.arity() == 2) l = std::max(l, level[g.q1]);
        l++;
        level[g.q0] = l;
        if (g.arity() == 2) level[g.q1] = l;
        depth = std::max(depth, l);
    }
    return {c.width(), c.size(), depth};
}

inline bool is_clifford(const Circuit &c) {
    return std::none_of(c.gates().begin(), c.gates().end(), [](const Gate &g) { return is_rotation(g.kind); });
}

inline Gate inverse_gate(const Gate &g) {
    Gate r = g;
    switch (g.kind) {
        case GateKind::S: r.kind = GateKind::Sdg; break;
        case GateKind::Sdg: r.kind = GateKind::S; break;
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ: r.angle = reduce_angle(-g.angle); break;
        case GateKind::MeasureZ:
        case GateKind::Reset: throw std::invalid_argument("non-unitary gate has no inverse");
        default: break;
    }
    return r;
}

inline Circuit inverse(const Circuit &c) {
    Circuit out(c.width());
    for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) out.append(inverse_gate(*it));
    return out;
}

inline std::string to_text(const Circuit &c) {
    std::ostringstream out;
    out << "width " << c.width() << "\n";
    out << std::setprecision(17);
    for (const Gate &g : c.gates()) {
        out << gate_name(g.kind) << ' ' << g.q0;
        if (g.arity() == 2) out << ' ' << g.q1;
        if (is_rotation(g.kind)) out << ' ' << g.angle;
        out << "\n";
    }
    return out.str();
}

inline Circuit from_text(std::istream &in) {
    std::string line;
    Circuit c;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (!have_header) {
            size_t w;
            if (word != "width" || !(ls >> w)) throw std::invalid_argument("circuit text must start with 'width N'");
            c = Circuit(w);
            have_header = true;
            continue;
        }
        GateKind k = parse_gate_kind(word);
        uint32_t a = 0, b = 0;
        if (!(ls >> a)) throw std::invalid_argument("missing operand in line '" + line + "'");
        if (gate_arity(k) == 2) {
            if (!(ls >> b)) throw std::invalid_argument("missing operand in line '" + line + "'");
            c.append(Gate::two(k, a, b));
        } else if (is_rotation(k)) {
            double angle;
            if (!(ls >> angle)) throw std::invalid_argument("missing angle in line '" + line + "'");
            c.append(Gate::one(k, a, angle));
        } else {
            c.append(Gate::one(k, a));
        }
    }
    if (!have_header) throw std::invalid_argument("empty circuit text");
    return c;
}

inline Circuit from_text(const std::string &s) {
    std::istringstream in(s);
    return from_text(in);
}

}  // namespace qecsim

#endif
