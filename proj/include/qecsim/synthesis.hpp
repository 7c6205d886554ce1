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

#ifndef QECSIM_SYNTHESIS_HPP
#define QECSIM_SYNTHESIS_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <set>
#include <stdexcept>
#include <vector>

#include "qecsim/circuit.hpp"
#include "qecsim/classifier.hpp"
#include "qecsim/code.hpp"
#include "qecsim/statevector.hpp"

namespace qecsim {

// Dense unitary, row-major, big-endian basis order.
struct Unitary {
    size_t dim = 1;
    std::vector<cd> m;

    static Unitary identity(size_t dim) {
        Unitary u{dim, std::vector<cd>(dim * dim, 0)};
        for (size_t i = 0; i < dim; i++) u.m[i * dim + i] = 1;
        return u;
    }
    cd operator()(size_t r, size_t c) const { return m[r * dim + c]; }
    size_t num_qubits() const { return size_t(std::countr_zero(dim)); }
};

inline Unitary unitary_of(const Circuit &c) {
    const size_t n = c.width();
    if (n > 10) throw std::invalid_argument("unitary too large");
    const size_t dim = size_t{1} << n;
    Unitary u{dim, std::vector<cd>(dim * dim)};
    std::vector<cd> col(dim);
    for (size_t j = 0; j < dim; j++) {
        std::fill(col.begin(), col.end(), cd(0));
        col[j] = 1;
        for (const Gate &g : c.gates()) {
            if (!is_unitary_kind(g.kind)) throw std::invalid_argument("circuit is not unitary");
            kernels::apply_unitary_gate(col, n, g);
        }
        for (size_t i = 0; i < dim; i++) u.m[i * dim + j] = col[i];
    }
    return u;
}

inline Unitary composite_unitary(const DataPoint &point, const ClassifierParams &params) {
    return unitary_of(composite_circuit(point, params));
}

// |Tr(U^dag V)| / dim.
inline double fidelity(const Unitary &u, const Unitary &v) {
    if (u.dim != v.dim) throw std::invalid_argument("dimension mismatch");
    cd t = 0;
    for (size_t i = 0; i < u.m.size(); i++) t += std::conj(u.m[i]) * v.m[i];
    return std::abs(t) / double(u.dim);
}

inline bool is_unitary(const Unitary &u, double tol = 1e-9) {
    for (size_t a = 0; a < u.dim; a++) {
        for (size_t b = 0; b < u.dim; b++) {
            cd s = 0;
            for (size_t k = 0; k < u.dim; k++) s += std::conj(u(k, a)) * u(k, b);
            if (std::abs(s - cd(a == b ? 1.0 : 0.0)) > tol) return false;
        }
    }
    return true;
}

inline const std::vector<GateKind> &steane_gate_set() {
    static const std::vector<GateKind> s = {GateKind::H, GateKind::S, GateKind::Sdg, GateKind::X,
                                            GateKind::Y, GateKind::Z, GateKind::CX};
    return s;
}

inline const std::vector<GateKind> &surface_gate_set() {
    static const std::vector<GateKind> s = {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::CX};
    return s;
}

// Bare circuits use the full Clifford set.
inline const std::vector<GateKind> &gate_set_for(CodeName code) {
    return code == CodeName::D3Surface || code == CodeName::D5Surface ? surface_gate_set() : steane_gate_set();
}

struct SynthesisResult {
    Circuit circuit;
    double fidelity = 0;
    size_t gate_budget_used = 0;
    // Best fidelity seen after each greedy step, including the empty start.
    std::vector<double> best_trace;
};

namespace detail {

// Columns of the running product, so appending a gate is one kernel call per column.
struct Columns {
    size_t n = 0;
    std::vector<std::vector<cd>> cols;

    explicit Columns(size_t num_qubits) : n(num_qubits), cols(size_t{1} << num_qubits) {
        for (size_t j = 0; j < cols.size(); j++) {
            cols[j].assign(cols.size(), 0);
            cols[j][j] = 1;
        }
    }
    void apply(const Gate &g) {
        for (auto &c : cols) kernels::apply_unitary_gate(c, n, g);
    }
    cd at(size_t r, size_t c) const { return cols[c][r]; }
};

// Pauli string by letter per qubit; index = sum letter_q * 4^(n-1-q).
inline std::vector<Pauli> pauli_letters(size_t index, size_t n) {
    std::vector<Pauli> l(n);
    for (size_t q = n; q-- > 0;) {
        l[q] = Pauli(index & 3);
        index >>= 2;
    }
    return l;
}

// Sparse form of a Pauli matrix: row r has its single entry in column col[r].
struct PauliMatrix {
    std::vector<size_t> col;
    std::vector<cd> val;
};

inline PauliMatrix pauli_matrix(const std::vector<Pauli> &letters) {
    const size_t n = letters.size(), dim = size_t{1} << n;
    PauliMatrix p{std::vector<size_t>(dim), std::vector<cd>(dim)};
    for (size_t r = 0; r < dim; r++) {
        size_t c = r;
        cd v = 1;
        for (size_t q = 0; q < n; q++) {
            size_t bit = size_t{1} << (n - 1 - q);
            bool rb = r & bit;
            switch (letters[q]) {
                case Pauli::I: break;
                case Pauli::X: c ^= bit; break;
                case Pauli::Z: v *= rb ? -1.0 : 1.0; break;
                case Pauli::Y:
                    c ^= bit;
                    v *= rb ? cd(0, 1) : cd(0, -1);
                    break;
            }
        }
        p.col[r] = c;
        p.val[r] = v;
    }
    return p;
}

class GreedySearch {
   public:
    GreedySearch(const Unitary &target, const std::vector<GateKind> &gate_set) : target_(target) {
        n_ = target.num_qubits();
        for (size_t k = 0; k < size_t{1} << (2 * n_); k++) {
            auto letters = pauli_letters(k, n_);
            paulis_.push_back(pauli_matrix(letters));
            bool ok = true;
            for (Pauli l : letters) {
                GateKind need = l == Pauli::X ? GateKind::X : l == Pauli::Y ? GateKind::Y : GateKind::Z;
                if (l != Pauli::I && std::find(gate_set.begin(), gate_set.end(), need) == gate_set.end()) ok = false;
            }
            if (ok) completions_.push_back(k);
        }
    }

    // max over realizable Paulis P of |Tr(U^dag P V)| / dim, and the arg max.
    std::pair<double, size_t> score(const Columns &v) const {
        const size_t dim = target_.dim;
        double best = -1;
        size_t arg = 0;
        for (size_t k : completions_) {
            const PauliMatrix &p = paulis_[k];
            cd t = 0;
            for (size_t r = 0; r < dim; r++) {
                for (size_t c = 0; c < dim; c++) t += std::conj(target_(r, c)) * p.val[r] * v.at(p.col[r], c);
            }
            double f = std::abs(t) / double(dim);
            if (f > best + 1e-12) {
                best = f;
                arg = k;
            }
        }
        return {best, arg};
    }

    // Conjugation images of X_q and Z_q as Pauli indices, signs dropped:
    // identifies V up to a left Pauli factor and global phase.
    std::vector<size_t> coset_key(const Columns &v) const {
        const size_t dim = target_.dim;
        std::vector<size_t> key;
        for (size_t q = 0; q < n_; q++) {
            for (Pauli g : {Pauli::X, Pauli::Z}) {
                std::vector<Pauli> letters(n_, Pauli::I);
                letters[q] = g;
                PauliMatrix gm = pauli_matrix(letters);
                // M = V G V^dag
                std::vector<cd> m(dim * dim, 0);
                for (size_t r = 0; r < dim; r++) {
                    for (size_t c = 0; c < dim; c++) {
                        cd s = 0;
                        for (size_t k = 0; k < dim; k++) s += v.at(r, k) * gm.val[k] * std::conj(v.at(c, gm.col[k]));
                        m[r * dim + c] = s;
                    }
                }
                size_t found = 0;
                for (size_t k = 0; k < paulis_.size(); k++) {
                    const PauliMatrix &p = paulis_[k];
                    cd t = 0;
                    for (size_t r = 0; r < dim; r++) t += std::conj(p.val[r]) * m[r * dim + p.col[r]];
                    if (std::abs(t) > 0.5 * double(dim)) {
                        found = k;
                        break;
                    }
                }
                key.push_back(found);
            }
        }
        return key;
    }

    size_t num_qubits() const { return n_; }
    const std::vector<size_t> &completions() const { return completions_; }

   private:
    const Unitary &target_;
    size_t n_ = 0;
    std::vector<PauliMatrix> paulis_;
    std::vector<size_t> completions_;
};

}  // namespace detail

// Greedy discrete synthesis. Each step appends the candidate gate with the
// highest score, where a prefix V scores max_P |Tr(U^dag P V)|/dim over
// Paulis P expressible in the gate set. Prefixes equal to an already visited
// one up to a Pauli are skipped. The result is the best prefix followed by
// its Pauli completion; `fidelity` is measured on that final circuit.
inline SynthesisResult greedy_synthesize(const Unitary &target, const std::vector<GateKind> &gate_set, size_t max_gates,
                                         size_t stall_limit = 4) {
    if (gate_set.empty()) throw std::invalid_argument("empty gate set");
    if (!is_unitary(target)) throw std::invalid_argument("target is not unitary");
    std::vector<GateKind> kinds = gate_set;
    std::sort(kinds.begin(), kinds.end());
    kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
    for (GateKind k : kinds) {
        if (!is_unitary_kind(k) || is_rotation(k)) throw std::invalid_argument("gate set must contain discrete unitary gates");
    }
    const size_t n = target.num_qubits();
    std::vector<Gate> candidates;
    for (GateKind k : kinds) {
        if (gate_arity(k) == 1) {
            for (uint32_t q = 0; q < n; q++) candidates.push_back(Gate::one(k, q));
        } else {
            for (uint32_t a = 0; a < n; a++) {
                for (uint32_t b = 0; b < n; b++) {
                    if (a != b) candidates.push_back(Gate::two(k, a, b));
                }
            }
        }
    }

    detail::GreedySearch search(target, kinds);
    detail::Columns v(n);
    std::set<std::vector<size_t>> visited = {search.coset_key(v)};
    auto [best, best_pauli] = search.score(v);
    std::vector<Gate> path;
    size_t best_len = 0, stall = 0, steps = 0;
    SynthesisResult res;
    res.best_trace.push_back(best);
    while (steps < max_gates && best < 1 - 1e-12 && stall < stall_limit) {
        double step_score = -1;
        size_t step_pick = candidates.size();
        detail::Columns step_v(n);
        std::vector<size_t> step_key;
        for (size_t ci = 0; ci < candidates.size(); ci++) {
            detail::Columns w = v;
            w.apply(candidates[ci]);
            auto key = search.coset_key(w);
            if (visited.count(key)) continue;
            double s = search.score(w).first;
            if (s > step_score + 1e-12) {
                step_score = s;
                step_pick = ci;
                step_v = std::move(w);
                step_key = std::move(key);
            }
        }
        if (step_pick == candidates.size()) break;
        steps++;
        v = std::move(step_v);
        visited.insert(step_key);
        path.push_back(candidates[step_pick]);
        if (step_score > best + 1e-12) {
            best = step_score;
            best_pauli = search.score(v).second;
            best_len = path.size();
            stall = 0;
        } else {
            stall++;
        }
        res.best_trace.push_back(best);
    }

    res.circuit = Circuit(n);
    for (size_t i = 0; i < best_len; i++) res.circuit.append(path[i]);
    auto letters = detail::pauli_letters(best_pauli, n);
    for (uint32_t q = 0; q < n; q++) {
        if (letters[q] == Pauli::X) res.circuit.append(X(q));
        if (letters[q] == Pauli::Y) res.circuit.append(Y(q));
        if (letters[q] == Pauli::Z) res.circuit.append(Z(q));
    }
    res.gate_budget_used = steps;
    res.fidelity = fidelity(target, unitary_of(res.circuit));
    return res;
}

inline size_t default_max_gates(size_t num_qubits) { return num_qubits == 1 ? 12 : 24; }

inline SynthesisResult synthesize_point(const DataPoint &point, const ClassifierParams &params,
                                        const std::vector<GateKind> &gate_set) {
    return greedy_synthesize(composite_unitary(point, params), gate_set, default_max_gates(params.arity()));
}

// Exact outcome distribution of a unitary circuit started in |0...0>.
inline std::vector<double> circuit_outcome_probabilities(const Circuit &c) {
    StateVector s(std::max<size_t>(c.width(), 1));
    s.apply(c);
    std::vector<uint32_t> all(c.width());
    for (uint32_t q = 0; q < c.width(); q++) all[q] = q;
    return outcome_probabilities(s, all);
}

struct SynthesisAccuracy {
    double original = 0;
    double synthesized = 0;
    // original - synthesized, in percentage points.
    double reduction_pct = 0;
};

inline SynthesisAccuracy synthesis_accuracy_report(const std::vector<DataPoint> &test, const ClassifierParams &params,
                                                   const std::vector<GateKind> &gate_set) {
    SynthesisAccuracy r;
    if (test.empty()) return r;
    size_t ok = 0;
    for (const auto &p : test) {
        ok += argmax_label(circuit_outcome_probabilities(synthesize_point(p, params, gate_set).circuit)) == p.label;
    }
    r.original = accuracy(test, params);
    r.synthesized = double(ok) / double(test.size());
    r.reduction_pct = (r.original - r.synthesized) * 100;
    return r;
}

}  // namespace qecsim

#endif
