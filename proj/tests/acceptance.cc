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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion, with
// indented detail lines, and exits nonzero if any criterion fails.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "qecsim/harness.hpp"
#include "test_util.hpp"

using namespace qecsim;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void note(const char *fmt, ...) __attribute__((format(printf, 1, 2)));
void note(const char *fmt, ...) {
    std::printf("    ");
    va_list ap;
    va_start(ap, fmt);
    std::vprintf(fmt, ap);
    va_end(ap);
    std::printf("\n");
}

double sigma(double p, size_t shots) { return std::sqrt(std::max(p * (1 - p), 1.0 / double(shots)) / double(shots)); }

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

const std::vector<CodeName> kAllCodes = {CodeName::None, CodeName::Steane, CodeName::D3Surface, CodeName::D5Surface};
const std::vector<CodeName> kProtected = {CodeName::Steane, CodeName::D3Surface, CodeName::D5Surface};
const std::vector<ErrorMode> kModes = {ErrorMode::D, ErrorMode::BP, ErrorMode::BPD};

struct Context {
    fs::path dir;
    TrainedModel model[2];
    PreparedClassifier prepared[2];
    std::vector<ResultRecord> sweep[2];
    ExperimentConfig sweep_config[2];
};

// 1. Random Clifford circuits: tableau samples against statevector probabilities.
bool backend_equivalence(Context &) {
    auto t0 = Clock::now();
    Rng rng(2026);
    const size_t shots = 100000;
    double worst = 0;
    for (int t = 0; t < 100; t++) {
        size_t width = 1 + uniform_below(rng, 10), gates = 1 + uniform_below(rng, 100);
        Circuit c = test_util::random_clifford(rng, width, gates);
        StateVector s(width);
        s.apply(c);
        std::vector<uint32_t> all;
        for (uint32_t q = 0; q < width; q++) all.push_back(q);
        auto probs = outcome_probabilities(s, all);
        std::map<uint64_t, double> exact, sampled;
        for (size_t i = 0; i < probs.size(); i++) {
            if (probs[i] > 1e-12) exact[i] = probs[i];
        }
        for (uint32_t q = 0; q < width; q++) c.append(M(q));
        for (auto [k, n] : sample_clifford_counts(c, shots, rng)) sampled[k] = double(n) / shots;
        worst = std::max(worst, test_util::tvd(exact, sampled));
    }
    double secs = seconds_since(t0);
    note("100 circuits (<= 10 qubits, <= 100 gates), 1e5 shots each: max TVD %.4f (limit 0.02), %.1f s (limit 120 s)",
           worst, secs);
    return worst <= 0.02 && secs <= 120;
}

// 2. Every weight-1 data Pauli (and weight-2 on D5) is corrected.
bool exhaustive_correctability(Context &) {
    auto t0 = Clock::now();
    bool ok = true;
    Rng rng(7);
    const Pauli letters[] = {Pauli::X, Pauli::Y, Pauli::Z};
    for (CodeName k : kProtected) {
        const auto &code = code_instance(k);
        size_t w1 = 0, w2 = 0, failures = 0;
        for (const std::vector<Gate> &gates : {std::vector<Gate>{X(0)}, std::vector<Gate>{H(0), H(0)}}) {
            Circuit lc(1);
            for (const Gate &g : gates) lc.append(g);
            lc.append(M(0));
            auto plan = assemble_protected_circuit(lc, code);
            auto expected = decode_and_readout(plan, run_clifford_circuit(plan.total, {}, rng));
            const auto &data = plan.patches[0].data;
            // Placements: right after encoding, and right before the data readout.
            size_t after_encoder = encoder_circuit(code).size() - 1;
            size_t before_readout = plan.total.size() - code.n - 1;
            for (size_t loc : {after_encoder, before_readout}) {
                auto check = [&](std::vector<FaultRealization> f) {
                    if (decode_and_readout(plan, run_clifford_circuit(plan.total, f, rng)) != expected) failures++;
                };
                for (uint32_t q = 0; q < code.n; q++) {
                    for (Pauli p : letters) {
                        check({{loc, data[q], p}});
                        w1++;
                    }
                }
                if (k != CodeName::D5Surface) continue;
                for (uint32_t a = 0; a < code.n; a++) {
                    for (uint32_t b = a + 1; b < code.n; b++) {
                        for (Pauli pa : letters) {
                            for (Pauli pb : letters) {
                                check({{loc, data[a], pa}, {loc, data[b], pb}});
                                w2++;
                            }
                        }
                    }
                }
            }
        }
        // Two logical circuits times two placements.
        note("%-9s weight-1: %zu distinct Paulis, weight-2: %zu, %zu cases total, %zu miscorrected",
               std::string(code_name(k)).c_str(), w1 / 4, w2 / 4, w1 + w2, failures);
        ok &= failures == 0;
    }
    double secs = seconds_since(t0);
    note("%.1f s (limit 300 s)", secs);
    return ok && secs <= 300;
}

// 3. Protected noiseless outcomes match the bare circuits.
bool noiseless_transparency(Context &ctx) {
    const size_t shots = 10000;
    double worst = 0;
    size_t composites = 0;
    Rng rng(8);
    for (const auto &pc : ctx.prepared) {
        for (CodeName k : kProtected) {
            for (const auto &ref : pc.refs_for(k)) {
                auto probs = circuit_outcome_probabilities(ref.circuit);
                std::map<uint64_t, double> exact, sampled;
                for (size_t i = 0; i < probs.size(); i++) {
                    if (probs[i] > 1e-12) exact[i] = probs[i];
                }
                ExecutablePoint exec = ExecutablePoint::build(ref.circuit, k);
                for (size_t s = 0; s < shots; s++) {
                    sampled[uint64_t(exec.label(run_clifford_circuit(exec.circuit, {}, rng)))] += 1.0 / shots;
                }
                worst = std::max(worst, test_util::tvd(exact, sampled));
                composites++;
            }
        }
    }
    note("%zu reference composites x protected codes (%zu runs), 1e4 tableau shots each: max TVD %.4f (limit 0.01)",
           composites / 3, composites, worst);
    return worst <= 0.01;
}

// 4. Baseline accuracy windows.
bool baseline_windows(Context &ctx) {
    bool ok = true;
    const double lo[2] = {0.88, 0.80}, hi[2] = {0.95, 0.90}, max_red[2] = {3.5, 4.0};
    for (int i = 0; i < 2; i++) {
        const auto &m = ctx.model[i];
        const auto &pc = ctx.prepared[i];
        double red = (pc.parameterized_accuracy - pc.clean_accuracy) * 100;
        note("%d-qubit: cross-validated test accuracy %.4f (window [%.2f, %.2f]); best-fold split %.4f parameterized, "
               "%.4f synthesized, reduction %.2f points (limit %.1f)",
               i + 1, m.report.test_accuracy, lo[i], hi[i], pc.parameterized_accuracy, pc.clean_accuracy, red, max_red[i]);
        ok &= m.report.test_accuracy >= lo[i] && m.report.test_accuracy <= hi[i];
        ok &= pc.parameterized_accuracy >= lo[i] && pc.parameterized_accuracy <= hi[i];
        ok &= red <= max_red[i];
    }
    return ok;
}

// 5. A' = A - mean delta to machine precision.
bool formula_identity(Context &) {
    Rng rng(5);
    double worst = 0;
    for (int t = 0; t < 1000; t++) {
        size_t n = 2 + 2 * uniform_below(rng, 2);
        std::vector<double> clean(n), noisy(n);
        for (size_t i = 0; i < n; i++) {
            clean[i] = uniform01(rng);
            noisy[i] = clean[i] * uniform01(rng);
        }
        double A = uniform01(rng);
        auto m = make_noise_model(A, clean, noisy, 1e-3);
        double mean = 0;
        for (size_t i = 0; i < n; i++) mean += (clean[i] - noisy[i]) / double(n);
        worst = std::max({worst, std::abs(accuracy_under_noise(m) - (A - mean)), std::abs(m.A_prime + m.delta_mean - A)});
    }
    note("1000 random tuples: max deviation %.3g", worst);
    return worst <= 4 * std::numeric_limits<double>::epsilon();
}

// 6. Trends of the desk-scale sweep.
bool sweep_trends(Context &ctx) {
    auto t0 = Clock::now();
    for (int i = 0; i < 2; i++) {
        ExperimentConfig &cfg = ctx.sweep_config[i];
        cfg.classifier = size_t(i + 1);
        cfg.output_path = (ctx.dir / ("sweep" + std::to_string(i + 1) + ".csv")).string();
        ctx.sweep[i] = run_pst_sweep(cfg, ctx.prepared[i], {1, SIZE_MAX});
    }
    double secs = seconds_since(t0);
    const size_t shots = ctx.sweep_config[0].shots;
    std::map<std::string, double> pst;
    for (const auto &recs : ctx.sweep) {
        for (const auto &r : recs) pst[cell_key(r)] = r.pst;
    }
    auto tol = [&](double a, double b) { return 3 * std::hypot(sigma(a, shots), sigma(b, shots)); };
    size_t mono = 0, mono_bad = 0, mode = 0, mode_bad = 0, size = 0, size_bad = 0;
    const auto &grid = ctx.sweep_config[0].noise_grid;
    for (int i = 0; i < 2; i++) {
        for (const auto &ref : ctx.prepared[i].steane_refs) {
            std::string label = label_name(ctx.prepared[i].dimensionality(), ref.label);
            for (CodeName k : kAllCodes) {
                for (ErrorMode m : kModes) {
                    for (size_t g = 1; g < grid.size(); g++) {
                        double a = pst[cell_key(i + 1, label, k, m, grid[g - 1])], b = pst[cell_key(i + 1, label, k, m, grid[g])];
                        mono++;
                        if (b > a + tol(a, b)) {
                            mono_bad++;
                            note("not monotone: %s %.4f -> %.4f", cell_key(i + 1, label, k, m, grid[g]).c_str(), a, b);
                        }
                    }
                }
                for (double p : grid) {
                    double d = pst[cell_key(i + 1, label, k, ErrorMode::D, p)];
                    double bp = pst[cell_key(i + 1, label, k, ErrorMode::BP, p)];
                    double bpd = pst[cell_key(i + 1, label, k, ErrorMode::BPD, p)];
                    mode += 2;
                    if (bp > d + tol(d, bp)) {
                        mode_bad++;
                        note("BP less damaging than D: %s (D %.4f, BP %.4f)", cell_key(i + 1, label, k, ErrorMode::BP, p).c_str(),
                               d, bp);
                    }
                    if (bpd > bp + tol(bp, bpd)) {
                        mode_bad++;
                        note("BPD less damaging than BP: %s (BP %.4f, BPD %.4f)",
                               cell_key(i + 1, label, k, ErrorMode::BPD, p).c_str(), bp, bpd);
                    }
                }
            }
        }
    }
    // Class-averaged PST, 2-qubit vs 1-qubit.
    for (CodeName k : kAllCodes) {
        for (ErrorMode m : kModes) {
            for (double p : grid) {
                double mean[2] = {0, 0};
                for (int i = 0; i < 2; i++) {
                    const auto &pc = ctx.prepared[i];
                    for (const auto &ref : pc.refs_for(k)) {
                        mean[i] += pst[cell_key(i + 1, label_name(pc.dimensionality(), ref.label), k, m, p)] / double(pc.classes());
                    }
                }
                double t = 3 * std::hypot(sigma(mean[0], 2 * shots), sigma(mean[1], 4 * shots));
                size++;
                if (mean[1] > mean[0] + t) {
                    size_bad++;
                    note("2-qubit above 1-qubit: %s/%s/%s (%.4f vs %.4f)", std::string(code_name(k)).c_str(),
                           std::string(mode_name(m)).c_str(), fmt6(p).c_str(), mean[1], mean[0]);
                }
            }
        }
    }
    note("%zu + %zu cells at %zu shots, %.1f s (target 1800 s)", ctx.sweep[0].size(), ctx.sweep[1].size(), shots, secs);
    note("monotone in p: %zu/%zu; mode ordering D >= BP >= BPD: %zu/%zu; 2-qubit <= 1-qubit: %zu/%zu (3 sigma)",
           mono - mono_bad, mono, mode - mode_bad, mode, size - size_bad, size);
    for (int i = 0; i < 2; i++) {
        Table heat = pst_heatmap(ctx.sweep[i]);
        for (const auto &row : heat.rows) note("  %s", csv_line(row).substr(0, csv_line(row).size() - 1).c_str());
    }
    return mono_bad == 0 && mode_bad == 0 && size_bad == 0;
}

// 7. Direction of the accuracy improvements.
bool improvement_direction(Context &ctx) {
    bool ok = true;
    for (int i = 0; i < 2; i++) {
        auto acc = accuracy_records(ctx.sweep[i], AccuracyContext::of(ctx.prepared[i]));
        auto rep = improvement_report(acc);
        std::map<std::pair<ErrorMode, CodeName>, ImprovementRecord> by;
        for (const auto &r : rep) by[{r.mode, r.code}] = r;
        for (ErrorMode m : kModes) {
            std::string line;
            for (CodeName k : kAllCodes) {
                const auto &r = by.at({m, k});
                char buf[64];
                std::snprintf(buf, sizeof buf, " %s AA %.2f AI %.2f;", std::string(code_name(k)).c_str(), r.AA, r.AI);
                line += buf;
            }
            note("%d-qubit %-3s%s", i + 1, std::string(mode_name(m)).c_str(), line.c_str());
            for (CodeName k : kProtected) ok &= by.at({m, k}).AI > 0;
            ok &= by.at({m, CodeName::D5Surface}).AI > by.at({m, CodeName::D3Surface}).AI;
            ok &= by.at({m, CodeName::D5Surface}).AI > by.at({m, CodeName::Steane}).AI;
        }
        for (CodeName k : kProtected) ok &= by.at({ErrorMode::BPD, k}).AI > by.at({ErrorMode::D, k}).AI;
    }
    // Where protection helps at all: PST gain over None at the lowest noise levels.
    for (int i = 0; i < 2; i++) {
        for (double p : {1e-4, 1e-3, 1e-2}) {
            double none = 0, d5 = 0;
            for (const auto &r : ctx.sweep[i]) {
                if (r.p != p || r.mode != ErrorMode::BPD) continue;
                if (r.code == CodeName::None) none += r.pst / double(ctx.prepared[i].classes());
                if (r.code == CodeName::D5Surface) d5 += r.pst / double(ctx.prepared[i].classes());
            }
            note("%d-qubit BPD p=%s: mean PST None %.4f, D5Surface %.4f", i + 1, fmt6(p).c_str(), none, d5);
        }
    }
    return ok;
}

// 8. Resource ordering.
bool overhead_ordering(Context &ctx) {
    auto rows = overhead_report({&ctx.prepared[0], &ctx.prepared[1]}, kAllCodes);
    bool ok = true;
    for (size_t cls : {1u, 2u}) {
        std::vector<const OverheadRow *> avg;
        for (const auto &r : rows) {
            if (r.classifier == cls && r.class_label == "avg") avg.push_back(&r);
        }
        std::string line;
        for (const auto *r : avg) {
            char buf[96];
            std::snprintf(buf, sizeof buf, " %s %g/%g/%g;", std::string(code_name(r->code)).c_str(), r->qubits, r->gates,
                          r->depth);
            line += buf;
        }
        note("%zu-qubit average qubits/gates/depth:%s", cls, line.c_str());
        for (size_t i = 1; i < avg.size(); i++) {
            if (!(avg[i - 1]->qubits < avg[i]->qubits)) {
                ok = false;
                note("qubit order broken: %s >= %s", std::string(code_name(avg[i - 1]->code)).c_str(),
                       std::string(code_name(avg[i]->code)).c_str());
            }
            if (!(avg[i - 1]->gates < avg[i]->gates)) {
                ok = false;
                note("gate order broken: %s >= %s", std::string(code_name(avg[i - 1]->code)).c_str(),
                       std::string(code_name(avg[i]->code)).c_str());
            }
        }
    }
    // Same logical circuit on every code: the surface-set reference points.
    std::vector<std::string> same;
    for (const auto &pc : ctx.prepared) {
        std::string line;
        for (CodeName k : kAllCodes) {
            double g = 0;
            for (const auto &ref : pc.surface_refs) {
                g += double(metrics(ExecutablePoint::build(ref.circuit, k).circuit).gate_count) / double(pc.classes());
            }
            line += " " + std::string(code_name(k)) + " " + fmt6(g) + ";";
        }
        note("%zu-qubit average gates with one shared logical circuit per class:%s", pc.arity, line.c_str());
    }
    return ok;
}

// 9. Byte-identical reruns.
bool determinism(Context &ctx) {
    bool ok = true;
    for (int i = 0; i < 2; i++) {
        const std::string want = slurp(ctx.sweep_config[i].output_path);
        ExperimentConfig cfg = ctx.sweep_config[i];
        cfg.output_path = (ctx.dir / ("rerun" + std::to_string(i + 1) + ".csv")).string();
        run_pst_sweep(cfg, ctx.prepared[i], {4, SIZE_MAX});
        bool workers = slurp(cfg.output_path) == want;

        cfg.output_path = (ctx.dir / ("resumed" + std::to_string(i + 1) + ".csv")).string();
        run_pst_sweep(cfg, ctx.prepared[i], {3, 37});
        {
            std::ofstream tear(cfg.output_path, std::ios::app | std::ios::binary);
            tear << "1,M,Ste";
        }
        run_pst_sweep(cfg, ctx.prepared[i], {2, 11});
        run_pst_sweep(cfg, ctx.prepared[i], {2, SIZE_MAX});
        bool resumed = slurp(cfg.output_path) == want;

        // Everything from scratch, including training.
        ExperimentConfig fresh = ctx.sweep_config[i];
        fresh.output_path = (ctx.dir / ("fresh" + std::to_string(i + 1) + ".csv")).string();
        run_pst_sweep(fresh, {1, SIZE_MAX});
        bool scratch = slurp(fresh.output_path) == want;

        note("%d-qubit sweep (%zu bytes): 4 workers %s, interrupted twice and resumed %s, retrained from scratch %s", i + 1,
               want.size(), workers ? "identical" : "DIFFERENT", resumed ? "identical" : "DIFFERENT",
               scratch ? "identical" : "DIFFERENT");
        ok &= workers && resumed && scratch;
    }
    return ok;
}

}  // namespace

int main() {
    Context ctx;
    ctx.dir = fs::temp_directory_path() / "qecsim_acceptance";
    fs::remove_all(ctx.dir);
    fs::create_directories(ctx.dir);

    auto t0 = Clock::now();
    for (int i = 0; i < 2; i++) {
        ExperimentConfig cfg;
        cfg.classifier = size_t(i + 1);
        ctx.model[i] = model_for_config(cfg);
        ctx.prepared[i] = prepare_classifier(ctx.model[i]);
    }
    std::printf("setup: trained and synthesized both classifiers in %.1f s\n", seconds_since(t0));

    struct Criterion {
        int id;
        const char *name;
        std::function<bool(Context &)> run;
    };
    const Criterion criteria[] = {
        {1, "backend equivalence", backend_equivalence},
        {2, "exhaustive correctability", exhaustive_correctability},
        {3, "noiseless transparency", noiseless_transparency},
        {4, "baseline accuracy windows", baseline_windows},
        {5, "formula identity", formula_identity},
        {6, "sweep trends", sweep_trends},
        {7, "improvement direction", improvement_direction},
        {8, "overhead ordering", overhead_ordering},
        {9, "determinism and resumability", determinism},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        bool ok = false;
        try {
            ok = c.run(ctx);
        } catch (const std::exception &e) {
            note("error: %s", e.what());
        }
        std::printf("criterion %d (%s): %s\n", c.id, c.name, ok ? "PASS" : "FAIL");
        std::fflush(stdout);
        failed += !ok;
    }
    fs::remove_all(ctx.dir);
    std::printf("%d of 9 criteria passed, total %.1f s\n", 9 - failed, seconds_since(t0));
    return failed ? 1 : 0;
}
