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

#ifndef QECSIM_HARNESS_HPP
#define QECSIM_HARNESS_HPP

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "qecsim/classifier.hpp"
#include "qecsim/frame.hpp"
#include "qecsim/protect.hpp"
#include "qecsim/synthesis.hpp"

namespace qecsim {

inline std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline const char *gate_set_name(CodeName code) {
    return &gate_set_for(code) == &surface_gate_set() ? "surface" : "steane";
}

// ---------------------------------------------------------------------------
// Configuration

struct ExperimentConfig {
    size_t classifier = 1;
    std::vector<CodeName> codes = {CodeName::None, CodeName::Steane, CodeName::D3Surface, CodeName::D5Surface};
    std::vector<ErrorMode> modes = {ErrorMode::D, ErrorMode::BP, ErrorMode::BPD};
    std::vector<double> noise_grid = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2};
    size_t shots = 2000;
    uint64_t master_seed = 1;
    size_t rounds_per_layer = 1;
    std::string output_path;
    // Where the classifier comes from: a model file, or a generated dataset.
    std::string model_path;
    uint64_t data_seed = 7;
    size_t folds = 5;
    uint64_t train_seed = 1;

    void validate() const {
        if (classifier != 1 && classifier != 2) throw std::invalid_argument("classifier must be 1 or 2 qubits");
        if (shots < 100) throw std::invalid_argument("shots must be at least 100");
        if (rounds_per_layer < 1) throw std::invalid_argument("rounds_per_layer must be at least 1");
        for (double p : noise_grid) {
            if (!(p > 0 && p <= 1e-2)) throw std::invalid_argument("noise grid values must lie in (0, 1e-2]");
        }
    }
};

inline ExperimentConfig config_from_json(const nlohmann::json &j) {
    static const char *known[] = {"classifier", "codes", "modes", "noise_grid", "shots", "master_seed",
                                  "rounds_per_layer", "output_path", "model", "data_seed", "folds", "train_seed"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char *k) { return it.key() == k; }) ==
            std::end(known)) {
            throw std::invalid_argument("unknown config key '" + it.key() + "'");
        }
    }
    ExperimentConfig c;
    c.classifier = j.value("classifier", c.classifier);
    if (j.contains("codes")) {
        c.codes.clear();
        for (const auto &s : j["codes"]) c.codes.push_back(parse_code(s.get<std::string>()));
    }
    if (j.contains("modes")) {
        c.modes.clear();
        for (const auto &s : j["modes"]) c.modes.push_back(parse_mode(s.get<std::string>()));
    }
    if (j.contains("noise_grid")) c.noise_grid = j["noise_grid"].get<std::vector<double>>();
    c.shots = j.value("shots", c.shots);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.rounds_per_layer = j.value("rounds_per_layer", c.rounds_per_layer);
    c.output_path = j.value("output_path", c.output_path);
    c.model_path = j.value("model", c.model_path);
    c.data_seed = j.value("data_seed", c.data_seed);
    c.folds = j.value("folds", c.folds);
    c.train_seed = j.value("train_seed", c.train_seed);
    c.validate();
    return c;
}

inline nlohmann::ordered_json config_to_json(const ExperimentConfig &c) {
    nlohmann::ordered_json j;
    j["classifier"] = c.classifier;
    j["codes"] = nlohmann::ordered_json::array();
    for (CodeName k : c.codes) j["codes"].push_back(std::string(code_name(k)));
    j["modes"] = nlohmann::ordered_json::array();
    for (ErrorMode m : c.modes) j["modes"].push_back(std::string(mode_name(m)));
    j["noise_grid"] = c.noise_grid;
    j["shots"] = c.shots;
    j["master_seed"] = c.master_seed;
    j["rounds_per_layer"] = c.rounds_per_layer;
    j["output_path"] = c.output_path;
    if (!c.model_path.empty()) j["model"] = c.model_path;
    j["data_seed"] = c.data_seed;
    j["folds"] = c.folds;
    j["train_seed"] = c.train_seed;
    return j;
}

inline ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument("malformed config " + path + ": " + e.what());
    }
    return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Trained model persistence

struct TrainedModel {
    size_t dimensionality = 2;
    TrainReport report;
    std::vector<DataPoint> test;
};

inline TrainedModel train_model(const Dataset &ds, const TrainOptions &opt = {}) {
    TrainedModel m;
    m.dimensionality = ds.dimensionality;
    m.report = train(ds, opt);
    m.test = test_split(ds, m.report);
    return m;
}

inline nlohmann::ordered_json model_to_json(const TrainedModel &m) {
    nlohmann::ordered_json j;
    j["dimensionality"] = m.dimensionality;
    j["thetas"] = m.report.params.thetas;
    j["train_accuracy"] = m.report.train_accuracy;
    j["test_accuracy"] = m.report.test_accuracy;
    j["fold_accuracies"] = m.report.fold_accuracies;
    j["best_fold"] = m.report.best_fold;
    j["folds"] = m.report.folds;
    j["seed"] = m.report.seed;
    auto &t = j["test"] = nlohmann::ordered_json::array();
    for (const auto &p : m.test) t.push_back({{"features", p.features}, {"label", label_name(m.dimensionality, p.label)}});
    return j;
}

inline TrainedModel model_from_json(const nlohmann::json &j) {
    TrainedModel m;
    m.dimensionality = j.at("dimensionality").get<size_t>();
    if (m.dimensionality != 2 && m.dimensionality != 4) throw std::invalid_argument("model dimensionality must be 2 or 4");
    m.report.params.thetas = j.at("thetas").get<std::vector<double>>();
    if (m.report.params.arity() != arity_for(m.dimensionality) || m.report.params.thetas.size() % 2) {
        throw std::invalid_argument("model parameters do not match dimensionality");
    }
    m.report.train_accuracy = j.value("train_accuracy", 0.0);
    m.report.test_accuracy = j.value("test_accuracy", 0.0);
    m.report.fold_accuracies = j.value("fold_accuracies", std::vector<double>{});
    m.report.best_fold = j.value("best_fold", size_t{0});
    m.report.folds = j.value("folds", size_t{5});
    m.report.seed = j.value("seed", uint64_t{1});
    for (const auto &p : j.at("test")) {
        DataPoint d{p.at("features").get<std::vector<double>>(), parse_label(m.dimensionality, p.at("label"))};
        if (d.features.size() != m.dimensionality) throw std::invalid_argument("test point has wrong dimensionality");
        m.test.push_back(std::move(d));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Reference points

struct ReferencePoint {
    int label = 0;
    DataPoint point;
    // Synthesized composite, no measurements.
    Circuit circuit;
    // Noiseless probability that the circuit returns `label`.
    double clean_pst = 0;
};

namespace detail {

inline int outcome_label(const std::vector<uint8_t> &bits) {
    int v = 0;
    for (uint8_t b : bits) v = (v << 1) | (b & 1);
    return v;
}

inline double distance2(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); i++) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

}  // namespace detail

// Per class: the test point nearest the class mean whose synthesized circuit
// returns the label with certainty. Without such a point, the one with the
// highest clean success probability (nearest the mean on ties).
inline std::vector<ReferencePoint> choose_reference_points(const std::vector<DataPoint> &test, const ClassifierParams &params,
                                                           const std::vector<GateKind> &gate_set) {
    const size_t classes = size_t(1) << params.arity();
    std::vector<ReferencePoint> out;
    for (size_t c = 0; c < classes; c++) {
        std::vector<const DataPoint *> members;
        for (const auto &p : test) {
            if (p.label == int(c)) members.push_back(&p);
        }
        if (members.empty()) throw std::invalid_argument("missing reference points: no test point of class " + std::to_string(c));
        std::vector<double> mean(members[0]->features.size(), 0);
        for (const auto *p : members) {
            for (size_t i = 0; i < mean.size(); i++) mean[i] += p->features[i] / double(members.size());
        }
        std::vector<size_t> order(members.size());
        for (size_t i = 0; i < order.size(); i++) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return detail::distance2(members[a]->features, mean) < detail::distance2(members[b]->features, mean);
        });
        std::optional<ReferencePoint> best;
        for (size_t i : order) {
            Circuit circ = synthesize_point(*members[i], params, gate_set).circuit;
            double pst = circuit_outcome_probabilities(circ)[c];
            if (!best || pst > best->clean_pst + 1e-12) best = ReferencePoint{int(c), *members[i], circ, pst};
            if (pst >= 1 - 1e-9) break;
        }
        out.push_back(*best);
    }
    return out;
}

struct PreparedClassifier {
    size_t arity = 1;
    ClassifierParams params;
    std::vector<DataPoint> test;
    double parameterized_accuracy = 0;
    // Synthesized test accuracy with the full Clifford set; shared by every code.
    double clean_accuracy = 0;
    std::vector<ReferencePoint> steane_refs;
    std::vector<ReferencePoint> surface_refs;

    size_t classes() const { return size_t(1) << arity; }
    size_t dimensionality() const { return arity == 1 ? 2 : 4; }
    const std::vector<ReferencePoint> &refs_for(CodeName code) const {
        return &gate_set_for(code) == &surface_gate_set() ? surface_refs : steane_refs;
    }
};

inline PreparedClassifier prepare_classifier(const std::vector<DataPoint> &test, const ClassifierParams &params) {
    PreparedClassifier pc;
    pc.arity = params.arity();
    pc.params = params;
    pc.test = test;
    auto acc = synthesis_accuracy_report(test, params, steane_gate_set());
    pc.parameterized_accuracy = acc.original;
    pc.clean_accuracy = acc.synthesized;
    pc.steane_refs = choose_reference_points(test, params, steane_gate_set());
    pc.surface_refs = choose_reference_points(test, params, surface_gate_set());
    return pc;
}

inline PreparedClassifier prepare_classifier(const TrainedModel &m) { return prepare_classifier(m.test, m.report.params); }

inline TrainedModel model_for_config(const ExperimentConfig &cfg) {
    if (!cfg.model_path.empty()) {
        std::ifstream in(cfg.model_path);
        if (!in) throw std::runtime_error("cannot read model " + cfg.model_path);
        TrainedModel m = model_from_json(nlohmann::json::parse(in));
        if (arity_for(m.dimensionality) != cfg.classifier) throw std::invalid_argument("model does not match classifier size");
        return m;
    }
    TrainOptions opt;
    opt.folds = cfg.folds;
    opt.seed = cfg.train_seed;
    return train_model(generate_dataset(cfg.classifier == 1 ? 2 : 4, cfg.data_seed), opt);
}

// ---------------------------------------------------------------------------
// PST estimation

struct ResultRecord {
    size_t classifier = 1;
    std::string class_label;
    CodeName code = CodeName::None;
    ErrorMode mode = ErrorMode::D;
    double p = 0;
    size_t shots = 0;
    double pst = 0;
    double wall_time = 0;
};

inline std::string cell_key(size_t classifier, const std::string &label, CodeName code, ErrorMode mode, double p) {
    return std::to_string(classifier) + "/" + label + "/" + std::string(code_name(code)) + "/" +
           std::string(mode_name(mode)) + "/" + fmt6(p);
}

inline std::string cell_key(const ResultRecord &r) { return cell_key(r.classifier, r.class_label, r.code, r.mode, r.p); }

inline uint64_t cell_seed(uint64_t master_seed, const std::string &key) { return hash_combine(master_seed, key); }

// A runnable circuit plus how its measurement record maps to a class label.
struct ExecutablePoint {
    Circuit circuit;
    std::optional<ProtectedCircuitPlan> plan;

    static ExecutablePoint build(const Circuit &logical, CodeName code, size_t rounds_per_layer = 1) {
        ExecutablePoint e;
        if (code == CodeName::None) {
            e.circuit = logical;
            for (uint32_t q = 0; q < logical.width(); q++) e.circuit.append(M(q));
            return e;
        }
        e.plan = assemble_protected_circuit(logical, code_instance(code), rounds_per_layer);
        e.circuit = e.plan->total;
        return e;
    }

    int label(const MeasurementRecord &rec) const {
        if (plan) return detail::outcome_label(decode_and_readout(*plan, rec));
        return detail::outcome_label(std::vector<uint8_t>(rec.begin(), rec.end()));
    }
};

// Fraction of `shots` noisy runs of `exec` that return `label`.
inline double sample_success(const ExecutablePoint &exec, int label, ErrorMode mode, double p, size_t shots, uint64_t seed) {
    Rng rng(seed);
    FrameSampler frames(exec.circuit, rng);
    FaultSampler faults(exec.circuit, NoiseModel(mode, p));
    size_t ok = 0;
    std::vector<std::vector<FaultRealization>> batch;
    for (size_t done = 0; done < shots; done += FrameSampler::kLanes) {
        size_t lanes = std::min(FrameSampler::kLanes, shots - done);
        batch.assign(lanes, {});
        for (auto &f : batch) f = faults.sample(rng);
        auto words = frames.run_batch(batch, rng);
        for (size_t l = 0; l < lanes; l++) ok += exec.label(FrameSampler::lane_record(words, l)) == label;
    }
    return double(ok) / double(shots);
}

inline ResultRecord estimate_pst(const ReferencePoint &ref, size_t classifier, CodeName code, ErrorMode mode, double p,
                                 size_t shots, uint64_t seed, size_t rounds_per_layer = 1) {
    if (shots == 0) throw std::invalid_argument("shots must be positive");
    auto t0 = std::chrono::steady_clock::now();
    ResultRecord r;
    r.classifier = classifier;
    r.class_label = label_name(classifier == 1 ? 2 : 4, ref.label);
    r.code = code;
    r.mode = mode;
    r.p = p;
    r.shots = shots;
    ExecutablePoint exec = ExecutablePoint::build(ref.circuit, code, rounds_per_layer);
    r.pst = sample_success(exec, ref.label, mode, p, shots, seed);
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// ---------------------------------------------------------------------------
// Tables and persistence

enum class Format { Csv, Json };

inline Format parse_format(std::string_view s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw std::invalid_argument("unknown format '" + std::string(s) + "'");
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    size_t column(const std::string &name) const {
        for (size_t i = 0; i < columns.size(); i++) {
            if (columns[i] == name) return i;
        }
        throw std::invalid_argument("missing column '" + name + "'");
    }
};

namespace detail {

inline std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline nlohmann::ordered_json json_cell(const std::string &s) {
    if (s.empty()) return s;
    char *end = nullptr;
    if (s.find_first_of(".eEn") == std::string::npos) {
        long long v = std::strtoll(s.c_str(), &end, 10);
        if (*end == '\0') return v;
    }
    double d = std::strtod(s.c_str(), &end);
    if (*end == '\0') return d;
    return s;
}

inline std::string cell_text(const nlohmann::json &v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number()) return fmt6(v.get<double>());
    throw std::invalid_argument("unsupported JSON cell");
}

}  // namespace detail

inline std::string csv_line(const std::vector<std::string> &cells) {
    std::string s;
    for (size_t i = 0; i < cells.size(); i++) {
        if (i) s += ',';
        s += cells[i];
    }
    return s + '\n';
}

inline void write_table(std::ostream &out, const Table &t, Format f) {
    if (f == Format::Csv) {
        out << csv_line(t.columns);
        for (const auto &r : t.rows) out << csv_line(r);
        return;
    }
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto &r : t.rows) {
        nlohmann::ordered_json o;
        for (size_t i = 0; i < t.columns.size(); i++) o[t.columns[i]] = detail::json_cell(r.at(i));
        j.push_back(std::move(o));
    }
    out << j.dump(2) << '\n';
}

inline Table read_table(std::istream &in, Format f) {
    Table t;
    if (f == Format::Csv) {
        std::string line;
        if (!std::getline(in, line)) throw std::invalid_argument("empty table");
        t.columns = detail::split_csv(line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto cells = detail::split_csv(line);
            if (cells.size() != t.columns.size()) throw std::invalid_argument("ragged table row: " + line);
            t.rows.push_back(std::move(cells));
        }
        return t;
    }
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(in);
    if (!j.is_array()) throw std::invalid_argument("JSON table must be an array");
    for (const auto &o : j) {
        if (t.columns.empty()) {
            for (auto it = o.begin(); it != o.end(); ++it) t.columns.push_back(it.key());
        }
        std::vector<std::string> row;
        for (const auto &c : t.columns) row.push_back(detail::cell_text(o.at(c)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline const std::vector<std::string> &result_columns() {
    static const std::vector<std::string> c = {"classifier", "class_label", "code", "mode", "p", "shots", "pst"};
    return c;
}

inline std::vector<std::string> result_row(const ResultRecord &r) {
    return {std::to_string(r.classifier), r.class_label, std::string(code_name(r.code)), std::string(mode_name(r.mode)),
            fmt6(r.p), std::to_string(r.shots), fmt6(r.pst)};
}

inline Table results_table(const std::vector<ResultRecord> &records) {
    Table t{result_columns(), {}};
    for (const auto &r : records) t.rows.push_back(result_row(r));
    return t;
}

inline std::vector<ResultRecord> results_from_table(const Table &t) {
    const size_t ci = t.column("classifier"), li = t.column("class_label"), ki = t.column("code"), mi = t.column("mode"),
                 pi = t.column("p"), si = t.column("shots"), vi = t.column("pst");
    std::vector<ResultRecord> out;
    for (const auto &row : t.rows) {
        ResultRecord r;
        r.classifier = std::stoul(row[ci]);
        r.class_label = row[li];
        r.code = parse_code(row[ki]);
        r.mode = parse_mode(row[mi]);
        r.p = std::stod(row[pi]);
        r.shots = std::stoul(row[si]);
        r.pst = std::stod(row[vi]);
        if (!(r.pst >= 0 && r.pst <= 1)) throw std::invalid_argument("pst outside [0, 1]");
        out.push_back(r);
    }
    return out;
}

inline void write_table_file(const Table &t, Format f, const std::string &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output " + path);
    write_table(out, t, f);
    if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

inline Table read_table_file(const std::string &path, Format f) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return read_table(in, f);
}

inline void emit_results(const std::vector<ResultRecord> &records, Format f, const std::string &path) {
    write_table_file(results_table(records), f, path);
}

inline std::vector<ResultRecord> read_results(const std::string &path, Format f = Format::Csv) {
    return results_from_table(read_table_file(path, f));
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepOptions {
    // 0: QECSIM_WORKERS, else hardware concurrency.
    size_t workers = 0;
    // Stop after this many new cells are written (for interruption tests).
    size_t stop_after = SIZE_MAX;
};

inline size_t worker_count(size_t requested) {
    if (requested) return requested;
    if (const char *env = std::getenv("QECSIM_WORKERS")) {
        char *end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (*env && *end == '\0' && v > 0) return v;
        throw std::invalid_argument("QECSIM_WORKERS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct SweepCell {
    const ReferencePoint *ref;
    CodeName code;
    ErrorMode mode;
    double p;
};

inline std::vector<SweepCell> sweep_cells(const ExperimentConfig &cfg, const PreparedClassifier &pc) {
    std::vector<SweepCell> cells;
    if (cfg.codes.empty() || cfg.modes.empty() || cfg.noise_grid.empty()) return cells;
    for (size_t c = 0; c < pc.classes(); c++) {
        for (CodeName code : cfg.codes) {
            const ReferencePoint &ref = pc.refs_for(code).at(c);
            for (ErrorMode m : cfg.modes) {
                for (double p : cfg.noise_grid) cells.push_back({&ref, code, m, p});
            }
        }
    }
    return cells;
}

inline nlohmann::ordered_json sweep_meta(const ExperimentConfig &cfg, const PreparedClassifier &pc) {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(cfg);
    j["parameterized_accuracy"] = pc.parameterized_accuracy;
    j["clean_accuracy"] = pc.clean_accuracy;
    j["thetas"] = pc.params.thetas;
    auto &refs = j["references"] = nlohmann::ordered_json::array();
    for (const char *set : {"steane", "surface"}) {
        for (const auto &r : std::string(set) == "steane" ? pc.steane_refs : pc.surface_refs) {
            refs.push_back({{"gate_set", set},
                            {"label", label_name(pc.dimensionality(), r.label)},
                            {"features", r.point.features},
                            {"clean_pst", r.clean_pst},
                            {"circuit", to_text(r.circuit)}});
        }
    }
    return j;
}

// Runs every (reference point, code, mode, p) cell. With an output path the
// records stream to a CSV in canonical order; an existing file is treated as
// a finished prefix and the sweep continues after it. Wall times go to
// `<output>.timing.csv` and the classifier summary to `<output>.meta.json`.
inline std::vector<ResultRecord> run_pst_sweep(const ExperimentConfig &cfg, const PreparedClassifier &pc,
                                               const SweepOptions &opt = {}) {
    cfg.validate();
    if (pc.arity != cfg.classifier) throw std::invalid_argument("classifier does not match config");
    auto cells = sweep_cells(cfg, pc);
    std::vector<ResultRecord> records;
    std::ofstream out, timing;

    if (!cfg.output_path.empty()) {
        namespace fs = std::filesystem;
        std::string kept;
        if (fs::exists(cfg.output_path)) {
            std::ifstream in(cfg.output_path, std::ios::binary);
            std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            // Only newline-terminated lines count; a torn last line is rerun.
            text.resize(text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1);
            std::istringstream ss(text);
            if (!text.empty()) {
                Table t = read_table(ss, Format::Csv);
                if (t.columns != result_columns()) throw std::invalid_argument("existing output has a different header");
                records = results_from_table(t);
                if (records.size() > cells.size()) throw std::invalid_argument("existing output has more rows than the sweep");
                for (size_t i = 0; i < records.size(); i++) {
                    const SweepCell &c = cells[i];
                    std::string want =
                        cell_key(cfg.classifier, label_name(pc.dimensionality(), c.ref->label), c.code, c.mode, c.p);
                    if (cell_key(records[i]) != want || records[i].shots != cfg.shots) {
                        throw std::invalid_argument("existing output does not match the sweep at row " +
                                                    std::to_string(i + 1));
                    }
                }
                kept = text;
            }
        }
        out.open(cfg.output_path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output " + cfg.output_path);
        out << (kept.empty() ? csv_line(result_columns()) : kept);
        out.flush();
        timing.open(cfg.output_path + ".timing.csv", std::ios::binary | (kept.empty() ? std::ios::trunc : std::ios::app));
        if (kept.empty()) timing << "key,wall_time\n";
        std::ofstream meta(cfg.output_path + ".meta.json", std::ios::binary | std::ios::trunc);
        meta << sweep_meta(cfg, pc).dump(2) << '\n';
        if (!out || !timing || !meta) throw std::runtime_error("cannot write sweep outputs next to " + cfg.output_path);
    }

    const size_t start = records.size();
    const size_t end = start + std::min(opt.stop_after, cells.size() - start);
    std::vector<std::optional<ResultRecord>> done(cells.size());
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<size_t> next{start};
    std::exception_ptr failure;

    auto work = [&]() {
        for (size_t i; (i = next.fetch_add(1)) < end;) {
            {
                std::lock_guard<std::mutex> lock(mu);
                if (failure) return;
            }
            try {
                const SweepCell &c = cells[i];
                std::string key =
                    cell_key(cfg.classifier, label_name(pc.dimensionality(), c.ref->label), c.code, c.mode, c.p);
                ResultRecord r = estimate_pst(*c.ref, cfg.classifier, c.code, c.mode, c.p, cfg.shots,
                                              cell_seed(cfg.master_seed, key), cfg.rounds_per_layer);
                std::lock_guard<std::mutex> lock(mu);
                done[i] = std::move(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
            }
            cv.notify_one();
        }
    };

    const size_t workers = std::min(worker_count(opt.workers), std::max<size_t>(end - start, 1));
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; w++) pool.emplace_back(work);

    for (size_t i = start; i < end; i++) {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return done[i].has_value() || failure; });
        if (failure) break;
        ResultRecord r = *done[i];
        lock.unlock();
        if (out.is_open()) {
            out << csv_line(result_row(r));
            out.flush();
            timing << cell_key(r) << ',' << fmt6(r.wall_time) << '\n';
            timing.flush();
            if (!out) throw std::runtime_error("write failed: " + cfg.output_path);
        }
        records.push_back(std::move(r));
    }
    for (auto &t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return records;
}

inline std::vector<ResultRecord> run_pst_sweep(const ExperimentConfig &cfg, const SweepOptions &opt = {}) {
    cfg.validate();
    if (cfg.codes.empty() || cfg.modes.empty() || cfg.noise_grid.empty()) {
        return run_pst_sweep(cfg, PreparedClassifier{cfg.classifier, {}, {}, 0, 0, {}, {}}, opt);
    }
    return run_pst_sweep(cfg, prepare_classifier(model_for_config(cfg)), opt);
}

// Mean PST over class labels, one row per (classifier, code, mode) and one
// column per noise level.
inline Table pst_heatmap(const std::vector<ResultRecord> &records) {
    std::vector<double> grid;
    std::vector<std::string> row_keys;
    std::map<std::string, std::map<std::string, std::pair<double, size_t>>> acc;
    for (const auto &r : records) {
        if (std::find(grid.begin(), grid.end(), r.p) == grid.end()) grid.push_back(r.p);
        std::string k = std::to_string(r.classifier) + "," + std::string(code_name(r.code)) + "," +
                        std::string(mode_name(r.mode));
        if (!acc.count(k)) row_keys.push_back(k);
        auto &cell = acc[k][fmt6(r.p)];
        cell.first += r.pst;
        cell.second++;
    }
    std::sort(grid.begin(), grid.end());
    Table t{{"classifier", "code", "mode"}, {}};
    for (double p : grid) t.columns.push_back("p=" + fmt6(p));
    for (const auto &k : row_keys) {
        auto row = detail::split_csv(k);
        for (double p : grid) {
            auto it = acc[k].find(fmt6(p));
            row.push_back(it == acc[k].end() ? "" : fmt6(it->second.first / double(it->second.second)));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Accuracy under noise

struct NoiseImpactModel {
    size_t n = 0;
    double A = 0;
    std::vector<double> p_clean;
    std::vector<double> p_noisy;
    std::vector<double> delta;
    double delta_mean = 0;
    double gamma = 0;
    double A_prime = 0;
};

inline double accuracy_under_noise(const NoiseImpactModel &m) {
    if (m.n == 0 || m.delta.size() != m.n) throw std::invalid_argument("noise impact model needs one delta per class");
    double s = 0;
    for (double d : m.delta) s += d;
    return m.A - s / double(m.n);
}

inline NoiseImpactModel make_noise_model(double A, const std::vector<double> &p_clean, const std::vector<double> &p_noisy,
                                         double gamma) {
    if (p_clean.size() != p_noisy.size()) throw std::invalid_argument("clean and noisy probabilities differ in length");
    NoiseImpactModel m;
    m.n = p_clean.size();
    m.A = A;
    m.p_clean = p_clean;
    m.p_noisy = p_noisy;
    m.gamma = gamma;
    for (size_t i = 0; i < m.n; i++) m.delta.push_back(p_clean[i] - p_noisy[i]);
    m.A_prime = accuracy_under_noise(m);
    m.delta_mean = m.A - m.A_prime;
    return m;
}

// Reference-point estimate for one cell; PST seeds match the sweep's.
inline NoiseImpactModel estimate_noisy_accuracy(const PreparedClassifier &pc, CodeName code, ErrorMode mode, double p,
                                                size_t shots, uint64_t master_seed, size_t rounds_per_layer = 1) {
    const auto &refs = pc.refs_for(code);
    if (refs.size() != pc.classes()) throw std::invalid_argument("missing reference points");
    std::vector<double> clean, noisy;
    for (const auto &ref : refs) {
        std::string key = cell_key(pc.arity, label_name(pc.dimensionality(), ref.label), code, mode, p);
        clean.push_back(ref.clean_pst);
        noisy.push_back(
            estimate_pst(ref, pc.arity, code, mode, p, shots, cell_seed(master_seed, key), rounds_per_layer).pst);
    }
    return make_noise_model(pc.clean_accuracy, clean, noisy, p);
}

struct DirectEstimate {
    size_t points = 0;
    // Exact mean probability of the correct label over the subsample, noiseless.
    double clean = 0;
    // Fraction of noisy shots classified correctly.
    double noisy = 0;
};

// Shot-by-shot classification of a seeded test subsample.
inline DirectEstimate estimate_direct_accuracy(const PreparedClassifier &pc, CodeName code, ErrorMode mode, double p,
                                               size_t shots_per_point, uint64_t seed, size_t subsample = 128,
                                               size_t rounds_per_layer = 1) {
    std::vector<size_t> order(pc.test.size());
    for (size_t i = 0; i < order.size(); i++) order[i] = i;
    Rng rng(hash_combine(seed, std::string_view("subsample")));
    for (size_t i = order.size(); i-- > 1;) std::swap(order[i], order[uniform_below(rng, i + 1)]);
    order.resize(std::min(subsample, order.size()));
    DirectEstimate d;
    d.points = order.size();
    if (order.empty()) return d;
    for (size_t idx : order) {
        const DataPoint &pt = pc.test[idx];
        Circuit circ = synthesize_point(pt, pc.params, gate_set_for(code)).circuit;
        d.clean += circuit_outcome_probabilities(circ)[size_t(pt.label)];
        ExecutablePoint exec = ExecutablePoint::build(circ, code, rounds_per_layer);
        d.noisy += sample_success(exec, pt.label, mode, p, shots_per_point, hash_combine(seed, uint64_t(idx)));
    }
    d.clean /= double(d.points);
    d.noisy /= double(d.points);
    return d;
}

// Clean quantities needed to turn PST records into accuracies.
struct AccuracyContext {
    size_t classifier = 1;
    double clean_accuracy = 0;
    // Keyed "<gate set>/<label>".
    std::map<std::string, double> clean_pst;

    static AccuracyContext of(const PreparedClassifier &pc) {
        AccuracyContext c;
        c.classifier = pc.arity;
        c.clean_accuracy = pc.clean_accuracy;
        for (const auto &r : pc.steane_refs) c.clean_pst["steane/" + label_name(pc.dimensionality(), r.label)] = r.clean_pst;
        for (const auto &r : pc.surface_refs) c.clean_pst["surface/" + label_name(pc.dimensionality(), r.label)] = r.clean_pst;
        return c;
    }

    static AccuracyContext from_meta(const nlohmann::json &meta) {
        AccuracyContext c;
        c.classifier = meta.at("config").at("classifier").get<size_t>();
        c.clean_accuracy = meta.at("clean_accuracy").get<double>();
        for (const auto &r : meta.at("references")) {
            c.clean_pst[r.at("gate_set").get<std::string>() + "/" + r.at("label").get<std::string>()] =
                r.at("clean_pst").get<double>();
        }
        return c;
    }
};

struct AccuracyRecord {
    size_t classifier = 1;
    CodeName code = CodeName::None;
    ErrorMode mode = ErrorMode::D;
    double p = 0;
    // Percent.
    double accuracy = 0;
    double delta_p = 0;
};

// A' = A - mean over classes of (clean PST - noisy PST), per (code, mode, p).
inline std::vector<AccuracyRecord> accuracy_records(const std::vector<ResultRecord> &records, const AccuracyContext &ctx) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const ResultRecord *>> groups;
    for (const auto &r : records) {
        if (r.classifier != ctx.classifier) throw std::invalid_argument("records mix classifiers");
        std::string k = std::string(code_name(r.code)) + "/" + std::string(mode_name(r.mode)) + "/" + fmt6(r.p);
        if (!groups.count(k)) order.push_back(k);
        groups[k].push_back(&r);
    }
    const size_t classes = size_t(1) << ctx.classifier;
    std::vector<AccuracyRecord> out;
    for (const auto &k : order) {
        const auto &g = groups[k];
        if (g.size() != classes) throw std::invalid_argument("missing reference points for " + k);
        std::vector<double> clean, noisy;
        for (const auto *r : g) {
            auto it = ctx.clean_pst.find(std::string(gate_set_name(r->code)) + "/" + r->class_label);
            if (it == ctx.clean_pst.end()) throw std::invalid_argument("missing reference points for " + r->class_label);
            clean.push_back(it->second);
            noisy.push_back(r->pst);
        }
        NoiseImpactModel m = make_noise_model(ctx.clean_accuracy, clean, noisy, g[0]->p);
        out.push_back({ctx.classifier, g[0]->code, g[0]->mode, g[0]->p, m.A_prime * 100, m.delta_mean});
    }
    return out;
}

inline Table accuracy_table(const std::vector<AccuracyRecord> &records) {
    Table t{{"classifier", "code", "mode", "p", "accuracy", "delta_p"}, {}};
    for (const auto &r : records) {
        t.rows.push_back({std::to_string(r.classifier), std::string(code_name(r.code)), std::string(mode_name(r.mode)),
                          fmt6(r.p), fmt6(r.accuracy), fmt6(r.delta_p)});
    }
    return t;
}

inline std::vector<AccuracyRecord> accuracy_from_table(const Table &t) {
    const size_t ci = t.column("classifier"), ki = t.column("code"), mi = t.column("mode"), pi = t.column("p"),
                 ai = t.column("accuracy"), di = t.column("delta_p");
    std::vector<AccuracyRecord> out;
    for (const auto &row : t.rows) {
        out.push_back({std::stoul(row[ci]), parse_code(row[ki]), parse_mode(row[mi]), std::stod(row[pi]), std::stod(row[ai]),
                       std::stod(row[di])});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Improvement and overhead

struct ImprovementRecord {
    size_t classifier = 1;
    ErrorMode mode = ErrorMode::D;
    CodeName code = CodeName::None;
    // Mean accuracy (percent) over the noise grid.
    double AA = 0;
    // Relative improvement over None, percent, two decimals.
    double AI = 0;
};

inline double relative_improvement(double aa_code, double aa_none) {
    if (aa_none == 0) throw std::invalid_argument("zero baseline accuracy");
    return std::round((aa_code - aa_none) / aa_none * 100 * 100) / 100;
}

inline std::vector<ImprovementRecord> improvement_report(const std::vector<AccuracyRecord> &records) {
    std::vector<std::tuple<size_t, ErrorMode, CodeName>> order;
    std::map<std::tuple<size_t, ErrorMode, CodeName>, std::pair<double, size_t>> sums;
    for (const auto &r : records) {
        auto k = std::make_tuple(r.classifier, r.mode, r.code);
        if (!sums.count(k)) order.push_back(k);
        sums[k].first += r.accuracy;
        sums[k].second++;
    }
    std::vector<ImprovementRecord> out;
    for (const auto &k : order) {
        auto base = sums.find(std::make_tuple(std::get<0>(k), std::get<1>(k), CodeName::None));
        if (base == sums.end()) {
            throw std::invalid_argument("missing baseline: no None records for mode " + std::string(mode_name(std::get<1>(k))));
        }
        double aa = sums[k].first / double(sums[k].second);
        double aa_none = base->second.first / double(base->second.second);
        out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), aa, relative_improvement(aa, aa_none)});
    }
    return out;
}

inline Table improvement_table(const std::vector<ImprovementRecord> &records) {
    Table t{{"classifier", "mode", "code", "AA", "AI"}, {}};
    for (const auto &r : records) {
        char ai[32];
        std::snprintf(ai, sizeof ai, "%.2f", r.AI);
        t.rows.push_back({std::to_string(r.classifier), std::string(mode_name(r.mode)), std::string(code_name(r.code)),
                          fmt6(r.AA), ai});
    }
    return t;
}

struct OverheadRow {
    size_t classifier = 1;
    // Class label, or "avg" for the per-code average.
    std::string class_label;
    CodeName code = CodeName::None;
    double qubits = 0;
    double gates = 0;
    double depth = 0;
};

// Metrics of the circuit each cell executes: bare synthesized composite plus
// measurements for None, the assembled protected circuit otherwise.
inline std::vector<OverheadRow> overhead_report(const std::vector<const PreparedClassifier *> &classifiers,
                                                const std::vector<CodeName> &codes, size_t rounds_per_layer = 1) {
    std::vector<OverheadRow> out;
    for (const auto *pc : classifiers) {
        for (CodeName code : codes) {
            OverheadRow avg{pc->arity, "avg", code, 0, 0, 0};
            const auto &refs = pc->refs_for(code);
            for (const auto &ref : refs) {
                CircuitMetrics m = metrics(ExecutablePoint::build(ref.circuit, code, rounds_per_layer).circuit);
                out.push_back({pc->arity, label_name(pc->dimensionality(), ref.label), code, double(m.qubits),
                               double(m.gate_count), double(m.depth)});
                avg.qubits += double(m.qubits) / double(refs.size());
                avg.gates += double(m.gate_count) / double(refs.size());
                avg.depth += double(m.depth) / double(refs.size());
            }
            out.push_back(avg);
        }
    }
    return out;
}

inline Table overhead_table(const std::vector<OverheadRow> &rows) {
    Table t{{"classifier", "class_label", "code", "qubits", "gates", "depth"}, {}};
    for (const auto &r : rows) {
        t.rows.push_back({std::to_string(r.classifier), r.class_label, std::string(code_name(r.code)), fmt6(r.qubits),
                          fmt6(r.gates), fmt6(r.depth)});
    }
    return t;
}

}  // namespace qecsim

#endif
