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

// Command-line driver: dataset generation, training, synthesis, sweeps and reports.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "qecsim/harness.hpp"

using namespace qecsim;

namespace {

// Writes to `path`, or stdout when it is empty or "-".
template <class F>
void with_output(const std::string &path, F &&write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output '" + path + "'");
    write(out);
}

std::ifstream open_input(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return in;
}

nlohmann::json read_json(const std::string &path) {
    auto in = open_input(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
    }
}

TrainedModel load_model(const std::string &path) { return model_from_json(read_json(path)); }

std::vector<const PreparedClassifier *> pointers(const std::vector<PreparedClassifier> &v) {
    std::vector<const PreparedClassifier *> out;
    for (const auto &pc : v) out.push_back(&pc);
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulate noisy, error-protected quantum classifiers"};
    app.require_subcommand(1);

    // gen-data
    auto *gen = app.add_subcommand("gen-data", "Generate a labelled dataset as CSV");
    size_t dim = 2;
    uint64_t data_seed = 7;
    std::string data_out, pca_out;
    gen->add_option("--dim", dim, "Feature dimensionality")->check(CLI::IsMember({2, 4}));
    gen->add_option("--seed", data_seed, "Dataset seed");
    gen->add_option("--out", data_out, "Output CSV (default stdout)");
    gen->add_option("--pca", pca_out, "Also write a PCA projection (up to 3 components) here");

    // train
    auto *tr = app.add_subcommand("train", "Train a classifier with k-fold cross-validation");
    std::string train_data, model_out;
    TrainOptions topt;
    tr->add_option("--data", train_data, "Dataset CSV")->required();
    tr->add_option("--folds", topt.folds, "Number of folds")->check(CLI::Range(2, 100));
    tr->add_option("--seed", topt.seed, "Training seed");
    tr->add_option("--out", model_out, "Model JSON (default stdout)");

    // synth
    auto *sy = app.add_subcommand("synth", "Synthesize Clifford circuits for a trained model");
    std::string synth_model, gate_set = "steane", synth_out;
    sy->add_option("--model", synth_model, "Model JSON")->required();
    sy->add_option("--gate-set", gate_set, "Gate set")->check(CLI::IsMember({"steane", "surface"}));
    sy->add_option("--out", synth_out, "Reference circuits (default stdout)");

    // sweep
    auto *sw = app.add_subcommand("sweep", "Run a PST sweep");
    std::string sweep_config;
    size_t workers = 0;
    size_t stop_after = SIZE_MAX;
    sw->add_option("--config", sweep_config, "Experiment config JSON")->required();
    sw->add_option("--workers", workers, "Worker threads (default QECSIM_WORKERS or all cores)");
    sw->add_option("--stop-after", stop_after, "Stop after this many new cells");

    // report
    auto *rp = app.add_subcommand("report", "Aggregate sweep results");
    std::string records, kind = "pst", format = "csv", report_out, report_config;
    rp->add_option("--kind", kind, "Report kind")->check(CLI::IsMember({"pst", "accuracy", "improvement", "overhead"}));
    rp->add_option("--records", records, "Result CSV written by sweep");
    rp->add_option("--config", report_config, "Experiment config JSON (overhead)");
    rp->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    rp->add_option("--out", report_out, "Output file (default stdout)");

    // decoder
    auto *dc = app.add_subcommand("decoder", "Export a code's syndrome lookup table");
    std::string code_arg = "Steane", decoder_out;
    dc->add_option("--code", code_arg, "Steane, D3Surface or D5Surface");
    dc->add_option("--out", decoder_out, "Output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            Dataset ds = generate_dataset(dim, data_seed);
            with_output(data_out, [&](std::ostream &o) { write_dataset_csv(o, ds); });
            if (!pca_out.empty()) {
                auto pts = pca_project(ds, std::min<size_t>(3, dim));
                with_output(pca_out, [&](std::ostream &o) { write_projection_csv(o, pts, dim); });
            }
        } else if (*tr) {
            auto in = open_input(train_data);
            Dataset ds = read_dataset_csv(in);
            TrainedModel m = train_model(ds, topt);
            with_output(model_out, [&](std::ostream &o) { o << model_to_json(m).dump(2) << '\n'; });
            std::fprintf(stderr, "train accuracy %.4f, cross-validated test accuracy %.4f (best fold %zu)\n",
                         m.report.train_accuracy, m.report.test_accuracy, m.report.best_fold);
        } else if (*sy) {
            TrainedModel m = load_model(synth_model);
            const auto &set = gate_set == "steane" ? steane_gate_set() : surface_gate_set();
            auto rep = synthesis_accuracy_report(m.test, m.report.params, set);
            auto refs = choose_reference_points(m.test, m.report.params, set);
            std::fprintf(stderr, "test accuracy %.4f parameterized, %.4f synthesized, reduction %.2f points\n",
                         rep.original, rep.synthesized, rep.reduction_pct);
            with_output(synth_out, [&](std::ostream &o) {
                for (const auto &r : refs) {
                    o << "# class " << label_name(m.dimensionality, r.label) << " clean_pst " << fmt6(r.clean_pst)
                      << " features";
                    for (double f : r.point.features) o << ' ' << fmt6(f);
                    o << '\n' << to_text(r.circuit);
                }
            });
        } else if (*sw) {
            ExperimentConfig cfg = load_config(sweep_config);
            if (cfg.output_path.empty()) throw std::invalid_argument("config has no output path");
            auto recs = run_pst_sweep(cfg, {workers, stop_after});
            std::fprintf(stderr, "%zu records in %s\n", recs.size(), cfg.output_path.c_str());
        } else if (*rp) {
            Format f = parse_format(format);
            Table t;
            if (kind == "overhead") {
                if (report_config.empty()) throw std::invalid_argument("overhead report needs --config");
                ExperimentConfig cfg = load_config(report_config);
                std::vector<PreparedClassifier> pcs{prepare_classifier(model_for_config(cfg))};
                t = overhead_table(overhead_report(pointers(pcs), cfg.codes, cfg.rounds_per_layer));
            } else {
                if (records.empty()) throw std::invalid_argument("report needs --records");
                auto recs = read_results(records);
                if (kind == "pst") {
                    t = pst_heatmap(recs);
                } else {
                    auto ctx = AccuracyContext::from_meta(read_json(records + ".meta.json"));
                    auto acc = accuracy_records(recs, ctx);
                    t = kind == "accuracy" ? accuracy_table(acc) : improvement_table(improvement_report(acc));
                }
            }
            with_output(report_out, [&](std::ostream &o) { write_table(o, t, f); });
        } else if (*dc) {
            const auto &code = code_instance(parse_code(code_arg));
            SyndromeTable table = build_decoder(code);
            with_output(decoder_out, [&](std::ostream &o) { table.write_csv(o); });
        }
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
