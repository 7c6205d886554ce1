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

#ifndef QECSIM_CLASSIFIER_HPP
#define QECSIM_CLASSIFIER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qecsim/circuit.hpp"
#include "qecsim/rng.hpp"
#include "qecsim/statevector.hpp"

namespace qecsim {

struct DataPoint {
    std::vector<double> features;
    int label = 0;
    bool operator==(const DataPoint &) const = default;
};

struct Dataset {
    size_t dimensionality = 2;
    uint64_t seed = 0;
    std::vector<DataPoint> points;
    bool operator==(const Dataset &) const = default;
};

inline size_t class_count(size_t dimensionality) { return dimensionality == 2 ? 2 : 4; }
inline size_t arity_for(size_t dimensionality) { return dimensionality == 2 ? 1 : 2; }

inline std::string label_name(size_t dimensionality, int label) {
    static const char *two[] = {"M", "C"};
    static const char *four[] = {"R", "B", "G", "Y"};
    if (label < 0 || size_t(label) >= class_count(dimensionality)) throw std::invalid_argument("label out of range");
    return dimensionality == 2 ? two[label] : four[label];
}

inline int parse_label(size_t dimensionality, const std::string &s) {
    for (size_t k = 0; k < class_count(dimensionality); k++) {
        if (label_name(dimensionality, int(k)) == s) return int(k);
    }
    throw std::invalid_argument("unknown label: " + s);
}

namespace detail {

// Folds an angle into [0, pi/2] by reflection at both ends.
inline double reflect_quadrant(double a) {
    const double period = M_PI;
    a = std::fmod(a, period);
    if (a < 0) a += period;
    return a > M_PI / 2 ? period - a : a;
}

}  // namespace detail

// Angular class shapes. In 2D each class draws phi ~ N(mean, spread) and
// features (cos phi, sin phi). In 4D each class draws alpha and a shared beta,
// with per-branch jitter on beta, and features
// (cos a cos b0, cos a sin b0, sin a cos b1, sin a sin b1). Angles are folded
// into [0, pi/2] by reflection.
struct DatasetRecipe {
    double mean_2d[2] = {0.6, 1.53};
    double spread_2d[2] = {0.35, 0.08};
    // Per 4D class (R, B, G, Y): alpha mean/spread, beta mean/spread.
    double alpha_4d[4][2] = {{0.3, 0.45}, {0.3, 0.45}, {1.4, 0.2}, {1.4, 0.2}};
    double beta_4d[4][2] = {{0.3, 0.45}, {1.4, 0.2}, {1.25, 0.45}, {0.15, 0.2}};
    double jitter_4d = 0.05;
};

inline Dataset generate_dataset(size_t dimensionality, uint64_t seed, const DatasetRecipe &recipe = {}) {
    if (dimensionality != 2 && dimensionality != 4) throw std::invalid_argument("dimensionality must be 2 or 4");
    Dataset ds;
    ds.dimensionality = dimensionality;
    ds.seed = seed;
    Rng rng(seed);
    const size_t per_class = 1024;
    if (dimensionality == 2) {
        for (int label = 0; label < 2; label++) {
            for (size_t i = 0; i < per_class; i++) {
                double phi = detail::reflect_quadrant(recipe.mean_2d[label] + recipe.spread_2d[label] * standard_normal(rng));
                ds.points.push_back({{std::cos(phi), std::sin(phi)}, label});
            }
        }
        return ds;
    }
    for (int label = 0; label < 4; label++) {
        const double *al = recipe.alpha_4d[label], *be = recipe.beta_4d[label];
        for (size_t i = 0; i < per_class; i++) {
            double a = detail::reflect_quadrant(al[0] + al[1] * standard_normal(rng));
            double b = be[0] + be[1] * standard_normal(rng);
            double b0 = detail::reflect_quadrant(b + recipe.jitter_4d * standard_normal(rng));
            double b1 = detail::reflect_quadrant(b + recipe.jitter_4d * standard_normal(rng));
            std::vector<double> f = {std::cos(a) * std::cos(b0), std::cos(a) * std::sin(b0), std::sin(a) * std::cos(b1),
                                     std::sin(a) * std::sin(b1)};
            double norm = 0;
            for (double v : f) norm += v * v;
            norm = std::sqrt(norm);
            for (double &v : f) v = std::max(0.0, v / norm);
            ds.points.push_back({std::move(f), label});
        }
    }
    return ds;
}

inline Circuit amplitude_encode(const std::vector<double> &features) {
    double norm = 0;
    for (double v : features) norm += v * v;
    if (std::abs(norm - 1) > 1e-9) throw std::invalid_argument("features are not normalized");
    for (double v : features) {
        if (v < -1e-12) throw std::invalid_argument("features must be non-negative");
    }
    if (features.size() == 2) {
        Circuit c(1);
        c.append(RY(0, 2 * std::atan2(features[1], features[0])));
        return c;
    }
    if (features.size() != 4) throw std::invalid_argument("features must have length 2 or 4");
    double a = std::atan2(std::hypot(features[2], features[3]), std::hypot(features[0], features[1]));
    double b0 = std::atan2(features[1], features[0]);
    double b1 = std::atan2(features[3], features[2]);
    // Uniformly controlled RY on qubit 1: angle 2*b0 when qubit 0 is 0, 2*b1 when 1.
    Circuit c(2);
    c.append(RY(0, 2 * a));
    c.append(RY(1, b0 + b1)).append(CX(0, 1)).append(RY(1, b0 - b1)).append(CX(0, 1));
    return c;
}

inline Circuit amplitude_encode(const DataPoint &point) { return amplitude_encode(point.features); }

struct ClassifierParams {
    std::vector<double> thetas;
    size_t arity() const { return thetas.size() / 2; }
    bool operator==(const ClassifierParams &) const = default;
};

inline Circuit classifier_circuit(const ClassifierParams &params, size_t arity, bool measure = true) {
    if ((arity != 1 && arity != 2) || params.thetas.size() != 2 * arity) {
        throw std::invalid_argument("classifier arity does not match parameter count");
    }
    for (double t : params.thetas) {
        if (!std::isfinite(t)) throw std::invalid_argument("non-finite classifier parameter");
    }
    Circuit c(arity);
    for (uint32_t q = 0; q < arity; q++) c.append(RZ(q, params.thetas[2 * q])).append(RX(q, params.thetas[2 * q + 1]));
    if (arity == 2) c.append(CX(0, 1));
    if (measure) {
        for (uint32_t q = 0; q < arity; q++) c.append(M(q));
    }
    return c;
}

// Encoding followed by the classifier, without measurements.
inline Circuit composite_circuit(const DataPoint &point, const ClassifierParams &params) {
    if (arity_for(point.features.size()) != params.arity()) throw std::invalid_argument("dimensionality does not match arity");
    Circuit c = amplitude_encode(point);
    c.append(classifier_circuit(params, params.arity(), false));
    return c;
}

// Outcome index with the highest probability; ties go to the lower index.
inline int argmax_label(const std::vector<double> &probs) {
    int best = 0;
    for (size_t k = 1; k < probs.size(); k++) {
        if (probs[k] > probs[size_t(best)] + 1e-12) best = int(k);
    }
    return best;
}

inline std::vector<double> class_probabilities(const DataPoint &point, const ClassifierParams &params) {
    Circuit c = composite_circuit(point, params);
    StateVector s(c.width());
    s.apply(c);
    std::vector<uint32_t> all(c.width());
    for (uint32_t q = 0; q < c.width(); q++) all[q] = q;
    return outcome_probabilities(s, all);
}

inline int predict(const DataPoint &point, const ClassifierParams &params) {
    return argmax_label(class_probabilities(point, params));
}

namespace detail {

// Dense matrix of the classifier block, so a point's outcome probabilities are
// |W f|^2 with the features as amplitudes.
class ClassifierMatrix {
   public:
    explicit ClassifierMatrix(const ClassifierParams &params) : dim_(size_t{1} << params.arity()) {
        Circuit c = classifier_circuit(params, params.arity(), false);
        m_.resize(dim_ * dim_);
        for (size_t col = 0; col < dim_; col++) {
            std::vector<cd> amps(dim_, 0);
            amps[col] = 1;
            for (const Gate &g : c.gates()) kernels::apply_unitary_gate(amps, c.width(), g);
            for (size_t row = 0; row < dim_; row++) m_[row * dim_ + col] = amps[row];
        }
    }

    double prob(const std::vector<double> &f, size_t outcome) const {
        cd a = 0;
        for (size_t col = 0; col < dim_; col++) a += m_[outcome * dim_ + col] * f[col];
        return std::norm(a);
    }

    int predict(const std::vector<double> &f) const {
        std::vector<double> p(dim_);
        for (size_t k = 0; k < dim_; k++) p[k] = prob(f, k);
        return argmax_label(p);
    }

   private:
    size_t dim_;
    std::vector<cd> m_;
};

inline double mean_correct_probability(const std::vector<const DataPoint *> &pts, const ClassifierParams &params) {
    ClassifierMatrix w(params);
    double s = 0;
    for (const DataPoint *p : pts) s += w.prob(p->features, size_t(p->label));
    return pts.empty() ? 0 : s / double(pts.size());
}

inline double accuracy_of(const std::vector<const DataPoint *> &pts, const ClassifierParams &params) {
    ClassifierMatrix w(params);
    size_t ok = 0;
    for (const DataPoint *p : pts) ok += w.predict(p->features) == p->label;
    return pts.empty() ? 0 : double(ok) / double(pts.size());
}

// Maximizes f over one periodic angle: a 12-point scan brackets the best
// region, then golden-section search refines inside it.
inline double golden_maximize(const std::function<double(double)> &f, double center) {
    const int scan = 12;
    const double step = 2 * M_PI / scan;
    double best_x = center, best_f = f(center);
    for (int i = 1; i < scan; i++) {
        double x = center - M_PI + i * step;
        double v = f(x);
        if (v > best_f) {
            best_f = v;
            best_x = x;
        }
    }
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    double lo = best_x - step, hi = best_x + step;
    double a = hi - invphi * (hi - lo), b = lo + invphi * (hi - lo);
    double fa = f(a), fb = f(b);
    while (hi - lo > 1e-7) {
        if (fa > fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - invphi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + invphi * (hi - lo);
            fb = f(b);
        }
    }
    double x = (lo + hi) / 2;
    return f(x) >= best_f ? x : best_x;
}

}  // namespace detail

inline double accuracy(const std::vector<DataPoint> &points, const ClassifierParams &params) {
    std::vector<const DataPoint *> ptrs;
    for (const auto &p : points) ptrs.push_back(&p);
    return detail::accuracy_of(ptrs, params);
}

// Test-index lists of a seeded k-fold split.
inline std::vector<std::vector<size_t>> fold_indices(size_t n, size_t folds, uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("need at least two folds");
    if (n < folds) throw std::invalid_argument("fewer points than folds");
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; i++) order[i] = i;
    Rng rng(hash_combine(seed, std::string_view("folds")));
    for (size_t i = n; i-- > 1;) std::swap(order[i], order[uniform_below(rng, i + 1)]);
    std::vector<std::vector<size_t>> out(folds);
    for (size_t i = 0; i < n; i++) out[i % folds].push_back(order[i]);
    for (auto &f : out) std::sort(f.begin(), f.end());
    return out;
}

struct TrainOptions {
    size_t folds = 5;
    size_t restarts = 8;
    size_t sweeps = 3;
    uint64_t seed = 1;
};

struct TrainReport {
    ClassifierParams params;
    double train_accuracy = 0;
    double test_accuracy = 0;
    std::vector<double> fold_accuracies;
    size_t best_fold = 0;
    size_t folds = 5;
    uint64_t seed = 1;
};

// Coordinate ascent on the mean probability of the correct label. An angle
// only moves on strict improvement.
inline ClassifierParams fit_params(const std::vector<const DataPoint *> &train, size_t arity, const TrainOptions &opt) {
    Rng rng(hash_combine(opt.seed, std::string_view("restarts")));
    ClassifierParams best;
    double best_score = -1;
    for (size_t r = 0; r < opt.restarts; r++) {
        ClassifierParams cur;
        cur.thetas.assign(2 * arity, 0.0);
        if (r > 0) {
            for (double &t : cur.thetas) t = M_PI * (2 * uniform01(rng) - 1);
        }
        double score = detail::mean_correct_probability(train, cur);
        for (size_t sweep = 0; sweep < opt.sweeps; sweep++) {
            for (size_t j = 0; j < cur.thetas.size(); j++) {
                ClassifierParams trial = cur;
                auto f = [&](double x) {
                    trial.thetas[j] = x;
                    return detail::mean_correct_probability(train, trial);
                };
                double x = detail::golden_maximize(f, cur.thetas[j]);
                double v = f(x);
                if (v > score + 1e-12) {
                    cur.thetas[j] = reduce_angle(x);
                    score = detail::mean_correct_probability(train, cur);
                }
            }
        }
        if (score > best_score + 1e-12) {
            best_score = score;
            best = cur;
        }
    }
    return best;
}

inline TrainReport train(const Dataset &ds, const TrainOptions &opt = {}) {
    std::vector<uint8_t> seen(class_count(ds.dimensionality), 0);
    for (const auto &p : ds.points) {
        if (p.label < 0 || size_t(p.label) >= seen.size()) throw std::invalid_argument("label out of range");
        seen[size_t(p.label)] = 1;
    }
    size_t distinct = 0;
    for (uint8_t s : seen) distinct += s;
    if (distinct < 2) throw std::invalid_argument("degenerate dataset: single class");

    const size_t arity = arity_for(ds.dimensionality);
    auto folds = fold_indices(ds.points.size(), opt.folds, opt.seed);
    TrainReport rep;
    rep.folds = opt.folds;
    rep.seed = opt.seed;
    double best_acc = -1, train_sum = 0, test_sum = 0;
    for (size_t k = 0; k < folds.size(); k++) {
        std::vector<uint8_t> is_test(ds.points.size(), 0);
        for (size_t i : folds[k]) is_test[i] = 1;
        std::vector<const DataPoint *> tr, te;
        for (size_t i = 0; i < ds.points.size(); i++) (is_test[i] ? te : tr).push_back(&ds.points[i]);
        ClassifierParams p = fit_params(tr, arity, opt);
        double tr_acc = detail::accuracy_of(tr, p), te_acc = detail::accuracy_of(te, p);
        rep.fold_accuracies.push_back(te_acc);
        train_sum += tr_acc;
        test_sum += te_acc;
        if (tr_acc > best_acc) {
            best_acc = tr_acc;
            rep.best_fold = k;
            rep.params = p;
        }
    }
    rep.train_accuracy = train_sum / double(folds.size());
    rep.test_accuracy = test_sum / double(folds.size());
    return rep;
}

// Held-out points of the report's best fold.
inline std::vector<DataPoint> test_split(const Dataset &ds, const TrainReport &rep) {
    auto folds = fold_indices(ds.points.size(), rep.folds, rep.seed);
    std::vector<DataPoint> out;
    for (size_t i : folds.at(rep.best_fold)) out.push_back(ds.points[i]);
    return out;
}

struct ProjectedPoint {
    std::vector<double> coords;
    int label = 0;
};

// Projection onto the top principal components (power iteration with deflation).
inline std::vector<ProjectedPoint> pca_project(const Dataset &ds, size_t dims = 3) {
    const size_t d = ds.dimensionality;
    if (dims > d) throw std::invalid_argument("dims exceeds dimensionality");
    if (ds.points.empty()) return {};
    std::vector<double> mean(d, 0);
    for (const auto &p : ds.points) {
        for (size_t i = 0; i < d; i++) mean[i] += p.features[i];
    }
    for (double &m : mean) m /= double(ds.points.size());
    std::vector<double> cov(d * d, 0);
    for (const auto &p : ds.points) {
        for (size_t i = 0; i < d; i++) {
            for (size_t j = 0; j < d; j++) cov[i * d + j] += (p.features[i] - mean[i]) * (p.features[j] - mean[j]);
        }
    }
    for (double &c : cov) c /= double(ds.points.size());

    std::vector<std::vector<double>> basis;
    // Two Gram-Schmidt passes; a vector that loses almost all of its norm is
    // rejected since its remainder is rounding noise.
    auto orthonormalize = [&](std::vector<double> &v) {
        double before = 0;
        for (double x : v) before += x * x;
        for (int pass = 0; pass < 2; pass++) {
            for (const auto &b : basis) {
                double dot = 0;
                for (size_t i = 0; i < d; i++) dot += v[i] * b[i];
                for (size_t i = 0; i < d; i++) v[i] -= dot * b[i];
            }
        }
        double n = 0;
        for (double x : v) n += x * x;
        if (n < 1e-300 || n < 1e-20 * before) return false;
        n = std::sqrt(n);
        for (double &x : v) x /= n;
        return true;
    };
    for (size_t k = 0; k < dims; k++) {
        std::vector<double> v(d);
        for (size_t i = 0; i < d; i++) v[i] = 1.0 + 0.1 * double(i);
        orthonormalize(v);
        for (int it = 0; it < 500; it++) {
            std::vector<double> w(d, 0);
            for (size_t i = 0; i < d; i++) {
                for (size_t j = 0; j < d; j++) w[i] += cov[i * d + j] * v[j];
            }
            if (!orthonormalize(w)) break;
            v = w;
        }
        for (size_t e = 0; !orthonormalize(v) && e < d; e++) {
            v.assign(d, 0);
            v[e] = 1;
        }
        basis.push_back(v);
        double lambda = 0;
        for (size_t i = 0; i < d; i++) {
            for (size_t j = 0; j < d; j++) lambda += v[i] * cov[i * d + j] * v[j];
        }
        for (size_t i = 0; i < d; i++) {
            for (size_t j = 0; j < d; j++) cov[i * d + j] -= lambda * v[i] * v[j];
        }
    }
    std::vector<ProjectedPoint> out;
    for (const auto &p : ds.points) {
        ProjectedPoint q;
        q.label = p.label;
        for (const auto &b : basis) {
            double s = 0;
            for (size_t i = 0; i < d; i++) s += (p.features[i] - mean[i]) * b[i];
            q.coords.push_back(s);
        }
        out.push_back(std::move(q));
    }
    return out;
}

inline void write_dataset_csv(std::ostream &out, const Dataset &ds) {
    for (size_t i = 0; i < ds.dimensionality; i++) out << 'f' << i + 1 << ',';
    out << "label\n";
    out << std::setprecision(17);
    for (const auto &p : ds.points) {
        for (double v : p.features) out << v << ',';
        out << label_name(ds.dimensionality, p.label) << '\n';
    }
}

inline Dataset read_dataset_csv(std::istream &in) {
    Dataset ds;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty dataset file");
    ds.dimensionality = size_t(std::count(line.begin(), line.end(), ','));
    if (ds.dimensionality != 2 && ds.dimensionality != 4) throw std::invalid_argument("dataset must have 2 or 4 features");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        DataPoint p;
        for (size_t i = 0; i < ds.dimensionality; i++) {
            if (!std::getline(ss, cell, ',')) throw std::invalid_argument("short dataset row");
            p.features.push_back(std::stod(cell));
        }
        if (!std::getline(ss, cell)) throw std::invalid_argument("missing label");
        p.label = parse_label(ds.dimensionality, cell);
        ds.points.push_back(std::move(p));
    }
    return ds;
}

inline void write_projection_csv(std::ostream &out, const std::vector<ProjectedPoint> &pts, size_t dimensionality) {
    size_t dims = pts.empty() ? 0 : pts[0].coords.size();
    for (size_t i = 0; i < dims; i++) out << "pc" << i + 1 << ',';
    out << "label\n" << std::setprecision(9);
    for (const auto &p : pts) {
        for (double v : p.coords) out << v << ',';
        out << label_name(dimensionality, p.label) << '\n';
    }
}

}  // namespace qecsim

#endif
