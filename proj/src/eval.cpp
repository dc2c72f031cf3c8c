#include "lexsim/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lexsim/fuse.hpp"

namespace lexsim {

// ---------------------------------------------------------------------------
// PairDataset IO
// ---------------------------------------------------------------------------

namespace {

std::pair<std::string, std::string> ordered(const std::string& a, const std::string& b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

} // namespace

PairDataset PairDataset::load_tsv(const std::string& path) {
    PairDataset ds;
    std::istringstream in(io::read_file(path));
    std::string line;
    int lineno = 0;
    std::set<std::pair<std::string, std::string>> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (str::trim(line).empty() || line[0] == '#') continue;
        auto fields = str::split_ws(line);
        if (fields.size() < 3)
            throw Error(path + ":" + std::to_string(lineno) + ": expected id_a id_b expert_score");
        PairRow row;
        row.id_a = fields[0];
        row.id_b = fields[1];
        try {
            row.expert = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw Error(path + ":" + std::to_string(lineno) + ": invalid score '" + fields[2] + "'");
        }
        if (row.expert < 0.0 || row.expert > 1.0)
            throw Error(path + ":" + std::to_string(lineno) + ": expert score out of [0,1]");
        if (row.id_a == row.id_b) throw Error(path + ":" + std::to_string(lineno) + ": pair of identical documents");
        if (!seen.insert(ordered(row.id_a, row.id_b)).second)
            throw Error(path + ":" + std::to_string(lineno) + ": duplicate pair " + row.id_a + " " + row.id_b);
        if (fields.size() >= 4) row.predicted = std::stod(fields[3]);
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

void PairDataset::save_tsv(const std::string& path) const {
    std::ostringstream out;
    for (const auto& r : rows) {
        out << r.id_a << '\t' << r.id_b << '\t' << str::format_double(r.expert);
        if (r.predicted) out << '\t' << str::format_double(*r.predicted);
        out << '\n';
    }
    io::write_file(path, out.str());
}

void PairDataset::attach_scores_tsv(const std::string& path) {
    std::istringstream in(io::read_file(path));
    std::string line;
    int lineno = 0;
    std::map<std::pair<std::string, std::string>, double> scores;
    while (std::getline(in, line)) {
        ++lineno;
        if (str::trim(line).empty() || line[0] == '#') continue;
        auto fields = str::split_ws(line);
        if (fields.size() < 3) throw Error(path + ":" + std::to_string(lineno) + ": expected id_a id_b score");
        scores[ordered(fields[0], fields[1])] = std::stod(fields[2]);
    }
    for (auto& r : rows) {
        auto it = scores.find(ordered(r.id_a, r.id_b));
        if (it == scores.end()) throw Error("no score for pair " + r.id_a + " " + r.id_b + " in " + path);
        r.predicted = it->second;
    }
}

std::vector<double> PairDataset::expert_scores() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.expert);
    return out;
}

std::vector<double> PairDataset::predicted_scores() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        if (!r.predicted) throw Error("pair " + r.id_a + " " + r.id_b + " has no predicted score");
        out.push_back(*r.predicted);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

double pearson(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) throw Error("pearson: length mismatch");
    const size_t n = y.size();
    if (n < 2) throw Error("pearson: needs at least 2 observations");
    // Two-pass form for numerical stability.
    double my = 0.0, mh = 0.0;
    for (size_t i = 0; i < n; ++i) {
        my += y[i];
        mh += yhat[i];
    }
    my /= static_cast<double>(n);
    mh /= static_cast<double>(n);
    double num = 0.0, vy = 0.0, vh = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dy = y[i] - my, dh = yhat[i] - mh;
        num += dy * dh;
        vy += dy * dy;
        vh += dh * dh;
    }
    if (vy == 0.0 || vh == 0.0) throw Error("pearson: zero variance input");
    return num / std::sqrt(vy * vh);
}

double mse(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) throw Error("mse: length mismatch");
    if (y.empty()) throw Error("mse: empty input");
    double acc = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        double d = y[i] - yhat[i];
        acc += d * d;
    }
    return acc / static_cast<double>(y.size());
}

namespace {

struct ClassCounts {
    int64_t tp = 0, fp = 0, fn = 0;
    bool in_truth = false;
};

double f1(const ClassCounts& c) {
    if (c.tp == 0) return 0.0;
    double precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    double recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    return 2.0 * precision * recall / (precision + recall);
}

// Per-class F1 for labels {0,1} under a strict > threshold.
std::array<ClassCounts, 2> confusion(std::span<const double> y, std::span<const double> yhat, double threshold) {
    std::array<ClassCounts, 2> counts{};
    for (size_t i = 0; i < y.size(); ++i) {
        int truth = y[i] > threshold ? 1 : 0;
        int pred = yhat[i] > threshold ? 1 : 0;
        counts[truth].in_truth = true;
        if (truth == pred) {
            ++counts[truth].tp;
        } else {
            ++counts[pred].fp;
            ++counts[truth].fn;
        }
    }
    return counts;
}

} // namespace

double fscore_macro(std::span<const double> y, std::span<const double> yhat, double threshold) {
    if (y.size() != yhat.size()) throw Error("fscore_macro: length mismatch");
    if (y.empty()) throw Error("fscore_macro: empty input");
    auto counts = confusion(y, yhat, threshold);
    double sum = 0.0;
    int present = 0;
    for (const auto& c : counts) {
        if (!c.in_truth) continue;
        sum += f1(c);
        ++present;
    }
    return present ? sum / present : 0.0;
}

// ---------------------------------------------------------------------------
// Class weights
// ---------------------------------------------------------------------------

namespace {

ClassWeights weights_from_probability(double p_similar, WeightScheme scheme) {
    if (!(p_similar > 0.0 && p_similar < 1.0))
        throw Error("degenerate class probability P(similar)=" + str::format_double(p_similar));
    ClassWeights w;
    w.scheme = scheme;
    w.p_similar = p_similar;
    w.w1 = 1.0 / p_similar;
    w.w0 = 1.0 / (1.0 - p_similar);
    return w;
}

} // namespace

ClassWeights derive_weights_citation(int64_t n_d, int64_t n_c) {
    if (n_d < 2) throw Error("derive_weights_citation: need at least 2 documents");
    if (n_c < 0) throw Error("derive_weights_citation: negative pair count");
    double total_pairs = 0.5 * static_cast<double>(n_d) * static_cast<double>(n_d - 1);
    return weights_from_probability(static_cast<double>(n_c) / total_pairs, WeightScheme::sch1);
}

ClassWeights derive_weights_from_counts(int64_t t, int64_t t_p, WeightScheme scheme) {
    if (t <= 0) throw Error("derive_weights_from_counts: no pairs");
    return weights_from_probability(static_cast<double>(t_p) / static_cast<double>(t), scheme);
}

ClassWeights derive_weights_textsim(const EmbeddingTable& text_emb,
                                    const std::vector<std::pair<std::string, std::vector<std::string>>>& strata,
                                    double threshold, size_t sample_per_stratum, uint64_t seed) {
    int64_t total = 0, similar = 0;
    for (const auto& [name, members] : strata) {
        std::vector<std::string> sample;
        for (const auto& id : members)
            if (text_emb.contains(id)) sample.push_back(id);
        std::sort(sample.begin(), sample.end());
        if (sample.size() > sample_per_stratum) {
            Rng rng(hash_combine(hash_combine(seed, fnv1a64("wtd-sch2")), fnv1a64(name)));
            for (size_t i = sample.size(); i > 1; --i) std::swap(sample[i - 1], sample[rng.next_below(i)]);
            sample.resize(sample_per_stratum);
        }
        // Counts are pooled across strata: t = sum of per-stratum pair counts.
        for (size_t i = 0; i < sample.size(); ++i)
            for (size_t j = i + 1; j < sample.size(); ++j) {
                ++total;
                if (cosine_similarity(text_emb, sample[i], sample[j], false) > threshold) ++similar;
            }
    }
    if (total == 0) throw Error("derive_weights_textsim: no document pairs to sample");
    return derive_weights_from_counts(total, similar, WeightScheme::sch2);
}

double wtd_fscore(std::span<const double> y, std::span<const double> yhat, const ClassWeights& w, double threshold) {
    if (y.size() != yhat.size()) throw Error("wtd_fscore: length mismatch");
    if (y.empty()) throw Error("wtd_fscore: empty input");
    auto counts = confusion(y, yhat, threshold);
    double f0 = f1(counts[0]), f1s = f1(counts[1]);
    return (w.w0 * f0 + w.w1 * f1s) / (w.w0 + w.w1);
}

double wtd_mse(std::span<const double> y, std::span<const double> yhat, const ClassWeights& w, double threshold) {
    if (y.size() != yhat.size()) throw Error("wtd_mse: length mismatch");
    if (y.empty()) throw Error("wtd_mse: empty input");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        double wi = y[i] > threshold ? w.w1 : w.w0; // class membership from the expert score
        double d = y[i] - yhat[i];
        num += wi * d * d;
        den += wi;
    }
    return num / den;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

std::string EvalReport::to_json() const {
    nlohmann::json j;
    j["pearson"] = pearson;
    j["mse"] = mse;
    j["fscore_macro"] = fscore_macro;
    j["n"] = n;
    if (!method.empty()) j["method"] = method;
    if (!config_echo.empty()) j["config"] = config_echo;
    if (wtd_fscore) j["wtd_fscore"] = *wtd_fscore;
    if (wtd_mse) j["wtd_mse"] = *wtd_mse;
    if (weights) {
        j["weights"]["w0"] = weights->w0;
        j["weights"]["w1"] = weights->w1;
        j["weights"]["p_similar"] = weights->p_similar;
        j["weights"]["scheme"] = weights->scheme == WeightScheme::sch1   ? "sch1"
                                 : weights->scheme == WeightScheme::sch2 ? "sch2"
                                                                         : "custom";
    }
    return j.dump(2) + "\n";
}

EvalReport evaluate(const PairDataset& dataset, const std::optional<ClassWeights>& weights,
                    const std::string& method) {
    std::vector<double> y = dataset.expert_scores();
    std::vector<double> yhat = dataset.predicted_scores();
    EvalReport report;
    report.n = y.size();
    report.method = method;
    report.pearson = pearson(y, yhat);
    report.mse = mse(y, yhat);
    report.fscore_macro = fscore_macro(y, yhat);
    if (weights) {
        report.weights = *weights;
        report.wtd_fscore = wtd_fscore(y, yhat, *weights);
        report.wtd_mse = wtd_mse(y, yhat, *weights);
    }
    return report;
}

} // namespace lexsim
