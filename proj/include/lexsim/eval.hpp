#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexsim/embed.hpp"

namespace lexsim {

struct PairRow {
    std::string id_a, id_b;
    double expert = 0.0; // y in [0,1]
    std::optional<double> predicted;
};

// (doc, doc, expert score) rows; no duplicate unordered pair, scores in [0,1].
struct PairDataset {
    std::vector<PairRow> rows;

    static PairDataset load_tsv(const std::string& path);
    void save_tsv(const std::string& path) const;
    void attach_scores_tsv(const std::string& path); // id_a id_b predicted
    std::vector<double> expert_scores() const;
    std::vector<double> predicted_scores() const; // throws if any row lacks one
};

double pearson(std::span<const double> y, std::span<const double> yhat);
double mse(std::span<const double> y, std::span<const double> yhat);

// Strict threshold: label 1 iff score > threshold. A class absent from the
// ground truth is excluded from the macro average.
double fscore_macro(std::span<const double> y, std::span<const double> yhat, double threshold = 0.5);

enum class WeightScheme { sch1, sch2, custom };

struct ClassWeights {
    double w0 = 1.0; // dissimilar
    double w1 = 1.0; // similar
    WeightScheme scheme = WeightScheme::custom;
    double p_similar = 0.5;
};

// Wtd-Sch 1: P(similar) = n_c / C(n_d, 2), weights are inverse class probabilities.
ClassWeights derive_weights_citation(int64_t n_d, int64_t n_c);

// Shared arithmetic for Wtd-Sch 2: P(similar) = t_p / t.
ClassWeights derive_weights_from_counts(int64_t t, int64_t t_p, WeightScheme scheme = WeightScheme::sch2);

// Wtd-Sch 2: samples documents per case-type stratum, counts pairs whose text
// cosine strictly exceeds the threshold, pools the counts across strata.
ClassWeights derive_weights_textsim(const EmbeddingTable& text_emb,
                                    const std::vector<std::pair<std::string, std::vector<std::string>>>& strata,
                                    double threshold = 0.5, size_t sample_per_stratum = 300, uint64_t seed = 1);

// (w0*F0 + w1*F1) / (w0 + w1)
double wtd_fscore(std::span<const double> y, std::span<const double> yhat, const ClassWeights& w,
                  double threshold = 0.5);

// Row weight w1 if y_i > threshold else w0; sum w_i (y_i - yhat_i)^2 / sum w_i.
double wtd_mse(std::span<const double> y, std::span<const double> yhat, const ClassWeights& w,
               double threshold = 0.5);

struct EvalReport {
    double pearson = 0.0;
    double mse = 0.0;
    double fscore_macro = 0.0;
    std::optional<double> wtd_fscore;
    std::optional<double> wtd_mse;
    std::optional<ClassWeights> weights;
    size_t n = 0;
    std::string method;
    std::string config_echo;

    std::string to_json() const;
};

EvalReport evaluate(const PairDataset& dataset, const std::optional<ClassWeights>& weights = std::nullopt,
                    const std::string& method = "");

} // namespace lexsim
