#pragma once

#include <span>
#include <unordered_map>
#include <unordered_set>

#include "lexsim/corpus.hpp"
#include "lexsim/walker.hpp"

namespace lexsim {

// id -> dense real vector, fixed dimension, no NaN/Inf entries.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(int dim);

    int dim() const { return dim_; }
    size_t size() const { return ids_.size(); }
    void insert(const std::string& id, std::span<const double> vec);
    bool contains(const std::string& id) const { return index_.count(id) != 0; }
    std::span<const double> at(const std::string& id) const;
    const double* find(const std::string& id) const;
    double norm(const std::string& id) const; // cached L2 norm
    const std::vector<std::string>& ids() const { return ids_; }

    void save(const std::string& path) const;
    static EmbeddingTable load(const std::string& path, int expected_dim = -1);

private:
    int dim_ = 0;
    std::vector<std::string> ids_;
    std::vector<double> data_;
    std::vector<double> norms_;
    std::unordered_map<std::string, uint32_t> index_;
};

// Clamped to [0,1] by default (expert scores live there); raw cosine on request.
double cosine_similarity(const EmbeddingTable& t, const std::string& a, const std::string& b, bool clamp = true);

struct SgnsConfig {
    int dim = 200;
    int window = 5;
    int negatives = 5;
    int epochs = 5;
    double initial_lr = 0.025;
    int min_count = 1; // node corpora default; text training typically uses 5
    uint64_t seed = 1;
    int threads = 1; // 1 = deterministic; >1 = lock-free hogwild, not bit-reproducible
};

namespace sgns_detail {
// One (input, output, label) term of the negative-sampling objective.
// Accumulates dL/dinput into grad_input and dL/doutput into grad_output
// (either may be null); returns the loss term. Shared by training and the
// gradient-oracle tests.
double pair_term(const double* input, const double* output, int dim, double label, double* grad_input,
                 double* grad_output);
} // namespace sgns_detail

// Skip-gram with negative sampling over a walk corpus. One vector per node id
// surviving min_count. epoch_loss, when given, receives the per-epoch mean
// pair loss; context_vectors receives the output-side table (useful for
// inspecting the predictive in-out geometry).
EmbeddingTable train_skipgram(const WalkCorpus& corpus, const SgnsConfig& cfg,
                              std::vector<double>* epoch_loss = nullptr,
                              EmbeddingTable* context_vectors = nullptr);

struct TextPreprocessConfig {
    bool lowercase = true;
    std::string stopword_file; // one token per line
    enum class Stemming { off, suffix_strip } stemming = Stemming::off;
};

class TextPreprocessor {
public:
    explicit TextPreprocessor(TextPreprocessConfig cfg = {});
    std::vector<std::string> tokens(std::string_view text) const;

private:
    TextPreprocessConfig cfg_;
    std::unordered_set<std::string> stopwords_;
};

// Distributed bag-of-words paragraph vectors: each document id predicts
// sampled tokens of its own text under the negative-sampling objective.
class ParagraphVectorModel {
public:
    const EmbeddingTable& doc_vectors() const { return doc_vectors_; }

    // Fits a vector for an unseen document with the token side frozen.
    std::vector<double> infer(const std::vector<std::string>& tokens, int epochs, uint64_t seed) const;

private:
    friend ParagraphVectorModel train_paragraph_vectors(const std::vector<CaseDocument>&, const TextPreprocessor&,
                                                        const SgnsConfig&, std::vector<double>*);
    EmbeddingTable doc_vectors_;
    std::vector<std::string> token_ids_;
    std::vector<double> token_out_;            // |vocab| x dim, output-side parameters
    std::vector<double> negative_cumulative_;  // unigram^0.75 CDF
    std::unordered_map<std::string, uint32_t> token_index_;
    SgnsConfig cfg_;
};

ParagraphVectorModel train_paragraph_vectors(const std::vector<CaseDocument>& docs, const TextPreprocessor& pre,
                                             const SgnsConfig& cfg, std::vector<double>* epoch_loss = nullptr);

} // namespace lexsim
