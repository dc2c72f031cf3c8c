#pragma once

#include "lexsim/embed.hpp"
#include "lexsim/graph.hpp"
#include "lexsim/nn.hpp"

namespace lexsim {

std::vector<double> l2_normalize(std::span<const double> v); // throws on zero vector
double cosine(std::span<const double> a, std::span<const double> b);
double clamped_cosine(std::span<const double> a, std::span<const double> b);

enum class ValueMode { average, max };
double combine_values(double text_sim, double nw_sim, ValueMode mode); // inputs must be in [0,1]

enum class EmbCombine { average, max, concat };
// Element-wise mean / element-wise max (dim) or concatenation (2 x dim).
std::vector<double> combine_embeddings(std::span<const double> t, std::span<const double> n, EmbCombine mode);

struct FusionTrainConfig {
    double learning_rate = 0.01;
    double weight_decay = 1e-4;
    int epochs = 50;
    int batch_size = 64;
    double train_fraction = 0.8; // 80/20 train:validation over eligible documents
    uint64_t seed = 1;
    double alpha = 0.5;
    bool denoise = false; // autoencoder input corruption
    double noise_sigma = 0.05;
    std::vector<std::string> exclude_ids; // evaluation-set documents, kept out of training
};

// Maps a text embedding into the network-embedding space: two hidden layers of
// 250 and 300 units with rectified-linear activations, identity output of
// width dim. Trained on loss(n, n') = 1/2 ||n' - n||^2.
class MapNet {
public:
    MapNet() = default;
    MapNet(int dim, uint64_t seed);

    int dim() const { return dim_; }
    std::vector<double> map(std::span<const double> t) const;

    double batch_loss(const std::vector<std::span<const double>>& inputs,
                      const std::vector<std::span<const double>>& targets) const;
    void batch_gradients(const std::vector<std::span<const double>>& inputs,
                         const std::vector<std::span<const double>>& targets, std::vector<double>* grads,
                         double* loss = nullptr) const;

    std::vector<double>& parameters() { return stack_.params; }
    const std::vector<double>& parameters() const { return stack_.params; }

    void save(const std::string& path) const;
    static MapNet load(const std::string& path);

    std::string config_note; // training config echo carried into the model file

private:
    void wire(int dim);
    int dim_ = 0;
    nn::Stack stack_; // l1: dim->250, l2: 250->300, l3: 300->dim
};

enum class ConcMode { conc, wtd_conc };
// n' = M(t), optionally re-normalized, concatenated with t (plain or
// alpha-weighted halves). Feeds cosine similarity.
std::vector<double> fuse_mapped(const MapNet& m, std::span<const double> t, ConcMode mode, double alpha = 0.5,
                                bool renorm_mapped = true);

// Bimodal reconstruction network: text encoder 150, network encoder 100,
// multimodal layer of 300 units, mirrored decoders back to dim each. Trained
// on loss = ||t' - t||^2 + ||n' - n||^2.
class BimodalAutoencoder {
public:
    static constexpr int kTextHidden = 150;
    static constexpr int kNetHidden = 100;
    static constexpr int kMultimodal = 300;

    BimodalAutoencoder() = default;
    BimodalAutoencoder(int dim, uint64_t seed);

    int dim() const { return dim_; }
    std::vector<double> encode(std::span<const double> t, std::span<const double> n) const; // the 300-d embedding
    void reconstruct(std::span<const double> t, std::span<const double> n, std::vector<double>* t_out,
                     std::vector<double>* n_out) const;
    double example_loss(std::span<const double> t, std::span<const double> n) const;

    double batch_loss(const std::vector<std::span<const double>>& ts,
                      const std::vector<std::span<const double>>& ns) const;
    void batch_gradients(const std::vector<std::span<const double>>& ts,
                         const std::vector<std::span<const double>>& ns,
                         const std::vector<std::span<const double>>& target_ts,
                         const std::vector<std::span<const double>>& target_ns, std::vector<double>* grads,
                         double* loss = nullptr) const;

    std::vector<double>& parameters() { return stack_.params; }
    const std::vector<double>& parameters() const { return stack_.params; }

    void save(const std::string& path) const;
    static BimodalAutoencoder load(const std::string& path);

    std::string config_note;

private:
    void wire(int dim);
    int dim_ = 0;
    nn::Stack stack_; // enc_t, enc_n, fuse, dec_t_h, dec_t_o, dec_n_h, dec_n_o
};

template <typename Model>
struct TrainResult {
    Model model;
    std::vector<double> train_loss; // per-epoch mean
    std::vector<double> val_loss;
    double best_val = 0.0;
    int best_epoch = -1;
};

// Both trainers: AdamW, seeded 80/20 split over documents present in both
// tables (minus excluded ids), snapshot with the least validation loss kept.
TrainResult<MapNet> train_map_net(const EmbeddingTable& text_emb, const EmbeddingTable& net_emb,
                                  const FusionTrainConfig& cfg);
TrainResult<BimodalAutoencoder> train_autoencoder(const EmbeddingTable& text_emb, const EmbeddingTable& net_emb,
                                                  const FusionTrainConfig& cfg);

// Homogeneous document graph with an undirected edge wherever cosine of the
// text embeddings strictly exceeds the threshold; the Paper2Vec graph stage.
HeteroGraph build_text_similarity_graph(const EmbeddingTable& text_emb, double threshold);

enum class Method {
    text,
    network,
    value_average,
    value_max,
    emb_average,
    emb_max,
    emb_conc,
    nn_map_conc,
    nn_map_wtd_conc,
    autoencoder,
    paper2vec,
    bibcoupling,
    cocitation,
    dispersion,
};

Method method_from_string(std::string_view s);
const char* to_string(Method m);

struct SimilarityContext {
    const EmbeddingTable* text = nullptr;
    const EmbeddingTable* net = nullptr;
    const EmbeddingTable* paper2vec = nullptr;
    const MapNet* map = nullptr;
    const BimodalAutoencoder* autoencoder = nullptr;
    const HeteroGraph* graph = nullptr; // classic measures
    double alpha = 0.5;
    bool renorm_mapped = true;
};

// Dispatches one document pair through the selected pipeline; embedding
// methods return the clamped cosine. Dispersion needs pair-set normalization
// and is only available through score_pairs.
double pair_similarity(Method m, const SimilarityContext& ctx, const std::string& a, const std::string& b);

// Scores a batch of pairs; min-max normalizes dispersion over the batch.
std::vector<double> score_pairs(Method m, const SimilarityContext& ctx,
                                const std::vector<std::pair<std::string, std::string>>& pairs);

} // namespace lexsim
