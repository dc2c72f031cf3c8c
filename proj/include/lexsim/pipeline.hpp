#pragma once

#include "lexsim/eval.hpp"
#include "lexsim/fuse.hpp"

namespace lexsim {

// End-to-end configuration. `method` accepts the similarity method ids plus
// the network-embedding variants: doc2vec, hier_spcnet_m2v,
// hier_spcnet_icf_m2v, deepwalk, paper2vec, value_average, value_max,
// emb_average, emb_max, emb_conc, nn_map_conc, nn_map_wtd_conc, autoencoder,
// bibcoupling, cocitation, dispersion.
struct PipelineConfig {
    std::string corpus_path;
    std::string registry_path;
    std::string pairs_path;
    std::string out_dir;
    std::string method = "nn_map_conc";
    std::string network = "hierspcnet"; // classic measures and deepwalk: pcnet | hierspcnet

    int walks_per_root = 2000;
    int walk_length = 7;
    bool drop_truncated = false;

    int dim = 200;
    int window = 5;
    int negatives = 5;
    int net_epochs = 5;
    int text_epochs = 5;
    int net_min_count = 1;
    int text_min_count = 5;
    double sgns_lr = 0.025;
    std::string stopword_file;
    std::string stemming = "off"; // off | suffix_strip

    double paper2vec_threshold = 0.5;
    double alpha = 0.5;
    bool renorm_mapped = true;
    int fusion_epochs = 50;
    int fusion_batch = 64;
    double fusion_lr = 0.01;
    double weight_decay = 1e-4;
    bool denoise = false;
    double noise_sigma = 0.05;

    std::string weights; // "", "sch1", "sch2"
    int64_t nd = 0;      // sch1 inputs; 0 = derive from the corpus
    int64_t nc = 0;
    int sch2_samples = 300;

    uint64_t seed = 1;
    bool cache = true;
    bool text_infer_eval = false; // train text embeddings without eval docs, infer their vectors
    int threads = 1;

    static PipelineConfig from_file(const std::string& path);
    void set(const std::string& key, const std::string& value);
    std::string echo() const; // canonical key=value listing
};

// Runs the stages in dependency order (parse -> build -> walk -> embed ->
// fuse -> score -> eval), caching intermediates under out_dir by content
// hash. Returns the final report, also written to out_dir/report.json.
EvalReport run_pipeline(const PipelineConfig& cfg);

} // namespace lexsim
