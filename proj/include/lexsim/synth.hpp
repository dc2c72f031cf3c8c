#pragma once

#include "lexsim/corpus.hpp"
#include "lexsim/eval.hpp"

namespace lexsim {

// Parameters for the synthetic corpus: disjoint communities, each with its own
// act hierarchy and vocabulary, citations concentrated within the community
// plus a configurable cross-noise fraction.
struct SynthSpec {
    int communities = 2;
    int docs_per_community = 20;
    int acts_per_community = 1;
    int sections_per_act = 30;
    int statute_cites_per_doc = 4;
    int doc_cites_per_doc = 2;
    double cross_noise = 0.0; // probability a citation is redirected to another community
    int vocab_per_community = 120;
    int shared_vocab = 40;
    int tokens_per_doc = 120;
    uint64_t seed = 7;
};

struct SynthCorpus {
    Corpus corpus;
    PairDataset labels; // ground truth: same community = 1.0, cross = 0.0
    ActRegistry registry;
    std::vector<int> community_of_doc; // aligned with corpus.cases
};

SynthCorpus generate_synthetic_corpus(const SynthSpec& spec);

// Writes corpus.jsonl, labels.tsv and acts.tsv under out_dir.
void write_synthetic_corpus(const SynthCorpus& sc, const std::string& out_dir);

} // namespace lexsim
