#pragma once

#include "lexsim/graph.hpp"

namespace lexsim {

enum class WalkPolicy { uniform, icf };

const char* to_string(WalkPolicy p);
WalkPolicy walk_policy_from_string(std::string_view s);

// Ordered node-type sequence; document at both ends, traversable link at every step.
struct MetapathSchema {
    std::string name;
    std::vector<NodeType> types;
};

// Parses labels like "doc-sec-topic-sec-doc" ("chap" accepted for chapter).
MetapathSchema parse_metapath(std::string_view label);
void validate_schema(const MetapathSchema& schema);

// The 14 built-in metapath schemas for Hier-SPCNet.
const std::vector<MetapathSchema>& builtin_metapaths();

// Type required at step i. Past the schema end the interior repeats: the
// closing document node doubles as the opening of the next instance.
NodeType schema_type_at(const MetapathSchema& schema, int i);

struct WalkConfig {
    int walks_per_root = 2000;
    int walk_length = 7;
    WalkPolicy policy = WalkPolicy::uniform;
    uint64_t seed = 1;
    bool drop_truncated = false; // strict mode: discard dead-ended prefixes
    int threads = 1;
};

struct WalkProvenance {
    uint32_t schema = 0; // index into schema_names
    uint32_t root = 0;   // node index
    uint32_t walk = 0;
};

struct WalkCorpus {
    std::vector<std::vector<uint32_t>> sequences;
    std::vector<WalkProvenance> provenance;
    std::vector<std::string> schema_names;
    std::vector<std::string> vocab; // node index -> node id

    size_t size() const { return sequences.size(); }
    void save(const std::string& path, const std::string& provenance_path = "") const;
    static WalkCorpus load(const std::string& path, const HeteroGraph* graph = nullptr);
};

struct Transition {
    uint32_t node = 0;
    double probability = 0.0;
};

// Distribution over the undirected neighbors of `current` whose type is
// `next_type`. Uniform policy spreads mass equally; icf policy weights each
// neighbor by its icf value, falling back to uniform when every weight is 0.
// Empty support yields an empty distribution (the walk truncates).
std::vector<Transition> transition_distribution(const HeteroGraph& g, NodeRef current, NodeType next_type,
                                                WalkPolicy policy);

// Inverse-CDF sampling; u in [0,1).
uint32_t sample_transition(const std::vector<Transition>& dist, double u);

// One RNG stream per (seed, schema, root, walk) so results are independent of
// thread scheduling.
WalkCorpus generate_metapath_walks(const HeteroGraph& g, const std::vector<MetapathSchema>& schemas,
                                   const WalkConfig& cfg);

// Type-agnostic uniform walks over undirected edges from every node; the
// homogeneous baseline and the Paper2Vec walk stage.
WalkCorpus generate_uniform_walks(const HeteroGraph& g, const WalkConfig& cfg);

} // namespace lexsim
