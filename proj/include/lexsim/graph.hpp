#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexsim/corpus.hpp"

namespace lexsim {

enum class NodeType : uint8_t { document = 0, act, part, chapter, topic, section };
constexpr int kNodeTypeCount = 6;

enum class EdgeKind : uint8_t { citation = 0, hierarchy };
constexpr int kEdgeKindCount = 2;

const char* to_string(NodeType t);
const char* to_string(EdgeKind k);
NodeType node_type_from_string(std::string_view s);
EdgeKind edge_kind_from_string(std::string_view s);
NodeType node_type_of(StatuteLevel level);

struct NodeRef {
    uint32_t index = 0;
    NodeType type = NodeType::document;
};

struct BuildReport {
    std::array<size_t, kNodeTypeCount> nodes_per_type{};
    size_t citation_edges = 0;
    size_t hierarchy_edges = 0;
    size_t duplicate_citations = 0; // collapsed to one edge each
    std::vector<UnresolvedRef> unresolved;
    std::string summary() const;
};

// Typed-node, typed-edge citation + hierarchy graph. Immutable after build;
// adjacency is partitioned per node by (edge kind, neighbor type).
class HeteroGraph {
public:
    class Builder {
    public:
        uint32_t add_node(std::string id, NodeType type);
        void add_edge(uint32_t src, uint32_t dst, EdgeKind kind);
        size_t node_count() const { return ids_.size(); }
        std::optional<uint32_t> index_of(std::string_view id) const;
        HeteroGraph finish(BuildReport* report = nullptr);

    private:
        std::vector<std::string> ids_;
        std::vector<NodeType> types_;
        std::unordered_map<std::string, uint32_t> index_;
        std::vector<std::array<uint32_t, 3>> edges_; // src, dst, kind
        friend class HeteroGraph;
    };

    HeteroGraph() = default;

    static HeteroGraph build(const std::vector<CaseDocument>& cases, const std::vector<StatuteNode>& statutes,
                             BuildReport* report = nullptr);
    static HeteroGraph build(const Corpus& corpus, BuildReport* report = nullptr);

    size_t node_count() const { return ids_.size(); }
    size_t edge_count() const { return edge_count_; }
    NodeType type_of(uint32_t n) const { return types_[n]; }
    const std::string& id_of(uint32_t n) const { return ids_[n]; }
    std::optional<uint32_t> index_of(std::string_view id) const;
    uint32_t require_node(std::string_view id) const; // throws on unknown id
    NodeRef node(uint32_t n) const { return {n, types_[n]}; }
    std::vector<uint32_t> documents() const;

    std::span<const uint32_t> out_neighbors(uint32_t n, EdgeKind k, NodeType t) const;
    std::span<const uint32_t> in_neighbors(uint32_t n, EdgeKind k, NodeType t) const;
    std::span<const uint32_t> out_neighbors(uint32_t n, EdgeKind k) const;
    std::span<const uint32_t> in_neighbors(uint32_t n, EdgeKind k) const;
    size_t out_degree(uint32_t n) const;
    size_t in_degree(uint32_t n) const;
    bool has_edge(uint32_t src, uint32_t dst, EdgeKind k) const;

    // Union over both directions and both edge kinds, sorted and deduplicated.
    std::vector<uint32_t> undirected_neighbors(uint32_t n) const;
    std::vector<uint32_t> undirected_neighbors_of_type(uint32_t n, NodeType t) const;

    // cf(s): number of times s is cited, i.e. citation in-degree.
    int64_t citation_frequency(uint32_t n) const;

    // icf(s) = log10(N / (1 + cf(s))) clamped below at 0, with N the number of
    // nodes that have at least one outgoing citation edge.
    void compute_icf();
    bool has_icf() const { return !icf_.empty(); }
    double icf(uint32_t n) const;
    const std::vector<double>& icf_values() const { return icf_; }

    void save(const std::string& path) const;
    static HeteroGraph load(const std::string& path);

private:
    static constexpr int kBuckets = kEdgeKindCount * kNodeTypeCount;
    static int bucket(EdgeKind k, NodeType t) { return static_cast<int>(k) * kNodeTypeCount + static_cast<int>(t); }

    std::span<const uint32_t> slice(const std::vector<uint32_t>& targets, const std::vector<uint32_t>& offsets,
                                    uint32_t n, int first_bucket, int last_bucket) const;

    std::vector<std::string> ids_;
    std::vector<NodeType> types_;
    std::unordered_map<std::string, uint32_t> index_;
    std::vector<uint32_t> out_targets_, in_targets_;
    std::vector<uint32_t> out_offsets_, in_offsets_; // node_count*kBuckets + 1 entries
    std::vector<double> icf_;
    size_t edge_count_ = 0;
};

// Subgraph with only document nodes and doc->doc citation edges, densely reindexed.
HeteroGraph pcnet_view(const HeteroGraph& g);

int64_t citation_frequency(const HeteroGraph& g, NodeRef s);

} // namespace lexsim
