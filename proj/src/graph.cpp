#include "lexsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lexsim {

const char* to_string(NodeType t) {
    switch (t) {
        case NodeType::document: return "document";
        case NodeType::act: return "act";
        case NodeType::part: return "part";
        case NodeType::chapter: return "chapter";
        case NodeType::topic: return "topic";
        default: return "section";
    }
}

const char* to_string(EdgeKind k) { return k == EdgeKind::citation ? "citation" : "hierarchy"; }

NodeType node_type_from_string(std::string_view s) {
    if (s == "document" || s == "doc") return NodeType::document;
    if (s == "act") return NodeType::act;
    if (s == "part") return NodeType::part;
    if (s == "chapter" || s == "chap") return NodeType::chapter;
    if (s == "topic") return NodeType::topic;
    if (s == "section" || s == "sec") return NodeType::section;
    throw Error("invalid node type: " + std::string(s));
}

EdgeKind edge_kind_from_string(std::string_view s) {
    if (s == "citation") return EdgeKind::citation;
    if (s == "hierarchy") return EdgeKind::hierarchy;
    throw Error("invalid edge kind: " + std::string(s));
}

NodeType node_type_of(StatuteLevel level) {
    switch (level) {
        case StatuteLevel::act: return NodeType::act;
        case StatuteLevel::part: return NodeType::part;
        case StatuteLevel::chapter: return NodeType::chapter;
        case StatuteLevel::topic: return NodeType::topic;
        default: return NodeType::section;
    }
}

namespace {

bool valid_citation_pair(NodeType src, NodeType dst) {
    if (src == NodeType::document)
        return dst == NodeType::document || dst == NodeType::section || dst == NodeType::act;
    if (src == NodeType::section) return dst == NodeType::section;
    if (src == NodeType::act) return dst == NodeType::act;
    return false;
}

int type_rank(NodeType t) {
    switch (t) {
        case NodeType::act: return 0;
        case NodeType::part: return 1;
        case NodeType::chapter: return 2;
        case NodeType::topic: return 3;
        case NodeType::section: return 4;
        default: return -1;
    }
}

// The ten documented parent->child pairs: any strictly rank-increasing link
// between statute levels.
bool valid_hierarchy_pair(NodeType src, NodeType dst) {
    int rs = type_rank(src), rd = type_rank(dst);
    return rs >= 0 && rd >= 0 && rs < rd;
}

} // namespace

std::string BuildReport::summary() const {
    std::ostringstream out;
    out << "nodes:";
    for (int t = 0; t < kNodeTypeCount; ++t)
        out << ' ' << to_string(static_cast<NodeType>(t)) << '=' << nodes_per_type[t];
    out << "\nedges: citation=" << citation_edges << " hierarchy=" << hierarchy_edges
        << " duplicates_collapsed=" << duplicate_citations << "\nunresolved_citations=" << unresolved.size();
    for (const auto& u : unresolved) out << "\n  " << u.source_id << " -> " << u.target << " (" << u.note << ")";
    return out.str();
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

uint32_t HeteroGraph::Builder::add_node(std::string id, NodeType type) {
    if (id.empty()) throw Error("node id must be nonempty");
    auto [it, fresh] = index_.emplace(id, static_cast<uint32_t>(ids_.size()));
    if (!fresh) throw Error("duplicate node id: " + id);
    ids_.push_back(std::move(id));
    types_.push_back(type);
    return it->second;
}

std::optional<uint32_t> HeteroGraph::Builder::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? std::nullopt : std::optional<uint32_t>(it->second);
}

void HeteroGraph::Builder::add_edge(uint32_t src, uint32_t dst, EdgeKind kind) {
    if (src >= ids_.size() || dst >= ids_.size()) throw Error("edge endpoint out of range");
    if (src == dst) throw Error("self-loop edge on node " + ids_[src]);
    bool ok = kind == EdgeKind::citation ? valid_citation_pair(types_[src], types_[dst])
                                         : valid_hierarchy_pair(types_[src], types_[dst]);
    if (!ok)
        throw Error(std::string("type-invalid ") + to_string(kind) + " edge " + to_string(types_[src]) + " -> " +
                    to_string(types_[dst]) + " (" + ids_[src] + " -> " + ids_[dst] + ")");
    edges_.push_back({src, dst, static_cast<uint32_t>(kind)});
}

HeteroGraph HeteroGraph::Builder::finish(BuildReport* report) {
    std::sort(edges_.begin(), edges_.end());
    size_t before = edges_.size();
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    HeteroGraph g;
    g.ids_ = std::move(ids_);
    g.types_ = std::move(types_);
    g.index_ = std::move(index_);
    g.edge_count_ = edges_.size();

    const size_t n = g.ids_.size();
    auto fill = [&](bool outgoing, std::vector<uint32_t>& targets, std::vector<uint32_t>& offsets) {
        std::vector<uint32_t> counts(n * kBuckets, 0);
        for (const auto& e : edges_) {
            uint32_t node = outgoing ? e[0] : e[1];
            uint32_t other = outgoing ? e[1] : e[0];
            ++counts[node * kBuckets + bucket(static_cast<EdgeKind>(e[2]), g.types_[other])];
        }
        offsets.assign(n * kBuckets + 1, 0);
        for (size_t i = 0; i < counts.size(); ++i) offsets[i + 1] = offsets[i] + counts[i];
        targets.resize(edges_.size());
        std::vector<uint32_t> cursor(offsets.begin(), offsets.end() - 1);
        for (const auto& e : edges_) {
            uint32_t node = outgoing ? e[0] : e[1];
            uint32_t other = outgoing ? e[1] : e[0];
            targets[cursor[node * kBuckets + bucket(static_cast<EdgeKind>(e[2]), g.types_[other])]++] = other;
        }
        // Sorted buckets make membership tests and set operations cheap.
        for (size_t i = 0; i < counts.size(); ++i)
            std::sort(targets.begin() + offsets[i], targets.begin() + offsets[i + 1]);
    };
    fill(true, g.out_targets_, g.out_offsets_);
    fill(false, g.in_targets_, g.in_offsets_);

    if (report) {
        for (NodeType t : g.types_) ++report->nodes_per_type[static_cast<int>(t)];
        for (const auto& e : edges_)
            (static_cast<EdgeKind>(e[2]) == EdgeKind::citation ? report->citation_edges : report->hierarchy_edges)++;
        report->duplicate_citations += before - edges_.size();
    }
    return g;
}

// ---------------------------------------------------------------------------
// Build from a corpus
// ---------------------------------------------------------------------------

HeteroGraph HeteroGraph::build(const std::vector<CaseDocument>& cases, const std::vector<StatuteNode>& statutes,
                               BuildReport* report) {
    Builder b;
    for (const auto& c : cases) b.add_node(c.id, NodeType::document);
    std::unordered_map<std::string, const StatuteNode*> statute_by_id;
    for (const auto& s : statutes) {
        b.add_node(s.id, node_type_of(s.node_type));
        statute_by_id.emplace(s.id, &s);
    }

    // Parent chains must terminate; a walk longer than the statute count names a cycle.
    for (const auto& s : statutes) {
        size_t steps = 0;
        const StatuteNode* cur = &s;
        while (!cur->parent_id.empty()) {
            auto it = statute_by_id.find(cur->parent_id);
            if (it == statute_by_id.end())
                throw Error("statute '" + cur->id + "' has missing parent '" + cur->parent_id + "'");
            cur = it->second;
            if (++steps > statutes.size()) throw Error("hierarchy cycle involving '" + s.id + "'");
        }
    }

    BuildReport local;
    BuildReport& rep = report ? *report : local;

    auto resolve = [&](const std::string& id) { return b.index_of(id); };
    for (const auto& c : cases) {
        uint32_t src = *resolve(c.id);
        for (const auto& t : c.cited_cases) {
            auto dst = resolve(t);
            if (!dst || b.types_[*dst] != NodeType::document) {
                rep.unresolved.push_back({c.id, t, "case", "cited case not in corpus"});
                continue;
            }
            b.add_edge(src, *dst, EdgeKind::citation);
        }
        for (const auto& t : c.cited_statutes) {
            auto dst = resolve(t);
            if (!dst || b.types_[*dst] == NodeType::document) {
                rep.unresolved.push_back({c.id, t, "statute", "cited statute not in corpus"});
                continue;
            }
            b.add_edge(src, *dst, EdgeKind::citation);
        }
    }
    for (const auto& s : statutes) {
        uint32_t src = *resolve(s.id);
        for (const auto& t : s.cited_statutes) {
            auto dst = resolve(t);
            if (!dst || b.types_[*dst] == NodeType::document) {
                rep.unresolved.push_back({s.id, t, "statute", "cited statute not in corpus"});
                continue;
            }
            b.add_edge(src, *dst, EdgeKind::citation);
        }
        if (!s.parent_id.empty()) b.add_edge(*resolve(s.parent_id), src, EdgeKind::hierarchy);
    }
    return b.finish(&rep);
}

HeteroGraph HeteroGraph::build(const Corpus& corpus, BuildReport* report) {
    return build(corpus.cases, corpus.statutes, report);
}

// ---------------------------------------------------------------------------
// Accessors
// ---------------------------------------------------------------------------

std::optional<uint32_t> HeteroGraph::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? std::nullopt : std::optional<uint32_t>(it->second);
}

uint32_t HeteroGraph::require_node(std::string_view id) const {
    auto idx = index_of(id);
    if (!idx) throw Error("unknown node id: " + std::string(id));
    return *idx;
}

std::vector<uint32_t> HeteroGraph::documents() const {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < ids_.size(); ++i)
        if (types_[i] == NodeType::document) out.push_back(i);
    return out;
}

std::span<const uint32_t> HeteroGraph::slice(const std::vector<uint32_t>& targets,
                                             const std::vector<uint32_t>& offsets, uint32_t n, int first_bucket,
                                             int last_bucket) const {
    if (n >= ids_.size()) throw Error("node index out of range: " + std::to_string(n));
    uint32_t b = offsets[n * kBuckets + first_bucket];
    uint32_t e = offsets[n * kBuckets + last_bucket + 1];
    return {targets.data() + b, targets.data() + e};
}

std::span<const uint32_t> HeteroGraph::out_neighbors(uint32_t n, EdgeKind k, NodeType t) const {
    return slice(out_targets_, out_offsets_, n, bucket(k, t), bucket(k, t));
}

std::span<const uint32_t> HeteroGraph::in_neighbors(uint32_t n, EdgeKind k, NodeType t) const {
    return slice(in_targets_, in_offsets_, n, bucket(k, t), bucket(k, t));
}

std::span<const uint32_t> HeteroGraph::out_neighbors(uint32_t n, EdgeKind k) const {
    return slice(out_targets_, out_offsets_, n, bucket(k, static_cast<NodeType>(0)),
                 bucket(k, static_cast<NodeType>(kNodeTypeCount - 1)));
}

std::span<const uint32_t> HeteroGraph::in_neighbors(uint32_t n, EdgeKind k) const {
    return slice(in_targets_, in_offsets_, n, bucket(k, static_cast<NodeType>(0)),
                 bucket(k, static_cast<NodeType>(kNodeTypeCount - 1)));
}

size_t HeteroGraph::out_degree(uint32_t n) const {
    if (n >= ids_.size()) throw Error("node index out of range: " + std::to_string(n));
    return out_offsets_[(n + 1) * kBuckets] - out_offsets_[n * kBuckets];
}

size_t HeteroGraph::in_degree(uint32_t n) const {
    if (n >= ids_.size()) throw Error("node index out of range: " + std::to_string(n));
    return in_offsets_[(n + 1) * kBuckets] - in_offsets_[n * kBuckets];
}

bool HeteroGraph::has_edge(uint32_t src, uint32_t dst, EdgeKind k) const {
    auto span = out_neighbors(src, k, types_[dst]);
    return std::binary_search(span.begin(), span.end(), dst);
}

std::vector<uint32_t> HeteroGraph::undirected_neighbors(uint32_t n) const {
    std::vector<uint32_t> out;
    for (int k = 0; k < kEdgeKindCount; ++k) {
        auto kind = static_cast<EdgeKind>(k);
        auto o = out_neighbors(n, kind);
        auto i = in_neighbors(n, kind);
        out.insert(out.end(), o.begin(), o.end());
        out.insert(out.end(), i.begin(), i.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<uint32_t> HeteroGraph::undirected_neighbors_of_type(uint32_t n, NodeType t) const {
    std::vector<uint32_t> out;
    for (int k = 0; k < kEdgeKindCount; ++k) {
        auto kind = static_cast<EdgeKind>(k);
        auto o = out_neighbors(n, kind, t);
        auto i = in_neighbors(n, kind, t);
        out.insert(out.end(), o.begin(), o.end());
        out.insert(out.end(), i.begin(), i.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int64_t HeteroGraph::citation_frequency(uint32_t n) const {
    return static_cast<int64_t>(in_neighbors(n, EdgeKind::citation).size());
}

int64_t citation_frequency(const HeteroGraph& g, NodeRef s) { return g.citation_frequency(s.index); }

void HeteroGraph::compute_icf() {
    size_t citing = 0;
    for (uint32_t n = 0; n < ids_.size(); ++n)
        if (!out_neighbors(n, EdgeKind::citation).empty()) ++citing;
    if (citing == 0) throw Error("compute_icf: graph has no nodes with outgoing citation links");
    icf_.resize(ids_.size());
    for (uint32_t n = 0; n < ids_.size(); ++n) {
        double raw = std::log10(static_cast<double>(citing) / (1.0 + static_cast<double>(citation_frequency(n))));
        icf_[n] = raw < 0.0 ? 0.0 : raw;
    }
}

double HeteroGraph::icf(uint32_t n) const {
    if (icf_.empty()) throw Error("icf not computed; call compute_icf() first");
    if (n >= icf_.size()) throw Error("node index out of range: " + std::to_string(n));
    return icf_[n];
}

// ---------------------------------------------------------------------------
// Views and IO
// ---------------------------------------------------------------------------

HeteroGraph pcnet_view(const HeteroGraph& g) {
    HeteroGraph::Builder b;
    std::vector<uint32_t> remap(g.node_count(), UINT32_MAX);
    for (uint32_t n = 0; n < g.node_count(); ++n)
        if (g.type_of(n) == NodeType::document) remap[n] = b.add_node(g.id_of(n), NodeType::document);
    for (uint32_t n = 0; n < g.node_count(); ++n) {
        if (g.type_of(n) != NodeType::document) continue;
        for (uint32_t dst : g.out_neighbors(n, EdgeKind::citation, NodeType::document))
            b.add_edge(remap[n], remap[dst], EdgeKind::citation);
    }
    return b.finish();
}

void HeteroGraph::save(const std::string& path) const {
    std::ostringstream out;
    out << "#nodes " << node_count() << " #edges " << edge_count() << '\n';
    for (uint32_t n = 0; n < node_count(); ++n)
        out << "N " << n << ' ' << to_string(types_[n]) << ' ' << ids_[n] << '\n';
    for (uint32_t n = 0; n < node_count(); ++n)
        for (int k = 0; k < kEdgeKindCount; ++k) {
            auto kind = static_cast<EdgeKind>(k);
            for (uint32_t dst : out_neighbors(n, kind)) out << "E " << n << ' ' << dst << ' ' << to_string(kind) << '\n';
        }
    io::write_file(path, out.str());
}

HeteroGraph HeteroGraph::load(const std::string& path) {
    std::istringstream in(io::read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw Error(path + ": empty graph file");
    size_t n_nodes = 0, n_edges = 0;
    {
        std::istringstream hs(line);
        std::string tag1, tag2;
        if (!(hs >> tag1 >> n_nodes >> tag2 >> n_edges) || tag1 != "#nodes" || tag2 != "#edges")
            throw Error(path + ": bad header: " + line);
    }
    Builder b;
    size_t edges_seen = 0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (str::trim(line).empty()) continue;
        std::istringstream ls(line);
        char tag;
        ls >> tag;
        if (tag == 'N') {
            uint32_t idx;
            std::string type_word, id;
            if (!(ls >> idx >> type_word >> id)) throw Error(path + ":" + std::to_string(lineno) + ": bad node line");
            if (idx != b.node_count())
                throw Error(path + ":" + std::to_string(lineno) + ": node index " + std::to_string(idx) +
                            " out of order");
            b.add_node(id, node_type_from_string(type_word));
        } else if (tag == 'E') {
            uint32_t src, dst;
            std::string kind_word;
            if (!(ls >> src >> dst >> kind_word)) throw Error(path + ":" + std::to_string(lineno) + ": bad edge line");
            b.add_edge(src, dst, edge_kind_from_string(kind_word));
            ++edges_seen;
        } else {
            throw Error(path + ":" + std::to_string(lineno) + ": unknown line tag");
        }
    }
    if (b.node_count() != n_nodes || edges_seen != n_edges)
        throw Error(path + ": header count mismatch (declared " + std::to_string(n_nodes) + " nodes / " +
                    std::to_string(n_edges) + " edges, found " + std::to_string(b.node_count()) + " / " +
                    std::to_string(edges_seen) + ")");
    return b.finish();
}

} // namespace lexsim
