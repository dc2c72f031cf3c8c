#include "lexsim/walker.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace lexsim {

const char* to_string(WalkPolicy p) { return p == WalkPolicy::uniform ? "uniform" : "icf"; }

WalkPolicy walk_policy_from_string(std::string_view s) {
    if (s == "uniform") return WalkPolicy::uniform;
    if (s == "icf") return WalkPolicy::icf;
    throw Error("invalid walk policy: " + std::string(s));
}

namespace {

bool traversable(NodeType a, NodeType b) {
    auto cite = [](NodeType s, NodeType d) {
        if (s == NodeType::document)
            return d == NodeType::document || d == NodeType::section || d == NodeType::act;
        if (s == NodeType::section) return d == NodeType::section;
        if (s == NodeType::act) return d == NodeType::act;
        return false;
    };
    auto rank = [](NodeType t) {
        switch (t) {
            case NodeType::act: return 0;
            case NodeType::part: return 1;
            case NodeType::chapter: return 2;
            case NodeType::topic: return 3;
            case NodeType::section: return 4;
            default: return -1;
        }
    };
    if (cite(a, b) || cite(b, a)) return true;
    int ra = rank(a), rb = rank(b);
    return ra >= 0 && rb >= 0 && ra != rb;
}

} // namespace

MetapathSchema parse_metapath(std::string_view label) {
    MetapathSchema schema;
    schema.name = std::string(label);
    for (const auto& token : str::split(label, '-')) schema.types.push_back(node_type_from_string(token));
    validate_schema(schema);
    return schema;
}

void validate_schema(const MetapathSchema& schema) {
    if (schema.types.size() < 3)
        throw Error("metapath '" + schema.name + "' must have at least 3 node types");
    if (schema.types.front() != NodeType::document || schema.types.back() != NodeType::document)
        throw Error("metapath '" + schema.name + "' must start and end with document");
    for (size_t i = 0; i + 1 < schema.types.size(); ++i)
        if (!traversable(schema.types[i], schema.types[i + 1]))
            throw Error("metapath '" + schema.name + "' has untraversable step " +
                        std::string(to_string(schema.types[i])) + " -> " + to_string(schema.types[i + 1]));
}

const std::vector<MetapathSchema>& builtin_metapaths() {
    static const std::vector<MetapathSchema> schemas = [] {
        const char* labels[] = {
            "doc-sec-doc",
            "doc-sec-topic-sec-doc",
            "doc-sec-part-sec-doc",
            "doc-sec-chapter-sec-doc",
            "doc-sec-act-sec-doc",
            "doc-sec-topic-act-topic-sec-doc",
            "doc-sec-chapter-act-chapter-sec-doc",
            "doc-sec-part-act-part-sec-doc",
            "doc-sec-topic-chap-topic-sec-doc",
            "doc-sec-chapter-part-chapter-sec-doc",
            "doc-sec-topic-part-topic-sec-doc",
            "doc-sec-sec-doc",
            "doc-act-act-doc",
            "doc-doc-doc",
        };
        std::vector<MetapathSchema> out;
        for (const char* l : labels) out.push_back(parse_metapath(l));
        return out;
    }();
    return schemas;
}

NodeType schema_type_at(const MetapathSchema& schema, int i) {
    const int len = static_cast<int>(schema.types.size());
    if (i < len) return schema.types[i];
    return schema.types[1 + (i - 1) % (len - 1)];
}

std::vector<Transition> transition_distribution(const HeteroGraph& g, NodeRef current, NodeType next_type,
                                                WalkPolicy policy) {
    if (current.index >= g.node_count()) throw Error("transition_distribution: node index out of range");
    std::vector<uint32_t> support = g.undirected_neighbors_of_type(current.index, next_type);
    std::vector<Transition> dist;
    if (support.empty()) return dist;
    dist.reserve(support.size());
    if (policy == WalkPolicy::icf) {
        if (!g.has_icf()) throw Error("transition_distribution: icf policy requires compute_icf()");
        double total = 0.0;
        for (uint32_t v : support) total += g.icf(v);
        if (total > 0.0) {
            for (uint32_t v : support) dist.push_back({v, g.icf(v) / total});
            return dist;
        }
        // All weights clamped to zero leaves nothing to normalize by;
        // fall back to uniform over the support.
    }
    const double p = 1.0 / static_cast<double>(support.size());
    for (uint32_t v : support) dist.push_back({v, p});
    return dist;
}

uint32_t sample_transition(const std::vector<Transition>& dist, double u) {
    if (dist.empty()) throw Error("sample_transition: empty distribution");
    double acc = 0.0;
    for (const auto& t : dist) {
        acc += t.probability;
        if (u < acc) return t.node;
    }
    return dist.back().node;
}

namespace {

// Per-(node, type) undirected neighbor lists with aligned icf weights; the walk hot path.
class TypedIndex {
public:
    TypedIndex(const HeteroGraph& g, bool with_icf) {
        const size_t n = g.node_count();
        std::vector<std::vector<uint32_t>> per_node(n);
        for (uint32_t v = 0; v < n; ++v) per_node[v] = g.undirected_neighbors(v);
        offsets_.assign(n * kNodeTypeCount + 1, 0);
        for (uint32_t v = 0; v < n; ++v)
            for (uint32_t nb : per_node[v]) ++offsets_[v * kNodeTypeCount + static_cast<int>(g.type_of(nb)) + 1];
        for (size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
        neighbors_.resize(offsets_.back());
        std::vector<uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (uint32_t v = 0; v < n; ++v)
            for (uint32_t nb : per_node[v])
                neighbors_[cursor[v * kNodeTypeCount + static_cast<int>(g.type_of(nb))]++] = nb;
        if (with_icf) {
            weights_.resize(neighbors_.size());
            for (size_t i = 0; i < neighbors_.size(); ++i) weights_[i] = g.icf(neighbors_[i]);
        }
    }

    std::span<const uint32_t> neighbors(uint32_t v, NodeType t) const {
        size_t b = offsets_[v * kNodeTypeCount + static_cast<int>(t)];
        size_t e = offsets_[v * kNodeTypeCount + static_cast<int>(t) + 1];
        return {neighbors_.data() + b, neighbors_.data() + e};
    }

    std::span<const uint32_t> all_neighbors(uint32_t v) const {
        size_t b = offsets_[v * kNodeTypeCount];
        size_t e = offsets_[(v + 1) * kNodeTypeCount];
        return {neighbors_.data() + b, neighbors_.data() + e};
    }

    std::span<const double> weights(uint32_t v, NodeType t) const {
        size_t b = offsets_[v * kNodeTypeCount + static_cast<int>(t)];
        size_t e = offsets_[v * kNodeTypeCount + static_cast<int>(t) + 1];
        return {weights_.data() + b, weights_.data() + e};
    }

    bool has_weights() const { return !weights_.empty(); }

private:
    std::vector<uint32_t> neighbors_;
    std::vector<double> weights_;
    std::vector<uint32_t> offsets_;
};

uint32_t pick_neighbor(std::span<const uint32_t> support, std::span<const double> weights, WalkPolicy policy,
                       Rng& rng) {
    if (policy == WalkPolicy::icf) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total > 0.0) {
            double r = rng.next_double() * total;
            double acc = 0.0;
            for (size_t i = 0; i < support.size(); ++i) {
                acc += weights[i];
                if (r < acc) return support[i];
            }
            return support.back();
        }
    }
    return support[rng.next_below(support.size())];
}

template <typename WalkFn>
void parallel_over_roots(size_t root_count, int threads, WalkFn&& fn) {
    if (threads <= 1 || root_count < 2) {
        for (size_t r = 0; r < root_count; ++r) fn(r);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t r = next.fetch_add(1);
            if (r >= root_count) return;
            fn(r);
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(threads, static_cast<int>(root_count));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

} // namespace

WalkCorpus generate_metapath_walks(const HeteroGraph& g, const std::vector<MetapathSchema>& schemas,
                                   const WalkConfig& cfg) {
    if (cfg.walks_per_root <= 0 || cfg.walk_length <= 0) throw Error("walk config values must be positive");
    for (const auto& s : schemas) {
        validate_schema(s);
        if (static_cast<int>(s.types.size()) > cfg.walk_length)
            throw Error("walk_length " + std::to_string(cfg.walk_length) + " shorter than metapath '" + s.name +
                        "'");
    }
    if (cfg.policy == WalkPolicy::icf && !g.has_icf())
        throw Error("icf walk policy requires compute_icf() on the graph");

    TypedIndex index(g, cfg.policy == WalkPolicy::icf);
    std::vector<uint32_t> roots = g.documents();

    WalkCorpus corpus;
    corpus.vocab.reserve(g.node_count());
    for (uint32_t n = 0; n < g.node_count(); ++n) corpus.vocab.push_back(g.id_of(n));
    for (const auto& s : schemas) corpus.schema_names.push_back(s.name);

    struct Slot {
        std::vector<std::vector<uint32_t>> walks;
        std::vector<uint32_t> walk_indices;
    };

    for (uint32_t si = 0; si < schemas.size(); ++si) {
        const MetapathSchema& schema = schemas[si];
        const uint64_t schema_seed = hash_combine(cfg.seed, fnv1a64(schema.name));
        std::vector<Slot> slots(roots.size());

        parallel_over_roots(roots.size(), cfg.threads, [&](size_t ri) {
            uint32_t root = roots[ri];
            Slot& slot = slots[ri];
            const uint64_t root_seed = hash_combine(schema_seed, root);
            for (int w = 0; w < cfg.walks_per_root; ++w) {
                Rng rng(hash_combine(root_seed, static_cast<uint64_t>(w)));
                std::vector<uint32_t> walk{root};
                for (int i = 1; i < cfg.walk_length; ++i) {
                    NodeType want = schema_type_at(schema, i);
                    auto support = index.neighbors(walk.back(), want);
                    if (support.empty()) break;
                    auto weights = index.has_weights() ? index.weights(walk.back(), want) : std::span<const double>{};
                    walk.push_back(pick_neighbor(support, weights, cfg.policy, rng));
                }
                if (walk.size() < 2) continue;
                if (cfg.drop_truncated && static_cast<int>(walk.size()) < cfg.walk_length) continue;
                slot.walks.push_back(std::move(walk));
                slot.walk_indices.push_back(static_cast<uint32_t>(w));
            }
        });

        for (size_t ri = 0; ri < roots.size(); ++ri) {
            Slot& slot = slots[ri];
            for (size_t k = 0; k < slot.walks.size(); ++k) {
                corpus.sequences.push_back(std::move(slot.walks[k]));
                corpus.provenance.push_back({si, roots[ri], slot.walk_indices[k]});
            }
        }
    }
    return corpus;
}

WalkCorpus generate_uniform_walks(const HeteroGraph& g, const WalkConfig& cfg) {
    if (cfg.walks_per_root <= 0 || cfg.walk_length <= 0) throw Error("walk config values must be positive");

    TypedIndex index(g, false);
    WalkCorpus corpus;
    corpus.vocab.reserve(g.node_count());
    for (uint32_t n = 0; n < g.node_count(); ++n) corpus.vocab.push_back(g.id_of(n));
    corpus.schema_names.push_back("uniform");

    const uint64_t base_seed = hash_combine(cfg.seed, fnv1a64("uniform-walk"));
    struct Slot {
        std::vector<std::vector<uint32_t>> walks;
        std::vector<uint32_t> walk_indices;
    };
    std::vector<Slot> slots(g.node_count());

    parallel_over_roots(g.node_count(), cfg.threads, [&](size_t root) {
        Slot& slot = slots[root];
        const uint64_t root_seed = hash_combine(base_seed, static_cast<uint64_t>(root));
        for (int w = 0; w < cfg.walks_per_root; ++w) {
            Rng rng(hash_combine(root_seed, static_cast<uint64_t>(w)));
            std::vector<uint32_t> walk{static_cast<uint32_t>(root)};
            for (int i = 1; i < cfg.walk_length; ++i) {
                auto support = index.all_neighbors(walk.back());
                if (support.empty()) break;
                walk.push_back(support[rng.next_below(support.size())]);
            }
            if (walk.size() < 2) continue;
            if (cfg.drop_truncated && static_cast<int>(walk.size()) < cfg.walk_length) continue;
            slot.walks.push_back(std::move(walk));
            slot.walk_indices.push_back(static_cast<uint32_t>(w));
        }
    });

    for (size_t root = 0; root < slots.size(); ++root) {
        Slot& slot = slots[root];
        for (size_t k = 0; k < slot.walks.size(); ++k) {
            corpus.sequences.push_back(std::move(slot.walks[k]));
            corpus.provenance.push_back({0, static_cast<uint32_t>(root), slot.walk_indices[k]});
        }
    }
    return corpus;
}

void WalkCorpus::save(const std::string& path, const std::string& provenance_path) const {
    std::ostringstream out;
    for (const auto& seq : sequences) {
        for (size_t i = 0; i < seq.size(); ++i) {
            if (i) out << ' ';
            out << seq[i];
        }
        out << '\n';
    }
    io::write_file(path, out.str());
    if (!provenance_path.empty()) {
        std::ostringstream prov;
        for (const auto& p : provenance)
            prov << schema_names[p.schema] << '\t' << (p.root < vocab.size() ? vocab[p.root] : std::to_string(p.root))
                 << '\t' << p.walk << '\n';
        io::write_file(provenance_path, prov.str());
    }
}

WalkCorpus WalkCorpus::load(const std::string& path, const HeteroGraph* graph) {
    WalkCorpus corpus;
    std::istringstream in(io::read_file(path));
    std::string line;
    int lineno = 0;
    uint32_t max_index = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (str::trim(line).empty()) continue;
        std::vector<uint32_t> seq;
        std::istringstream ls(line);
        uint64_t v;
        while (ls >> v) {
            seq.push_back(static_cast<uint32_t>(v));
            max_index = std::max(max_index, seq.back());
        }
        if (!ls.eof()) throw Error(path + ":" + std::to_string(lineno) + ": invalid walk line");
        if (seq.size() >= 2) corpus.sequences.push_back(std::move(seq));
    }
    if (graph) {
        if (max_index >= graph->node_count())
            throw Error(path + ": walk references node index " + std::to_string(max_index) +
                        " beyond graph size " + std::to_string(graph->node_count()));
        for (uint32_t n = 0; n < graph->node_count(); ++n) corpus.vocab.push_back(graph->id_of(n));
    } else {
        for (uint32_t n = 0; n <= max_index; ++n) corpus.vocab.push_back(std::to_string(n));
    }
    return corpus;
}

} // namespace lexsim
