#include "lexsim/classic.hpp"

#include <algorithm>

namespace lexsim {

namespace {

void require_document(const HeteroGraph& g, NodeRef n, const char* op) {
    if (n.index >= g.node_count()) throw Error(std::string(op) + ": node index out of range");
    if (g.type_of(n.index) != NodeType::document)
        throw Error(std::string(op) + ": node '" + g.id_of(n.index) + "' is not a document");
}

// Citation neighbors of a document across all target types, already sorted.
std::vector<uint32_t> citation_set(const HeteroGraph& g, uint32_t n, bool outgoing) {
    auto span = outgoing ? g.out_neighbors(n, EdgeKind::citation) : g.in_neighbors(n, EdgeKind::citation);
    std::vector<uint32_t> v(span.begin(), span.end());
    std::sort(v.begin(), v.end());
    return v;
}

double jaccard(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.empty() && b.empty()) return 0.0; // no citation evidence either way
    std::vector<uint32_t> inter;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    size_t uni = a.size() + b.size() - inter.size();
    return static_cast<double>(inter.size()) / static_cast<double>(uni);
}

} // namespace

double bibliographic_coupling(const HeteroGraph& g, NodeRef a, NodeRef b) {
    require_document(g, a, "bibliographic_coupling");
    require_document(g, b, "bibliographic_coupling");
    return jaccard(citation_set(g, a.index, true), citation_set(g, b.index, true));
}

double co_citation(const HeteroGraph& g, NodeRef a, NodeRef b) {
    require_document(g, a, "co_citation");
    require_document(g, b, "co_citation");
    return jaccard(citation_set(g, a.index, false), citation_set(g, b.index, false));
}

double dispersion(const HeteroGraph& g, NodeRef u, NodeRef v) {
    require_document(g, u, "dispersion");
    require_document(g, v, "dispersion");
    std::vector<uint32_t> nu = g.undirected_neighbors(u.index);
    std::vector<uint32_t> nv = g.undirected_neighbors(v.index);
    std::vector<uint32_t> common;
    std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(common));
    common.erase(std::remove_if(common.begin(), common.end(),
                                [&](uint32_t c) { return c == u.index || c == v.index; }),
                 common.end());
    if (common.size() < 2) return 0.0;

    double disp = 0.0;
    for (size_t i = 0; i < common.size(); ++i) {
        std::vector<uint32_t> ns = g.undirected_neighbors(common[i]);
        for (size_t j = i + 1; j < common.size(); ++j) {
            uint32_t s = common[i], t = common[j];
            if (g.has_edge(s, t, EdgeKind::citation) || g.has_edge(t, s, EdgeKind::citation) ||
                g.has_edge(s, t, EdgeKind::hierarchy) || g.has_edge(t, s, EdgeKind::hierarchy))
                continue;
            std::vector<uint32_t> nt = g.undirected_neighbors(t);
            std::vector<uint32_t> shared;
            std::set_intersection(ns.begin(), ns.end(), nt.begin(), nt.end(), std::back_inserter(shared));
            bool linked_indirectly = false;
            for (uint32_t c : shared)
                if (c != u.index && c != v.index) { linked_indirectly = true; break; }
            if (!linked_indirectly) disp += 1.0;
        }
    }
    return disp;
}

std::vector<double> normalize_scores(const std::vector<double>& scores) {
    if (scores.empty()) throw Error("normalize_scores: empty input");
    auto [mn, mx] = std::minmax_element(scores.begin(), scores.end());
    std::vector<double> out(scores.size(), 0.0);
    double range = *mx - *mn;
    if (range <= 0.0) return out;
    for (size_t i = 0; i < scores.size(); ++i) out[i] = (scores[i] - *mn) / range;
    return out;
}

} // namespace lexsim
