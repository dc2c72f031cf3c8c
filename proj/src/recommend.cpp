#include "lexsim/recommend.hpp"

#include <algorithm>

namespace lexsim {

Recommendation recommend(const HeteroGraph& g, Method method, const SimilarityContext& ctx,
                         const std::string& source, int k) {
    if (k <= 0) throw Error("recommend: k must be positive");
    uint32_t src = g.require_node(source);
    if (g.type_of(src) != NodeType::document) throw Error("recommend: source '" + source + "' is not a document");

    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::string> candidates;
    for (uint32_t n : g.documents()) {
        if (n == src) continue;
        // Both citation directions count as "already cited".
        if (g.has_edge(src, n, EdgeKind::citation) || g.has_edge(n, src, EdgeKind::citation)) continue;
        candidates.push_back(g.id_of(n));
        pairs.emplace_back(source, g.id_of(n));
    }

    Recommendation rec;
    rec.source_id = source;
    rec.k = k;
    if (candidates.empty()) return rec;

    std::vector<double> scores = score_pairs(method, ctx, pairs);
    std::vector<size_t> order(candidates.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return candidates[a] < candidates[b];
    });
    size_t take = std::min<size_t>(static_cast<size_t>(k), order.size());
    for (size_t i = 0; i < take; ++i) rec.ranked.emplace_back(candidates[order[i]], scores[order[i]]);
    return rec;
}

} // namespace lexsim
