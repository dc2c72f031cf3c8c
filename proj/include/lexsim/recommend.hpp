#pragma once

#include "lexsim/fuse.hpp"

namespace lexsim {

struct Recommendation {
    std::string source_id;
    std::vector<std::pair<std::string, double>> ranked; // similarity descending, id ascending on ties
    int k = 0;
};

// Top-k documents by pair similarity among all documents that have no citation
// edge to or from the source. Returns the full candidate pool when k exceeds it.
Recommendation recommend(const HeteroGraph& g, Method method, const SimilarityContext& ctx,
                         const std::string& source, int k);

} // namespace lexsim
