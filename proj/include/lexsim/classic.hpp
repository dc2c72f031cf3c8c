#pragma once

#include "lexsim/graph.hpp"

namespace lexsim {

// Prior-work similarity measures over PCNet or Hier-SPCNet. All three require
// document endpoints and are symmetric in (a, b).

// Jaccard overlap of outgoing citation targets; 0 when both sets are empty.
double bibliographic_coupling(const HeteroGraph& g, NodeRef a, NodeRef b);

// Jaccard overlap of incoming citation sources; 0 when both sets are empty.
double co_citation(const HeteroGraph& g, NodeRef a, NodeRef b);

// disp(u,v) = sum over unordered pairs {s,t} of common (undirected) neighbors
// of an indicator that s,t are not directly linked and share no common
// neighbor outside {u,v}.
double dispersion(const HeteroGraph& g, NodeRef u, NodeRef v);

// Min-max normalization over an evaluated pair set; a constant list maps to zeros.
std::vector<double> normalize_scores(const std::vector<double>& scores);

} // namespace lexsim
