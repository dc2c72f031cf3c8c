#pragma once

// Brute-force reference implementations used to verify the library. These
// deliberately take independent routes (std::set arithmetic, direct textbook
// formulas, long-double accumulation) from the code under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "lexsim/graph.hpp"

namespace oracle {

using lexsim::EdgeKind;
using lexsim::HeteroGraph;
using lexsim::NodeType;

inline std::set<uint32_t> out_citations(const HeteroGraph& g, uint32_t n) {
    std::set<uint32_t> s;
    for (int t = 0; t < lexsim::kNodeTypeCount; ++t)
        for (uint32_t v : g.out_neighbors(n, EdgeKind::citation, static_cast<NodeType>(t))) s.insert(v);
    return s;
}

inline std::set<uint32_t> in_citations(const HeteroGraph& g, uint32_t n) {
    std::set<uint32_t> s;
    for (int t = 0; t < lexsim::kNodeTypeCount; ++t)
        for (uint32_t v : g.in_neighbors(n, EdgeKind::citation, static_cast<NodeType>(t))) s.insert(v);
    return s;
}

inline std::set<uint32_t> undirected_nbrs(const HeteroGraph& g, uint32_t n) {
    std::set<uint32_t> s;
    for (int k = 0; k < lexsim::kEdgeKindCount; ++k) {
        auto kind = static_cast<EdgeKind>(k);
        for (uint32_t v : g.out_neighbors(n, kind)) s.insert(v);
        for (uint32_t v : g.in_neighbors(n, kind)) s.insert(v);
    }
    return s;
}

inline double set_jaccard(const std::set<uint32_t>& a, const std::set<uint32_t>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::vector<uint32_t> inter, uni;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
    return static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

inline double bibcoupling(const HeteroGraph& g, uint32_t a, uint32_t b) {
    return set_jaccard(out_citations(g, a), out_citations(g, b));
}

inline double cocitation(const HeteroGraph& g, uint32_t a, uint32_t b) {
    return set_jaccard(in_citations(g, a), in_citations(g, b));
}

inline bool any_edge(const HeteroGraph& g, uint32_t a, uint32_t b) {
    return g.has_edge(a, b, EdgeKind::citation) || g.has_edge(b, a, EdgeKind::citation) ||
           g.has_edge(a, b, EdgeKind::hierarchy) || g.has_edge(b, a, EdgeKind::hierarchy);
}

inline double dispersion(const HeteroGraph& g, uint32_t u, uint32_t v) {
    std::set<uint32_t> common;
    {
        auto nu = undirected_nbrs(g, u), nv = undirected_nbrs(g, v);
        std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::inserter(common, common.begin()));
    }
    common.erase(u);
    common.erase(v);
    double total = 0.0;
    std::vector<uint32_t> cs(common.begin(), common.end());
    for (size_t i = 0; i < cs.size(); ++i)
        for (size_t j = i + 1; j < cs.size(); ++j) {
            uint32_t s = cs[i], t = cs[j];
            if (any_edge(g, s, t)) continue;
            auto ns = undirected_nbrs(g, s), nt = undirected_nbrs(g, t);
            std::set<uint32_t> shared;
            std::set_intersection(ns.begin(), ns.end(), nt.begin(), nt.end(),
                                  std::inserter(shared, shared.begin()));
            shared.erase(u);
            shared.erase(v);
            if (shared.empty()) total += 1.0;
        }
    return total;
}

// Direct single-pass textbook formula, a different algebraic route than the
// library's two-pass implementation.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    long double num = n * sxy - sx * sy;
    long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    return static_cast<double>(num / den);
}

inline double mse(const std::vector<double>& y, const std::vector<double>& yhat) {
    long double acc = 0;
    for (size_t i = 0; i < y.size(); ++i) {
        long double d = static_cast<long double>(y[i]) - yhat[i];
        acc += d * d;
    }
    return static_cast<double>(acc / static_cast<long double>(y.size()));
}

struct F1Parts {
    double f0 = 0.0, f1 = 0.0;
    bool class0_in_truth = false, class1_in_truth = false;
};

inline F1Parts fscore_parts(const std::vector<double>& y, const std::vector<double>& yhat, double thr = 0.5) {
    long long tp[2] = {0, 0}, fp[2] = {0, 0}, fn[2] = {0, 0};
    F1Parts parts;
    for (size_t i = 0; i < y.size(); ++i) {
        int truth = y[i] > thr ? 1 : 0;
        int pred = yhat[i] > thr ? 1 : 0;
        (truth ? parts.class1_in_truth : parts.class0_in_truth) = true;
        if (truth == pred)
            ++tp[truth];
        else {
            ++fp[pred];
            ++fn[truth];
        }
    }
    auto f1_of = [&](int c) {
        double denom_p = static_cast<double>(tp[c] + fp[c]);
        double denom_r = static_cast<double>(tp[c] + fn[c]);
        if (tp[c] == 0) return 0.0;
        double p = tp[c] / denom_p, r = tp[c] / denom_r;
        return 2 * p * r / (p + r);
    };
    parts.f0 = f1_of(0);
    parts.f1 = f1_of(1);
    return parts;
}

inline double fscore_macro(const std::vector<double>& y, const std::vector<double>& yhat, double thr = 0.5) {
    auto parts = fscore_parts(y, yhat, thr);
    double sum = 0.0;
    int k = 0;
    if (parts.class0_in_truth) {
        sum += parts.f0;
        ++k;
    }
    if (parts.class1_in_truth) {
        sum += parts.f1;
        ++k;
    }
    return k ? sum / k : 0.0;
}

// Central finite differences over a flat parameter vector.
inline std::vector<double> finite_difference(std::function<double(const std::vector<double>&)> f,
                                             std::vector<double> params, double h = 1e-6) {
    std::vector<double> grad(params.size());
    for (size_t i = 0; i < params.size(); ++i) {
        double orig = params[i];
        params[i] = orig + h;
        double fp = f(params);
        params[i] = orig - h;
        double fm = f(params);
        params[i] = orig;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

// Central finite difference for a single coordinate; used to spot-check large
// parameter vectors where a full sweep would be too slow.
inline double finite_difference_at(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double>& params, size_t i, double h = 1e-6) {
    double orig = params[i];
    params[i] = orig + h;
    double fp = f(params);
    params[i] = orig - h;
    double fm = f(params);
    params[i] = orig;
    return (fp - fm) / (2.0 * h);
}

inline double scaled_diff(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

// max_i |a-b| / max(1, |a|, |b|)
inline double max_scaled_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double denom = std::max({1.0, std::fabs(a[i]), std::fabs(b[i])});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / denom);
    }
    return worst;
}

} // namespace oracle
