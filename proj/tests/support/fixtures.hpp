#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>

#include "lexsim/corpus.hpp"
#include "lexsim/graph.hpp"

namespace fixtures {

using namespace lexsim;

// The worked PCNet example: d1->d6, d2->d3, d2->d6, d5->d6, d4 isolated.
// Gives N_out(d1)={d6}, N_out(d2)={d3,d6}, N_in(d3)={d2}, N_in(d6)={d1,d2,d5}.
inline HeteroGraph fig1_pcnet() {
    HeteroGraph::Builder b;
    for (int i = 1; i <= 6; ++i) b.add_node("d" + std::to_string(i), NodeType::document);
    auto idx = [&](int i) { return *b.index_of("d" + std::to_string(i)); };
    b.add_edge(idx(1), idx(6), EdgeKind::citation);
    b.add_edge(idx(2), idx(3), EdgeKind::citation);
    b.add_edge(idx(2), idx(6), EdgeKind::citation);
    b.add_edge(idx(5), idx(6), EdgeKind::citation);
    return b.finish();
}

// The toy statute+precedent network: 6 documents, act1 with a deep hierarchy
// (part -> chapter -> topics -> sections s_i, s_j, s_k), act2 shallow
// (part_b -> sections s_m, s_n), plus the citations discussed alongside it.
inline Corpus fig2_corpus() {
    Corpus c;
    auto statute = [&](const std::string& id, StatuteLevel lvl, const std::string& parent) {
        StatuteNode n;
        n.id = id;
        n.node_type = lvl;
        n.parent_id = parent;
        n.title = id;
        n.cited_statutes_listed = true;
        c.statutes.push_back(n);
    };
    statute("act1", StatuteLevel::act, "");
    statute("part_p", StatuteLevel::part, "act1");
    statute("chapter_c", StatuteLevel::chapter, "part_p");
    statute("topic_s", StatuteLevel::topic, "chapter_c");
    statute("topic_t", StatuteLevel::topic, "chapter_c");
    statute("s_i", StatuteLevel::section, "topic_s");
    statute("s_j", StatuteLevel::section, "topic_s");
    statute("s_k", StatuteLevel::section, "topic_t");
    statute("act2", StatuteLevel::act, "");
    statute("part_b", StatuteLevel::part, "act2");
    statute("s_m", StatuteLevel::section, "part_b");
    statute("s_n", StatuteLevel::section, "part_b");
    // s_k of act1 cites s_n of act2.
    for (auto& s : c.statutes)
        if (s.id == "s_k") s.cited_statutes = {"s_n"};

    auto doc = [&](const std::string& id, std::vector<std::string> cases, std::vector<std::string> statutes_cited) {
        CaseDocument d;
        d.id = id;
        d.cited_cases = std::move(cases);
        d.cited_statutes = std::move(statutes_cited);
        d.cited_cases_listed = d.cited_statutes_listed = true;
        c.cases.push_back(d);
    };
    doc("d1", {"d6"}, {"s_i", "s_j"});
    doc("d2", {"d3", "d6"}, {"s_i"});
    doc("d3", {}, {"s_j", "s_k", "s_m"});
    doc("d4", {}, {"s_n"});
    doc("d5", {"d6"}, {"act2"});
    doc("d6", {}, {});
    link_citations(c);
    return c;
}

inline HeteroGraph fig2_graph() { return HeteroGraph::build(fig2_corpus()); }

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("lexsim-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++)))
                    .string();
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const { return path_ + "/" + name; }

private:
    std::string path_;
};

} // namespace fixtures
