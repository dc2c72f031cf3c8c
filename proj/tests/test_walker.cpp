#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "lexsim/synth.hpp"
#include "lexsim/walker.hpp"
#include "support/fixtures.hpp"

using namespace lexsim;

TEST_CASE("builtin metapaths") {
    const auto& schemas = builtin_metapaths();
    CHECK(schemas.size() == 14);
    size_t longest = 0;
    for (const auto& s : schemas) {
        CHECK(s.types.front() == NodeType::document);
        CHECK(s.types.back() == NodeType::document);
        CHECK(s.types.size() >= 3);
        longest = std::max(longest, s.types.size());
    }
    CHECK(longest == 7);
    std::set<std::string> names;
    for (const auto& s : schemas) names.insert(s.name);
    CHECK(names.count("doc-sec-doc"));
    CHECK(names.count("doc-sec-topic-chap-topic-sec-doc"));
    CHECK(names.count("doc-act-act-doc"));
    CHECK(names.count("doc-doc-doc"));
}

TEST_CASE("schema parsing and validation") {
    MetapathSchema s = parse_metapath("doc-sec-topic-chap-topic-sec-doc");
    CHECK(s.types[3] == NodeType::chapter);
    CHECK_THROWS_AS(parse_metapath("doc-doc"), Error);               // too short
    CHECK_THROWS_AS(parse_metapath("sec-doc-sec"), Error);           // ends must be document
    CHECK_THROWS_AS(parse_metapath("doc-part-doc"), Error);          // no doc-part link exists
    CHECK_THROWS_AS(parse_metapath("doc-sec-bogus-sec-doc"), Error); // unknown type
}

TEST_CASE("schema chaining repeats the interior") {
    MetapathSchema s = parse_metapath("doc-sec-doc");
    NodeType expect[] = {NodeType::document, NodeType::section, NodeType::document,
                         NodeType::section,  NodeType::document, NodeType::section,
                         NodeType::document};
    for (int i = 0; i < 7; ++i) CHECK(schema_type_at(s, i) == expect[i]);
}

namespace {

// current = s0 (section). Eligible section neighbors: s_a with icf exactly 1.0
// (cf 99) and s_b with icf exactly 3.0 (cf 0), with N = 1000 citing nodes.
HeteroGraph icf_transition_fixture() {
    HeteroGraph::Builder b;
    uint32_t s0 = b.add_node("s0", NodeType::section);
    uint32_t sa = b.add_node("s_a", NodeType::section);
    uint32_t sb = b.add_node("s_b", NodeType::section);
    uint32_t sz = b.add_node("s_z", NodeType::section);
    b.add_edge(s0, sa, EdgeKind::citation); // s0 -> s_a, cf(s_a) = 1 so far
    b.add_edge(sb, s0, EdgeKind::citation); // s_b is an in-neighbor of s0
    for (int i = 0; i < 98; ++i) {
        uint32_t e = b.add_node("extra" + std::to_string(i), NodeType::section);
        b.add_edge(e, sa, EdgeKind::citation); // cf(s_a) reaches 99
    }
    // Filler citers are sections, keeping dx the only document root for walks.
    for (int i = 0; i < 899; ++i) {
        uint32_t f = b.add_node("filler" + std::to_string(i), NodeType::section);
        b.add_edge(f, sz, EdgeKind::citation);
    }
    uint32_t dx = b.add_node("dx", NodeType::document);
    b.add_edge(dx, s0, EdgeKind::citation); // document neighbor of s0, N = 1000
    return b.finish();
}

} // namespace

TEST_CASE("transition distribution follows the icf weighting") {
    HeteroGraph g = icf_transition_fixture();
    g.compute_icf();
    REQUIRE(g.icf(g.require_node("s_a")) == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(g.icf(g.require_node("s_b")) == doctest::Approx(3.0).epsilon(1e-12));

    uint32_t s0 = g.require_node("s0");
    auto dist = transition_distribution(g, g.node(s0), NodeType::section, WalkPolicy::icf);
    REQUIRE(dist.size() == 2);
    std::map<std::string, double> p;
    for (const auto& t : dist) p[g.id_of(t.node)] = t.probability;
    CHECK(p["s_a"] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p["s_b"] == doctest::Approx(0.75).epsilon(1e-12));

    SUBCASE("wrong-type neighbors carry no mass") {
        for (const auto& t : dist) CHECK(g.type_of(t.node) == NodeType::section);
        auto doc_dist = transition_distribution(g, g.node(s0), NodeType::document, WalkPolicy::icf);
        REQUIRE(doc_dist.size() == 1);
        CHECK(g.id_of(doc_dist[0].node) == "dx");
    }

    SUBCASE("uniform policy spreads equally") {
        auto u = transition_distribution(g, g.node(s0), NodeType::section, WalkPolicy::uniform);
        REQUIRE(u.size() == 2);
        CHECK(u[0].probability == 0.5);
        CHECK(u[1].probability == 0.5);
    }

    SUBCASE("empty support yields empty distribution") {
        CHECK(transition_distribution(g, g.node(s0), NodeType::topic, WalkPolicy::icf).empty());
    }
}

TEST_CASE("all-zero icf support falls back to uniform") {
    HeteroGraph::Builder b;
    uint32_t d1 = b.add_node("d1", NodeType::document);
    uint32_t d2 = b.add_node("d2", NodeType::document);
    uint32_t s1 = b.add_node("s1", NodeType::section);
    uint32_t s2 = b.add_node("s2", NodeType::section);
    b.add_edge(d1, s1, EdgeKind::citation);
    b.add_edge(d1, s2, EdgeKind::citation);
    b.add_edge(d2, s1, EdgeKind::citation);
    b.add_edge(d2, s2, EdgeKind::citation);
    HeteroGraph g = b.finish();
    g.compute_icf(); // N=2, cf=2 each: log10(2/3) < 0, clamped to 0
    REQUIRE(g.icf(s1) == 0.0);
    REQUIRE(g.icf(s2) == 0.0);
    auto dist = transition_distribution(g, g.node(d1), NodeType::section, WalkPolicy::icf);
    REQUIRE(dist.size() == 2);
    CHECK(dist[0].probability == 0.5);
    CHECK(dist[1].probability == 0.5);
}

TEST_CASE("metapath walks on the toy fixture") {
    HeteroGraph g = fixtures::fig2_graph();
    WalkConfig cfg;
    cfg.walks_per_root = 100;
    cfg.walk_length = 3;
    cfg.seed = 5;
    std::vector<MetapathSchema> schemas{parse_metapath("doc-sec-doc")};
    WalkCorpus corpus = generate_metapath_walks(g, schemas, cfg);

    SUBCASE("walk d1 -> s_j -> d3 is producible") {
        bool found = false;
        for (const auto& w : corpus.sequences)
            if (w.size() == 3 && g.id_of(w[0]) == "d1" && g.id_of(w[1]) == "s_j" && g.id_of(w[2]) == "d3")
                found = true;
        CHECK(found);
    }

    SUBCASE("every walk respects schema types and real edges") {
        for (const auto& w : corpus.sequences) {
            for (size_t i = 0; i < w.size(); ++i) CHECK(g.type_of(w[i]) == schema_type_at(schemas[0], static_cast<int>(i)));
            for (size_t i = 0; i + 1 < w.size(); ++i) {
                bool edge = g.has_edge(w[i], w[i + 1], EdgeKind::citation) ||
                            g.has_edge(w[i + 1], w[i], EdgeKind::citation) ||
                            g.has_edge(w[i], w[i + 1], EdgeKind::hierarchy) ||
                            g.has_edge(w[i + 1], w[i], EdgeKind::hierarchy);
                CHECK(edge);
            }
        }
    }
}

TEST_CASE("isolated root emits no walks") {
    HeteroGraph::Builder b;
    b.add_node("alone", NodeType::document);
    uint32_t a = b.add_node("a", NodeType::document);
    uint32_t s = b.add_node("x_1", NodeType::section);
    b.add_edge(a, s, EdgeKind::citation);
    HeteroGraph g = b.finish();
    WalkConfig cfg;
    cfg.walks_per_root = 20;
    cfg.walk_length = 3;
    WalkCorpus corpus = generate_metapath_walks(g, {parse_metapath("doc-sec-doc")}, cfg);
    for (const auto& p : corpus.provenance) CHECK(g.id_of(p.root) != "alone");
    WalkCorpus uni = generate_uniform_walks(g, cfg);
    for (const auto& p : uni.provenance) CHECK(g.id_of(p.root) != "alone");
}

TEST_CASE("walk determinism and thread equivalence") {
    SynthSpec spec;
    spec.docs_per_community = 8;
    spec.sections_per_act = 12;
    SynthCorpus sc = generate_synthetic_corpus(spec);
    HeteroGraph g = HeteroGraph::build(sc.corpus);
    g.compute_icf();
    WalkConfig cfg;
    cfg.walks_per_root = 25;
    cfg.walk_length = 7;
    cfg.policy = WalkPolicy::icf;
    cfg.seed = 11;

    fixtures::TempDir dir("walks");
    generate_metapath_walks(g, builtin_metapaths(), cfg).save(dir.file("a.txt"));
    generate_metapath_walks(g, builtin_metapaths(), cfg).save(dir.file("b.txt"));
    CHECK(io::read_file(dir.file("a.txt")) == io::read_file(dir.file("b.txt")));

    // Per-walk seeding makes thread count irrelevant to the output.
    cfg.threads = 3;
    generate_metapath_walks(g, builtin_metapaths(), cfg).save(dir.file("c.txt"));
    CHECK(io::read_file(dir.file("a.txt")) == io::read_file(dir.file("c.txt")));
}

TEST_CASE("uniform walks on a path graph") {
    HeteroGraph::Builder b;
    uint32_t a = b.add_node("a", NodeType::document);
    uint32_t m = b.add_node("b", NodeType::document);
    uint32_t c = b.add_node("c", NodeType::document);
    b.add_edge(a, m, EdgeKind::citation);
    b.add_edge(m, c, EdgeKind::citation);
    HeteroGraph g = b.finish();
    WalkConfig cfg;
    cfg.walks_per_root = 10000;
    cfg.walk_length = 3;
    cfg.seed = 3;
    WalkCorpus corpus = generate_uniform_walks(g, cfg);
    int from_a = 0, abc = 0, aba = 0;
    for (size_t i = 0; i < corpus.sequences.size(); ++i) {
        const auto& w = corpus.sequences[i];
        if (w[0] != a) continue;
        ++from_a;
        REQUIRE(w.size() == 3);
        CHECK(w[1] == m); // only neighbor
        if (w[2] == c) ++abc;
        if (w[2] == a) ++aba;
    }
    CHECK(from_a == 10000);
    CHECK(abc + aba == from_a);
    CHECK(std::abs(abc / 10000.0 - 0.5) < 0.02);
}

TEST_CASE("drop_truncated keeps only full-length walks") {
    HeteroGraph g = fixtures::fig2_graph();
    WalkConfig cfg;
    cfg.walks_per_root = 50;
    cfg.walk_length = 7;
    cfg.seed = 9;
    cfg.drop_truncated = true;
    WalkCorpus corpus = generate_metapath_walks(g, {parse_metapath("doc-sec-doc")}, cfg);
    for (const auto& w : corpus.sequences) CHECK(w.size() == 7);
}

TEST_CASE("icf bias shifts empirical visit counts") {
    HeteroGraph g = icf_transition_fixture();
    g.compute_icf();
    // Root document dx connects to s0 only; extend with a schema passing two
    // section steps so the s0 -> {s_a, s_b} choice is exercised.
    WalkConfig cfg;
    cfg.walks_per_root = 20000;
    cfg.walk_length = 4;
    cfg.policy = WalkPolicy::icf;
    cfg.seed = 21;
    WalkCorpus corpus = generate_metapath_walks(g, {parse_metapath("doc-sec-sec-doc")}, cfg);
    int visits_a = 0, visits_b = 0;
    uint32_t dx = g.require_node("dx");
    for (const auto& w : corpus.sequences) {
        if (w[0] != dx || w.size() < 3) continue;
        if (g.id_of(w[2]) == "s_a") ++visits_a;
        if (g.id_of(w[2]) == "s_b") ++visits_b;
    }
    CHECK(visits_a + visits_b > 10000);
    CHECK(visits_b > visits_a); // icf(s_b)=3 vs icf(s_a)=1
    double share_b = static_cast<double>(visits_b) / (visits_a + visits_b);
    CHECK(std::abs(share_b - 0.75) < 0.02);
}

TEST_CASE("walk corpus save and load") {
    HeteroGraph g = fixtures::fig2_graph();
    WalkConfig cfg;
    cfg.walks_per_root = 10;
    cfg.walk_length = 3;
    WalkCorpus corpus = generate_metapath_walks(g, {parse_metapath("doc-sec-doc")}, cfg);
    fixtures::TempDir dir("corpusio");
    corpus.save(dir.file("w.txt"), dir.file("w.prov"));
    WalkCorpus loaded = WalkCorpus::load(dir.file("w.txt"), &g);
    REQUIRE(loaded.sequences.size() == corpus.sequences.size());
    for (size_t i = 0; i < corpus.sequences.size(); ++i) CHECK(loaded.sequences[i] == corpus.sequences[i]);
    CHECK(loaded.vocab.size() == g.node_count());
}

TEST_CASE("walk config validation") {
    HeteroGraph g = fixtures::fig2_graph();
    WalkConfig cfg;
    cfg.walk_length = 3;
    CHECK_THROWS_AS(generate_metapath_walks(g, {parse_metapath("doc-sec-act-sec-doc")}, cfg), Error);
    cfg.walk_length = 0;
    CHECK_THROWS_AS(generate_uniform_walks(g, cfg), Error);
    cfg.walk_length = 7;
    cfg.policy = WalkPolicy::icf; // compute_icf not called
    CHECK_THROWS_AS(generate_metapath_walks(g, builtin_metapaths(), cfg), Error);
}
