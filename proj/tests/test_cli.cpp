#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <set>

#include "lexsim/pipeline.hpp"
#include "lexsim/recommend.hpp"
#include "lexsim/synth.hpp"
#include "lexsim/walker.hpp"
#include "support/fixtures.hpp"

using namespace lexsim;

TEST_CASE("synthetic corpus generation") {
    SynthSpec spec; // 2 communities x 20 docs, noise 0

    SUBCASE("noise 0 keeps every citation inside the community") {
        SynthCorpus sc = generate_synthetic_corpus(spec);
        for (size_t i = 0; i < sc.corpus.cases.size(); ++i) {
            std::string own = "_c" + std::to_string(sc.community_of_doc[i]) + "_";
            for (const auto& s : sc.corpus.cases[i].cited_statutes)
                CHECK(s.find("act_c" + std::to_string(sc.community_of_doc[i]) + "_") == 0);
            for (const auto& c : sc.corpus.cases[i].cited_cases)
                CHECK(c.find("case_c" + std::to_string(sc.community_of_doc[i]) + "_") == 0);
            (void)own;
        }
        CHECK(sc.corpus.unresolved.empty());
    }

    SUBCASE("labels cover all unordered doc pairs") {
        SynthCorpus sc = generate_synthetic_corpus(spec);
        CHECK(sc.labels.rows.size() == 40 * 39 / 2);
    }

    SUBCASE("fixed seed reproduces identical bytes") {
        fixtures::TempDir a("syntha"), b("synthb");
        write_synthetic_corpus(generate_synthetic_corpus(spec), a.path());
        write_synthetic_corpus(generate_synthetic_corpus(spec), b.path());
        for (const char* f : {"corpus.jsonl", "labels.tsv", "acts.tsv"})
            CHECK(io::read_file(a.path() + "/" + f) == io::read_file(b.path() + "/" + f));
    }

    SUBCASE("degenerate specs rejected") {
        SynthSpec bad = spec;
        bad.communities = 1;
        CHECK_THROWS_AS(generate_synthetic_corpus(bad), Error);
        bad = spec;
        bad.acts_per_community = 0;
        CHECK_THROWS_AS(generate_synthetic_corpus(bad), Error);
        bad = spec;
        bad.cross_noise = 1.5;
        CHECK_THROWS_AS(generate_synthetic_corpus(bad), Error);
    }

    SUBCASE("parses back and builds a graph") {
        fixtures::TempDir dir("synthparse");
        SynthCorpus sc = generate_synthetic_corpus(spec);
        write_synthetic_corpus(sc, dir.path());
        Corpus parsed = parse_corpus(dir.path() + "/corpus.jsonl");
        CHECK(parsed.cases.size() == 40);
        BuildReport report;
        HeteroGraph g = HeteroGraph::build(parsed, &report);
        CHECK(report.unresolved.empty());
        CHECK(g.documents().size() == 40);
    }
}

TEST_CASE("recommendation contract") {
    SynthSpec spec;
    spec.docs_per_community = 10;
    spec.sections_per_act = 12;
    spec.seed = 3;
    SynthCorpus sc = generate_synthetic_corpus(spec);
    HeteroGraph g = HeteroGraph::build(sc.corpus);

    // A text table keyed by doc id works as the similarity source: vectors
    // cluster by community.
    EmbeddingTable emb(4);
    Rng rng(5);
    for (size_t i = 0; i < sc.corpus.cases.size(); ++i) {
        int c = sc.community_of_doc[i];
        std::vector<double> v{c == 0 ? 1.0 : 0.05, c == 1 ? 1.0 : 0.05, rng.next_double() * 0.1,
                              rng.next_double() * 0.1};
        emb.insert(sc.corpus.cases[i].id, v);
    }
    SimilarityContext ctx;
    ctx.text = &emb;

    SUBCASE("never returns cited documents, either direction") {
        for (const auto& doc : sc.corpus.cases) {
            Recommendation rec = recommend(g, Method::text, ctx, doc.id, 5);
            uint32_t src = g.require_node(doc.id);
            for (const auto& [id, score] : rec.ranked) {
                uint32_t n = g.require_node(id);
                CHECK_FALSE(g.has_edge(src, n, EdgeKind::citation));
                CHECK_FALSE(g.has_edge(n, src, EdgeKind::citation));
                CHECK(id != doc.id);
            }
        }
    }

    SUBCASE("scores are non-increasing and k is honored") {
        Recommendation rec = recommend(g, Method::text, ctx, sc.corpus.cases[0].id, 3);
        CHECK(rec.ranked.size() == 3);
        for (size_t i = 1; i < rec.ranked.size(); ++i) CHECK(rec.ranked[i - 1].second >= rec.ranked[i].second);
    }

    SUBCASE("k beyond the candidate pool returns the full pool") {
        Recommendation rec = recommend(g, Method::text, ctx, sc.corpus.cases[0].id, 1000);
        uint32_t src = g.require_node(sc.corpus.cases[0].id);
        size_t cited = 0;
        for (uint32_t n : g.documents()) {
            if (n == src) continue;
            if (g.has_edge(src, n, EdgeKind::citation) || g.has_edge(n, src, EdgeKind::citation)) ++cited;
        }
        CHECK(rec.ranked.size() == g.documents().size() - 1 - cited);
    }

    SUBCASE("source citing everything leaves an empty pool") {
        HeteroGraph::Builder b;
        uint32_t s = b.add_node("s", NodeType::document);
        for (int i = 0; i < 4; ++i) {
            uint32_t d = b.add_node("d" + std::to_string(i), NodeType::document);
            b.add_edge(s, d, EdgeKind::citation);
        }
        HeteroGraph small = b.finish();
        EmbeddingTable e2(2);
        e2.insert("s", std::vector<double>{1, 0});
        for (int i = 0; i < 4; ++i) e2.insert("d" + std::to_string(i), std::vector<double>{1, 0});
        SimilarityContext c2;
        c2.text = &e2;
        CHECK(recommend(small, Method::text, c2, "s", 3).ranked.empty());
    }

    SUBCASE("unknown source and bad k rejected") {
        CHECK_THROWS_AS(recommend(g, Method::text, ctx, "nope", 3), Error);
        CHECK_THROWS_AS(recommend(g, Method::text, ctx, sc.corpus.cases[0].id, 0), Error);
    }

    SUBCASE("top recommendations stay in the source community") {
        for (size_t i = 0; i < sc.corpus.cases.size(); i += 5) {
            Recommendation rec = recommend(g, Method::text, ctx, sc.corpus.cases[i].id, 3);
            std::string prefix = "case_c" + std::to_string(sc.community_of_doc[i]) + "_";
            for (const auto& [id, score] : rec.ranked) CHECK(id.find(prefix) == 0);
        }
    }
}

namespace {

PipelineConfig tiny_pipeline(const fixtures::TempDir& data, const std::string& out_dir,
                             const std::string& method) {
    PipelineConfig cfg;
    cfg.corpus_path = data.path() + "/corpus.jsonl";
    cfg.pairs_path = data.path() + "/labels.tsv";
    cfg.out_dir = out_dir;
    cfg.method = method;
    cfg.walks_per_root = 20;
    cfg.dim = 16;
    cfg.net_epochs = 2;
    cfg.text_epochs = 3;
    cfg.fusion_epochs = 4;
    cfg.seed = 9;
    return cfg;
}

} // namespace

TEST_CASE("pipeline end to end on a tiny synthetic corpus") {
    fixtures::TempDir data("pipedata");
    SynthSpec spec;
    spec.docs_per_community = 8;
    spec.sections_per_act = 10;
    spec.tokens_per_doc = 60;
    write_synthetic_corpus(generate_synthetic_corpus(spec), data.path());

    SUBCASE("nn_map_conc produces a full report with weighted metrics") {
        fixtures::TempDir out("pipeout");
        PipelineConfig cfg = tiny_pipeline(data, out.path(), "nn_map_conc");
        cfg.weights = "sch1"; // derived from the corpus itself
        EvalReport report = run_pipeline(cfg);
        CHECK(report.n == 16 * 15 / 2);
        CHECK(report.mse >= 0.0);
        CHECK(report.wtd_mse.has_value());
        CHECK(report.wtd_fscore.has_value());
        CHECK(io::file_exists(out.path() + "/report.json"));
        CHECK(io::file_exists(out.path() + "/model.txt"));

        // Re-running with unchanged inputs reuses caches and reproduces the
        // same report bytes.
        std::string first = io::read_file(out.path() + "/report.json");
        run_pipeline(cfg);
        CHECK(io::read_file(out.path() + "/report.json") == first);
    }

    SUBCASE("classic method path") {
        fixtures::TempDir out("pipeclassic");
        PipelineConfig cfg = tiny_pipeline(data, out.path(), "cocitation");
        EvalReport report = run_pipeline(cfg);
        CHECK(report.n == 16 * 15 / 2);
        CHECK(io::file_exists(out.path() + "/scores.tsv"));
    }

    SUBCASE("paper2vec path") {
        fixtures::TempDir out("pipep2v");
        PipelineConfig cfg = tiny_pipeline(data, out.path(), "paper2vec");
        EvalReport report = run_pipeline(cfg);
        CHECK(io::file_exists(out.path() + "/paper2vec_graph.txt"));
        CHECK(report.n > 0);
    }

    SUBCASE("stage failure names the stage") {
        fixtures::TempDir out("pipefail");
        PipelineConfig cfg = tiny_pipeline(data, out.path(), "nn_map_conc");
        cfg.corpus_path = data.path() + "/does_not_exist.jsonl";
        CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("stage normalize"), Error);
    }

    SUBCASE("a held lock blocks a second run") {
        fixtures::TempDir out("pipelock");
        io::write_file(out.path() + "/.lock", "");
        PipelineConfig cfg = tiny_pipeline(data, out.path(), "doc2vec");
        CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("locked"), Error);
    }

    SUBCASE("config file and overrides") {
        fixtures::TempDir out("pipecfg");
        std::string cfg_text = "corpus = " + data.path() + "/corpus.jsonl\n" +
                               "pairs = " + data.path() + "/labels.tsv\n" + "out_dir = " + out.path() + "\n" +
                               "method = doc2vec\n# comment line\ndim = 16\ntext_epochs = 2\n";
        io::write_file(out.path() + "/run.cfg", cfg_text);
        PipelineConfig cfg = PipelineConfig::from_file(out.path() + "/run.cfg");
        CHECK(cfg.method == "doc2vec");
        CHECK(cfg.dim == 16);
        cfg.set("method", "value_average");
        CHECK(cfg.method == "value_average");
        CHECK_THROWS_AS(cfg.set("bogus_key", "1"), Error);
    }
}

#ifdef LEXSIM_BIN
TEST_CASE("command line interface") {
    fixtures::TempDir dir("clibin");
    const std::string bin = LEXSIM_BIN;
    auto run = [&](const std::string& args) { return std::system((bin + " " + args).c_str()); };

    SUBCASE("errors exit nonzero with a machine-parseable line") {
        std::string err_file = dir.file("err.txt");
        int rc = std::system((bin + " stats --graph /nonexistent.txt 2> " + err_file).c_str());
        CHECK(rc != 0);
        CHECK(io::read_file(err_file).find("error: ") == 0);
    }

    SUBCASE("every subcommand runs end to end") {
        CHECK(run("synth --out-dir " + dir.path() + " --docs 6 --sections 8 --seed 2") == 0);
        CHECK(run("parse --corpus " + dir.file("corpus.jsonl") + " --registry " + dir.file("acts.tsv") +
                  " --out " + dir.file("norm.jsonl") + " --report " + dir.file("parse.txt")) == 0);
        CHECK(run("build-net --corpus " + dir.file("norm.jsonl") + " --out " + dir.file("graph.txt") +
                  " --report " + dir.file("build.txt")) == 0);
        CHECK(run("stats --graph " + dir.file("graph.txt") + " > " + dir.file("stats.txt")) == 0);
        CHECK(io::read_file(dir.file("stats.txt")).find("nodes") != std::string::npos);
        CHECK(run("classic-sim --graph " + dir.file("graph.txt") + " --pairs " + dir.file("labels.tsv") +
                  " --measure bibcoupling --network hierspcnet --out " + dir.file("classic.tsv")) == 0);
        CHECK(run("walk --graph " + dir.file("graph.txt") + " --policy icf --walks-per-root 5 --length 7 --seed 1 --out " +
                  dir.file("walks.txt")) == 0);
        CHECK(run("train-net-emb --corpus " + dir.file("walks.txt") + " --graph " + dir.file("graph.txt") +
                  " --dim 8 --epochs 1 --out " + dir.file("net.txt")) == 0);
        CHECK(run("train-text-emb --corpus " + dir.file("norm.jsonl") + " --dim 8 --epochs 2 --min-count 1 --out " +
                  dir.file("text.txt")) == 0);
        CHECK(run("fuse train --method nnmap --text-emb " + dir.file("text.txt") + " --net-emb " +
                  dir.file("net.txt") + " --epochs 3 --out " + dir.file("map.txt") + " > /dev/null") == 0);
        CHECK(run("fuse score --method nn_map_conc --pairs " + dir.file("labels.tsv") + " --text-emb " +
                  dir.file("text.txt") + " --model " + dir.file("map.txt") + " --out " + dir.file("scores.tsv")) == 0);
        CHECK(run("eval --pairs " + dir.file("labels.tsv") + " --scores " + dir.file("scores.tsv") +
                  " --weights sch1 --nd 100 --nc 30 --out " + dir.file("report.json")) == 0);
        CHECK(io::read_file(dir.file("report.json")).find("wtd_mse") != std::string::npos);
        CHECK(run("recommend --graph " + dir.file("graph.txt") + " --method network --net-emb " + dir.file("net.txt") +
                  " --source case_c0_d0 --k 3 > " + dir.file("rec.txt")) == 0);
        io::write_file(dir.file("run.cfg"), "corpus = " + dir.file("corpus.jsonl") + "\npairs = " +
                                                dir.file("labels.tsv") + "\nout_dir = " + dir.file("pipe") +
                                                "\nmethod = doc2vec\ndim = 8\ntext_epochs = 2\n");
        CHECK(run("pipeline --config " + dir.file("run.cfg") + " > " + dir.file("pipe.json")) == 0);
        CHECK(io::read_file(dir.file("pipe.json")).find("pearson") != std::string::npos);
    }
}
#endif
