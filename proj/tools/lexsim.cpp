#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <set>

#include "lexsim/classic.hpp"
#include "lexsim/corpus.hpp"
#include "lexsim/eval.hpp"
#include "lexsim/fuse.hpp"
#include "lexsim/graph.hpp"
#include "lexsim/pipeline.hpp"
#include "lexsim/recommend.hpp"
#include "lexsim/synth.hpp"
#include "lexsim/walker.hpp"

using namespace lexsim;

namespace {

struct ParseArgs {
    std::string corpus, registry, out, report;
};

void cmd_parse(const ParseArgs& a) {
    Corpus corpus = parse_corpus(a.corpus);
    if (!a.registry.empty()) fill_missing_citations(corpus, ActRegistry::load_tsv(a.registry));
    write_corpus(corpus, a.out);
    std::ostringstream rep;
    rep << "cases=" << corpus.cases.size() << " statutes=" << corpus.statutes.size()
        << " unresolved=" << corpus.unresolved.size() << " warnings=" << corpus.warnings.size() << '\n';
    for (const auto& u : corpus.unresolved)
        rep << "unresolved\t" << u.source_id << '\t' << u.target << '\t' << u.kind << '\t' << u.note << '\n';
    for (const auto& w : corpus.warnings) rep << "warning\t" << w << '\n';
    if (a.report.empty())
        std::cout << rep.str();
    else
        io::write_file(a.report, rep.str());
}

struct BuildArgs {
    std::string corpus, out, network = "hierspcnet", report;
};

void cmd_build(const BuildArgs& a) {
    Corpus corpus = parse_corpus(a.corpus);
    BuildReport report;
    HeteroGraph g = HeteroGraph::build(corpus, &report);
    if (a.network == "pcnet")
        pcnet_view(g).save(a.out);
    else if (a.network == "hierspcnet")
        g.save(a.out);
    else
        throw Error("invalid --network: " + a.network);
    if (a.report.empty())
        std::cout << report.summary() << '\n';
    else
        io::write_file(a.report, report.summary() + "\n");
}

void cmd_stats(const std::string& graph_path) {
    HeteroGraph g = HeteroGraph::load(graph_path);
    std::array<size_t, kNodeTypeCount> per_type{};
    for (uint32_t n = 0; n < g.node_count(); ++n) ++per_type[static_cast<int>(g.type_of(n))];
    std::cout << "nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
    for (int t = 0; t < kNodeTypeCount; ++t)
        std::cout << "  " << to_string(static_cast<NodeType>(t)) << ' ' << per_type[t] << '\n';
    size_t citation = 0, hierarchy = 0;
    for (uint32_t n = 0; n < g.node_count(); ++n) {
        citation += g.out_neighbors(n, EdgeKind::citation).size();
        hierarchy += g.out_neighbors(n, EdgeKind::hierarchy).size();
    }
    std::cout << "  citation_edges " << citation << "\n  hierarchy_edges " << hierarchy << '\n';
    try {
        g.compute_icf();
        double mx = 0.0, sum = 0.0;
        for (uint32_t n = 0; n < g.node_count(); ++n) {
            mx = std::max(mx, g.icf(n));
            sum += g.icf(n);
        }
        std::cout << "  icf_max " << mx << " icf_mean " << sum / std::max<size_t>(1, g.node_count()) << '\n';
    } catch (const Error&) {
        std::cout << "  icf n/a (no citing nodes)\n";
    }
}

struct ClassicArgs {
    std::string graph, pairs, measure = "bibcoupling", network = "hierspcnet", out;
};

void cmd_classic(const ClassicArgs& a) {
    HeteroGraph full = HeteroGraph::load(a.graph);
    HeteroGraph g = a.network == "pcnet" ? pcnet_view(full) : std::move(full);
    PairDataset pairs = PairDataset::load_tsv(a.pairs);
    SimilarityContext ctx;
    ctx.graph = &g;
    std::vector<std::pair<std::string, std::string>> pair_ids;
    for (const auto& r : pairs.rows) pair_ids.emplace_back(r.id_a, r.id_b);
    std::vector<double> scores = score_pairs(method_from_string(a.measure), ctx, pair_ids);
    std::ostringstream os;
    for (size_t i = 0; i < pair_ids.size(); ++i)
        os << pair_ids[i].first << '\t' << pair_ids[i].second << '\t' << str::format_double(scores[i]) << '\n';
    if (a.out.empty())
        std::cout << os.str();
    else
        io::write_file(a.out, os.str());
}

struct WalkArgs {
    std::string graph, schemas = "builtin", out, provenance;
    std::string policy = "uniform";
    int walks_per_root = 2000;
    int length = 7;
    uint64_t seed = 1;
    bool drop_truncated = false;
    bool homogeneous = false;
    int threads = 1;
};

void cmd_walk(const WalkArgs& a) {
    HeteroGraph g = HeteroGraph::load(a.graph);
    WalkConfig wc;
    wc.walks_per_root = a.walks_per_root;
    wc.walk_length = a.length;
    wc.policy = walk_policy_from_string(a.policy);
    wc.seed = a.seed;
    wc.drop_truncated = a.drop_truncated;
    wc.threads = a.threads;
    if (wc.policy == WalkPolicy::icf) g.compute_icf();
    WalkCorpus corpus;
    if (a.homogeneous) {
        corpus = generate_uniform_walks(g, wc);
    } else {
        std::vector<MetapathSchema> schemas;
        if (a.schemas == "builtin") {
            schemas = builtin_metapaths();
        } else {
            for (const auto& label : str::split(a.schemas, ',')) schemas.push_back(parse_metapath(label));
        }
        corpus = generate_metapath_walks(g, schemas, wc);
    }
    corpus.save(a.out, a.provenance);
    std::cout << "walks " << corpus.size() << '\n';
}

struct NetEmbArgs {
    std::string corpus, graph, out;
    SgnsConfig cfg;
};

void cmd_train_net(const NetEmbArgs& a) {
    HeteroGraph g = HeteroGraph::load(a.graph);
    WalkCorpus corpus = WalkCorpus::load(a.corpus, &g);
    train_skipgram(corpus, a.cfg).save(a.out);
}

struct TextEmbArgs {
    std::string corpus, out, stopwords, stemming = "off";
    SgnsConfig cfg;
};

void cmd_train_text(const TextEmbArgs& a) {
    Corpus corpus = parse_corpus(a.corpus);
    TextPreprocessConfig pc;
    pc.stopword_file = a.stopwords;
    if (a.stemming == "suffix_strip")
        pc.stemming = TextPreprocessConfig::Stemming::suffix_strip;
    else if (a.stemming != "off")
        throw Error("invalid --stemming: " + a.stemming);
    TextPreprocessor pre(pc);
    train_paragraph_vectors(corpus.cases, pre, a.cfg).doc_vectors().save(a.out);
}

struct FuseTrainArgs {
    std::string method = "nnmap", text_emb, net_emb, out, exclude_pairs;
    FusionTrainConfig cfg;
};

void cmd_fuse_train(const FuseTrainArgs& a) {
    EmbeddingTable text = EmbeddingTable::load(a.text_emb);
    EmbeddingTable net = EmbeddingTable::load(a.net_emb);
    FusionTrainConfig cfg = a.cfg;
    if (!a.exclude_pairs.empty()) {
        PairDataset pairs = PairDataset::load_tsv(a.exclude_pairs);
        std::set<std::string> ids;
        for (const auto& r : pairs.rows) {
            ids.insert(r.id_a);
            ids.insert(r.id_b);
        }
        cfg.exclude_ids.assign(ids.begin(), ids.end());
    }
    if (a.method == "nnmap") {
        auto result = train_map_net(text, net, cfg);
        result.model.save(a.out);
        std::cout << "best_val " << result.best_val << " at epoch " << result.best_epoch << '\n';
    } else if (a.method == "autoencoder") {
        auto result = train_autoencoder(text, net, cfg);
        result.model.save(a.out);
        std::cout << "best_val " << result.best_val << " at epoch " << result.best_epoch << '\n';
    } else {
        throw Error("invalid --method: " + a.method + " (expected nnmap|autoencoder)");
    }
}

struct FuseScoreArgs {
    std::string method, pairs, text_emb, net_emb, p2v_emb, model, graph, out;
    double alpha = 0.5;
    bool no_renorm = false;
};

void cmd_fuse_score(const FuseScoreArgs& a) {
    Method m = method_from_string(a.method);
    EmbeddingTable text, net, p2v;
    MapNet map;
    BimodalAutoencoder ae;
    HeteroGraph graph;
    SimilarityContext ctx;
    ctx.alpha = a.alpha;
    ctx.renorm_mapped = !a.no_renorm;
    if (!a.text_emb.empty()) ctx.text = &(text = EmbeddingTable::load(a.text_emb));
    if (!a.net_emb.empty()) ctx.net = &(net = EmbeddingTable::load(a.net_emb));
    if (!a.p2v_emb.empty()) ctx.paper2vec = &(p2v = EmbeddingTable::load(a.p2v_emb));
    if (!a.model.empty()) {
        if (m == Method::autoencoder)
            ctx.autoencoder = &(ae = BimodalAutoencoder::load(a.model));
        else
            ctx.map = &(map = MapNet::load(a.model));
    }
    if (!a.graph.empty()) ctx.graph = &(graph = HeteroGraph::load(a.graph));
    PairDataset pairs = PairDataset::load_tsv(a.pairs);
    std::vector<std::pair<std::string, std::string>> pair_ids;
    for (const auto& r : pairs.rows) pair_ids.emplace_back(r.id_a, r.id_b);
    std::vector<double> scores = score_pairs(m, ctx, pair_ids);
    std::ostringstream os;
    for (size_t i = 0; i < pair_ids.size(); ++i)
        os << pair_ids[i].first << '\t' << pair_ids[i].second << '\t' << str::format_double(scores[i]) << '\n';
    if (a.out.empty())
        std::cout << os.str();
    else
        io::write_file(a.out, os.str());
}

struct EvalArgs {
    std::string pairs, scores, weights, text_emb, corpus, out;
    int64_t nd = 0, nc = 0;
    int sch2_samples = 300;
    uint64_t seed = 1;
};

void cmd_eval(const EvalArgs& a) {
    PairDataset pairs = PairDataset::load_tsv(a.pairs);
    pairs.attach_scores_tsv(a.scores);
    std::optional<ClassWeights> weights;
    if (a.weights == "sch1") {
        if (a.nd < 2) throw Error("--weights sch1 requires --nd and --nc");
        weights = derive_weights_citation(a.nd, a.nc);
    } else if (a.weights == "sch2") {
        if (a.text_emb.empty() || a.corpus.empty())
            throw Error("--weights sch2 requires --text-emb and --corpus");
        EmbeddingTable text = EmbeddingTable::load(a.text_emb);
        Corpus corpus = parse_corpus(a.corpus);
        std::map<std::string, std::vector<std::string>> by_type;
        for (const auto& d : corpus.cases) by_type[to_string(d.case_type)].push_back(d.id);
        std::vector<std::pair<std::string, std::vector<std::string>>> strata(by_type.begin(), by_type.end());
        weights = derive_weights_textsim(text, strata, 0.5, static_cast<size_t>(a.sch2_samples), a.seed);
    } else if (!a.weights.empty()) {
        throw Error("invalid --weights: " + a.weights);
    }
    EvalReport report = evaluate(pairs, weights);
    if (a.out.empty())
        std::cout << report.to_json();
    else
        io::write_file(a.out, report.to_json());
}

struct RecommendArgs {
    std::string graph, method, source, text_emb, net_emb, p2v_emb, model;
    int k = 3;
    double alpha = 0.5;
};

void cmd_recommend(const RecommendArgs& a) {
    HeteroGraph g = HeteroGraph::load(a.graph);
    Method m = method_from_string(a.method);
    EmbeddingTable text, net, p2v;
    MapNet map;
    BimodalAutoencoder ae;
    SimilarityContext ctx;
    ctx.alpha = a.alpha;
    ctx.graph = &g;
    if (!a.text_emb.empty()) ctx.text = &(text = EmbeddingTable::load(a.text_emb));
    if (!a.net_emb.empty()) ctx.net = &(net = EmbeddingTable::load(a.net_emb));
    if (!a.p2v_emb.empty()) ctx.paper2vec = &(p2v = EmbeddingTable::load(a.p2v_emb));
    if (!a.model.empty()) {
        if (m == Method::autoencoder)
            ctx.autoencoder = &(ae = BimodalAutoencoder::load(a.model));
        else
            ctx.map = &(map = MapNet::load(a.model));
    }
    Recommendation rec = recommend(g, m, ctx, a.source, a.k);
    for (const auto& [id, score] : rec.ranked) std::cout << id << '\t' << str::format_double(score) << '\n';
}

struct SynthArgs {
    std::string out_dir;
    SynthSpec spec;
};

void cmd_synth(const SynthArgs& a) {
    SynthCorpus sc = generate_synthetic_corpus(a.spec);
    write_synthetic_corpus(sc, a.out_dir);
    std::cout << "cases " << sc.corpus.cases.size() << " statutes " << sc.corpus.statutes.size() << " pairs "
              << sc.labels.rows.size() << '\n';
}

struct PipelineArgs {
    std::string config;
    std::vector<std::string> overrides;
};

void cmd_pipeline(const PipelineArgs& a) {
    PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : PipelineConfig::from_file(a.config);
    for (const auto& kv : a.overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error("override must be key=value: " + kv);
        cfg.set(str::trim(kv.substr(0, eq)), str::trim(kv.substr(eq + 1)));
    }
    EvalReport report = run_pipeline(cfg);
    std::cout << report.to_json();
}

void add_sgns_flags(CLI::App* cmd, SgnsConfig& cfg) {
    cmd->add_option("--dim", cfg.dim, "embedding dimension");
    cmd->add_option("--window", cfg.window, "context window");
    cmd->add_option("--negatives", cfg.negatives, "negative samples per pair");
    cmd->add_option("--epochs", cfg.epochs, "training epochs");
    cmd->add_option("--lr", cfg.initial_lr, "initial learning rate");
    cmd->add_option("--min-count", cfg.min_count, "minimum token frequency");
    cmd->add_option("--seed", cfg.seed, "rng seed");
    cmd->add_option("--threads", cfg.threads, "worker threads (1 = deterministic)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"legal citation-network similarity toolkit"};
    app.require_subcommand(1);

    ParseArgs parse_args;
    auto* parse_cmd = app.add_subcommand("parse", "normalize a corpus file, extracting statute citations");
    parse_cmd->add_option("--corpus", parse_args.corpus, "input JSON-lines corpus")->required();
    parse_cmd->add_option("--registry", parse_args.registry, "act registry TSV");
    parse_cmd->add_option("--out", parse_args.out, "normalized corpus output")->required();
    parse_cmd->add_option("--report", parse_args.report, "diagnostics output");

    BuildArgs build_args;
    auto* build_cmd = app.add_subcommand("build-net", "build the citation network from a corpus");
    build_cmd->add_option("--corpus", build_args.corpus)->required();
    build_cmd->add_option("--out", build_args.out)->required();
    build_cmd->add_option("--network", build_args.network, "pcnet|hierspcnet");
    build_cmd->add_option("--report", build_args.report);

    std::string stats_graph;
    auto* stats_cmd = app.add_subcommand("stats", "print graph statistics");
    stats_cmd->add_option("--graph", stats_graph)->required();

    ClassicArgs classic_args;
    auto* classic_cmd = app.add_subcommand("classic-sim", "classic network similarity measures");
    classic_cmd->add_option("--graph", classic_args.graph)->required();
    classic_cmd->add_option("--pairs", classic_args.pairs)->required();
    classic_cmd->add_option("--measure", classic_args.measure, "bibcoupling|cocitation|dispersion");
    classic_cmd->add_option("--network", classic_args.network, "pcnet|hierspcnet");
    classic_cmd->add_option("--out", classic_args.out);

    WalkArgs walk_args;
    auto* walk_cmd = app.add_subcommand("walk", "generate random walks");
    walk_cmd->add_option("--graph", walk_args.graph)->required();
    walk_cmd->add_option("--policy", walk_args.policy, "uniform|icf");
    walk_cmd->add_option("--schemas", walk_args.schemas, "builtin or comma-separated metapath labels");
    walk_cmd->add_option("--walks-per-root", walk_args.walks_per_root);
    walk_cmd->add_option("--length", walk_args.length);
    walk_cmd->add_option("--seed", walk_args.seed);
    walk_cmd->add_option("--out", walk_args.out)->required();
    walk_cmd->add_option("--provenance", walk_args.provenance);
    walk_cmd->add_flag("--drop-truncated", walk_args.drop_truncated, "discard dead-ended walk prefixes");
    walk_cmd->add_flag("--homogeneous", walk_args.homogeneous, "type-agnostic uniform walks");
    walk_cmd->add_option("--threads", walk_args.threads);

    NetEmbArgs net_args;
    auto* net_cmd = app.add_subcommand("train-net-emb", "skip-gram embeddings over a walk corpus");
    net_cmd->add_option("--corpus", net_args.corpus)->required();
    net_cmd->add_option("--graph", net_args.graph, "graph for node id mapping")->required();
    net_cmd->add_option("--out", net_args.out)->required();
    add_sgns_flags(net_cmd, net_args.cfg);

    TextEmbArgs text_args;
    text_args.cfg.min_count = 5;
    auto* text_cmd = app.add_subcommand("train-text-emb", "paragraph vectors over case documents");
    text_cmd->add_option("--corpus", text_args.corpus)->required();
    text_cmd->add_option("--out", text_args.out)->required();
    text_cmd->add_option("--stopwords", text_args.stopwords);
    text_cmd->add_option("--stemming", text_args.stemming, "off|suffix_strip");
    add_sgns_flags(text_cmd, text_args.cfg);

    auto* fuse_cmd = app.add_subcommand("fuse", "train or apply text+network fusion");
    fuse_cmd->require_subcommand(1);
    FuseTrainArgs fuse_train_args;
    auto* fuse_train_cmd = fuse_cmd->add_subcommand("train", "train a fusion model");
    fuse_train_cmd->add_option("--method", fuse_train_args.method, "nnmap|autoencoder");
    fuse_train_cmd->add_option("--text-emb", fuse_train_args.text_emb)->required();
    fuse_train_cmd->add_option("--net-emb", fuse_train_args.net_emb)->required();
    fuse_train_cmd->add_option("--out", fuse_train_args.out)->required();
    fuse_train_cmd->add_option("--exclude-pairs", fuse_train_args.exclude_pairs,
                               "pairs file; its documents are excluded from training");
    fuse_train_cmd->add_option("--epochs", fuse_train_args.cfg.epochs);
    fuse_train_cmd->add_option("--batch", fuse_train_args.cfg.batch_size);
    fuse_train_cmd->add_option("--lr", fuse_train_args.cfg.learning_rate);
    fuse_train_cmd->add_option("--weight-decay", fuse_train_args.cfg.weight_decay);
    fuse_train_cmd->add_option("--seed", fuse_train_args.cfg.seed);
    fuse_train_cmd->add_flag("--denoise", fuse_train_args.cfg.denoise);
    fuse_train_cmd->add_option("--noise-sigma", fuse_train_args.cfg.noise_sigma);

    FuseScoreArgs fuse_score_args;
    auto* fuse_score_cmd = fuse_cmd->add_subcommand("score", "score document pairs");
    fuse_score_cmd->add_option("--method", fuse_score_args.method)->required();
    fuse_score_cmd->add_option("--pairs", fuse_score_args.pairs)->required();
    fuse_score_cmd->add_option("--text-emb", fuse_score_args.text_emb);
    fuse_score_cmd->add_option("--net-emb", fuse_score_args.net_emb);
    fuse_score_cmd->add_option("--paper2vec-emb", fuse_score_args.p2v_emb);
    fuse_score_cmd->add_option("--model", fuse_score_args.model);
    fuse_score_cmd->add_option("--graph", fuse_score_args.graph);
    fuse_score_cmd->add_option("--alpha", fuse_score_args.alpha);
    fuse_score_cmd->add_flag("--no-renorm", fuse_score_args.no_renorm, "skip re-normalizing mapped embeddings");
    fuse_score_cmd->add_option("--out", fuse_score_args.out);

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate predicted scores against expert scores");
    eval_cmd->add_option("--pairs", eval_args.pairs)->required();
    eval_cmd->add_option("--scores", eval_args.scores)->required();
    eval_cmd->add_option("--weights", eval_args.weights, "sch1|sch2");
    eval_cmd->add_option("--nd", eval_args.nd);
    eval_cmd->add_option("--nc", eval_args.nc);
    eval_cmd->add_option("--text-emb", eval_args.text_emb);
    eval_cmd->add_option("--corpus", eval_args.corpus);
    eval_cmd->add_option("--sch2-samples", eval_args.sch2_samples);
    eval_cmd->add_option("--seed", eval_args.seed);
    eval_cmd->add_option("--out", eval_args.out);

    RecommendArgs rec_args;
    auto* rec_cmd = app.add_subcommand("recommend", "top-k uncited similar documents");
    rec_cmd->add_option("--graph", rec_args.graph)->required();
    rec_cmd->add_option("--method", rec_args.method)->required();
    rec_cmd->add_option("--source", rec_args.source)->required();
    rec_cmd->add_option("--k", rec_args.k);
    rec_cmd->add_option("--text-emb", rec_args.text_emb);
    rec_cmd->add_option("--net-emb", rec_args.net_emb);
    rec_cmd->add_option("--paper2vec-emb", rec_args.p2v_emb);
    rec_cmd->add_option("--model", rec_args.model);
    rec_cmd->add_option("--alpha", rec_args.alpha);

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus with planted communities");
    synth_cmd->add_option("--out-dir", synth_args.out_dir)->required();
    synth_cmd->add_option("--communities", synth_args.spec.communities);
    synth_cmd->add_option("--docs", synth_args.spec.docs_per_community);
    synth_cmd->add_option("--acts", synth_args.spec.acts_per_community);
    synth_cmd->add_option("--sections", synth_args.spec.sections_per_act);
    synth_cmd->add_option("--statute-cites", synth_args.spec.statute_cites_per_doc);
    synth_cmd->add_option("--doc-cites", synth_args.spec.doc_cites_per_doc);
    synth_cmd->add_option("--noise", synth_args.spec.cross_noise);
    synth_cmd->add_option("--vocab", synth_args.spec.vocab_per_community);
    synth_cmd->add_option("--shared-vocab", synth_args.spec.shared_vocab);
    synth_cmd->add_option("--tokens", synth_args.spec.tokens_per_doc);
    synth_cmd->add_option("--seed", synth_args.spec.seed);

    PipelineArgs pipe_args;
    auto* pipe_cmd = app.add_subcommand("pipeline", "run the full pipeline from a config file");
    pipe_cmd->add_option("--config", pipe_args.config, "key = value config file");
    pipe_cmd->add_option("--set", pipe_args.overrides, "config overrides (key=value)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*parse_cmd) cmd_parse(parse_args);
        else if (*build_cmd) cmd_build(build_args);
        else if (*stats_cmd) cmd_stats(stats_graph);
        else if (*classic_cmd) cmd_classic(classic_args);
        else if (*walk_cmd) cmd_walk(walk_args);
        else if (*net_cmd) cmd_train_net(net_args);
        else if (*text_cmd) cmd_train_text(text_args);
        else if (*fuse_train_cmd && *fuse_cmd) cmd_fuse_train(fuse_train_args);
        else if (*fuse_score_cmd && *fuse_cmd) cmd_fuse_score(fuse_score_args);
        else if (*eval_cmd) cmd_eval(eval_args);
        else if (*rec_cmd) cmd_recommend(rec_args);
        else if (*synth_cmd) cmd_synth(synth_args);
        else if (*pipe_cmd) cmd_pipeline(pipe_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
