#include "lexsim/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include "lexsim/classic.hpp"
#include "lexsim/corpus.hpp"
#include "lexsim/walker.hpp"

namespace lexsim {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

namespace {

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw Error("invalid boolean value: " + v);
}

} // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) {
    if (key == "corpus") corpus_path = value;
    else if (key == "registry") registry_path = value;
    else if (key == "pairs") pairs_path = value;
    else if (key == "out_dir") out_dir = value;
    else if (key == "method") method = value;
    else if (key == "network") network = value;
    else if (key == "walks_per_root") walks_per_root = std::stoi(value);
    else if (key == "walk_length") walk_length = std::stoi(value);
    else if (key == "drop_truncated") drop_truncated = parse_bool(value);
    else if (key == "dim") dim = std::stoi(value);
    else if (key == "window") window = std::stoi(value);
    else if (key == "negatives") negatives = std::stoi(value);
    else if (key == "net_epochs") net_epochs = std::stoi(value);
    else if (key == "text_epochs") text_epochs = std::stoi(value);
    else if (key == "net_min_count") net_min_count = std::stoi(value);
    else if (key == "text_min_count") text_min_count = std::stoi(value);
    else if (key == "sgns_lr") sgns_lr = std::stod(value);
    else if (key == "stopword_file") stopword_file = value;
    else if (key == "stemming") stemming = value;
    else if (key == "paper2vec_threshold") paper2vec_threshold = std::stod(value);
    else if (key == "alpha") alpha = std::stod(value);
    else if (key == "renorm_mapped") renorm_mapped = parse_bool(value);
    else if (key == "fusion_epochs") fusion_epochs = std::stoi(value);
    else if (key == "fusion_batch") fusion_batch = std::stoi(value);
    else if (key == "fusion_lr") fusion_lr = std::stod(value);
    else if (key == "weight_decay") weight_decay = std::stod(value);
    else if (key == "denoise") denoise = parse_bool(value);
    else if (key == "noise_sigma") noise_sigma = std::stod(value);
    else if (key == "weights") weights = value;
    else if (key == "nd") nd = std::stoll(value);
    else if (key == "nc") nc = std::stoll(value);
    else if (key == "sch2_samples") sch2_samples = std::stoi(value);
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "cache") cache = parse_bool(value);
    else if (key == "text_infer_eval") text_infer_eval = parse_bool(value);
    else if (key == "threads") threads = std::stoi(value);
    else throw Error("unknown config key: " + key);
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    PipelineConfig cfg;
    std::istringstream in(io::read_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = str::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) throw Error(path + ":" + std::to_string(lineno) + ": expected key = value");
        cfg.set(str::trim(t.substr(0, eq)), str::trim(t.substr(eq + 1)));
    }
    return cfg;
}

std::string PipelineConfig::echo() const {
    std::ostringstream os;
    os << "method=" << method << " network=" << network << " walks_per_root=" << walks_per_root
       << " walk_length=" << walk_length << " drop_truncated=" << drop_truncated << " dim=" << dim
       << " window=" << window << " negatives=" << negatives << " net_epochs=" << net_epochs
       << " text_epochs=" << text_epochs << " net_min_count=" << net_min_count
       << " text_min_count=" << text_min_count << " sgns_lr=" << str::format_double(sgns_lr)
       << " stemming=" << stemming << " paper2vec_threshold=" << str::format_double(paper2vec_threshold)
       << " alpha=" << str::format_double(alpha) << " renorm_mapped=" << renorm_mapped
       << " fusion_epochs=" << fusion_epochs << " fusion_batch=" << fusion_batch
       << " fusion_lr=" << str::format_double(fusion_lr) << " weight_decay=" << str::format_double(weight_decay)
       << " denoise=" << denoise << " noise_sigma=" << str::format_double(noise_sigma) << " weights=" << weights
       << " nd=" << nd << " nc=" << nc << " sch2_samples=" << sch2_samples << " seed=" << seed
       << " text_infer_eval=" << text_infer_eval;
    return os.str();
}

// ---------------------------------------------------------------------------
// Stage plumbing
// ---------------------------------------------------------------------------

namespace {

struct MethodPlan {
    Method base = Method::text;
    bool needs_text = false;
    bool needs_net = false;
    bool needs_paper2vec = false;
    bool needs_mapnet = false;
    bool needs_autoencoder = false;
    bool needs_graph = false;
    bool metapath = true; // false = homogeneous uniform walks
    WalkPolicy policy = WalkPolicy::icf;
};

MethodPlan plan_method(const PipelineConfig& cfg) {
    const std::string& m = cfg.method;
    MethodPlan p;
    if (m == "doc2vec" || m == "text") {
        p.base = Method::text;
        p.needs_text = true;
    } else if (m == "hier_spcnet_m2v") {
        p.base = Method::network;
        p.needs_net = true;
        p.policy = WalkPolicy::uniform;
    } else if (m == "hier_spcnet_icf_m2v") {
        p.base = Method::network;
        p.needs_net = true;
        p.policy = WalkPolicy::icf;
    } else if (m == "deepwalk") {
        p.base = Method::network;
        p.needs_net = true;
        p.metapath = false;
        p.policy = WalkPolicy::uniform;
    } else if (m == "paper2vec") {
        p.base = Method::paper2vec;
        p.needs_text = true;
        p.needs_paper2vec = true;
    } else if (m == "bibcoupling" || m == "cocitation" || m == "dispersion") {
        p.base = method_from_string(m);
        p.needs_graph = true;
    } else {
        p.base = method_from_string(m);
        switch (p.base) {
            case Method::value_average:
            case Method::value_max:
            case Method::emb_average:
            case Method::emb_max:
            case Method::emb_conc:
                p.needs_text = p.needs_net = true;
                break;
            case Method::nn_map_conc:
            case Method::nn_map_wtd_conc:
                p.needs_text = p.needs_net = true;
                p.needs_mapnet = true;
                break;
            case Method::autoencoder:
                p.needs_text = p.needs_net = true;
                p.needs_autoencoder = true;
                break;
            default:
                throw Error("method '" + m + "' is not runnable through the pipeline");
        }
    }
    return p;
}

uint64_t content_hash(const std::string& path) {
    return fnv1a64(io::read_file(path));
}

std::string key_string(uint64_t key) {
    std::ostringstream os;
    os << std::hex << key;
    return os.str();
}

// A stage is fresh when its artifact and key stamp both exist and match.
bool stage_fresh(const PipelineConfig& cfg, const std::string& artifact, uint64_t key) {
    if (!cfg.cache) return false;
    std::string stamp = artifact + ".key";
    if (!io::file_exists(artifact) || !io::file_exists(stamp)) return false;
    return str::trim(io::read_file(stamp)) == key_string(key);
}

void stamp_stage(const std::string& artifact, uint64_t key) {
    io::write_file(artifact + ".key", key_string(key) + "\n");
}

class DirLock {
public:
    explicit DirLock(const std::string& dir) : path_(dir + "/.lock") {
        fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd_ < 0) throw Error("output directory is locked by another run: " + path_);
    }
    ~DirLock() {
        if (fd_ >= 0) {
            ::close(fd_);
            ::unlink(path_.c_str());
        }
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    std::string path_;
    int fd_ = -1;
};

std::set<std::string> eval_doc_ids(const PairDataset& pairs) {
    std::set<std::string> ids;
    for (const auto& r : pairs.rows) {
        ids.insert(r.id_a);
        ids.insert(r.id_b);
    }
    return ids;
}

// Documents isolated in the walked graph never enter a walk and so never get
// a trained vector; they receive a deterministic placeholder direction so the
// scoring stage can still cover every pair.
void ensure_document_coverage(EmbeddingTable& table, const HeteroGraph& g, uint64_t seed) {
    for (uint32_t n : g.documents()) {
        const std::string& id = g.id_of(n);
        if (table.contains(id)) continue;
        Rng rng(hash_combine(hash_combine(seed, fnv1a64("placeholder")), fnv1a64(id)));
        std::vector<double> v(table.dim());
        for (auto& x : v) x = rng.next_gaussian();
        table.insert(id, v);
    }
}

// Unordered document pairs connected by at least one citation edge.
int64_t count_cited_doc_pairs(const HeteroGraph& g) {
    std::set<std::pair<uint32_t, uint32_t>> pairs;
    for (uint32_t n : g.documents())
        for (uint32_t dst : g.out_neighbors(n, EdgeKind::citation, NodeType::document))
            pairs.emplace(std::min(n, dst), std::max(n, dst));
    return static_cast<int64_t>(pairs.size());
}

} // namespace

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

EvalReport run_pipeline(const PipelineConfig& cfg) {
    if (cfg.corpus_path.empty() || cfg.pairs_path.empty() || cfg.out_dir.empty())
        throw Error("pipeline config requires corpus, pairs and out_dir");
    fs::create_directories(cfg.out_dir);
    DirLock lock(cfg.out_dir);

    const MethodPlan plan = plan_method(cfg);
    const std::string out = cfg.out_dir;
    auto stage_error = [](const std::string& stage, const std::string& what) {
        return Error("stage " + stage + " failed: " + what);
    };

    if (!io::file_exists(cfg.corpus_path))
        throw stage_error("normalize", "cannot open corpus: " + cfg.corpus_path);
    if (!cfg.registry_path.empty() && !io::file_exists(cfg.registry_path))
        throw stage_error("normalize", "cannot open act registry: " + cfg.registry_path);
    if (!io::file_exists(cfg.pairs_path))
        throw stage_error("eval", "cannot open pairs file: " + cfg.pairs_path);

    PairDataset pairs = PairDataset::load_tsv(cfg.pairs_path);
    std::set<std::string> eval_ids = eval_doc_ids(pairs);
    std::string eval_ids_joined;
    for (const auto& id : eval_ids) eval_ids_joined += id + "\n";

    // -- normalize ----------------------------------------------------------
    const std::string norm_path = out + "/corpus_normalized.jsonl";
    {
        uint64_t key = hash_combine(fnv1a64("normalize-v1"), content_hash(cfg.corpus_path));
        if (!cfg.registry_path.empty()) key = hash_combine(key, content_hash(cfg.registry_path));
        if (!stage_fresh(cfg, norm_path, key)) {
            try {
                Corpus corpus = parse_corpus(cfg.corpus_path);
                if (!cfg.registry_path.empty())
                    fill_missing_citations(corpus, ActRegistry::load_tsv(cfg.registry_path));
                write_corpus(corpus, norm_path);
            } catch (const Error& e) {
                throw stage_error("normalize", e.what());
            }
            stamp_stage(norm_path, key);
        }
    }

    // -- graph --------------------------------------------------------------
    const std::string graph_path = out + "/graph.txt";
    {
        uint64_t key = hash_combine(fnv1a64("graph-v1"), content_hash(norm_path));
        if (!stage_fresh(cfg, graph_path, key)) {
            try {
                Corpus corpus = parse_corpus(norm_path);
                BuildReport report;
                HeteroGraph g = HeteroGraph::build(corpus, &report);
                g.save(graph_path);
                io::write_file(out + "/build_report.txt", report.summary() + "\n");
            } catch (const Error& e) {
                throw stage_error("graph", e.what());
            }
            stamp_stage(graph_path, key);
        }
    }

    // Classic measures and deepwalk respect the network selection.
    const bool wants_pcnet = cfg.network == "pcnet" && (plan.needs_graph || !plan.metapath);
    const std::string active_graph_path = wants_pcnet ? out + "/pcnet.txt" : graph_path;
    if (wants_pcnet) {
        uint64_t key = hash_combine(fnv1a64("pcnet-v1"), content_hash(graph_path));
        if (!stage_fresh(cfg, active_graph_path, key)) {
            try {
                pcnet_view(HeteroGraph::load(graph_path)).save(active_graph_path);
            } catch (const Error& e) {
                throw stage_error("pcnet", e.what());
            }
            stamp_stage(active_graph_path, key);
        }
    }

    // -- walks + network embedding -----------------------------------------
    const std::string walks_path = out + "/walks.txt";
    const std::string net_emb_path = out + "/net_emb.txt";
    if (plan.needs_net) {
        {
            std::ostringstream cfgkey;
            cfgkey << "walks-v1 policy=" << to_string(plan.policy) << " metapath=" << plan.metapath
                   << " wpr=" << cfg.walks_per_root << " len=" << cfg.walk_length
                   << " drop=" << cfg.drop_truncated << " seed=" << cfg.seed;
            uint64_t key = hash_combine(fnv1a64(cfgkey.str()), content_hash(active_graph_path));
            if (!stage_fresh(cfg, walks_path, key)) {
                try {
                    HeteroGraph g = HeteroGraph::load(active_graph_path);
                    WalkConfig wc;
                    wc.walks_per_root = cfg.walks_per_root;
                    wc.walk_length = cfg.walk_length;
                    wc.policy = plan.policy;
                    wc.seed = cfg.seed;
                    wc.drop_truncated = cfg.drop_truncated;
                    wc.threads = cfg.threads;
                    if (plan.policy == WalkPolicy::icf) g.compute_icf();
                    WalkCorpus walks = plan.metapath ? generate_metapath_walks(g, builtin_metapaths(), wc)
                                                     : generate_uniform_walks(g, wc);
                    walks.save(walks_path, out + "/walks_provenance.tsv");
                } catch (const Error& e) {
                    throw stage_error("walk", e.what());
                }
                stamp_stage(walks_path, key);
            }
        }
        {
            std::ostringstream cfgkey;
            // threads > 1 switches sgns to hogwild updates, which are not
            // bit-reproducible, so the thread count is part of the key.
            cfgkey << "netemb-v1 dim=" << cfg.dim << " window=" << cfg.window << " neg=" << cfg.negatives
                   << " epochs=" << cfg.net_epochs << " lr=" << cfg.sgns_lr << " minc=" << cfg.net_min_count
                   << " seed=" << cfg.seed << " threads=" << cfg.threads;
            uint64_t key = hash_combine(fnv1a64(cfgkey.str()),
                                        hash_combine(content_hash(walks_path), content_hash(active_graph_path)));
            if (!stage_fresh(cfg, net_emb_path, key)) {
                try {
                    HeteroGraph g = HeteroGraph::load(active_graph_path);
                    WalkCorpus walks = WalkCorpus::load(walks_path, &g);
                    SgnsConfig sc;
                    sc.dim = cfg.dim;
                    sc.window = cfg.window;
                    sc.negatives = cfg.negatives;
                    sc.epochs = cfg.net_epochs;
                    sc.initial_lr = cfg.sgns_lr;
                    sc.min_count = cfg.net_min_count;
                    sc.seed = cfg.seed;
                    sc.threads = cfg.threads;
                    EmbeddingTable emb = train_skipgram(walks, sc);
                    ensure_document_coverage(emb, g, cfg.seed);
                    emb.save(net_emb_path);
                } catch (const Error& e) {
                    throw stage_error("train-net-emb", e.what());
                }
                stamp_stage(net_emb_path, key);
            }
        }
    }

    // -- text embedding ------------------------------------------------------
    const std::string text_emb_path = out + "/text_emb.txt";
    const bool needs_text = plan.needs_text || cfg.weights == "sch2";
    if (needs_text) {
        std::ostringstream cfgkey;
        cfgkey << "textemb-v1 dim=" << cfg.dim << " neg=" << cfg.negatives << " epochs=" << cfg.text_epochs
               << " lr=" << cfg.sgns_lr << " minc=" << cfg.text_min_count << " stem=" << cfg.stemming
               << " infer_eval=" << cfg.text_infer_eval << " seed=" << cfg.seed;
        uint64_t key = hash_combine(fnv1a64(cfgkey.str()), content_hash(norm_path));
        if (!cfg.stopword_file.empty()) key = hash_combine(key, content_hash(cfg.stopword_file));
        if (cfg.text_infer_eval) key = hash_combine(key, fnv1a64(eval_ids_joined));
        if (!stage_fresh(cfg, text_emb_path, key)) {
            try {
                Corpus corpus = parse_corpus(norm_path);
                TextPreprocessConfig pc;
                pc.stopword_file = cfg.stopword_file;
                if (cfg.stemming == "suffix_strip")
                    pc.stemming = TextPreprocessConfig::Stemming::suffix_strip;
                else if (cfg.stemming != "off")
                    throw Error("invalid stemming mode: " + cfg.stemming);
                TextPreprocessor pre(pc);
                SgnsConfig sc;
                sc.dim = cfg.dim;
                sc.negatives = cfg.negatives;
                sc.epochs = cfg.text_epochs;
                sc.initial_lr = cfg.sgns_lr;
                sc.min_count = cfg.text_min_count;
                sc.seed = cfg.seed;
                if (cfg.text_infer_eval) {
                    std::vector<CaseDocument> train_docs, held_out;
                    for (const auto& d : corpus.cases)
                        (eval_ids.count(d.id) ? held_out : train_docs).push_back(d);
                    if (train_docs.empty()) throw Error("no documents left for text training");
                    ParagraphVectorModel model = train_paragraph_vectors(train_docs, pre, sc);
                    EmbeddingTable table(cfg.dim);
                    for (const auto& d : train_docs) table.insert(d.id, model.doc_vectors().at(d.id));
                    for (const auto& d : held_out)
                        table.insert(d.id, model.infer(pre.tokens(d.text), sc.epochs,
                                                       hash_combine(cfg.seed, fnv1a64(d.id))));
                    table.save(text_emb_path);
                } else {
                    train_paragraph_vectors(corpus.cases, pre, sc).doc_vectors().save(text_emb_path);
                }
            } catch (const Error& e) {
                throw stage_error("train-text-emb", e.what());
            }
            stamp_stage(text_emb_path, key);
        }
    }

    // -- paper2vec ------------------------------------------------------------
    const std::string p2v_emb_path = out + "/paper2vec_emb.txt";
    if (plan.needs_paper2vec) {
        std::ostringstream cfgkey;
        cfgkey << "paper2vec-v1 thr=" << cfg.paper2vec_threshold << " wpr=" << cfg.walks_per_root
               << " len=" << cfg.walk_length << " dim=" << cfg.dim << " window=" << cfg.window
               << " neg=" << cfg.negatives << " epochs=" << cfg.net_epochs << " seed=" << cfg.seed
               << " threads=" << cfg.threads;
        uint64_t key = hash_combine(fnv1a64(cfgkey.str()), content_hash(text_emb_path));
        if (!stage_fresh(cfg, p2v_emb_path, key)) {
            try {
                EmbeddingTable text = EmbeddingTable::load(text_emb_path);
                HeteroGraph tg = build_text_similarity_graph(text, cfg.paper2vec_threshold);
                tg.save(out + "/paper2vec_graph.txt");
                WalkConfig wc;
                wc.walks_per_root = cfg.walks_per_root;
                wc.walk_length = cfg.walk_length;
                wc.seed = cfg.seed;
                wc.threads = cfg.threads;
                WalkCorpus walks = generate_uniform_walks(tg, wc);
                SgnsConfig sc;
                sc.dim = cfg.dim;
                sc.window = cfg.window;
                sc.negatives = cfg.negatives;
                sc.epochs = cfg.net_epochs;
                sc.initial_lr = cfg.sgns_lr;
                sc.min_count = 1;
                sc.seed = cfg.seed;
                sc.threads = cfg.threads;
                EmbeddingTable emb = train_skipgram(walks, sc);
                ensure_document_coverage(emb, tg, cfg.seed);
                emb.save(p2v_emb_path);
            } catch (const Error& e) {
                throw stage_error("paper2vec", e.what());
            }
            stamp_stage(p2v_emb_path, key);
        }
    }

    // -- fusion model ----------------------------------------------------------
    const std::string model_path = out + "/model.txt";
    if (plan.needs_mapnet || plan.needs_autoencoder) {
        std::ostringstream cfgkey;
        cfgkey << "fusion-v1 kind=" << (plan.needs_mapnet ? "mapnet" : "autoencoder")
               << " epochs=" << cfg.fusion_epochs << " batch=" << cfg.fusion_batch << " lr=" << cfg.fusion_lr
               << " wd=" << cfg.weight_decay << " denoise=" << cfg.denoise << " sigma=" << cfg.noise_sigma
               << " seed=" << cfg.seed;
        uint64_t key = hash_combine(fnv1a64(cfgkey.str()),
                                    hash_combine(content_hash(text_emb_path), content_hash(net_emb_path)));
        key = hash_combine(key, fnv1a64(eval_ids_joined));
        if (!stage_fresh(cfg, model_path, key)) {
            try {
                EmbeddingTable text = EmbeddingTable::load(text_emb_path);
                EmbeddingTable net = EmbeddingTable::load(net_emb_path);
                FusionTrainConfig fc;
                fc.learning_rate = cfg.fusion_lr;
                fc.weight_decay = cfg.weight_decay;
                fc.epochs = cfg.fusion_epochs;
                fc.batch_size = cfg.fusion_batch;
                fc.seed = cfg.seed;
                fc.alpha = cfg.alpha;
                fc.denoise = cfg.denoise;
                fc.noise_sigma = cfg.noise_sigma;
                // Keep evaluation documents out of the self-supervised pool,
                // unless that would empty it (labels spanning the whole
                // corpus), in which case training falls back to all documents.
                size_t eligible = 0;
                for (const auto& id : text.ids())
                    if (net.contains(id) && !eval_ids.count(id)) ++eligible;
                if (eligible >= 2) fc.exclude_ids.assign(eval_ids.begin(), eval_ids.end());
                if (plan.needs_mapnet)
                    train_map_net(text, net, fc).model.save(model_path);
                else
                    train_autoencoder(text, net, fc).model.save(model_path);
            } catch (const Error& e) {
                throw stage_error("fuse-train", e.what());
            }
            stamp_stage(model_path, key);
        }
    }

    // -- scores -----------------------------------------------------------------
    const std::string scores_path = out + "/scores.tsv";
    {
        uint64_t key = hash_combine(fnv1a64("scores-v1 method=" + cfg.method + " alpha=" +
                                            str::format_double(cfg.alpha) + " renorm=" +
                                            std::to_string(cfg.renorm_mapped)),
                                    content_hash(cfg.pairs_path));
        if (plan.needs_text) key = hash_combine(key, content_hash(text_emb_path));
        if (plan.needs_net) key = hash_combine(key, content_hash(net_emb_path));
        if (plan.needs_paper2vec) key = hash_combine(key, content_hash(p2v_emb_path));
        if (plan.needs_mapnet || plan.needs_autoencoder) key = hash_combine(key, content_hash(model_path));
        if (plan.needs_graph) key = hash_combine(key, content_hash(active_graph_path));
        if (!stage_fresh(cfg, scores_path, key)) {
            try {
                EmbeddingTable text, net, p2v;
                MapNet map;
                BimodalAutoencoder ae;
                HeteroGraph graph;
                SimilarityContext ctx;
                ctx.alpha = cfg.alpha;
                ctx.renorm_mapped = cfg.renorm_mapped;
                if (plan.needs_text) ctx.text = &(text = EmbeddingTable::load(text_emb_path));
                if (plan.needs_net) ctx.net = &(net = EmbeddingTable::load(net_emb_path));
                if (plan.needs_paper2vec) ctx.paper2vec = &(p2v = EmbeddingTable::load(p2v_emb_path));
                if (plan.needs_mapnet) ctx.map = &(map = MapNet::load(model_path));
                if (plan.needs_autoencoder) ctx.autoencoder = &(ae = BimodalAutoencoder::load(model_path));
                if (plan.needs_graph) ctx.graph = &(graph = HeteroGraph::load(active_graph_path));
                std::vector<std::pair<std::string, std::string>> pair_ids;
                for (const auto& r : pairs.rows) pair_ids.emplace_back(r.id_a, r.id_b);
                std::vector<double> scores = score_pairs(plan.base, ctx, pair_ids);
                std::ostringstream os;
                for (size_t i = 0; i < pair_ids.size(); ++i)
                    os << pair_ids[i].first << '\t' << pair_ids[i].second << '\t' << str::format_double(scores[i])
                       << '\n';
                io::write_file(scores_path, os.str());
            } catch (const Error& e) {
                throw stage_error("score", e.what());
            }
            stamp_stage(scores_path, key);
        }
    }

    // -- report ------------------------------------------------------------------
    EvalReport report;
    try {
        pairs.attach_scores_tsv(scores_path);
        std::optional<ClassWeights> weights;
        if (cfg.weights == "sch1") {
            int64_t nd = cfg.nd, nc = cfg.nc;
            if (nd == 0) {
                HeteroGraph g = HeteroGraph::load(graph_path);
                nd = static_cast<int64_t>(g.documents().size());
                nc = count_cited_doc_pairs(g);
            }
            weights = derive_weights_citation(nd, nc);
        } else if (cfg.weights == "sch2") {
            EmbeddingTable text = EmbeddingTable::load(text_emb_path);
            Corpus corpus = parse_corpus(norm_path);
            std::map<std::string, std::vector<std::string>> by_type;
            for (const auto& d : corpus.cases) by_type[to_string(d.case_type)].push_back(d.id);
            std::vector<std::pair<std::string, std::vector<std::string>>> strata(by_type.begin(), by_type.end());
            weights = derive_weights_textsim(text, strata, 0.5, static_cast<size_t>(cfg.sch2_samples), cfg.seed);
        } else if (!cfg.weights.empty()) {
            throw Error("unknown weights scheme: " + cfg.weights);
        }
        report = evaluate(pairs, weights, cfg.method);
        report.config_echo = cfg.echo();
        io::write_file(out + "/report.json", report.to_json());
    } catch (const Error& e) {
        throw stage_error("eval", e.what());
    }
    return report;
}

} // namespace lexsim
