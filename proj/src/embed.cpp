#include "lexsim/embed.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace lexsim {

// ---------------------------------------------------------------------------
// EmbeddingTable
// ---------------------------------------------------------------------------

EmbeddingTable::EmbeddingTable(int dim) : dim_(dim) {
    if (dim <= 0) throw Error("embedding dim must be positive");
}

void EmbeddingTable::insert(const std::string& id, std::span<const double> vec) {
    if (dim_ == 0) dim_ = static_cast<int>(vec.size());
    if (static_cast<int>(vec.size()) != dim_)
        throw Error("embedding dim mismatch for '" + id + "': got " + std::to_string(vec.size()) + ", table dim " +
                    std::to_string(dim_));
    double sq = 0.0;
    for (double v : vec) {
        if (!std::isfinite(v)) throw Error("non-finite embedding entry for '" + id + "'");
        sq += v * v;
    }
    auto [it, fresh] = index_.emplace(id, static_cast<uint32_t>(ids_.size()));
    if (!fresh) throw Error("duplicate embedding id: " + id);
    ids_.push_back(id);
    data_.insert(data_.end(), vec.begin(), vec.end());
    norms_.push_back(std::sqrt(sq));
}

std::span<const double> EmbeddingTable::at(const std::string& id) const {
    const double* p = find(id);
    if (!p) throw Error("embedding id not found: " + id);
    return {p, static_cast<size_t>(dim_)};
}

const double* EmbeddingTable::find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : data_.data() + static_cast<size_t>(it->second) * dim_;
}

double EmbeddingTable::norm(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error("embedding id not found: " + id);
    return norms_[it->second];
}

void EmbeddingTable::save(const std::string& path) const {
    std::ostringstream out;
    out << ids_.size() << ' ' << dim_ << '\n';
    for (size_t i = 0; i < ids_.size(); ++i) {
        out << ids_[i];
        const double* row = data_.data() + i * dim_;
        for (int d = 0; d < dim_; ++d) out << ' ' << str::format_double(row[d]);
        out << '\n';
    }
    io::write_file(path, out.str());
}

EmbeddingTable EmbeddingTable::load(const std::string& path, int expected_dim) {
    std::istringstream in(io::read_file(path));
    size_t count = 0;
    int dim = 0;
    std::string header;
    if (!std::getline(in, header)) throw Error(path + ": empty embedding file");
    {
        std::istringstream hs(header);
        if (!(hs >> count >> dim) || dim <= 0) throw Error(path + ": bad embedding header: " + header);
    }
    if (expected_dim > 0 && dim != expected_dim)
        throw Error(path + ": embedding dim " + std::to_string(dim) + " does not match expected " +
                    std::to_string(expected_dim));
    EmbeddingTable table(dim);
    std::string line;
    std::vector<double> row(dim);
    size_t rows = 0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (str::trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string id;
        if (!(ls >> id)) throw Error(path + ":" + std::to_string(lineno) + ": bad embedding line");
        for (int d = 0; d < dim; ++d)
            if (!(ls >> row[d])) throw Error(path + ":" + std::to_string(lineno) + ": expected " +
                                             std::to_string(dim) + " values for '" + id + "'");
        double extra;
        if (ls >> extra) throw Error(path + ":" + std::to_string(lineno) + ": too many values for '" + id + "'");
        table.insert(id, row);
        ++rows;
    }
    if (rows != count)
        throw Error(path + ": header declares " + std::to_string(count) + " rows, found " + std::to_string(rows));
    return table;
}

double cosine_similarity(const EmbeddingTable& t, const std::string& a, const std::string& b, bool clamp) {
    std::span<const double> va = t.at(a), vb = t.at(b);
    double na = t.norm(a), nb = t.norm(b);
    if (na == 0.0 || nb == 0.0) throw Error("cosine_similarity: zero vector for '" + (na == 0.0 ? a : b) + "'");
    double dot = 0.0;
    for (int d = 0; d < t.dim(); ++d) dot += va[d] * vb[d];
    double cos = dot / (na * nb);
    if (cos > 1.0) cos = 1.0;
    if (cos < -1.0) cos = -1.0;
    return clamp && cos < 0.0 ? 0.0 : cos;
}

// ---------------------------------------------------------------------------
// SGNS core
// ---------------------------------------------------------------------------

namespace sgns_detail {

double pair_term(const double* input, const double* output, int dim, double label, double* grad_input,
                 double* grad_output) {
    double x = 0.0;
    for (int d = 0; d < dim; ++d) x += input[d] * output[d];
    double sig = 1.0 / (1.0 + std::exp(-x));
    double coeff = sig - label; // dL/dx
    if (grad_input)
        for (int d = 0; d < dim; ++d) grad_input[d] += coeff * output[d];
    if (grad_output)
        for (int d = 0; d < dim; ++d) grad_output[d] += coeff * input[d];
    // -log sigma(x) for positives, -log sigma(-x) for negatives; log1p keeps
    // the tails accurate at 64-bit.
    return label > 0.5 ? std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

} // namespace sgns_detail

namespace {

struct Vocab {
    std::vector<uint32_t> keep;            // surviving original token -> compact id (UINT32_MAX = dropped)
    std::vector<std::string> ids;          // compact id -> string id
    std::vector<int64_t> freq;             // compact id -> frequency
    std::vector<double> negative_cdf;      // cumulative unigram^0.75 mass
};

Vocab build_vocab(const std::vector<std::vector<uint32_t>>& sequences, const std::vector<std::string>& names,
                  int min_count) {
    std::vector<int64_t> counts(names.size(), 0);
    for (const auto& seq : sequences)
        for (uint32_t tok : seq) {
            if (tok >= counts.size()) throw Error("token index beyond corpus vocabulary");
            ++counts[tok];
        }
    // Frequency-descending order stabilizes the negative table layout.
    std::vector<uint32_t> order;
    for (uint32_t i = 0; i < counts.size(); ++i)
        if (counts[i] >= min_count && counts[i] > 0) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (counts[a] != counts[b]) return counts[a] > counts[b];
        return a < b;
    });
    Vocab v;
    v.keep.assign(counts.size(), UINT32_MAX);
    for (uint32_t c = 0; c < order.size(); ++c) {
        v.keep[order[c]] = c;
        v.ids.push_back(names[order[c]]);
        v.freq.push_back(counts[order[c]]);
    }
    v.negative_cdf.resize(v.freq.size());
    double acc = 0.0;
    for (size_t i = 0; i < v.freq.size(); ++i) {
        acc += std::pow(static_cast<double>(v.freq[i]), 0.75);
        v.negative_cdf[i] = acc;
    }
    return v;
}

uint32_t sample_negative(const std::vector<double>& cdf, Rng& rng) {
    double r = rng.next_double() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    if (it == cdf.end()) --it;
    return static_cast<uint32_t>(it - cdf.begin());
}

std::vector<double> init_input_vectors(size_t count, int dim, uint64_t seed) {
    std::vector<double> data(count * dim);
    Rng rng(hash_combine(seed, fnv1a64("sgns-init")));
    for (double& v : data) v = (rng.next_double() - 0.5) / dim;
    return data;
}

// Skip-gram pass over one sequence. Updates in and out tables in place.
// Returns (loss sum, pair count).
std::pair<double, int64_t> train_sequence(const std::vector<uint32_t>& tokens, const Vocab& vocab,
                                          std::vector<double>& in, std::vector<double>& out, const SgnsConfig& cfg,
                                          Rng& rng, double alpha, std::vector<double>& grad_buf) {
    double loss = 0.0;
    int64_t pairs = 0;
    const int dim = cfg.dim;
    std::vector<uint32_t> seq;
    seq.reserve(tokens.size());
    for (uint32_t t : tokens) {
        uint32_t c = vocab.keep[t];
        if (c != UINT32_MAX) seq.push_back(c);
    }
    for (size_t i = 0; i < seq.size(); ++i) {
        const int reduced = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(cfg.window)));
        for (int off = -reduced; off <= reduced; ++off) {
            if (off == 0) continue;
            int64_t j = static_cast<int64_t>(i) + off;
            if (j < 0 || j >= static_cast<int64_t>(seq.size())) continue;
            const uint32_t center = seq[i], context = seq[j];
            double* center_vec = in.data() + static_cast<size_t>(center) * dim;
            std::fill(grad_buf.begin(), grad_buf.end(), 0.0);
            loss += sgns_detail::pair_term(center_vec, out.data() + static_cast<size_t>(context) * dim, dim, 1.0,
                                           grad_buf.data(), nullptr);
            {
                // Output-side update for the positive example.
                double x = 0.0;
                const double* o = out.data() + static_cast<size_t>(context) * dim;
                for (int d = 0; d < dim; ++d) x += center_vec[d] * o[d];
                double coeff = (1.0 / (1.0 + std::exp(-x)) - 1.0) * alpha;
                double* om = out.data() + static_cast<size_t>(context) * dim;
                for (int d = 0; d < dim; ++d) om[d] -= coeff * center_vec[d];
            }
            for (int k = 0; k < cfg.negatives; ++k) {
                uint32_t neg = sample_negative(vocab.negative_cdf, rng);
                if (neg == context) continue;
                double* neg_vec = out.data() + static_cast<size_t>(neg) * dim;
                double x = 0.0;
                for (int d = 0; d < dim; ++d) x += center_vec[d] * neg_vec[d];
                double sig = 1.0 / (1.0 + std::exp(-x));
                loss += std::log1p(std::exp(x));
                for (int d = 0; d < dim; ++d) {
                    grad_buf[d] += sig * neg_vec[d];
                    neg_vec[d] -= alpha * sig * center_vec[d];
                }
            }
            for (int d = 0; d < dim; ++d) center_vec[d] -= alpha * grad_buf[d];
            ++pairs;
        }
    }
    return {loss, pairs};
}

} // namespace

EmbeddingTable train_skipgram(const WalkCorpus& corpus, const SgnsConfig& cfg, std::vector<double>* epoch_loss,
                              EmbeddingTable* context_vectors) {
    if (cfg.dim <= 0 || cfg.window < 1 || cfg.negatives < 1 || cfg.epochs < 1)
        throw Error("invalid sgns config");
    Vocab vocab = build_vocab(corpus.sequences, corpus.vocab, cfg.min_count);
    if (vocab.ids.empty()) throw Error("train_skipgram: empty corpus after min_count filtering");

    std::vector<double> in = init_input_vectors(vocab.ids.size(), cfg.dim, cfg.seed);
    std::vector<double> out(vocab.ids.size() * static_cast<size_t>(cfg.dim), 0.0);

    int64_t total_tokens = 0;
    for (const auto& seq : corpus.sequences) total_tokens += static_cast<int64_t>(seq.size());
    const int64_t schedule = std::max<int64_t>(1, total_tokens * cfg.epochs);

    if (epoch_loss) epoch_loss->clear();
    std::atomic<int64_t> processed{0};

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss_sum = 0.0;
        int64_t pair_count = 0;
        auto run_range = [&](size_t begin, size_t end, uint64_t stream, double* loss_acc, int64_t* pairs_acc) {
            // Streams restart per epoch: identical window and negative draws
            // across epochs make per-epoch losses directly comparable.
            Rng rng(hash_combine(cfg.seed, stream));
            std::vector<double> grad_buf(cfg.dim, 0.0);
            for (size_t s = begin; s < end; ++s) {
                int64_t done = processed.fetch_add(static_cast<int64_t>(corpus.sequences[s].size()));
                double alpha = cfg.initial_lr * (1.0 - static_cast<double>(done) / static_cast<double>(schedule));
                if (alpha < cfg.initial_lr * 1e-4) alpha = cfg.initial_lr * 1e-4;
                auto [l, p] = train_sequence(corpus.sequences[s], vocab, in, out, cfg, rng, alpha, grad_buf);
                *loss_acc += l;
                *pairs_acc += p;
            }
        };
        if (cfg.threads <= 1) {
            run_range(0, corpus.sequences.size(), 0, &loss_sum, &pair_count);
        } else {
            // Hogwild: sparse unsynchronized updates, statistically equivalent
            // but not bit-reproducible.
            int n = std::min<size_t>(cfg.threads, corpus.sequences.size());
            std::vector<double> losses(n, 0.0);
            std::vector<int64_t> pairs(n, 0);
            std::vector<std::thread> pool;
            size_t chunk = (corpus.sequences.size() + n - 1) / n;
            for (int t = 0; t < n; ++t) {
                size_t b = t * chunk, e = std::min(corpus.sequences.size(), b + chunk);
                pool.emplace_back(run_range, b, e, static_cast<uint64_t>(t + 1), &losses[t], &pairs[t]);
            }
            for (auto& th : pool) th.join();
            for (int t = 0; t < n; ++t) {
                loss_sum += losses[t];
                pair_count += pairs[t];
            }
        }
        if (epoch_loss) epoch_loss->push_back(pair_count > 0 ? loss_sum / static_cast<double>(pair_count) : 0.0);
    }

    if (context_vectors) {
        *context_vectors = EmbeddingTable(cfg.dim);
        for (size_t i = 0; i < vocab.ids.size(); ++i)
            context_vectors->insert(vocab.ids[i],
                                    {out.data() + i * static_cast<size_t>(cfg.dim), static_cast<size_t>(cfg.dim)});
    }
    EmbeddingTable table(cfg.dim);
    for (size_t i = 0; i < vocab.ids.size(); ++i)
        table.insert(vocab.ids[i], {in.data() + i * static_cast<size_t>(cfg.dim), static_cast<size_t>(cfg.dim)});
    return table;
}

// ---------------------------------------------------------------------------
// Text preprocessing
// ---------------------------------------------------------------------------

TextPreprocessor::TextPreprocessor(TextPreprocessConfig cfg) : cfg_(std::move(cfg)) {
    if (!cfg_.stopword_file.empty()) {
        std::istringstream in(io::read_file(cfg_.stopword_file));
        std::string line;
        while (std::getline(in, line)) {
            std::string w = str::trim(line);
            if (!w.empty()) stopwords_.insert(cfg_.lowercase ? str::lower(w) : w);
        }
    }
}

namespace {

// Conservative suffix stripping; keeps stems of length >= 3.
std::string strip_suffix(const std::string& w) {
    static const std::string_view suffixes[] = {"ing", "ed", "ly", "es", "s"};
    for (auto suf : suffixes) {
        if (w.size() > suf.size() + 2 && std::string_view(w).substr(w.size() - suf.size()) == suf)
            return w.substr(0, w.size() - suf.size());
    }
    return w;
}

} // namespace

std::vector<std::string> TextPreprocessor::tokens(std::string_view text) const {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        std::string w = cfg_.lowercase ? str::lower(cur) : cur;
        cur.clear();
        if (stopwords_.count(w)) return;
        if (cfg_.stemming == TextPreprocessConfig::Stemming::suffix_strip) w = strip_suffix(w);
        out.push_back(std::move(w));
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            cur.push_back(c);
        else
            flush();
    }
    flush();
    return out;
}

// ---------------------------------------------------------------------------
// Paragraph vectors (distributed bag of words)
// ---------------------------------------------------------------------------

ParagraphVectorModel train_paragraph_vectors(const std::vector<CaseDocument>& docs, const TextPreprocessor& pre,
                                             const SgnsConfig& cfg, std::vector<double>* epoch_loss) {
    if (docs.empty()) throw Error("train_paragraph_vectors: no documents");
    std::vector<std::vector<std::string>> doc_tokens(docs.size());
    std::unordered_map<std::string, int64_t> counts;
    for (size_t i = 0; i < docs.size(); ++i) {
        doc_tokens[i] = pre.tokens(docs[i].text);
        if (doc_tokens[i].empty()) throw Error("document '" + docs[i].id + "' has no tokens after preprocessing");
        for (const auto& t : doc_tokens[i]) ++counts[t];
    }

    ParagraphVectorModel model;
    model.cfg_ = cfg;
    // Deterministic vocab order: frequency descending, then lexicographic.
    std::vector<std::pair<std::string, int64_t>> vocab(counts.begin(), counts.end());
    std::erase_if(vocab, [&](const auto& kv) { return kv.second < cfg.min_count; });
    std::sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (vocab.empty()) throw Error("train_paragraph_vectors: empty vocabulary after preprocessing");
    for (const auto& [tok, freq] : vocab) {
        model.token_index_.emplace(tok, static_cast<uint32_t>(model.token_ids_.size()));
        model.token_ids_.push_back(tok);
    }
    model.negative_cumulative_.resize(vocab.size());
    double acc = 0.0;
    for (size_t i = 0; i < vocab.size(); ++i) {
        acc += std::pow(static_cast<double>(vocab[i].second), 0.75);
        model.negative_cumulative_[i] = acc;
    }

    const int dim = cfg.dim;
    std::vector<std::vector<uint32_t>> streams(docs.size());
    int64_t total_tokens = 0;
    for (size_t i = 0; i < docs.size(); ++i) {
        for (const auto& t : doc_tokens[i]) {
            auto it = model.token_index_.find(t);
            if (it != model.token_index_.end()) streams[i].push_back(it->second);
        }
        total_tokens += static_cast<int64_t>(streams[i].size());
    }
    if (total_tokens == 0) throw Error("train_paragraph_vectors: all tokens filtered out");

    std::vector<double> doc_vecs = init_input_vectors(docs.size(), dim, hash_combine(cfg.seed, fnv1a64("pv-doc")));
    model.token_out_.assign(model.token_ids_.size() * static_cast<size_t>(dim), 0.0);

    const int64_t schedule = std::max<int64_t>(1, total_tokens * cfg.epochs);
    int64_t processed = 0;
    if (epoch_loss) epoch_loss->clear();
    Rng rng(hash_combine(cfg.seed, fnv1a64("pv-train")));
    std::vector<double> grad(dim);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss_sum = 0.0;
        int64_t terms = 0;
        for (size_t di = 0; di < docs.size(); ++di) {
            double* dv = doc_vecs.data() + di * static_cast<size_t>(dim);
            for (uint32_t tok : streams[di]) {
                double alpha =
                    cfg.initial_lr * (1.0 - static_cast<double>(processed++) / static_cast<double>(schedule));
                if (alpha < cfg.initial_lr * 1e-4) alpha = cfg.initial_lr * 1e-4;
                std::fill(grad.begin(), grad.end(), 0.0);
                double* ov = model.token_out_.data() + static_cast<size_t>(tok) * dim;
                loss_sum += sgns_detail::pair_term(dv, ov, dim, 1.0, grad.data(), nullptr);
                {
                    double x = 0.0;
                    for (int d = 0; d < dim; ++d) x += dv[d] * ov[d];
                    double coeff = (1.0 / (1.0 + std::exp(-x)) - 1.0) * alpha;
                    for (int d = 0; d < dim; ++d) ov[d] -= coeff * dv[d];
                }
                for (int k = 0; k < cfg.negatives; ++k) {
                    uint32_t neg = sample_negative(model.negative_cumulative_, rng);
                    if (neg == tok) continue;
                    double* nv = model.token_out_.data() + static_cast<size_t>(neg) * dim;
                    double x = 0.0;
                    for (int d = 0; d < dim; ++d) x += dv[d] * nv[d];
                    double sig = 1.0 / (1.0 + std::exp(-x));
                    loss_sum += std::log1p(std::exp(x));
                    for (int d = 0; d < dim; ++d) {
                        grad[d] += sig * nv[d];
                        nv[d] -= alpha * sig * dv[d];
                    }
                }
                for (int d = 0; d < dim; ++d) dv[d] -= alpha * grad[d];
                ++terms;
            }
        }
        if (epoch_loss) epoch_loss->push_back(terms > 0 ? loss_sum / static_cast<double>(terms) : 0.0);
    }

    model.doc_vectors_ = EmbeddingTable(dim);
    for (size_t i = 0; i < docs.size(); ++i)
        model.doc_vectors_.insert(docs[i].id,
                                  {doc_vecs.data() + i * static_cast<size_t>(dim), static_cast<size_t>(dim)});
    return model;
}

std::vector<double> ParagraphVectorModel::infer(const std::vector<std::string>& tokens, int epochs,
                                                uint64_t seed) const {
    if (epochs < 1) throw Error("infer: epochs must be positive");
    const int dim = cfg_.dim;
    std::vector<uint32_t> stream;
    for (const auto& t : tokens) {
        auto it = token_index_.find(t);
        if (it != token_index_.end()) stream.push_back(it->second);
    }
    if (stream.empty()) throw Error("infer: no known tokens in document");

    Rng rng(hash_combine(seed, fnv1a64("pv-infer")));
    std::vector<double> dv(dim);
    for (double& v : dv) v = (rng.next_double() - 0.5) / dim;
    std::vector<double> grad(dim);

    const int64_t schedule = std::max<int64_t>(1, static_cast<int64_t>(stream.size()) * epochs);
    int64_t processed = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        for (uint32_t tok : stream) {
            double alpha = cfg_.initial_lr * (1.0 - static_cast<double>(processed++) / static_cast<double>(schedule));
            if (alpha < cfg_.initial_lr * 1e-4) alpha = cfg_.initial_lr * 1e-4;
            std::fill(grad.begin(), grad.end(), 0.0);
            const double* ov = token_out_.data() + static_cast<size_t>(tok) * dim;
            sgns_detail::pair_term(dv.data(), ov, dim, 1.0, grad.data(), nullptr);
            for (int k = 0; k < cfg_.negatives; ++k) {
                uint32_t neg = sample_negative(negative_cumulative_, rng);
                if (neg == tok) continue;
                const double* nv = token_out_.data() + static_cast<size_t>(neg) * dim;
                sgns_detail::pair_term(dv.data(), nv, dim, 0.0, grad.data(), nullptr);
            }
            for (int d = 0; d < dim; ++d) dv[d] -= alpha * grad[d];
        }
    }
    return dv;
}

} // namespace lexsim
