#include "lexsim/fuse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lexsim/classic.hpp"

namespace lexsim {

std::vector<double> l2_normalize(std::span<const double> v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    if (sq == 0.0) throw Error("l2_normalize: zero vector");
    double inv = 1.0 / std::sqrt(sq);
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] * inv;
    return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error("cosine: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw Error("cosine: zero vector");
    double c = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(c, -1.0, 1.0);
}

double clamped_cosine(std::span<const double> a, std::span<const double> b) {
    return std::max(0.0, cosine(a, b));
}

double combine_values(double text_sim, double nw_sim, ValueMode mode) {
    if (text_sim < 0.0 || text_sim > 1.0 || nw_sim < 0.0 || nw_sim > 1.0)
        throw Error("combine_values: inputs must lie in [0,1]");
    return mode == ValueMode::average ? (text_sim + nw_sim) / 2.0 : std::max(text_sim, nw_sim);
}

std::vector<double> combine_embeddings(std::span<const double> t, std::span<const double> n, EmbCombine mode) {
    if (t.size() != n.size()) throw Error("combine_embeddings: dimension mismatch");
    std::vector<double> out;
    switch (mode) {
        case EmbCombine::average:
            out.resize(t.size());
            for (size_t i = 0; i < t.size(); ++i) out[i] = (t[i] + n[i]) / 2.0;
            break;
        case EmbCombine::max:
            out.resize(t.size());
            for (size_t i = 0; i < t.size(); ++i) out[i] = std::max(t[i], n[i]);
            break;
        case EmbCombine::concat:
            out.reserve(t.size() * 2);
            out.insert(out.end(), t.begin(), t.end());
            out.insert(out.end(), n.begin(), n.end());
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// MapNet
// ---------------------------------------------------------------------------

void MapNet::wire(int dim) {
    dim_ = dim;
    stack_ = nn::Stack{};
    stack_.add_linear(dim, 250);
    stack_.add_linear(250, 300);
    stack_.add_linear(300, dim);
}

MapNet::MapNet(int dim, uint64_t seed) {
    if (dim <= 0) throw Error("MapNet: dim must be positive");
    wire(dim);
    stack_.init_uniform(seed);
}

std::vector<double> MapNet::map(std::span<const double> t) const {
    if (static_cast<int>(t.size()) != dim_) throw Error("MapNet: input dim mismatch");
    std::vector<double> a1(250), a2(300), y(dim_);
    stack_.layers[0].forward(stack_.params.data(), t.data(), a1.data());
    nn::relu(a1.data(), 250);
    stack_.layers[1].forward(stack_.params.data(), a1.data(), a2.data());
    nn::relu(a2.data(), 300);
    stack_.layers[2].forward(stack_.params.data(), a2.data(), y.data());
    return y;
}

double MapNet::batch_loss(const std::vector<std::span<const double>>& inputs,
                          const std::vector<std::span<const double>>& targets) const {
    if (inputs.empty() || inputs.size() != targets.size()) throw Error("MapNet: bad batch");
    double total = 0.0;
    for (size_t i = 0; i < inputs.size(); ++i) {
        std::vector<double> y = map(inputs[i]);
        double sq = 0.0;
        for (int d = 0; d < dim_; ++d) {
            double diff = y[d] - targets[i][d];
            sq += diff * diff;
        }
        total += 0.5 * sq;
    }
    return total / static_cast<double>(inputs.size());
}

void MapNet::batch_gradients(const std::vector<std::span<const double>>& inputs,
                             const std::vector<std::span<const double>>& targets, std::vector<double>* grads,
                             double* loss) const {
    if (inputs.empty() || inputs.size() != targets.size()) throw Error("MapNet: bad batch");
    grads->assign(stack_.params.size(), 0.0);
    const double inv_batch = 1.0 / static_cast<double>(inputs.size());
    double total = 0.0;
    std::vector<double> a1(250), a2(300), y(dim_), dy(dim_), da2(300), da1(250);
    for (size_t i = 0; i < inputs.size(); ++i) {
        const double* x = inputs[i].data();
        stack_.layers[0].forward(stack_.params.data(), x, a1.data());
        nn::relu(a1.data(), 250);
        stack_.layers[1].forward(stack_.params.data(), a1.data(), a2.data());
        nn::relu(a2.data(), 300);
        stack_.layers[2].forward(stack_.params.data(), a2.data(), y.data());
        double sq = 0.0;
        for (int d = 0; d < dim_; ++d) {
            double diff = y[d] - targets[i][d];
            sq += diff * diff;
            dy[d] = diff * inv_batch; // d(mean 1/2||.||^2)/dy
        }
        total += 0.5 * sq;
        stack_.layers[2].backward(stack_.params.data(), a2.data(), dy.data(), grads->data(), da2.data());
        nn::relu_backward(a2.data(), da2.data(), 300);
        stack_.layers[1].backward(stack_.params.data(), a1.data(), da2.data(), grads->data(), da1.data());
        nn::relu_backward(a1.data(), da1.data(), 250);
        stack_.layers[0].backward(stack_.params.data(), x, da1.data(), grads->data(), nullptr);
    }
    if (loss) *loss = total * inv_batch;
}

std::vector<double> fuse_mapped(const MapNet& m, std::span<const double> t, ConcMode mode, double alpha,
                                bool renorm_mapped) {
    if (static_cast<int>(t.size()) != m.dim()) throw Error("fuse_mapped: input dim mismatch");
    if (mode == ConcMode::wtd_conc && (alpha < 0.0 || alpha > 1.0))
        throw Error("fuse_mapped: alpha must lie in [0,1]");
    std::vector<double> tn = l2_normalize(t);
    std::vector<double> np = m.map(tn);
    if (renorm_mapped) np = l2_normalize(np);
    std::vector<double> out;
    out.reserve(2 * tn.size());
    if (mode == ConcMode::conc) {
        out.insert(out.end(), np.begin(), np.end());
        out.insert(out.end(), tn.begin(), tn.end());
    } else {
        for (double v : np) out.push_back(alpha * v);
        for (double v : tn) out.push_back((1.0 - alpha) * v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bimodal autoencoder
// ---------------------------------------------------------------------------

void BimodalAutoencoder::wire(int dim) {
    dim_ = dim;
    stack_ = nn::Stack{};
    stack_.add_linear(dim, kTextHidden);               // 0 enc_t
    stack_.add_linear(dim, kNetHidden);                // 1 enc_n
    stack_.add_linear(kTextHidden + kNetHidden, kMultimodal); // 2 fuse
    stack_.add_linear(kMultimodal, kTextHidden);       // 3 dec_t hidden
    stack_.add_linear(kTextHidden, dim);               // 4 dec_t out
    stack_.add_linear(kMultimodal, kNetHidden);        // 5 dec_n hidden
    stack_.add_linear(kNetHidden, dim);                // 6 dec_n out
}

BimodalAutoencoder::BimodalAutoencoder(int dim, uint64_t seed) {
    if (dim <= 0) throw Error("BimodalAutoencoder: dim must be positive");
    wire(dim);
    stack_.init_uniform(seed);
}

namespace {

struct AeActs {
    std::vector<double> ht, hn, cat, mm, dth, dnh, t_out, n_out;
};

} // namespace

static void ae_forward(const nn::Stack& stack, int dim, std::span<const double> t, std::span<const double> n,
                       AeActs& acts) {
    acts.ht.resize(BimodalAutoencoder::kTextHidden);
    acts.hn.resize(BimodalAutoencoder::kNetHidden);
    acts.mm.resize(BimodalAutoencoder::kMultimodal);
    acts.dth.resize(BimodalAutoencoder::kTextHidden);
    acts.dnh.resize(BimodalAutoencoder::kNetHidden);
    acts.t_out.resize(dim);
    acts.n_out.resize(dim);
    const double* p = stack.params.data();
    stack.layers[0].forward(p, t.data(), acts.ht.data());
    nn::relu(acts.ht.data(), BimodalAutoencoder::kTextHidden);
    stack.layers[1].forward(p, n.data(), acts.hn.data());
    nn::relu(acts.hn.data(), BimodalAutoencoder::kNetHidden);
    acts.cat.assign(acts.ht.begin(), acts.ht.end());
    acts.cat.insert(acts.cat.end(), acts.hn.begin(), acts.hn.end());
    stack.layers[2].forward(p, acts.cat.data(), acts.mm.data());
    nn::relu(acts.mm.data(), BimodalAutoencoder::kMultimodal);
    stack.layers[3].forward(p, acts.mm.data(), acts.dth.data());
    nn::relu(acts.dth.data(), BimodalAutoencoder::kTextHidden);
    stack.layers[4].forward(p, acts.dth.data(), acts.t_out.data());
    stack.layers[5].forward(p, acts.mm.data(), acts.dnh.data());
    nn::relu(acts.dnh.data(), BimodalAutoencoder::kNetHidden);
    stack.layers[6].forward(p, acts.dnh.data(), acts.n_out.data());
}

std::vector<double> BimodalAutoencoder::encode(std::span<const double> t, std::span<const double> n) const {
    if (static_cast<int>(t.size()) != dim_ || static_cast<int>(n.size()) != dim_)
        throw Error("BimodalAutoencoder: input dim mismatch");
    AeActs acts;
    ae_forward(stack_, dim_, t, n, acts);
    return acts.mm;
}

void BimodalAutoencoder::reconstruct(std::span<const double> t, std::span<const double> n,
                                     std::vector<double>* t_out, std::vector<double>* n_out) const {
    if (static_cast<int>(t.size()) != dim_ || static_cast<int>(n.size()) != dim_)
        throw Error("BimodalAutoencoder: input dim mismatch");
    AeActs acts;
    ae_forward(stack_, dim_, t, n, acts);
    if (t_out) *t_out = acts.t_out;
    if (n_out) *n_out = acts.n_out;
}

double BimodalAutoencoder::example_loss(std::span<const double> t, std::span<const double> n) const {
    AeActs acts;
    ae_forward(stack_, dim_, t, n, acts);
    double sq = 0.0;
    for (int d = 0; d < dim_; ++d) {
        double dt = acts.t_out[d] - t[d];
        double dn = acts.n_out[d] - n[d];
        sq += dt * dt + dn * dn;
    }
    return sq;
}

double BimodalAutoencoder::batch_loss(const std::vector<std::span<const double>>& ts,
                                      const std::vector<std::span<const double>>& ns) const {
    if (ts.empty() || ts.size() != ns.size()) throw Error("BimodalAutoencoder: bad batch");
    double total = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) total += example_loss(ts[i], ns[i]);
    return total / static_cast<double>(ts.size());
}

void BimodalAutoencoder::batch_gradients(const std::vector<std::span<const double>>& ts,
                                         const std::vector<std::span<const double>>& ns,
                                         const std::vector<std::span<const double>>& target_ts,
                                         const std::vector<std::span<const double>>& target_ns,
                                         std::vector<double>* grads, double* loss) const {
    if (ts.empty() || ts.size() != ns.size() || ts.size() != target_ts.size() || ts.size() != target_ns.size())
        throw Error("BimodalAutoencoder: bad batch");
    grads->assign(stack_.params.size(), 0.0);
    const double inv_batch = 1.0 / static_cast<double>(ts.size());
    double total = 0.0;
    AeActs acts;
    std::vector<double> dt_out(dim_), dn_out(dim_), d_dth(kTextHidden), d_dnh(kNetHidden);
    std::vector<double> dmm_t(kMultimodal), dmm_n(kMultimodal), dcat(kTextHidden + kNetHidden);
    std::vector<double> dht(kTextHidden), dhn(kNetHidden);
    const double* p = stack_.params.data();
    for (size_t i = 0; i < ts.size(); ++i) {
        ae_forward(stack_, dim_, ts[i], ns[i], acts);
        double sq = 0.0;
        for (int d = 0; d < dim_; ++d) {
            double et = acts.t_out[d] - target_ts[i][d];
            double en = acts.n_out[d] - target_ns[i][d];
            sq += et * et + en * en;
            dt_out[d] = 2.0 * et * inv_batch;
            dn_out[d] = 2.0 * en * inv_batch;
        }
        total += sq;
        stack_.layers[4].backward(p, acts.dth.data(), dt_out.data(), grads->data(), d_dth.data());
        nn::relu_backward(acts.dth.data(), d_dth.data(), kTextHidden);
        stack_.layers[3].backward(p, acts.mm.data(), d_dth.data(), grads->data(), dmm_t.data());
        stack_.layers[6].backward(p, acts.dnh.data(), dn_out.data(), grads->data(), d_dnh.data());
        nn::relu_backward(acts.dnh.data(), d_dnh.data(), kNetHidden);
        stack_.layers[5].backward(p, acts.mm.data(), d_dnh.data(), grads->data(), dmm_n.data());
        for (int d = 0; d < kMultimodal; ++d) dmm_t[d] += dmm_n[d];
        nn::relu_backward(acts.mm.data(), dmm_t.data(), kMultimodal);
        stack_.layers[2].backward(p, acts.cat.data(), dmm_t.data(), grads->data(), dcat.data());
        std::copy(dcat.begin(), dcat.begin() + kTextHidden, dht.begin());
        std::copy(dcat.begin() + kTextHidden, dcat.end(), dhn.begin());
        nn::relu_backward(acts.ht.data(), dht.data(), kTextHidden);
        nn::relu_backward(acts.hn.data(), dhn.data(), kNetHidden);
        stack_.layers[0].backward(p, ts[i].data(), dht.data(), grads->data(), nullptr);
        stack_.layers[1].backward(p, ns[i].data(), dhn.data(), grads->data(), nullptr);
    }
    if (loss) *loss = total * inv_batch;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace {

struct PairedVectors {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> t_norm, n_norm;
};

PairedVectors eligible_pairs(const EmbeddingTable& text, const EmbeddingTable& net,
                             const std::vector<std::string>& exclude) {
    if (text.dim() != net.dim())
        throw Error("fusion input dims differ: text " + std::to_string(text.dim()) + " vs network " +
                    std::to_string(net.dim()));
    std::unordered_set<std::string> skip(exclude.begin(), exclude.end());
    PairedVectors out;
    std::vector<std::string> ids;
    for (const auto& id : text.ids())
        if (net.contains(id) && !skip.count(id)) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    for (const auto& id : ids) {
        out.t_norm.push_back(l2_normalize(text.at(id)));
        out.n_norm.push_back(l2_normalize(net.at(id)));
        out.ids.push_back(id);
    }
    return out;
}

std::string config_echo(const FusionTrainConfig& cfg, int dim) {
    std::ostringstream os;
    os << "dim=" << dim << " lr=" << cfg.learning_rate << " weight_decay=" << cfg.weight_decay
       << " epochs=" << cfg.epochs << " batch=" << cfg.batch_size << " seed=" << cfg.seed
       << " denoise=" << (cfg.denoise ? 1 : 0);
    return os.str();
}

} // namespace

template <typename StepFn, typename EvalFn>
static void fit_epochs(const FusionTrainConfig& cfg, size_t train_count, std::vector<double>& params,
                       StepFn&& step, EvalFn&& eval, std::vector<double>* train_loss,
                       std::vector<double>* val_loss, double* best_val, int* best_epoch,
                       std::vector<double>* best_params) {
    nn::AdamW opt(params.size(), cfg.learning_rate, cfg.weight_decay);
    std::vector<size_t> order(train_count);
    for (size_t i = 0; i < train_count; ++i) order[i] = i;
    *best_val = std::numeric_limits<double>::infinity();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng rng(hash_combine(hash_combine(cfg.seed, fnv1a64("fusion-epoch")), static_cast<uint64_t>(epoch)));
        for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.next_below(i)]);
        double loss_sum = 0.0;
        size_t seen = 0;
        for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
            size_t end = std::min(order.size(), start + cfg.batch_size);
            double batch_loss = step(std::span<const size_t>(order.data() + start, end - start), opt, rng);
            loss_sum += batch_loss * static_cast<double>(end - start);
            seen += end - start;
        }
        double epoch_train = seen ? loss_sum / static_cast<double>(seen) : 0.0;
        double epoch_val = eval(epoch_train);
        train_loss->push_back(epoch_train);
        val_loss->push_back(epoch_val);
        if (epoch_val < *best_val) {
            *best_val = epoch_val;
            *best_epoch = epoch;
            *best_params = params;
        }
    }
}

TrainResult<MapNet> train_map_net(const EmbeddingTable& text_emb, const EmbeddingTable& net_emb,
                                  const FusionTrainConfig& cfg) {
    PairedVectors data = eligible_pairs(text_emb, net_emb, cfg.exclude_ids);
    if (data.ids.size() < 2) throw Error("train_map_net: needs at least 2 training documents with both embeddings");
    const int dim = text_emb.dim();

    // Seeded shuffle then 80/20 split.
    std::vector<size_t> perm(data.ids.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    Rng split_rng(hash_combine(cfg.seed, fnv1a64("fusion-split")));
    for (size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[split_rng.next_below(i)]);
    size_t n_train = std::max<size_t>(2, static_cast<size_t>(cfg.train_fraction * static_cast<double>(perm.size())));
    n_train = std::min(n_train, perm.size());

    std::vector<std::span<const double>> train_t, train_n, val_t, val_n;
    for (size_t i = 0; i < perm.size(); ++i) {
        auto& dst_t = i < n_train ? train_t : val_t;
        auto& dst_n = i < n_train ? train_n : val_n;
        dst_t.emplace_back(data.t_norm[perm[i]]);
        dst_n.emplace_back(data.n_norm[perm[i]]);
    }

    TrainResult<MapNet> result;
    result.model = MapNet(dim, cfg.seed);
    result.model.config_note = config_echo(cfg, dim);
    std::vector<double> grads, best_params;

    fit_epochs(
        cfg, train_t.size(), result.model.parameters(),
        [&](std::span<const size_t> batch, nn::AdamW& opt, Rng&) {
            std::vector<std::span<const double>> bt, bn;
            bt.reserve(batch.size());
            bn.reserve(batch.size());
            for (size_t idx : batch) {
                bt.push_back(train_t[idx]);
                bn.push_back(train_n[idx]);
            }
            double loss = 0.0;
            result.model.batch_gradients(bt, bn, &grads, &loss);
            opt.step(result.model.parameters(), grads);
            return loss;
        },
        [&](double epoch_train) {
            return val_t.empty() ? epoch_train : result.model.batch_loss(val_t, val_n);
        },
        &result.train_loss, &result.val_loss, &result.best_val, &result.best_epoch, &best_params);

    result.model.parameters() = best_params;
    return result;
}

TrainResult<BimodalAutoencoder> train_autoencoder(const EmbeddingTable& text_emb, const EmbeddingTable& net_emb,
                                                  const FusionTrainConfig& cfg) {
    PairedVectors data = eligible_pairs(text_emb, net_emb, cfg.exclude_ids);
    if (data.ids.size() < 2)
        throw Error("train_autoencoder: needs at least 2 training documents with both embeddings");
    const int dim = text_emb.dim();

    std::vector<size_t> perm(data.ids.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    Rng split_rng(hash_combine(cfg.seed, fnv1a64("fusion-split")));
    for (size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[split_rng.next_below(i)]);
    size_t n_train = std::max<size_t>(2, static_cast<size_t>(cfg.train_fraction * static_cast<double>(perm.size())));
    n_train = std::min(n_train, perm.size());

    std::vector<std::span<const double>> train_t, train_n, val_t, val_n;
    for (size_t i = 0; i < perm.size(); ++i) {
        auto& dst_t = i < n_train ? train_t : val_t;
        auto& dst_n = i < n_train ? train_n : val_n;
        dst_t.emplace_back(data.t_norm[perm[i]]);
        dst_n.emplace_back(data.n_norm[perm[i]]);
    }

    TrainResult<BimodalAutoencoder> result;
    result.model = BimodalAutoencoder(dim, cfg.seed);
    result.model.config_note = config_echo(cfg, dim);
    std::vector<double> grads, best_params;
    std::vector<std::vector<double>> noisy_t, noisy_n; // batch scratch

    fit_epochs(
        cfg, train_t.size(), result.model.parameters(),
        [&](std::span<const size_t> batch, nn::AdamW& opt, Rng& rng) {
            std::vector<std::span<const double>> bt, bn, tt, tn;
            noisy_t.assign(batch.size(), {});
            noisy_n.assign(batch.size(), {});
            size_t k = 0;
            for (size_t idx : batch) {
                tt.push_back(train_t[idx]);
                tn.push_back(train_n[idx]);
                if (cfg.denoise) {
                    noisy_t[k].assign(train_t[idx].begin(), train_t[idx].end());
                    noisy_n[k].assign(train_n[idx].begin(), train_n[idx].end());
                    for (double& v : noisy_t[k]) v += cfg.noise_sigma * rng.next_gaussian();
                    for (double& v : noisy_n[k]) v += cfg.noise_sigma * rng.next_gaussian();
                    bt.emplace_back(noisy_t[k]);
                    bn.emplace_back(noisy_n[k]);
                    ++k;
                } else {
                    bt.push_back(train_t[idx]);
                    bn.push_back(train_n[idx]);
                }
            }
            double loss = 0.0;
            result.model.batch_gradients(bt, bn, tt, tn, &grads, &loss);
            opt.step(result.model.parameters(), grads);
            return loss;
        },
        [&](double epoch_train) {
            return val_t.empty() ? epoch_train : result.model.batch_loss(val_t, val_n);
        },
        &result.train_loss, &result.val_loss, &result.best_val, &result.best_epoch, &best_params);

    result.model.parameters() = best_params;
    return result;
}

// ---------------------------------------------------------------------------
// Model IO
// ---------------------------------------------------------------------------

namespace {

void save_params(std::ostringstream& out, const std::vector<double>& params) {
    out << params.size() << '\n';
    for (size_t i = 0; i < params.size(); ++i) {
        out << str::format_double(params[i]);
        out << ((i % 8 == 7 || i + 1 == params.size()) ? '\n' : ' ');
    }
}

std::vector<double> load_params(std::istringstream& in, const std::string& path) {
    size_t count = 0;
    if (!(in >> count)) throw Error(path + ": missing parameter count");
    std::vector<double> params(count);
    for (size_t i = 0; i < count; ++i)
        if (!(in >> params[i])) throw Error(path + ": truncated parameter block");
    return params;
}

} // namespace

void MapNet::save(const std::string& path) const {
    std::ostringstream out;
    out << "mapnet " << dim_ << " 250 300\n";
    out << "config " << (config_note.empty() ? "-" : config_note) << '\n';
    save_params(out, stack_.params);
    io::write_file(path, out.str());
}

MapNet MapNet::load(const std::string& path) {
    std::istringstream in(io::read_file(path));
    std::string tag;
    int dim = 0, h1 = 0, h2 = 0;
    if (!(in >> tag >> dim >> h1 >> h2) || tag != "mapnet" || h1 != 250 || h2 != 300)
        throw Error(path + ": not a mapnet model file");
    std::string config_line;
    std::getline(in, config_line); // rest of header line
    std::getline(in, config_line);
    MapNet m;
    m.wire(dim);
    if (str::starts_with(config_line, "config ")) m.config_note = config_line.substr(7);
    auto params = load_params(in, path);
    if (params.size() != m.stack_.params.size())
        throw Error(path + ": parameter count mismatch for dim " + std::to_string(dim));
    m.stack_.params = std::move(params);
    return m;
}

void BimodalAutoencoder::save(const std::string& path) const {
    std::ostringstream out;
    out << "autoencoder " << dim_ << ' ' << kTextHidden << ' ' << kNetHidden << ' ' << kMultimodal << '\n';
    out << "config " << (config_note.empty() ? "-" : config_note) << '\n';
    save_params(out, stack_.params);
    io::write_file(path, out.str());
}

BimodalAutoencoder BimodalAutoencoder::load(const std::string& path) {
    std::istringstream in(io::read_file(path));
    std::string tag;
    int dim = 0, ht = 0, hn = 0, mm = 0;
    if (!(in >> tag >> dim >> ht >> hn >> mm) || tag != "autoencoder" || ht != kTextHidden || hn != kNetHidden ||
        mm != kMultimodal)
        throw Error(path + ": not an autoencoder model file");
    std::string config_line;
    std::getline(in, config_line);
    std::getline(in, config_line);
    BimodalAutoencoder ae;
    ae.wire(dim);
    if (str::starts_with(config_line, "config ")) ae.config_note = config_line.substr(7);
    auto params = load_params(in, path);
    if (params.size() != ae.stack_.params.size())
        throw Error(path + ": parameter count mismatch for dim " + std::to_string(dim));
    ae.stack_.params = std::move(params);
    return ae;
}

// ---------------------------------------------------------------------------
// Paper2Vec graph and method dispatch
// ---------------------------------------------------------------------------

HeteroGraph build_text_similarity_graph(const EmbeddingTable& text_emb, double threshold) {
    // Threshold 1.0 is allowed and yields an edgeless graph (cosine never
    // strictly exceeds it).
    if (threshold <= 0.0 || threshold > 1.0) throw Error("text similarity threshold must lie in (0,1]");
    HeteroGraph::Builder b;
    const auto& ids = text_emb.ids();
    for (const auto& id : ids) b.add_node(id, NodeType::document);
    for (size_t i = 0; i < ids.size(); ++i) {
        for (size_t j = i + 1; j < ids.size(); ++j) {
            double c = cosine(text_emb.at(ids[i]), text_emb.at(ids[j]));
            if (c > threshold) b.add_edge(static_cast<uint32_t>(i), static_cast<uint32_t>(j), EdgeKind::citation);
        }
    }
    return b.finish();
}

Method method_from_string(std::string_view s) {
    if (s == "doc2vec" || s == "text") return Method::text;
    if (s == "network") return Method::network;
    if (s == "value_average") return Method::value_average;
    if (s == "value_max") return Method::value_max;
    if (s == "emb_average") return Method::emb_average;
    if (s == "emb_max") return Method::emb_max;
    if (s == "emb_conc") return Method::emb_conc;
    if (s == "nn_map_conc") return Method::nn_map_conc;
    if (s == "nn_map_wtd_conc") return Method::nn_map_wtd_conc;
    if (s == "autoencoder") return Method::autoencoder;
    if (s == "paper2vec") return Method::paper2vec;
    if (s == "bibcoupling") return Method::bibcoupling;
    if (s == "cocitation") return Method::cocitation;
    if (s == "dispersion") return Method::dispersion;
    throw Error("unknown method: " + std::string(s));
}

const char* to_string(Method m) {
    switch (m) {
        case Method::text: return "doc2vec";
        case Method::network: return "network";
        case Method::value_average: return "value_average";
        case Method::value_max: return "value_max";
        case Method::emb_average: return "emb_average";
        case Method::emb_max: return "emb_max";
        case Method::emb_conc: return "emb_conc";
        case Method::nn_map_conc: return "nn_map_conc";
        case Method::nn_map_wtd_conc: return "nn_map_wtd_conc";
        case Method::autoencoder: return "autoencoder";
        case Method::paper2vec: return "paper2vec";
        case Method::bibcoupling: return "bibcoupling";
        case Method::cocitation: return "cocitation";
        default: return "dispersion";
    }
}

namespace {

const EmbeddingTable& need_table(const EmbeddingTable* t, const char* what) {
    if (!t) throw Error(std::string("method requires ") + what + " embeddings");
    return *t;
}

NodeRef doc_ref(const HeteroGraph& g, const std::string& id) {
    uint32_t idx = g.require_node(id);
    return g.node(idx);
}

} // namespace

double pair_similarity(Method m, const SimilarityContext& ctx, const std::string& a, const std::string& b) {
    switch (m) {
        case Method::text:
            return cosine_similarity(need_table(ctx.text, "text"), a, b);
        case Method::network:
            return cosine_similarity(need_table(ctx.net, "network"), a, b);
        case Method::paper2vec:
            return cosine_similarity(need_table(ctx.paper2vec, "paper2vec"), a, b);
        case Method::value_average:
        case Method::value_max: {
            double ts = cosine_similarity(need_table(ctx.text, "text"), a, b);
            double ns = cosine_similarity(need_table(ctx.net, "network"), a, b);
            return combine_values(ts, ns, m == Method::value_average ? ValueMode::average : ValueMode::max);
        }
        case Method::emb_average:
        case Method::emb_max:
        case Method::emb_conc: {
            const auto& text = need_table(ctx.text, "text");
            const auto& net = need_table(ctx.net, "network");
            EmbCombine mode = m == Method::emb_average ? EmbCombine::average
                              : m == Method::emb_max   ? EmbCombine::max
                                                       : EmbCombine::concat;
            auto ea = combine_embeddings(l2_normalize(text.at(a)), l2_normalize(net.at(a)), mode);
            auto eb = combine_embeddings(l2_normalize(text.at(b)), l2_normalize(net.at(b)), mode);
            return clamped_cosine(ea, eb);
        }
        case Method::nn_map_conc:
        case Method::nn_map_wtd_conc: {
            if (!ctx.map) throw Error("method requires a trained mapnet model");
            const auto& text = need_table(ctx.text, "text");
            ConcMode mode = m == Method::nn_map_conc ? ConcMode::conc : ConcMode::wtd_conc;
            auto ea = fuse_mapped(*ctx.map, text.at(a), mode, ctx.alpha, ctx.renorm_mapped);
            auto eb = fuse_mapped(*ctx.map, text.at(b), mode, ctx.alpha, ctx.renorm_mapped);
            return clamped_cosine(ea, eb);
        }
        case Method::autoencoder: {
            if (!ctx.autoencoder) throw Error("method requires a trained autoencoder model");
            const auto& text = need_table(ctx.text, "text");
            const auto& net = need_table(ctx.net, "network");
            auto ea = ctx.autoencoder->encode(l2_normalize(text.at(a)), l2_normalize(net.at(a)));
            auto eb = ctx.autoencoder->encode(l2_normalize(text.at(b)), l2_normalize(net.at(b)));
            return clamped_cosine(ea, eb);
        }
        case Method::bibcoupling: {
            if (!ctx.graph) throw Error("method requires a graph");
            return bibliographic_coupling(*ctx.graph, doc_ref(*ctx.graph, a), doc_ref(*ctx.graph, b));
        }
        case Method::cocitation: {
            if (!ctx.graph) throw Error("method requires a graph");
            return co_citation(*ctx.graph, doc_ref(*ctx.graph, a), doc_ref(*ctx.graph, b));
        }
        case Method::dispersion:
            throw Error("dispersion requires pair-set normalization; use score_pairs");
    }
    throw Error("unreachable method");
}

std::vector<double> score_pairs(Method m, const SimilarityContext& ctx,
                                const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<double> out;
    out.reserve(pairs.size());
    if (m == Method::dispersion) {
        if (!ctx.graph) throw Error("method requires a graph");
        for (const auto& [a, b] : pairs)
            out.push_back(dispersion(*ctx.graph, doc_ref(*ctx.graph, a), doc_ref(*ctx.graph, b)));
        return normalize_scores(out);
    }
    for (const auto& [a, b] : pairs) out.push_back(pair_similarity(m, ctx, a, b));
    return out;
}

} // namespace lexsim
