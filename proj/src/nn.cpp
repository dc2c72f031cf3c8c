#include "lexsim/nn.hpp"

#include <cmath>

namespace lexsim::nn {

void LinearView::forward(const double* params, const double* x, double* y) const {
    const double* w = params + offset;
    const double* b = params + bias_offset();
    for (int o = 0; o < out; ++o) {
        double acc = b[o];
        const double* row = w + static_cast<size_t>(o) * in;
        for (int i = 0; i < in; ++i) acc += row[i] * x[i];
        y[o] = acc;
    }
}

void LinearView::backward(const double* params, const double* x, const double* dy, double* grad_params,
                          double* dx) const {
    const double* w = params + offset;
    double* gw = grad_params + offset;
    double* gb = grad_params + bias_offset();
    if (dx)
        for (int i = 0; i < in; ++i) dx[i] = 0.0;
    for (int o = 0; o < out; ++o) {
        const double d = dy[o];
        gb[o] += d;
        const double* row = w + static_cast<size_t>(o) * in;
        double* grow = gw + static_cast<size_t>(o) * in;
        for (int i = 0; i < in; ++i) {
            grow[i] += d * x[i];
            if (dx) dx[i] += d * row[i];
        }
    }
}

LinearView& Stack::add_linear(int in, int out) {
    LinearView v;
    v.in = in;
    v.out = out;
    v.offset = params.size();
    params.resize(params.size() + v.size(), 0.0);
    layers.push_back(v);
    return layers.back();
}

void Stack::init_uniform(uint64_t seed) {
    Rng rng(hash_combine(seed, fnv1a64("nn-init")));
    for (const auto& l : layers) {
        const double scale = std::sqrt(6.0 / (l.in + l.out));
        double* w = params.data() + l.offset;
        for (size_t i = 0; i < static_cast<size_t>(l.in) * l.out; ++i)
            w[i] = (2.0 * rng.next_double() - 1.0) * scale;
        double* b = params.data() + l.bias_offset();
        for (int i = 0; i < l.out; ++i) b[i] = 0.0;
    }
}

void relu(double* x, int n) {
    for (int i = 0; i < n; ++i)
        if (x[i] < 0.0) x[i] = 0.0;
}

void relu_backward(const double* activated, double* dy, int n) {
    for (int i = 0; i < n; ++i)
        if (activated[i] <= 0.0) dy[i] = 0.0;
}

AdamW::AdamW(size_t n, double lr, double weight_decay, double beta1, double beta2, double eps)
    : lr_(lr), wd_(weight_decay), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void AdamW::step(std::vector<double>& params, const std::vector<double>& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size()) throw Error("AdamW: size mismatch");
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i] * grads[i];
        const double mhat = m_[i] / bc1;
        const double vhat = v_[i] / bc2;
        params[i] -= lr_ * (mhat / (std::sqrt(vhat) + eps_) + wd_ * params[i]);
    }
}

} // namespace lexsim::nn
