#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lexsim/common.hpp"

namespace lexsim::nn {

// Dense layer over a flat parameter vector; weights row-major (out x in),
// bias after the weights.
struct LinearView {
    int in = 0;
    int out = 0;
    size_t offset = 0; // start of W within the flat vector

    size_t size() const { return static_cast<size_t>(in) * out + out; }
    size_t bias_offset() const { return offset + static_cast<size_t>(in) * out; }

    void forward(const double* params, const double* x, double* y) const;
    // Accumulates parameter gradients into grad_params; writes dL/dx into dx when given.
    void backward(const double* params, const double* x, const double* dy, double* grad_params, double* dx) const;
};

// Flat parameter container shared by the optimizer, serialization, and
// finite-difference checks.
struct Stack {
    std::vector<double> params;
    std::vector<LinearView> layers;

    LinearView& add_linear(int in, int out);
    void init_uniform(uint64_t seed); // per-layer symmetric uniform, fan-based scale
};

void relu(double* x, int n);
// dy *= relu'(z), using the activated output (a > 0 <=> z > 0).
void relu_backward(const double* activated, double* dy, int n);

// Adaptive moments with decoupled weight decay.
class AdamW {
public:
    AdamW(size_t n, double lr, double weight_decay, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
    void step(std::vector<double>& params, const std::vector<double>& grads);

private:
    double lr_, wd_, beta1_, beta2_, eps_;
    int64_t t_ = 0;
    std::vector<double> m_, v_;
};

} // namespace lexsim::nn
