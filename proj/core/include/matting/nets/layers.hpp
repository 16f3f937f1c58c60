#pragma once

#include <string>
#include <vector>

#include "matting/imagery/rng.hpp"
#include "matting/nets/tensor.hpp"

namespace matting::nets {

// Named view over one parameter array and its gradient accumulator.
// Layers expose these so the optimizer, checkpoints, and digests can walk
// every parameter without knowing the architecture.
struct ParamRef {
    std::string name;
    std::vector<double>* value = nullptr;
    std::vector<double>* grad = nullptr;
    std::vector<int> shape;
};

// 3x3-style convolution, stride 1 or 2, zero padding ksize/2 (spatial size
// is preserved at stride 1 and halved at stride 2 for even inputs).
// Forward caches the input; backward accumulates into wgrad/bgrad and
// returns the input gradient.
struct Conv2d {
    int in_ch = 0, out_ch = 0, ksize = 3, stride = 1;
    std::vector<double> weight, wgrad;  // (out_ch, in_ch, k, k)
    std::vector<double> bias, bgrad;    // (out_ch)

    Conv2d() = default;
    Conv2d(int in, int out, int k = 3, int s = 1);

    void init_he(imagery::Rng& rng);
    void init_zero();

    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

    void collect(const std::string& prefix, std::vector<ParamRef>& out);
    size_t param_count() const { return weight.size() + bias.size(); }

    Tensor x_cache;
};

// Per-channel normalization over the spatial extent (batch-of-one safe),
// with learned scale and shift.
struct InstanceNorm {
    int channels = 0;
    double eps = 1e-5;
    std::vector<double> gamma, ggrad;
    std::vector<double> beta, bgrad;

    InstanceNorm() = default;
    explicit InstanceNorm(int ch);

    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

    void collect(const std::string& prefix, std::vector<ParamRef>& out);
    size_t param_count() const { return gamma.size() + beta.size(); }

    Tensor xhat_cache;
    std::vector<double> inv_std_cache;
};

// Activations cache what their backward needs.
struct ReLU {
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);
    Tensor x_cache;
};

struct Sigmoid {
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);
    Tensor y_cache;
};

// Nearest-neighbor 2x upsample and its exact adjoint.
Tensor upsample2x(const Tensor& x);
Tensor upsample2x_backward(const Tensor& dy);

// Channel concatenation [a; b] and the matching split of a gradient.
Tensor concat_channels(const Tensor& a, const Tensor& b);
void split_channels(const Tensor& d, int a_channels, Tensor& da, Tensor& db);

}  // namespace matting::nets
