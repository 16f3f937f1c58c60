#pragma once

#include <vector>

#include "matting/imagery/rng.hpp"
#include "matting/nets/layers.hpp"
#include "matting/nets/tensor.hpp"

namespace matting::nets {

// conv 3x3 -> instance norm -> relu.
struct ConvBlock {
    Conv2d conv;
    InstanceNorm norm;
    ReLU relu;

    ConvBlock() = default;
    ConvBlock(int in, int out, int stride = 1)
        : conv(in, out, 3, stride), norm(out) {}

    Tensor forward(const Tensor& x) { return relu.forward(norm.forward(conv.forward(x))); }
    Tensor backward(const Tensor& dy) {
        return conv.backward(norm.backward(relu.backward(dy)));
    }
    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        conv.collect(prefix + ".conv", out);
        norm.collect(prefix + ".norm", out);
    }
    size_t param_count() const { return conv.param_count() + norm.param_count(); }
};

// Shape of a symmetric encoder-decoder with concatenation skips.
// Channel width doubles per stride-2 level. An optional extra feature map
// (inject_channels > 0) is concatenated at 1/4 input scale, and an optional
// logit skip adds logit(input channel) to the output logits so a
// zero-initialized head starts as the identity on that channel.
struct UNetSpec {
    int in_channels = 3;
    int out_channels = 1;
    int base_width = 32;
    int depth = 4;               // stride-2 levels; >= 2
    int inject_channels = 0;     // concatenated at 1/4 scale when > 0
    int logit_skip_channel = -1; // input channel index, -1 = none
};

// Closed-form parameter count for a UNetSpec (tested against allocation).
size_t unet_param_count(const UNetSpec& spec);

class UNet {
public:
    explicit UNet(const UNetSpec& spec);

    // inject must be non-null iff spec.inject_channels > 0, with spatial
    // size exactly input/4. Input dims must be divisible by 2^depth.
    // Output: spec.out_channels at input resolution, sigmoid range.
    Tensor forward(const Tensor& x, const Tensor* inject = nullptr);

    // dy is the gradient w.r.t. the post-sigmoid output of the latest
    // forward. Accumulates into parameter gradients; input gradients are
    // discarded (inputs are data).
    void backward(const Tensor& dy);

    std::vector<ParamRef> params();
    void zero_grad();
    void init_params(imagery::Rng& rng, bool zero_head = true);

    const UNetSpec& spec() const { return spec_; }

private:
    UNetSpec spec_;
    ConvBlock stem_;
    std::vector<ConvBlock> down_, post_;  // depth entries each
    ConvBlock inject_merge_;              // used when inject_channels > 0
    std::vector<ConvBlock> up_, merge_;   // depth entries each, index = level
    Conv2d head_;
    Sigmoid out_sigmoid_;
};

}  // namespace matting::nets
