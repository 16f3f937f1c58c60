#include "matting/nets/unet.hpp"

#include <cmath>
#include <stdexcept>

namespace matting::nets {

namespace {

constexpr int kInjectLevel = 2;  // concat point sits at 1/4 input scale

double clamped_logit(double m) {
    const double c = std::clamp(m, 1e-6, 1.0 - 1e-6);
    return std::log(c / (1.0 - c));
}

size_t conv_block_params(int in, int out) {
    return static_cast<size_t>(in) * out * 9 + out  // conv
           + 2 * static_cast<size_t>(out);          // norm scale + shift
}

}  // namespace

size_t unet_param_count(const UNetSpec& s) {
    size_t total = conv_block_params(s.in_channels, s.base_width);
    for (int i = 0; i < s.depth; ++i) {
        const int cin = s.base_width << i;
        const int cout = s.base_width << (i + 1);
        total += conv_block_params(cin, cout);    // down
        total += conv_block_params(cout, cout);   // post
        total += conv_block_params(cout, cin);    // up
        total += conv_block_params(2 * cin, cin); // merge
    }
    if (s.inject_channels > 0) {
        const int c = s.base_width << kInjectLevel;
        total += conv_block_params(c + s.inject_channels, c);
    }
    total += static_cast<size_t>(s.base_width) * s.out_channels * 9 + s.out_channels;
    return total;
}

UNet::UNet(const UNetSpec& spec) : spec_(spec) {
    if (spec.depth < 2) throw std::invalid_argument("unet depth must be >= 2");
    if (spec.base_width < 1 || spec.in_channels < 1 || spec.out_channels < 1)
        throw std::invalid_argument("unet channel counts must be positive");
    if (spec.logit_skip_channel >= spec.in_channels)
        throw std::invalid_argument("logit skip channel out of range");
    stem_ = ConvBlock(spec.in_channels, spec.base_width);
    for (int i = 0; i < spec.depth; ++i) {
        const int cin = spec.base_width << i;
        const int cout = spec.base_width << (i + 1);
        down_.emplace_back(cin, cout, /*stride=*/2);
        post_.emplace_back(cout, cout);
        up_.emplace_back(cout, cin);
        merge_.emplace_back(2 * cin, cin);
    }
    if (spec.inject_channels > 0) {
        const int c = spec.base_width << kInjectLevel;
        inject_merge_ = ConvBlock(c + spec.inject_channels, c);
    }
    head_ = Conv2d(spec.base_width, spec.out_channels, 3, 1);
}

Tensor UNet::forward(const Tensor& x, const Tensor* inject) {
    if (x.channels != spec_.in_channels)
        throw std::invalid_argument("unet input channel mismatch");
    const int div = 1 << spec_.depth;
    if (x.height % div != 0 || x.width % div != 0 || x.height < div || x.width < div)
        throw std::invalid_argument("unet input dims must be positive multiples of 2^depth");
    if (spec_.inject_channels > 0) {
        if (!inject) throw std::invalid_argument("unet expects an injected feature map");
        if (inject->channels != spec_.inject_channels ||
            inject->height * 4 != x.height || inject->width * 4 != x.width)
            throw std::invalid_argument("injected map must be input size / 4");
    } else if (inject) {
        throw std::invalid_argument("unet takes no injected map");
    }

    std::vector<Tensor> enc(spec_.depth + 1);
    enc[0] = stem_.forward(x);
    for (int i = 0; i < spec_.depth; ++i) {
        Tensor t = post_[i].forward(down_[i].forward(enc[i]));
        if (spec_.inject_channels > 0 && i == kInjectLevel - 1)
            t = inject_merge_.forward(concat_channels(t, *inject));
        enc[i + 1] = std::move(t);
    }

    Tensor t = std::move(enc[spec_.depth]);
    for (int i = spec_.depth - 1; i >= 0; --i) {
        Tensor u = up_[i].forward(upsample2x(t));
        t = merge_[i].forward(concat_channels(u, enc[i]));
    }
    Tensor logits = head_.forward(t);
    if (spec_.logit_skip_channel >= 0) {
        const double* m = x.plane(spec_.logit_skip_channel);
        for (size_t i = 0; i < logits.numel(); ++i)
            logits.data[i] += clamped_logit(m[i]);
    }
    return out_sigmoid_.forward(logits);
}

void UNet::backward(const Tensor& dy) {
    // The logit skip is a constant offset w.r.t. parameters, so it
    // contributes nothing here beyond passing through the sigmoid.
    Tensor g = head_.backward(out_sigmoid_.backward(dy));

    // Decoder levels were executed d-1..0; reverse order is 0..d-1.
    std::vector<Tensor> denc(spec_.depth + 1);
    for (int i = 0; i < spec_.depth; ++i) {
        Tensor dcat = merge_[i].backward(g);
        Tensor dup, dskip;
        split_channels(dcat, spec_.base_width << i, dup, dskip);
        denc[i] = std::move(dskip);
        g = upsample2x_backward(up_[i].backward(dup));
    }
    denc[spec_.depth] = std::move(g);

    for (int i = spec_.depth; i >= 1; --i) {
        Tensor t = std::move(denc[i]);
        if (spec_.inject_channels > 0 && i == kInjectLevel) {
            Tensor dpost, dinject;
            Tensor dcat = inject_merge_.backward(t);
            split_channels(dcat, spec_.base_width << kInjectLevel, dpost, dinject);
            t = std::move(dpost);  // injected map is data, its grad is dropped
        }
        Tensor dskip = down_[i - 1].backward(post_[i - 1].backward(t));
        for (size_t k = 0; k < dskip.numel(); ++k) denc[i - 1].data[k] += dskip.data[k];
    }
    stem_.backward(denc[0]);
}

std::vector<ParamRef> UNet::params() {
    std::vector<ParamRef> out;
    stem_.collect("stem", out);
    for (int i = 0; i < spec_.depth; ++i) {
        const std::string lvl = std::to_string(i);
        down_[i].collect("down" + lvl, out);
        post_[i].collect("post" + lvl, out);
    }
    if (spec_.inject_channels > 0) inject_merge_.collect("inject", out);
    for (int i = 0; i < spec_.depth; ++i) {
        const std::string lvl = std::to_string(i);
        up_[i].collect("up" + lvl, out);
        merge_[i].collect("merge" + lvl, out);
    }
    head_.collect("head", out);
    return out;
}

void UNet::zero_grad() {
    for (ParamRef& p : params()) std::fill(p.grad->begin(), p.grad->end(), 0.0);
}

void UNet::init_params(imagery::Rng& rng, bool zero_head) {
    stem_.conv.init_he(rng);
    for (int i = 0; i < spec_.depth; ++i) {
        down_[i].conv.init_he(rng);
        post_[i].conv.init_he(rng);
    }
    if (spec_.inject_channels > 0) inject_merge_.conv.init_he(rng);
    for (int i = 0; i < spec_.depth; ++i) {
        up_[i].conv.init_he(rng);
        merge_[i].conv.init_he(rng);
    }
    if (zero_head)
        head_.init_zero();
    else
        head_.init_he(rng);
}

}  // namespace matting::nets
