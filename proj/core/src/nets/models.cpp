#include "matting/nets/models.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace matting::nets {

std::string to_string(NetKind kind) {
    switch (kind) {
        case NetKind::Mpn: return "mpn";
        case NetKind::Qun: return "qun";
        case NetKind::Mrn: return "mrn";
    }
    throw std::invalid_argument("unknown net kind");
}

NetKind net_kind_from_string(const std::string& id) {
    if (id == "mpn") return NetKind::Mpn;
    if (id == "qun") return NetKind::Qun;
    if (id == "mrn") return NetKind::Mrn;
    throw std::invalid_argument("unknown net id: " + id);
}

void NetConfig::validate() const {
    if (base_width < 4) throw std::invalid_argument("base_width must be >= 4");
    if (depth < 2) throw std::invalid_argument("depth must be >= 2");
    if (scale_gap != 4) throw std::invalid_argument("scale_gap must be 4");
    if (low_h < 1 || low_w < 1)
        throw std::invalid_argument("low_res must be positive");
    if (high_h != scale_gap * low_h || high_w != scale_gap * low_w)
        throw std::invalid_argument("high_res must be scale_gap x low_res per axis");
}

UNetSpec unet_spec_for(NetKind kind, const NetConfig& config) {
    config.validate();
    UNetSpec spec;
    spec.base_width = config.base_width;
    spec.depth = config.depth;
    switch (kind) {
        case NetKind::Mpn:
            spec.in_channels = 3;
            spec.out_channels = 2;
            break;
        case NetKind::Qun:
            spec.in_channels = 4;  // RGB + mask
            spec.out_channels = 1;
            spec.logit_skip_channel = 3;
            // The rectifier is lighter than the two predictors.
            spec.base_width = std::max(4, config.base_width / 2);
            spec.depth = std::max(2, config.depth - 1);
            break;
        case NetKind::Mrn:
            spec.in_channels = 3;
            spec.out_channels = 4;  // RGB + alpha
            spec.inject_channels = 1;
            break;
    }
    return spec;
}

Model::Model(NetKind k, const NetConfig& c) : kind(k), config(c), net(unet_spec_for(k, c)) {}

void Model::init(uint64_t seed, bool zero_head) {
    imagery::Rng rng(seed);
    net.init_params(rng, zero_head);
}

Tensor mpn_forward(Model& m, const imagery::Image& img) {
    if (m.kind != NetKind::Mpn) throw std::invalid_argument("model is not an mpn");
    return m.net.forward(from_image(img));
}

imagery::Mask qun_forward(Model& m, const imagery::Image& img, const imagery::Mask& mask) {
    if (m.kind != NetKind::Qun) throw std::invalid_argument("model is not a qun");
    if (!imagery::same_size(img, mask))
        throw std::invalid_argument("qun image/mask resolution mismatch");
    const Tensor out = m.net.forward(concat_channels(from_image(img), from_mask(mask)));
    return to_mask(out, 0);
}

Tensor mrn_forward(Model& m, const imagery::Image& img, const imagery::Mask& mask) {
    if (m.kind != NetKind::Mrn) throw std::invalid_argument("model is not an mrn");
    if (mask.height * 4 != img.height || mask.width * 4 != img.width)
        throw std::invalid_argument("mrn mask must be exactly image size / 4");
    const Tensor inject = from_mask(mask);
    return m.net.forward(from_image(img), &inject);
}

uint64_t param_digest(UNet& net) {
    uint64_t h = 0xCBF29CE484222325ull;
    auto mix_bytes = [&h](const void* p, size_t n) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001B3ull;
        }
    };
    for (const ParamRef& p : net.params())
        mix_bytes(p.value->data(), p.value->size() * sizeof(double));
    return h;
}

}  // namespace matting::nets
