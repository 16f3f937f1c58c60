#pragma once

#include <cstdint>
#include <string>

#include "matting/imagery/image.hpp"
#include "matting/nets/unet.hpp"

namespace matting::nets {

enum class NetKind : uint8_t { Mpn = 0, Qun = 1, Mrn = 2 };

std::string to_string(NetKind kind);
NetKind net_kind_from_string(const std::string& id);

// Shared sizing for the three networks. low/high are (height, width) with a
// fixed 4x gap; forward passes accept any resolution divisible by 2^depth,
// these fields record the intended operating points.
struct NetConfig {
    int base_width = 32;
    int depth = 4;
    int low_h = 192, low_w = 160;
    int high_h = 768, high_w = 640;
    int scale_gap = 4;

    void validate() const;  // throws std::invalid_argument
    bool operator==(const NetConfig&) const = default;
};

UNetSpec unet_spec_for(NetKind kind, const NetConfig& config);

// A network plus the metadata checkpoints carry.
struct Model {
    NetKind kind;
    NetConfig config;
    UNet net;

    Model(NetKind k, const NetConfig& c);
    void init(uint64_t seed, bool zero_head = true);
};

// Image -> (fg, bg) prediction, channels 0/1, sigmoid range.
Tensor mpn_forward(Model& m, const imagery::Image& img);

// (Image, mask) -> unified mask. Sizes must match.
imagery::Mask qun_forward(Model& m, const imagery::Image& img, const imagery::Mask& mask);

// (Image, mask at 1/4 size) -> 4-channel map: 0-2 foreground RGB, 3 alpha.
Tensor mrn_forward(Model& m, const imagery::Image& img, const imagery::Mask& mask);

// Order-sensitive FNV-1a over all parameter bytes; used for freeze checks.
uint64_t param_digest(UNet& net);

}  // namespace matting::nets
