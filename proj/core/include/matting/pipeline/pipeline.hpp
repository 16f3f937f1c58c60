#pragma once

#include <string>

#include "matting/imagery/image.hpp"
#include "matting/nets/models.hpp"

namespace matting::pipeline {

// The three trained stages plus their shared sizing, loaded together and
// immutable as a unit.
struct ModelBundle {
    nets::Model mpn, qun, mrn;
    std::string version;

    const nets::NetConfig& config() const { return mpn.config; }
};

// Reads dir/mpn.ckpt, dir/qun.ckpt, dir/mrn.ckpt and rejects bundles whose
// configs disagree.
ModelBundle load_bundle(const std::string& dir);
void save_bundle(ModelBundle& bundle, const std::string& dir);

struct MatteResult {
    imagery::AlphaMatte alpha;   // at input resolution
    imagery::Image fg_rgb;       // at input resolution
    imagery::Mask coarse_mask;   // exact mpn (or external) mask, grid/4
    imagery::Mask unified_mask;  // exact qun output, grid/4
};

// Dimension snapping for arbitrary input sizes: the nearest multiple of
// 4 * 2^depth, clamped to [256, 1024], so the 4x-downscaled masks still
// split 2^depth times.
int working_dim(int n, int depth);

// Full pass: resize to the working grid, downscale 4x, MPN foreground
// channel -> QUN -> MRN, then resize alpha and foreground RGB back to the
// input size. Input must be at least 64x64.
MatteResult infer(const imagery::Image& img, ModelBundle& bundle);

// MPN bypass: an external mask of any resolution is resized to grid/4 and
// fed through the identical QUN -> MRN path. An all-zero mask is accepted
// with a warning on stderr.
MatteResult refine_external_mask(const imagery::Image& img, const imagery::Mask& coarse,
                                 ModelBundle& bundle);

// alpha * F + (1 - alpha) * bg, with F = result.fg_rgb or, when given,
// foreground_override (e.g. the raw input image). bg is resized to the
// result size when it differs.
imagery::Image recomposite(const MatteResult& result, const imagery::Image& bg,
                           const imagery::Image* foreground_override = nullptr);

}  // namespace matting::pipeline
