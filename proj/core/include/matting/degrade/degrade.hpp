#pragma once

#include <string>
#include <vector>

#include "matting/imagery/image.hpp"
#include "matting/imagery/rng.hpp"

namespace matting::degrade {

// Knobs for synthesizing coarse masks out of fine mattes. Defaults produce
// visible but not destructive degradation.
struct DegradeSpec {
    std::vector<int> blur_sizes = {3, 5};  // odd, >= 3
    double binarize_threshold = 0.5;       // in (0,1)
    int morph_radius_min = 1;
    int morph_radius_max = 3;
    double p_binarize = 0.5;
    double p_morph = 0.5;  // dilate or erode, coin flip between them
    double p_blur = 1.0;

    // Throws std::invalid_argument when any field is out of contract.
    void validate() const;
};

// Tab-separated key-value round trip (same format as config files).
DegradeSpec load_degrade_spec(const std::string& path);
void save_degrade_spec(const DegradeSpec& spec, const std::string& path);

// Normalized box filter with edge-replicate padding. size odd, >= 3.
imagery::Mask blur(const imagery::Mask& mask, int size);

// Element >= t -> 1 else 0. t in (0,1).
imagery::Mask binarize(const imagery::Mask& mask, double t);

// Grayscale max/min filter over the (2r+1)^2 square, edge-replicate.
imagery::Mask dilate(const imagery::Mask& mask, int radius);
imagery::Mask erode(const imagery::Mask& mask, int radius);

// Applies a random subset of ops in fixed order binarize -> morph -> blur.
// All random decisions are drawn up front in a fixed order regardless of
// which ops fire, so a given (rng state) always yields the same output:
//   1. u_binarize   (apply binarize if < p_binarize)
//   2. u_morph      (apply a morph op if < p_morph)
//   3. u_morph_type (< 0.5 dilate, else erode)
//   4. radius       (uniform in [morph_radius_min, morph_radius_max])
//   5. u_blur       (apply blur if < p_blur)
//   6. size_index   (uniform over blur_sizes)
// Input must be fine quality; output is tagged coarse.
imagery::Mask degrade(const imagery::AlphaMatte& alpha, const DegradeSpec& spec,
                      imagery::Rng& rng);

}  // namespace matting::degrade
