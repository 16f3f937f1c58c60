#pragma once

#include "matting/imagery/geometry.hpp"
#include "matting/imagery/image.hpp"
#include "matting/imagery/rng.hpp"

namespace matting::train {

// Coin-flip horizontal flip applied to both members of a training pair.
// Returns whether the pair was flipped (so callers can mirror additional
// aligned rasters with imagery::flip_horizontal).
bool random_flip(imagery::Image& img, imagery::AlphaMatte& alpha, imagery::Rng& rng);

// Crop window choice biased toward foreground: draws up to max_tries
// corners, keeping the first whose mean alpha exceeds min_alpha, otherwise
// the last draw. The alpha raster must already be at least (h, w).
struct CropChoice {
    int y0 = 0, x0 = 0;
};
CropChoice choose_crop(const imagery::AlphaMatte& alpha, int h, int w,
                       double min_alpha, int max_tries, imagery::Rng& rng);

// Spec-shaped pair crop: reflect-pads small inputs, then applies the same
// biased window to both rasters.
void random_crop(imagery::Image& img, imagery::AlphaMatte& alpha, int h, int w,
                 double min_alpha, int max_tries, imagery::Rng& rng);

}  // namespace matting::train
