#pragma once

#include "matting/imagery/image.hpp"

namespace matting::imagery {

// Bilinear resize with half-pixel-centered sampling. Interpolation is
// implemented as nested lerps, so a constant field resizes to exactly that
// constant and an identity target size is bitwise-equal to the input.
// Output values never leave [min(input), max(input)].
// Throws std::invalid_argument for non-positive target sizes.
Image resize(const Image& img, int out_h, int out_w);
AlphaMatte resize(const AlphaMatte& m, int out_h, int out_w);

Image flip_horizontal(const Image& img);
AlphaMatte flip_horizontal(const AlphaMatte& m);

// Extracts the window rows [y0, y0+h) x cols [x0, x0+w); must lie inside.
Image crop(const Image& img, int y0, int x0, int h, int w);
AlphaMatte crop(const AlphaMatte& m, int y0, int x0, int h, int w);

// Grows the field to at least (min_h, min_w) by mirroring edge content.
Image pad_reflect(const Image& img, int min_h, int min_w);
AlphaMatte pad_reflect(const AlphaMatte& m, int min_h, int min_w);

}  // namespace matting::imagery
