#pragma once

#include <optional>
#include <string>

#include "matting/imagery/image.hpp"

namespace matting::imagery {

// Decoded raster: the RGB image plus the alpha channel when the file had one.
struct LoadedImage {
    Image image;
    std::optional<AlphaMatte> alpha;
};

// Reads an 8-bit PNG (gray, RGB, or RGBA; palettes expanded). Pixel values
// are scaled to [0,1]. A 4th channel comes back as the alpha matte.
// Throws DataError on missing files, undecodable data, and 16-bit input.
LoadedImage load_image(const std::string& path);

// Reads a single-channel 8-bit PNG as a matte. Throws DataError if the file
// decodes to more than one channel.
AlphaMatte load_matte(const std::string& path,
                      MaskQuality quality = MaskQuality::Fine);

// 8-bit PNG writers; values are clamped to [0,1] and quantized with
// round-to-nearest, so save/load round-trips within 1/255 + 1e-6.
void save_image(const Image& img, const std::string& path);
void save_matte(const AlphaMatte& matte, const std::string& path);

// RGBA writer for foreground cutouts; load_image gives both parts back.
void save_cutout(const Image& img, const AlphaMatte& alpha, const std::string& path);

}  // namespace matting::imagery
