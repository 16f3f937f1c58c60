#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace matting::imagery {

// Annotation quality of a matte: fine mattes carry soft boundary detail,
// coarse masks are rough, binary-ish annotations.
enum class MaskQuality : uint8_t { Fine = 0, Coarse = 1 };

// RGB image with values in [0,1]. Storage is channel-planar: three
// height*width planes, row-major within each plane.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    Image() = default;
    Image(int h, int w, double fill = 0.0)
        : height(h), width(w), data(static_cast<size_t>(3) * h * w, fill) {}

    size_t plane_size() const { return static_cast<size_t>(height) * width; }

    double& at(int c, int y, int x) {
        return data[(static_cast<size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<size_t>(c) * height + y) * width + x];
    }
    double* plane(int c) { return data.data() + static_cast<size_t>(c) * plane_size(); }
    const double* plane(int c) const {
        return data.data() + static_cast<size_t>(c) * plane_size();
    }
};

// Single-channel alpha matte or mask with values in [0,1], tagged with the
// annotation quality it represents.
struct AlphaMatte {
    int height = 0;
    int width = 0;
    std::vector<double> data;
    MaskQuality quality = MaskQuality::Fine;

    AlphaMatte() = default;
    AlphaMatte(int h, int w, double fill = 0.0,
               MaskQuality q = MaskQuality::Fine)
        : height(h), width(w), data(static_cast<size_t>(h) * w, fill), quality(q) {}

    size_t size() const { return data.size(); }

    double& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }
};

// A mask is structurally a matte; the quality tag tells them apart.
using Mask = AlphaMatte;

inline bool same_size(const Image& a, const AlphaMatte& b) {
    return a.height == b.height && a.width == b.width;
}
inline bool same_size(const Image& a, const Image& b) {
    return a.height == b.height && a.width == b.width;
}
inline bool same_size(const AlphaMatte& a, const AlphaMatte& b) {
    return a.height == b.height && a.width == b.width;
}

}  // namespace matting::imagery
