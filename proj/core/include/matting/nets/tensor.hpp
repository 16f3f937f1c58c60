#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "matting/imagery/image.hpp"

namespace matting::nets {

// Dense CHW activation block, double precision, row-major planes.
struct Tensor {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int c, int h, int w, double fill = 0.0)
        : channels(c), height(h), width(w),
          data(static_cast<size_t>(c) * h * w, fill) {}

    size_t numel() const { return data.size(); }
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

    bool same_shape(const Tensor& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }
};

inline Tensor from_image(const imagery::Image& img) {
    Tensor t(3, img.height, img.width);
    t.data = img.data;
    return t;
}

inline Tensor from_mask(const imagery::Mask& mask) {
    Tensor t(1, mask.height, mask.width);
    t.data = mask.data;
    return t;
}

// Extracts one channel as a mask (alpha-style view copy).
inline imagery::Mask to_mask(const Tensor& t, int channel,
                             imagery::MaskQuality q = imagery::MaskQuality::Fine) {
    imagery::Mask m(t.height, t.width, 0.0, q);
    const double* p = t.plane(channel);
    std::copy(p, p + t.plane_size(), m.data.begin());
    return m;
}

inline imagery::Image to_image(const Tensor& t, int first_channel = 0) {
    imagery::Image img(t.height, t.width);
    const double* p = t.plane(first_channel);
    std::copy(p, p + 3 * t.plane_size(), img.data.begin());
    return img;
}

}  // namespace matting::nets
