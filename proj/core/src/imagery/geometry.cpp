#include "matting/imagery/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace matting::imagery {

namespace {

double lerp_clamped(double a, double b, double t) {
    const double v = a + t * (b - a);
    return std::clamp(v, std::min(a, b), std::max(a, b));
}

void resize_plane(const double* src, int sh, int sw, double* dst, int dh, int dw) {
    const double sy = static_cast<double>(sh) / dh;
    const double sx = static_cast<double>(sw) / dw;
    for (int y = 0; y < dh; ++y) {
        const double fy = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(fy));
        const double ty = fy - y0;
        const int y0c = std::clamp(y0, 0, sh - 1);
        const int y1c = std::clamp(y0 + 1, 0, sh - 1);
        for (int x = 0; x < dw; ++x) {
            const double fx = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(fx));
            const double tx = fx - x0;
            const int x0c = std::clamp(x0, 0, sw - 1);
            const int x1c = std::clamp(x0 + 1, 0, sw - 1);
            const double top = lerp_clamped(src[static_cast<size_t>(y0c) * sw + x0c],
                                            src[static_cast<size_t>(y0c) * sw + x1c], tx);
            const double bot = lerp_clamped(src[static_cast<size_t>(y1c) * sw + x0c],
                                            src[static_cast<size_t>(y1c) * sw + x1c], tx);
            dst[static_cast<size_t>(y) * dw + x] = lerp_clamped(top, bot, ty);
        }
    }
}

void check_target(int h, int w) {
    if (h < 1 || w < 1)
        throw std::invalid_argument("resize: target size must be >= 1, got " +
                                    std::to_string(h) + "x" + std::to_string(w));
}

int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    int j = i % period;
    if (j < 0) j += period;
    return j < n ? j : period - 1 - j;
}

}  // namespace

Image resize(const Image& img, int out_h, int out_w) {
    check_target(out_h, out_w);
    if (out_h == img.height && out_w == img.width) return img;
    Image out(out_h, out_w);
    for (int c = 0; c < 3; ++c)
        resize_plane(img.plane(c), img.height, img.width, out.plane(c), out_h, out_w);
    return out;
}

AlphaMatte resize(const AlphaMatte& m, int out_h, int out_w) {
    check_target(out_h, out_w);
    if (out_h == m.height && out_w == m.width) return m;
    AlphaMatte out(out_h, out_w, 0.0, m.quality);
    resize_plane(m.data.data(), m.height, m.width, out.data.data(), out_h, out_w);
    return out;
}

Image flip_horizontal(const Image& img) {
    Image out(img.height, img.width);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                out.at(c, y, x) = img.at(c, y, img.width - 1 - x);
    return out;
}

AlphaMatte flip_horizontal(const AlphaMatte& m) {
    AlphaMatte out(m.height, m.width, 0.0, m.quality);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            out.at(y, x) = m.at(y, m.width - 1 - x);
    return out;
}

Image crop(const Image& img, int y0, int x0, int h, int w) {
    if (y0 < 0 || x0 < 0 || h < 1 || w < 1 || y0 + h > img.height || x0 + w > img.width)
        throw std::invalid_argument("crop: window out of bounds");
    Image out(h, w);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) out.at(c, y, x) = img.at(c, y0 + y, x0 + x);
    return out;
}

AlphaMatte crop(const AlphaMatte& m, int y0, int x0, int h, int w) {
    if (y0 < 0 || x0 < 0 || h < 1 || w < 1 || y0 + h > m.height || x0 + w > m.width)
        throw std::invalid_argument("crop: window out of bounds");
    AlphaMatte out(h, w, 0.0, m.quality);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.at(y, x) = m.at(y0 + y, x0 + x);
    return out;
}

Image pad_reflect(const Image& img, int min_h, int min_w) {
    const int h = std::max(img.height, min_h);
    const int w = std::max(img.width, min_w);
    if (h == img.height && w == img.width) return img;
    Image out(h, w);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < h; ++y) {
            const int sy = reflect_index(y, img.height);
            for (int x = 0; x < w; ++x)
                out.at(c, y, x) = img.at(c, sy, reflect_index(x, img.width));
        }
    return out;
}

AlphaMatte pad_reflect(const AlphaMatte& m, int min_h, int min_w) {
    const int h = std::max(m.height, min_h);
    const int w = std::max(m.width, min_w);
    if (h == m.height && w == m.width) return m;
    AlphaMatte out(h, w, 0.0, m.quality);
    for (int y = 0; y < h; ++y) {
        const int sy = reflect_index(y, m.height);
        for (int x = 0; x < w; ++x)
            out.at(y, x) = m.at(sy, reflect_index(x, m.width));
    }
    return out;
}

}  // namespace matting::imagery
