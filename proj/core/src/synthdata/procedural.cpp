#include "matting/synthdata/procedural.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace matting::synthdata {

namespace {

using imagery::AlphaMatte;
using imagery::Image;
using imagery::Rng;

struct Blob {
    double cy, cx, sy, sx;
};

double smoothstep(double e0, double e1, double v) {
    const double t = std::clamp((v - e0) / (e1 - e0), 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

// Stamps a soft dot of the given peak weight; alpha keeps the max.
void stamp(AlphaMatte& a, double py, double px, double radius, double weight) {
    const int y0 = std::max(0, static_cast<int>(std::floor(py - 3 * radius)));
    const int y1 = std::min(a.height - 1, static_cast<int>(std::ceil(py + 3 * radius)));
    const int x0 = std::max(0, static_cast<int>(std::floor(px - 3 * radius)));
    const int x1 = std::min(a.width - 1, static_cast<int>(std::ceil(px + 3 * radius)));
    const double inv = 1.0 / (2.0 * radius * radius);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const double d2 = (y - py) * (y - py) + (x - px) * (x - px);
            const double v = weight * std::exp(-d2 * inv);
            a.at(y, x) = std::max(a.at(y, x), std::min(v, 1.0));
        }
}

}  // namespace

ForegroundSample make_procedural_foreground(int height, int width, Rng rng,
                                            const std::string& id) {
    ForegroundSample s;
    s.id = id;
    s.quality = imagery::MaskQuality::Fine;
    s.alpha = AlphaMatte(height, width);

    // Body: a handful of gaussian lobes in the lower-center region.
    const int n_blobs = 3 + rng.below_int(3);
    std::vector<Blob> blobs;
    for (int i = 0; i < n_blobs; ++i) {
        Blob b;
        b.cy = height * rng.uniform_in(0.45, 0.8);
        b.cx = width * rng.uniform_in(0.3, 0.7);
        b.sy = height * rng.uniform_in(0.12, 0.25);
        b.sx = width * rng.uniform_in(0.1, 0.2);
        blobs.push_back(b);
    }
    const double lo = rng.uniform_in(0.35, 0.45);
    const double hi = lo + rng.uniform_in(0.2, 0.35);
    double top_y = height;
    double top_x = width / 2.0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double field = 0.0;
            for (const Blob& b : blobs) {
                const double dy = (y - b.cy) / b.sy;
                const double dx = (x - b.cx) / b.sx;
                field += std::exp(-0.5 * (dy * dy + dx * dx));
            }
            const double a = smoothstep(lo, hi, field);
            s.alpha.at(y, x) = a;
            if (a > 0.9 && y < top_y) {
                top_y = y;
                top_x = x;
            }
        }

    // Hair: filament polylines wandering upward from the body crown.
    const int n_strands = 10 + rng.below_int(10);
    for (int i = 0; i < n_strands; ++i) {
        double py = top_y + rng.uniform_in(-2.0, 6.0);
        double px = top_x + rng.uniform_in(-0.18, 0.18) * width;
        double angle = rng.uniform_in(-2.2, -0.9);  // radians, mostly upward
        const double curl = rng.uniform_in(-0.12, 0.12);
        const double radius = rng.uniform_in(0.6, 1.2);
        const int steps = 8 + rng.below_int(static_cast<int>(height * 0.25) + 1);
        double weight = rng.uniform_in(0.75, 1.0);
        for (int t = 0; t < steps; ++t) {
            stamp(s.alpha, py, px, radius, weight);
            py += std::sin(angle);
            px += std::cos(angle);
            angle += curl + rng.uniform_in(-0.08, 0.08);
            weight *= 0.985;
            if (py < 1 || px < 1 || px > width - 2) break;
        }
    }

    // Foreground color: two-tone vertical blend with a mild horizontal wave.
    double c0[3], c1[3];
    for (int c = 0; c < 3; ++c) {
        c0[c] = rng.uniform_in(0.1, 0.9);
        c1[c] = rng.uniform_in(0.1, 0.9);
    }
    const double wave_freq = rng.uniform_in(2.0, 6.0);
    const double wave_amp = rng.uniform_in(0.02, 0.08);
    s.fg = Image(height, width);
    for (int y = 0; y < height; ++y) {
        const double ty = static_cast<double>(y) / std::max(1, height - 1);
        for (int x = 0; x < width; ++x) {
            const double w =
                wave_amp * std::sin(wave_freq * 6.2831853 * x / std::max(1, width));
            for (int c = 0; c < 3; ++c) {
                const double v = c0[c] + (c1[c] - c0[c]) * ty + w;
                s.fg.at(c, y, x) = std::clamp(v, 0.0, 1.0);
            }
        }
    }
    return s;
}

imagery::Image make_procedural_background(int height, int width, Rng rng) {
    Image bg(height, width);
    double c0[3], c1[3];
    for (int c = 0; c < 3; ++c) {
        c0[c] = rng.uniform_in(0.0, 1.0);
        c1[c] = rng.uniform_in(0.0, 1.0);
    }
    const double theta = rng.uniform_in(0.0, 6.2831853);
    const double gy = std::sin(theta), gx = std::cos(theta);
    const double fy = rng.uniform_in(1.0, 4.0), fx = rng.uniform_in(1.0, 4.0);
    const double amp = rng.uniform_in(0.05, 0.15);
    const double phase = rng.uniform_in(0.0, 6.2831853);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double u = (gy * y / std::max(1, height - 1) +
                              gx * x / std::max(1, width - 1) + 1.0) *
                             0.5;
            const double tex = amp * std::sin(fy * 6.2831853 * y / height + phase) *
                               std::cos(fx * 6.2831853 * x / width);
            for (int c = 0; c < 3; ++c) {
                const double v = c0[c] + (c1[c] - c0[c]) * u + tex;
                bg.at(c, y, x) = std::clamp(v, 0.0, 1.0);
            }
        }
    return bg;
}

}  // namespace matting::synthdata
