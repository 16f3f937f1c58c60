#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "matting/imagery/image.hpp"
#include "matting/imagery/rng.hpp"

namespace testutil {

using matting::imagery::AlphaMatte;
using matting::imagery::Image;
using matting::imagery::MaskQuality;
using matting::imagery::Rng;

inline Image random_image(Rng& rng, int h, int w) {
    Image img(h, w);
    for (double& v : img.data) v = rng.uniform();
    return img;
}

inline AlphaMatte random_matte(Rng& rng, int h, int w,
                               MaskQuality q = MaskQuality::Fine) {
    AlphaMatte m(h, w, 0.0, q);
    for (double& v : m.data) v = rng.uniform();
    return m;
}

// Matte with saturated plateaus so connectivity's omega region is usually
// nonempty: ~30% exact 1.0, ~20% exact 0.0, rest soft.
inline AlphaMatte random_saturated_matte(Rng& rng, int h, int w) {
    AlphaMatte m(h, w);
    for (double& v : m.data) {
        const double u = rng.uniform();
        if (u > 0.7) v = 1.0;
        else if (u < 0.2) v = 0.0;
        else v = rng.uniform();
    }
    return m;
}

// Soft-edged disk: 1 inside radius r0, linear falloff to 0 at r1.
inline AlphaMatte soft_disk(int h, int w, double cy, double cx, double r0, double r1) {
    AlphaMatte m(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double r = std::hypot(y - cy, x - cx);
            m.at(y, x) = std::clamp((r1 - r) / (r1 - r0), 0.0, 1.0);
        }
    return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = a.size() == b.size() ? 0.0
                                        : std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < a.size() && i < b.size(); ++i)
        worst = std::max(worst, std::fabs(a[i] - b[i]));
    return worst;
}

inline bool in_unit_range(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return x >= 0.0 && x <= 1.0; });
}

// Fresh scratch directory under the system temp root, removed on
// destruction so test runs do not accumulate state.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::atomic<uint64_t> serial{0};
        path = std::filesystem::temp_directory_path() /
               ("matting_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(serial.fetch_add(1)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace testutil
