#include "matting/degrade/degrade.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "matting/common/errors.hpp"
#include "matting/common/kvfile.hpp"

namespace matting::degrade {

namespace {

using imagery::Mask;

// 1-D box pass along one axis with replicate padding. A square box filter
// factors into two such passes because clamping is independent per axis.
void box_pass(const Mask& src, Mask& dst, int radius, bool horizontal) {
    const int h = src.height, w = src.width;
    const double inv = 1.0 / (2 * radius + 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int yy = horizontal ? y : std::clamp(y + k, 0, h - 1);
                const int xx = horizontal ? std::clamp(x + k, 0, w - 1) : x;
                acc += src.at(yy, xx);
            }
            dst.at(y, x) = acc * inv;
        }
}

// 1-D order-filter pass (max or min), same separability argument.
void order_pass(const Mask& src, Mask& dst, int radius, bool horizontal, bool take_max) {
    const int h = src.height, w = src.width;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double best = src.at(y, x);
            for (int k = -radius; k <= radius; ++k) {
                const int yy = horizontal ? y : std::clamp(y + k, 0, h - 1);
                const int xx = horizontal ? std::clamp(x + k, 0, w - 1) : x;
                const double v = src.at(yy, xx);
                best = take_max ? std::max(best, v) : std::min(best, v);
            }
            dst.at(y, x) = best;
        }
}

Mask morph(const Mask& mask, int radius, bool take_max) {
    if (radius < 1) throw std::invalid_argument("morph radius must be >= 1");
    Mask tmp(mask.height, mask.width, 0.0, mask.quality);
    Mask out(mask.height, mask.width, 0.0, mask.quality);
    order_pass(mask, tmp, radius, /*horizontal=*/true, take_max);
    order_pass(tmp, out, radius, /*horizontal=*/false, take_max);
    return out;
}

std::string join_sizes(const std::vector<int>& sizes) {
    std::ostringstream os;
    for (size_t i = 0; i < sizes.size(); ++i) {
        if (i) os << ',';
        os << sizes[i];
    }
    return os.str();
}

std::vector<int> parse_sizes(const std::string& text, const std::string& path) {
    std::vector<int> sizes;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        try {
            size_t pos = 0;
            const int v = std::stoi(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            sizes.push_back(v);
        } catch (const std::exception&) {
            throw DataError(path + ": bad blur_sizes entry '" + item + "'");
        }
    }
    if (sizes.empty()) throw DataError(path + ": blur_sizes is empty");
    return sizes;
}

}  // namespace

void DegradeSpec::validate() const {
    if (blur_sizes.empty()) throw std::invalid_argument("blur_sizes must be nonempty");
    for (const int s : blur_sizes)
        if (s < 3 || s % 2 == 0)
            throw std::invalid_argument("blur sizes must be odd and >= 3");
    if (!(binarize_threshold > 0.0 && binarize_threshold < 1.0))
        throw std::invalid_argument("binarize_threshold must be in (0,1)");
    if (morph_radius_min < 1 || morph_radius_max < morph_radius_min)
        throw std::invalid_argument("morph radius range must satisfy 1 <= min <= max");
    for (const double p : {p_binarize, p_morph, p_blur})
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("op probabilities must be in [0,1]");
}

DegradeSpec load_degrade_spec(const std::string& path) {
    const KvMap kv = load_kv_file(path);
    DegradeSpec spec;
    if (auto it = kv.find("blur_sizes"); it != kv.end())
        spec.blur_sizes = parse_sizes(it->second, path);
    spec.binarize_threshold =
        kv_get_double(kv, "binarize_threshold", spec.binarize_threshold);
    spec.morph_radius_min = kv_get_int(kv, "morph_radius_min", spec.morph_radius_min);
    spec.morph_radius_max = kv_get_int(kv, "morph_radius_max", spec.morph_radius_max);
    spec.p_binarize = kv_get_double(kv, "p_binarize", spec.p_binarize);
    spec.p_morph = kv_get_double(kv, "p_morph", spec.p_morph);
    spec.p_blur = kv_get_double(kv, "p_blur", spec.p_blur);
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(path + ": " + e.what());
    }
    return spec;
}

void save_degrade_spec(const DegradeSpec& spec, const std::string& path) {
    KvMap kv;
    kv["blur_sizes"] = join_sizes(spec.blur_sizes);
    kv["binarize_threshold"] = kv_format(spec.binarize_threshold);
    kv["morph_radius_min"] = std::to_string(spec.morph_radius_min);
    kv["morph_radius_max"] = std::to_string(spec.morph_radius_max);
    kv["p_binarize"] = kv_format(spec.p_binarize);
    kv["p_morph"] = kv_format(spec.p_morph);
    kv["p_blur"] = kv_format(spec.p_blur);
    save_kv_file(kv, path);
}

Mask blur(const Mask& mask, int size) {
    if (size < 3 || size % 2 == 0)
        throw std::invalid_argument("blur size must be odd and >= 3");
    const int radius = size / 2;
    Mask tmp(mask.height, mask.width, 0.0, mask.quality);
    Mask out(mask.height, mask.width, 0.0, mask.quality);
    box_pass(mask, tmp, radius, /*horizontal=*/true);
    box_pass(tmp, out, radius, /*horizontal=*/false);
    return out;
}

Mask binarize(const Mask& mask, double t) {
    if (!(t > 0.0 && t < 1.0))
        throw std::invalid_argument("binarize threshold must be in (0,1)");
    Mask out(mask.height, mask.width, 0.0, mask.quality);
    for (size_t i = 0; i < mask.data.size(); ++i)
        out.data[i] = mask.data[i] >= t ? 1.0 : 0.0;
    return out;
}

Mask dilate(const Mask& mask, int radius) { return morph(mask, radius, /*take_max=*/true); }

Mask erode(const Mask& mask, int radius) { return morph(mask, radius, /*take_max=*/false); }

Mask degrade(const imagery::AlphaMatte& alpha, const DegradeSpec& spec,
             imagery::Rng& rng) {
    if (alpha.quality != imagery::MaskQuality::Fine)
        throw std::invalid_argument("degrade expects a fine-quality input");
    spec.validate();

    // Fixed draw order, every decision drawn whether or not its op fires.
    const double u_binarize = rng.uniform();
    const double u_morph = rng.uniform();
    const double u_morph_type = rng.uniform();
    const int radius =
        spec.morph_radius_min +
        rng.below_int(spec.morph_radius_max - spec.morph_radius_min + 1);
    const double u_blur = rng.uniform();
    const int size = spec.blur_sizes[rng.below_int(static_cast<int>(spec.blur_sizes.size()))];

    Mask out = alpha;
    if (u_binarize < spec.p_binarize) out = binarize(out, spec.binarize_threshold);
    if (u_morph < spec.p_morph)
        out = u_morph_type < 0.5 ? dilate(out, radius) : erode(out, radius);
    if (u_blur < spec.p_blur) out = blur(out, size);
    out.quality = imagery::MaskQuality::Coarse;
    return out;
}

}  // namespace matting::degrade
