#include "matting/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include "matting/common/errors.hpp"
#include "matting/imagery/geometry.hpp"
#include "matting/nets/checkpoint.hpp"

namespace matting::pipeline {

namespace {

using imagery::AlphaMatte;
using imagery::Image;
using imagery::Mask;

constexpr int kGridMin = 256;
constexpr int kGridMax = 1024;
constexpr char kBundleVersion[] = "1";

// The QUN -> MRN tail shared by infer and refine_external_mask: feeding
// infer's own mpn mask through refine must reproduce its result bit for bit.
MatteResult run_qun_mrn(const Image& work, const Image& low, const Mask& mask,
                        ModelBundle& bundle, int out_h, int out_w) {
    MatteResult result;
    result.coarse_mask = mask;
    result.unified_mask = nets::qun_forward(bundle.qun, low, mask);
    const nets::Tensor pred = nets::mrn_forward(bundle.mrn, work, result.unified_mask);
    result.alpha = imagery::resize(nets::to_mask(pred, 3), out_h, out_w);
    result.fg_rgb = imagery::resize(nets::to_image(pred, 0), out_h, out_w);
    return result;
}

}  // namespace

int working_dim(int n, int depth) {
    const int grain = 4 << depth;
    const int lo = (kGridMin + grain - 1) / grain;  // smallest multiple >= 256
    const int hi = kGridMax / grain;                // largest multiple <= 1024
    if (lo > hi) throw std::invalid_argument("depth too large for the working grid");
    const int k = std::clamp(
        static_cast<int>(std::lround(static_cast<double>(n) / grain)), lo, hi);
    return k * grain;
}

ModelBundle load_bundle(const std::string& dir) {
    const std::filesystem::path base(dir);
    ModelBundle bundle{
        nets::load_checkpoint_expect((base / "mpn.ckpt").string(), nets::NetKind::Mpn),
        nets::load_checkpoint_expect((base / "qun.ckpt").string(), nets::NetKind::Qun),
        nets::load_checkpoint_expect((base / "mrn.ckpt").string(), nets::NetKind::Mrn),
        kBundleVersion};
    if (!(bundle.mpn.config == bundle.qun.config) ||
        !(bundle.mpn.config == bundle.mrn.config))
        throw DataError("bundle checkpoints disagree on the net configuration: " + dir);
    return bundle;
}

void save_bundle(ModelBundle& bundle, const std::string& dir) {
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    nets::save_checkpoint(bundle.mpn, (base / "mpn.ckpt").string());
    nets::save_checkpoint(bundle.qun, (base / "qun.ckpt").string());
    nets::save_checkpoint(bundle.mrn, (base / "mrn.ckpt").string());
}

MatteResult infer(const Image& img, ModelBundle& bundle) {
    if (img.height < 64 || img.width < 64)
        throw DataError("infer input must be at least 64x64");
    const int depth = bundle.config().depth;
    const int gh = working_dim(img.height, depth);
    const int gw = working_dim(img.width, depth);
    const Image work = imagery::resize(img, gh, gw);
    const Image low = imagery::resize(work, gh / 4, gw / 4);
    const Mask coarse = nets::to_mask(nets::mpn_forward(bundle.mpn, low), 0);
    return run_qun_mrn(work, low, coarse, bundle, img.height, img.width);
}

MatteResult refine_external_mask(const Image& img, const Mask& coarse,
                                 ModelBundle& bundle) {
    if (img.height < 64 || img.width < 64)
        throw DataError("refine input must be at least 64x64");
    if (coarse.height < 1 || coarse.width < 1)
        throw DataError("refine mask is empty");
    if (std::all_of(coarse.data.begin(), coarse.data.end(),
                    [](double v) { return v == 0.0; }))
        std::cerr << "warning: external mask is all zero; refining anyway\n";

    const int depth = bundle.config().depth;
    const int gh = working_dim(img.height, depth);
    const int gw = working_dim(img.width, depth);
    const Image work = imagery::resize(img, gh, gw);
    const Image low = imagery::resize(work, gh / 4, gw / 4);
    const Mask mask = imagery::resize(coarse, gh / 4, gw / 4);
    return run_qun_mrn(work, low, mask, bundle, img.height, img.width);
}

imagery::Image recomposite(const MatteResult& result, const Image& bg,
                           const Image* foreground_override) {
    const AlphaMatte& a = result.alpha;
    const Image& fg = foreground_override ? *foreground_override : result.fg_rgb;
    if (!imagery::same_size(fg, a))
        throw std::invalid_argument("foreground/alpha size mismatch");
    const Image bgr = imagery::same_size(bg, a) ? bg : imagery::resize(bg, a.height, a.width);
    Image out(a.height, a.width);
    for (int c = 0; c < 3; ++c) {
        const double* f = fg.plane(c);
        const double* b = bgr.plane(c);
        double* o = out.plane(c);
        for (size_t i = 0; i < a.size(); ++i)
            o[i] = a.data[i] * f[i] + (1.0 - a.data[i]) * b[i];
    }
    return out;
}

}  // namespace matting::pipeline
