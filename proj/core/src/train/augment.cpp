#include "matting/train/augment.hpp"

#include <stdexcept>

namespace matting::train {

using imagery::AlphaMatte;
using imagery::Image;
using imagery::Rng;

bool random_flip(Image& img, AlphaMatte& alpha, Rng& rng) {
    if (!imagery::same_size(img, alpha))
        throw std::invalid_argument("flip pair size mismatch");
    if (!rng.coin(0.5)) return false;
    img = imagery::flip_horizontal(img);
    alpha = imagery::flip_horizontal(alpha);
    return true;
}

CropChoice choose_crop(const AlphaMatte& alpha, int h, int w, double min_alpha,
                       int max_tries, Rng& rng) {
    if (alpha.height < h || alpha.width < w)
        throw std::invalid_argument("crop larger than input");
    CropChoice choice;
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        choice.y0 = alpha.height == h ? 0 : rng.below_int(alpha.height - h + 1);
        choice.x0 = alpha.width == w ? 0 : rng.below_int(alpha.width - w + 1);
        double mean = 0.0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) mean += alpha.at(choice.y0 + y, choice.x0 + x);
        mean /= static_cast<double>(h) * w;
        if (mean > min_alpha) break;  // otherwise keep the last draw
    }
    return choice;
}

void random_crop(Image& img, AlphaMatte& alpha, int h, int w, double min_alpha,
                 int max_tries, Rng& rng) {
    if (!imagery::same_size(img, alpha))
        throw std::invalid_argument("crop pair size mismatch");
    img = imagery::pad_reflect(img, h, w);
    alpha = imagery::pad_reflect(alpha, h, w);
    const CropChoice c = choose_crop(alpha, h, w, min_alpha, max_tries, rng);
    img = imagery::crop(img, c.y0, c.x0, h, w);
    alpha = imagery::crop(alpha, c.y0, c.x0, h, w);
}

}  // namespace matting::train
