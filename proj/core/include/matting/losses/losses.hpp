#pragma once

#include "matting/imagery/image.hpp"
#include "matting/nets/tensor.hpp"

namespace matting::losses {

// Mixing weights for the three training objectives.
struct LossWeights {
    double lambda_l = 0.5;   // fg vs bg term
    double lambda_1 = 0.25;  // identity term
    double lambda_2 = 0.5;   // consistency term
    double lambda_h = 0.5;   // rgb vs alpha term
};

// Every loss reduces |.| as the MEAN absolute difference over the elements
// of each term, so weighted mixing is resolution-independent. smooth_eps
// switches |d| to sqrt(d^2 + eps^2) — used only to keep finite-difference
// gradient checks away from the kink; training uses the exact form with
// subgradient 0 at zero.

// lambda_l * mean|fg_p - fg_g| + (1 - lambda_l) * mean|bg_p - bg_g|.
// pred holds channel 0 = foreground, channel 1 = background.
double mpn_loss(const nets::Tensor& pred, const imagery::Mask& gt_fg,
                const imagery::Mask& gt_bg, const LossWeights& w,
                double smooth_eps = 0.0);
double mpn_loss_grad(const nets::Tensor& pred, const imagery::Mask& gt_fg,
                     const imagery::Mask& gt_bg, const LossWeights& w,
                     nets::Tensor& dpred, double smooth_eps = 0.0);

// mean|Q(x) - x_mask| + mean|Q(x') - x'_mask|.
double qun_identity_loss(const imagery::Mask& qx, const imagery::Mask& x_mask,
                         const imagery::Mask& qx2, const imagery::Mask& x2_mask,
                         double smooth_eps = 0.0);

// mean|Q(x) - Q(x')|.
double qun_consistency_loss(const imagery::Mask& qx, const imagery::Mask& qx2,
                            double smooth_eps = 0.0);

// lambda_1 * identity + lambda_2 * consistency.
double qun_loss(const imagery::Mask& qx, const imagery::Mask& x_mask,
                const imagery::Mask& qx2, const imagery::Mask& x2_mask,
                const LossWeights& w, double smooth_eps = 0.0);
double qun_loss_grad(const imagery::Mask& qx, const imagery::Mask& x_mask,
                     const imagery::Mask& qx2, const imagery::Mask& x2_mask,
                     const LossWeights& w, imagery::Mask& dqx, imagery::Mask& dqx2,
                     double smooth_eps = 0.0);

// lambda_h * mean|RGB_p - RGB_g| + (1 - lambda_h) * mean|alpha_p - alpha_g|.
// pred holds channels 0-2 = rgb, channel 3 = alpha.
double mrn_loss(const nets::Tensor& pred, const imagery::Image& gt_rgb,
                const imagery::AlphaMatte& gt_alpha, const LossWeights& w,
                double smooth_eps = 0.0);
double mrn_loss_grad(const nets::Tensor& pred, const imagery::Image& gt_rgb,
                     const imagery::AlphaMatte& gt_alpha, const LossWeights& w,
                     nets::Tensor& dpred, double smooth_eps = 0.0);

}  // namespace matting::losses
