#include "matting/losses/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace matting::losses {

namespace {

double abs_value(double d, double eps) {
    return eps > 0.0 ? std::sqrt(d * d + eps * eps) : std::fabs(d);
}

// d/dd of abs_value; exact form uses subgradient 0 at the kink.
double abs_slope(double d, double eps) {
    if (eps > 0.0) return d / std::sqrt(d * d + eps * eps);
    return d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
}

// mean|a - b| over n elements; optionally writes the gradient w.r.t. a,
// scaled by `weight`, into grad (accumulating).
double l1_mean(const double* a, const double* b, size_t n, double eps,
               double weight = 0.0, double* grad = nullptr) {
    double acc = 0.0;
    const double gscale = weight / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += abs_value(d, eps);
        if (grad) grad[i] += gscale * abs_slope(d, eps);
    }
    return acc / static_cast<double>(n);
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double mpn_loss(const nets::Tensor& pred, const imagery::Mask& gt_fg,
                const imagery::Mask& gt_bg, const LossWeights& w, double smooth_eps) {
    require(pred.channels == 2, "mpn prediction must have 2 channels");
    require(pred.height == gt_fg.height && pred.width == gt_fg.width &&
                imagery::same_size(gt_fg, gt_bg),
            "mpn loss shape mismatch");
    const size_t n = pred.plane_size();
    return w.lambda_l * l1_mean(pred.plane(0), gt_fg.data.data(), n, smooth_eps) +
           (1.0 - w.lambda_l) * l1_mean(pred.plane(1), gt_bg.data.data(), n, smooth_eps);
}

double mpn_loss_grad(const nets::Tensor& pred, const imagery::Mask& gt_fg,
                     const imagery::Mask& gt_bg, const LossWeights& w,
                     nets::Tensor& dpred, double smooth_eps) {
    require(pred.channels == 2, "mpn prediction must have 2 channels");
    require(pred.height == gt_fg.height && pred.width == gt_fg.width &&
                imagery::same_size(gt_fg, gt_bg),
            "mpn loss shape mismatch");
    dpred = nets::Tensor(2, pred.height, pred.width);
    const size_t n = pred.plane_size();
    return w.lambda_l * l1_mean(pred.plane(0), gt_fg.data.data(), n, smooth_eps,
                                w.lambda_l, dpred.plane(0)) +
           (1.0 - w.lambda_l) * l1_mean(pred.plane(1), gt_bg.data.data(), n, smooth_eps,
                                        1.0 - w.lambda_l, dpred.plane(1));
}

double qun_identity_loss(const imagery::Mask& qx, const imagery::Mask& x_mask,
                         const imagery::Mask& qx2, const imagery::Mask& x2_mask,
                         double smooth_eps) {
    require(imagery::same_size(qx, x_mask) && imagery::same_size(qx2, x2_mask),
            "identity loss shape mismatch");
    return l1_mean(qx.data.data(), x_mask.data.data(), qx.size(), smooth_eps) +
           l1_mean(qx2.data.data(), x2_mask.data.data(), qx2.size(), smooth_eps);
}

double qun_consistency_loss(const imagery::Mask& qx, const imagery::Mask& qx2,
                            double smooth_eps) {
    require(imagery::same_size(qx, qx2), "consistency loss shape mismatch");
    return l1_mean(qx.data.data(), qx2.data.data(), qx.size(), smooth_eps);
}

double qun_loss(const imagery::Mask& qx, const imagery::Mask& x_mask,
                const imagery::Mask& qx2, const imagery::Mask& x2_mask,
                const LossWeights& w, double smooth_eps) {
    return w.lambda_1 * qun_identity_loss(qx, x_mask, qx2, x2_mask, smooth_eps) +
           w.lambda_2 * qun_consistency_loss(qx, qx2, smooth_eps);
}

double qun_loss_grad(const imagery::Mask& qx, const imagery::Mask& x_mask,
                     const imagery::Mask& qx2, const imagery::Mask& x2_mask,
                     const LossWeights& w, imagery::Mask& dqx, imagery::Mask& dqx2,
                     double smooth_eps) {
    require(imagery::same_size(qx, x_mask) && imagery::same_size(qx2, x2_mask) &&
                imagery::same_size(qx, qx2),
            "qun loss shape mismatch");
    dqx = imagery::Mask(qx.height, qx.width);
    dqx2 = imagery::Mask(qx.height, qx.width);
    const size_t n = qx.size();
    double loss = 0.0;
    loss += w.lambda_1 * l1_mean(qx.data.data(), x_mask.data.data(), n, smooth_eps,
                                 w.lambda_1, dqx.data.data());
    loss += w.lambda_1 * l1_mean(qx2.data.data(), x2_mask.data.data(), n, smooth_eps,
                                 w.lambda_1, dqx2.data.data());
    // The consistency term differentiates to opposite signs on the two
    // branches: d/dqx mean|qx - qx2| = s/n, d/dqx2 = -s/n.
    loss += w.lambda_2 * l1_mean(qx.data.data(), qx2.data.data(), n, smooth_eps,
                                 w.lambda_2, dqx.data.data());
    const double gscale = w.lambda_2 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i)
        dqx2.data[i] -= gscale * abs_slope(qx.data[i] - qx2.data[i], smooth_eps);
    return loss;
}

double mrn_loss(const nets::Tensor& pred, const imagery::Image& gt_rgb,
                const imagery::AlphaMatte& gt_alpha, const LossWeights& w,
                double smooth_eps) {
    require(pred.channels == 4, "mrn prediction must have 4 channels");
    require(pred.height == gt_rgb.height && pred.width == gt_rgb.width &&
                imagery::same_size(gt_rgb, gt_alpha),
            "mrn loss shape mismatch");
    const size_t n = pred.plane_size();
    return w.lambda_h * l1_mean(pred.plane(0), gt_rgb.data.data(), 3 * n, smooth_eps) +
           (1.0 - w.lambda_h) *
               l1_mean(pred.plane(3), gt_alpha.data.data(), n, smooth_eps);
}

double mrn_loss_grad(const nets::Tensor& pred, const imagery::Image& gt_rgb,
                     const imagery::AlphaMatte& gt_alpha, const LossWeights& w,
                     nets::Tensor& dpred, double smooth_eps) {
    require(pred.channels == 4, "mrn prediction must have 4 channels");
    require(pred.height == gt_rgb.height && pred.width == gt_rgb.width &&
                imagery::same_size(gt_rgb, gt_alpha),
            "mrn loss shape mismatch");
    dpred = nets::Tensor(4, pred.height, pred.width);
    const size_t n = pred.plane_size();
    return w.lambda_h * l1_mean(pred.plane(0), gt_rgb.data.data(), 3 * n, smooth_eps,
                                w.lambda_h, dpred.plane(0)) +
           (1.0 - w.lambda_h) * l1_mean(pred.plane(3), gt_alpha.data.data(), n,
                                        smooth_eps, 1.0 - w.lambda_h, dpred.plane(3));
}

}  // namespace matting::losses
