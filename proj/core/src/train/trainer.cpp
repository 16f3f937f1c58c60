#include "matting/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "matting/common/errors.hpp"
#include "matting/common/kvfile.hpp"
#include "matting/degrade/degrade.hpp"
#include "matting/imagery/geometry.hpp"
#include "matting/imagery/png_io.hpp"
#include "matting/losses/losses.hpp"
#include "matting/nets/checkpoint.hpp"
#include "matting/train/augment.hpp"

namespace matting::train {

namespace {

using imagery::AlphaMatte;
using imagery::Image;
using imagery::Mask;
using imagery::MaskQuality;
using imagery::Rng;
using nets::Model;
using nets::Tensor;
using synthdata::DatasetManifest;
using synthdata::ManifestRecord;

// Fixed split keys under the config seed, one per random purpose, so the
// draw sequences of different concerns never interleave.
enum SplitKey : uint64_t {
    kInitMpn = 10,
    kInitQun = 11,
    kInitMrn = 12,
    kShuffle = 20,
    kFlip = 21,
    kDegrade = 22,
    kCrop = 23,
};

struct LowSample {
    Image img;         // at low res
    Mask alpha;        // soft resized matte
    MaskQuality quality;
};

struct HighSample {
    Image composite, fg;
    AlphaMatte alpha;
};

std::vector<LowSample> load_low_samples(const DatasetManifest& manifest, int low_h,
                                        int low_w, bool include_coarse) {
    std::vector<LowSample> out;
    for (const ManifestRecord& rec : manifest.records) {
        if (rec.split != synthdata::Split::Train) continue;
        if (!include_coarse && rec.quality != MaskQuality::Fine) continue;
        LowSample s;
        s.img = imagery::resize(
            imagery::load_image(manifest.resolve(rec.composite_path).string()).image,
            low_h, low_w);
        s.alpha = imagery::resize(
            imagery::load_matte(manifest.resolve(rec.alpha_path).string(), rec.quality),
            low_h, low_w);
        s.quality = rec.quality;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<HighSample> load_high_samples(const DatasetManifest& manifest) {
    std::vector<HighSample> out;
    for (const ManifestRecord& rec : manifest.records) {
        if (rec.split != synthdata::Split::Train) continue;
        if (rec.quality != MaskQuality::Fine) continue;
        HighSample s;
        s.composite =
            imagery::load_image(manifest.resolve(rec.composite_path).string()).image;
        s.fg = imagery::load_image(manifest.resolve(rec.fg_path).string()).image;
        s.alpha = imagery::load_matte(manifest.resolve(rec.alpha_path).string());
        out.push_back(std::move(s));
    }
    return out;
}

void shuffle_indices(std::vector<size_t>& idx, Rng& rng) {
    for (size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[rng.below(i)]);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Shared per-stage bookkeeping: logging, loss/parameter guards, per-epoch
// checkpoints, plateau early stop, and the step cap.
class StageRunner {
  public:
    StageRunner(Model& model, const char* stage, const TrainConfig& config,
                int max_steps, std::ostream* log, const std::string& checkpoint_dir,
                StageResult* result)
        : model_(model), stage_(stage), config_(config), max_steps_(max_steps),
          log_(log), dir_(checkpoint_dir),
          adam_(model.net.params(), config.lr, config.adam_beta1, config.adam_beta2,
                config.adam_eps),
          t0_(std::chrono::steady_clock::now()) {
        if (result) *result = StageResult{};
        result_ = result;
    }

    // Completes one optimizer step whose gradients are already accumulated.
    void finish_step(double batch_loss) {
        if (!std::isfinite(batch_loss))
            throw NumericError(std::string("non-finite loss in stage ") + stage_ +
                               " at step " + std::to_string(steps_ + 1));
        adam_.step();
        guard_params();
        ++steps_;
        losses_.push_back(batch_loss);
        epoch_loss_ += batch_loss;
        ++epoch_steps_;
        if (log_)
            *log_ << stage_ << '\t' << steps_ << '\t' << kv_format(batch_loss) << '\t'
                  << kv_format(config_.lr) << '\t' << kv_format(seconds_since(t0_))
                  << '\n';
    }

    bool step_cap_reached() const { return max_steps_ > 0 && steps_ >= max_steps_; }

    // Returns true when training should stop after this epoch.
    bool finish_epoch(bool allow_early_stop) {
        ++epochs_;
        if (!dir_.empty()) {
            const std::string name =
                std::string(to_string(model_.kind)) + "_epoch" + std::to_string(epochs_) +
                ".ckpt";
            nets::save_checkpoint(model_, (std::filesystem::path(dir_) / name).string());
        }
        const double mean =
            epoch_steps_ > 0 ? epoch_loss_ / static_cast<double>(epoch_steps_) : 0.0;
        epoch_loss_ = 0.0;
        epoch_steps_ = 0;
        if (allow_early_stop && config_.early_stop) {
            if (mean < best_epoch_loss_ - config_.plateau_min_delta) {
                best_epoch_loss_ = mean;
                bad_epochs_ = 0;
            } else if (++bad_epochs_ >= config_.plateau_patience) {
                return true;
            }
        }
        return false;
    }

    void finalize(int fine, int coarse) {
        if (!dir_.empty()) {
            const std::string name = std::string(to_string(model_.kind)) + ".ckpt";
            nets::save_checkpoint(model_, (std::filesystem::path(dir_) / name).string());
        }
        if (result_) {
            result_->step_losses = losses_;
            result_->steps = steps_;
            result_->epochs = epochs_;
            result_->fine_samples = fine;
            result_->coarse_samples = coarse;
        }
    }

  private:
    void guard_params() {
        for (const nets::ParamRef& p : model_.net.params())
            for (const double v : *p.value)
                if (!std::isfinite(v))
                    throw NumericError(std::string("non-finite parameter '") + p.name +
                                       "' in stage " + stage_ + " after step " +
                                       std::to_string(steps_ + 1));
    }

    Model& model_;
    const char* stage_;
    const TrainConfig& config_;
    int max_steps_;
    std::ostream* log_;
    std::string dir_;
    Adam adam_;
    std::chrono::steady_clock::time_point t0_;
    StageResult* result_ = nullptr;
    std::vector<double> losses_;
    int steps_ = 0, epochs_ = 0;
    double epoch_loss_ = 0.0;
    int epoch_steps_ = 0;
    double best_epoch_loss_ = 1e300;
    int bad_epochs_ = 0;
};

}  // namespace

Adam::Adam(std::vector<nets::ParamRef> params, double lr, double beta1, double beta2,
           double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (const nets::ParamRef& p : params_) {
        m_.emplace_back(p.value->size(), 0.0);
        v_.emplace_back(p.value->size(), 0.0);
    }
}

void Adam::step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (size_t k = 0; k < params_.size(); ++k) {
        std::vector<double>& value = *params_[k].value;
        std::vector<double>& grad = *params_[k].grad;
        std::vector<double>& m = m_[k];
        std::vector<double>& v = v_[k];
        for (size_t i = 0; i < value.size(); ++i) {
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * grad[i];
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * grad[i] * grad[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            value[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

nets::Model train_mpn(const DatasetManifest& manifest, const TrainConfig& config,
                      std::ostream* log, const std::string& checkpoint_dir,
                      StageResult* result) {
    config.validate();
    std::vector<LowSample> samples =
        load_low_samples(manifest, config.net.low_h, config.net.low_w,
                         /*include_coarse=*/true);
    if (samples.empty()) throw DataError("mpn stage: no training records in manifest");

    Model model(nets::NetKind::Mpn, config.net);
    Rng master(config.seed);
    model.init(master.split(kInitMpn).seed);
    Rng shuffle_rng = master.split(kShuffle);
    Rng flip_rng = master.split(kFlip);

    StageRunner runner(model, "mpn", config, config.max_steps_mpn, log, checkpoint_dir,
                       result);
    int fine = 0, coarse = 0;
    std::vector<size_t> order(samples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < config.mpn_epochs && !runner.step_cap_reached(); ++epoch) {
        shuffle_indices(order, shuffle_rng);
        for (size_t start = 0; start < order.size() && !runner.step_cap_reached();
             start += config.batch_mpn) {
            const size_t end = std::min(order.size(), start + config.batch_mpn);
            const double inv_batch = 1.0 / static_cast<double>(end - start);
            model.net.zero_grad();
            double batch_loss = 0.0;
            for (size_t k = start; k < end; ++k) {
                const LowSample& s = samples[order[k]];
                Image img = s.img;
                Mask alpha = s.alpha;
                if (config.flip_augment) random_flip(img, alpha, flip_rng);
                Mask gt_bg(alpha.height, alpha.width);
                for (size_t i = 0; i < alpha.size(); ++i)
                    gt_bg.data[i] = 1.0 - alpha.data[i];
                const Tensor pred = model.net.forward(nets::from_image(img));
                Tensor dpred;
                const double loss =
                    losses::mpn_loss_grad(pred, alpha, gt_bg, config.weights, dpred);
                for (double& g : dpred.data) g *= inv_batch;
                model.net.backward(dpred);
                batch_loss += loss * inv_batch;
                (s.quality == MaskQuality::Fine ? fine : coarse) += 1;
            }
            runner.finish_step(batch_loss);
        }
        if (runner.finish_epoch(/*allow_early_stop=*/false)) break;
    }
    runner.finalize(fine, coarse);
    return model;
}

nets::Model train_qun(const DatasetManifest& manifest, nets::Model* mpn,
                      const TrainConfig& config, std::ostream* log,
                      const std::string& checkpoint_dir, StageResult* result) {
    config.validate();
    if (config.qun_pair_mode == QunPairMode::Mpn && !mpn)
        throw std::invalid_argument("qun stage needs a trained mpn in mpn pair mode");
    std::vector<LowSample> samples =
        load_low_samples(manifest, config.net.low_h, config.net.low_w,
                         /*include_coarse=*/false);
    if (samples.empty()) throw DataError("qun stage: no fine training records in manifest");

    Model model(nets::NetKind::Qun, config.net);
    Rng master(config.seed);
    model.init(master.split(kInitQun).seed);
    Rng shuffle_rng = master.split(kShuffle);
    Rng flip_rng = master.split(kFlip);
    Rng degrade_rng = master.split(kDegrade);

    StageRunner runner(model, "qun", config, config.max_steps_qun, log, checkpoint_dir,
                       result);
    int fine = 0;
    std::vector<size_t> order(samples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < config.qun_epochs && !runner.step_cap_reached(); ++epoch) {
        shuffle_indices(order, shuffle_rng);
        for (size_t start = 0; start < order.size() && !runner.step_cap_reached();
             start += config.batch_qun) {
            const size_t end = std::min(order.size(), start + config.batch_qun);
            const double inv_batch = 1.0 / static_cast<double>(end - start);
            model.net.zero_grad();
            double batch_loss = 0.0;
            for (size_t k = start; k < end; ++k) {
                const LowSample& s = samples[order[k]];
                Image img = s.img;
                Mask alpha = s.alpha;
                if (config.flip_augment) random_flip(img, alpha, flip_rng);
                alpha.quality = MaskQuality::Fine;
                const Mask x_mask = config.qun_pair_mode == QunPairMode::Mpn
                                        ? nets::to_mask(nets::mpn_forward(*mpn, img), 0)
                                        : alpha;
                const Mask x2_mask = degrade::degrade(alpha, config.degrade_spec,
                                                      degrade_rng);
                const Tensor in1 =
                    nets::concat_channels(nets::from_image(img), nets::from_mask(x_mask));
                const Tensor in2 = nets::concat_channels(nets::from_image(img),
                                                         nets::from_mask(x2_mask));
                // Shared weights, two branches: differentiate the second
                // branch while its caches are fresh, then re-run the first
                // branch forward and differentiate it.
                const Mask qx_first = nets::to_mask(model.net.forward(in1), 0);
                const Mask qx2 = nets::to_mask(model.net.forward(in2), 0);
                Mask dqx, dqx2;
                const double loss = losses::qun_loss_grad(
                    qx_first, x_mask, qx2, x2_mask, config.weights, dqx, dqx2);
                for (double& g : dqx.data) g *= inv_batch;
                for (double& g : dqx2.data) g *= inv_batch;
                model.net.backward(nets::from_mask(dqx2));
                model.net.forward(in1);
                model.net.backward(nets::from_mask(dqx));
                batch_loss += loss * inv_batch;
                ++fine;
            }
            runner.finish_step(batch_loss);
        }
        if (runner.finish_epoch(/*allow_early_stop=*/true)) break;
    }
    runner.finalize(fine, 0);
    return model;
}

nets::Model train_mrn(const DatasetManifest& manifest, nets::Model* mpn,
                      nets::Model* qun, const TrainConfig& config, std::ostream* log,
                      const std::string& checkpoint_dir, StageResult* result) {
    config.validate();
    if (config.mrn_mask_source == MrnMaskSource::Pipeline && (!mpn || !qun))
        throw std::invalid_argument(
            "mrn stage needs trained mpn and qun in pipeline mask mode");
    std::vector<HighSample> samples = load_high_samples(manifest);
    if (samples.empty()) throw DataError("mrn stage: no fine training records in manifest");

    Model model(nets::NetKind::Mrn, config.net);
    Rng master(config.seed);
    model.init(master.split(kInitMrn).seed);
    Rng shuffle_rng = master.split(kShuffle);
    Rng flip_rng = master.split(kFlip);
    Rng crop_rng = master.split(kCrop);

    StageRunner runner(model, "mrn", config, config.max_steps_mrn, log, checkpoint_dir,
                       result);
    int fine = 0;
    const int ch = config.crop_h, cw = config.crop_w;
    std::vector<size_t> order(samples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < config.mrn_epochs && !runner.step_cap_reached(); ++epoch) {
        shuffle_indices(order, shuffle_rng);
        for (size_t start = 0; start < order.size() && !runner.step_cap_reached();
             start += config.batch_mrn) {
            const size_t end = std::min(order.size(), start + config.batch_mrn);
            const double inv_batch = 1.0 / static_cast<double>(end - start);
            model.net.zero_grad();
            double batch_loss = 0.0;
            for (size_t k = start; k < end; ++k) {
                const HighSample& s = samples[order[k]];
                Image composite = imagery::pad_reflect(s.composite, ch, cw);
                Image fg_img = imagery::pad_reflect(s.fg, ch, cw);
                AlphaMatte alpha = imagery::pad_reflect(s.alpha, ch, cw);
                const CropChoice c = choose_crop(alpha, ch, cw, config.crop_min_alpha,
                                                 config.crop_max_tries, crop_rng);
                composite = imagery::crop(composite, c.y0, c.x0, ch, cw);
                fg_img = imagery::crop(fg_img, c.y0, c.x0, ch, cw);
                alpha = imagery::crop(alpha, c.y0, c.x0, ch, cw);
                if (config.flip_augment && flip_rng.coin(0.5)) {
                    composite = imagery::flip_horizontal(composite);
                    fg_img = imagery::flip_horizontal(fg_img);
                    alpha = imagery::flip_horizontal(alpha);
                }
                Mask mask;
                if (config.mrn_mask_source == MrnMaskSource::Gt) {
                    mask = imagery::resize(alpha, ch / 4, cw / 4);
                } else {
                    const Image low = imagery::resize(composite, ch / 4, cw / 4);
                    const Mask coarse = nets::to_mask(nets::mpn_forward(*mpn, low), 0);
                    mask = nets::qun_forward(*qun, low, coarse);
                }
                const Tensor inject = nets::from_mask(mask);
                const Tensor pred =
                    model.net.forward(nets::from_image(composite), &inject);
                Tensor dpred;
                const double loss =
                    losses::mrn_loss_grad(pred, fg_img, alpha, config.weights, dpred);
                for (double& g : dpred.data) g *= inv_batch;
                model.net.backward(dpred);
                batch_loss += loss * inv_batch;
                ++fine;
            }
            runner.finish_step(batch_loss);
        }
        if (runner.finish_epoch(/*allow_early_stop=*/true)) break;
    }
    runner.finalize(fine, 0);
    return model;
}

TrainedModels train_all(const DatasetManifest& manifest, const TrainConfig& config,
                        std::ostream* log, const std::string& out_dir) {
    TrainStats stats;
    Model mpn = train_mpn(manifest, config, log, out_dir, &stats.mpn);
    stats.mpn_digest = nets::param_digest(mpn.net);

    Model qun = train_qun(manifest, &mpn, config, log, out_dir, &stats.qun);
    if (nets::param_digest(mpn.net) != stats.mpn_digest)
        throw std::logic_error("frozen mpn parameters changed during qun stage");
    stats.qun_digest = nets::param_digest(qun.net);

    Model mrn = train_mrn(manifest, &mpn, &qun, config, log, out_dir, &stats.mrn);
    if (nets::param_digest(mpn.net) != stats.mpn_digest)
        throw std::logic_error("frozen mpn parameters changed during mrn stage");
    if (nets::param_digest(qun.net) != stats.qun_digest)
        throw std::logic_error("frozen qun parameters changed during mrn stage");

    return TrainedModels{std::move(mpn), std::move(qun), std::move(mrn), stats};
}

}  // namespace matting::train
