#pragma once

#include <cstdint>
#include <string>

#include "matting/degrade/degrade.hpp"
#include "matting/losses/losses.hpp"
#include "matting/nets/models.hpp"

namespace matting::train {

// Which mask pairs QUN trains on: "mpn" feeds x = (img, MPN output),
// "gt" feeds x = (img, fine mask). x' is always (img, degraded fine mask).
enum class QunPairMode : uint8_t { Mpn = 0, Gt = 1 };

// Where MRN's injected mask comes from during training: the frozen
// MPN -> QUN cascade, or the ground-truth alpha downsampled 4x.
enum class MrnMaskSource : uint8_t { Pipeline = 0, Gt = 1 };

struct TrainConfig {
    double lr = 1e-3;
    double adam_beta1 = 0.9, adam_beta2 = 0.999, adam_eps = 1e-8;
    uint64_t seed = 1;
    losses::LossWeights weights;
    nets::NetConfig net;

    int mpn_epochs = 20, qun_epochs = 20, mrn_epochs = 20;
    int batch_mpn = 16, batch_qun = 16, batch_mrn = 1;
    // 0 = uncapped; otherwise the stage stops after this many optimizer
    // steps even mid-epoch (the desk-scale knob).
    int max_steps_mpn = 0, max_steps_qun = 0, max_steps_mrn = 0;

    // Plateau early stop, applied to the stages with unspecified epoch
    // counts (qun, mrn): stop when the epoch-mean loss has not improved by
    // min_delta for patience consecutive epochs.
    bool early_stop = true;
    int plateau_patience = 3;
    double plateau_min_delta = 1e-4;

    int crop_h = 768, crop_w = 640;  // mrn training crop; injected mask = crop/4
    double crop_min_alpha = 0.02;    // resample crops until this mean alpha ...
    int crop_max_tries = 10;         // ... for at most this many draws

    bool flip_augment = true;
    QunPairMode qun_pair_mode = QunPairMode::Mpn;
    MrnMaskSource mrn_mask_source = MrnMaskSource::Pipeline;

    degrade::DegradeSpec degrade_spec;  // stage-2 pair synthesis

    void validate() const;  // throws std::invalid_argument
};

// Tab-separated key-value round trip. Unknown keys are rejected; missing
// keys keep their defaults. Degradation fields use the degrade_ prefix.
TrainConfig load_train_config(const std::string& path);
void save_train_config(const TrainConfig& config, const std::string& path);

}  // namespace matting::train
