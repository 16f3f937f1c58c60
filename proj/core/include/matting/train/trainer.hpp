#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "matting/nets/models.hpp"
#include "matting/synthdata/manifest.hpp"
#include "matting/train/config.hpp"

namespace matting::train {

// Bias-corrected adaptive-moment optimizer over a parameter registry.
class Adam {
  public:
    Adam(std::vector<nets::ParamRef> params, double lr, double beta1, double beta2,
         double eps);
    void step();
    int steps_taken() const { return t_; }

  private:
    std::vector<nets::ParamRef> params_;
    std::vector<std::vector<double>> m_, v_;
    double lr_, beta1_, beta2_, eps_;
    int t_ = 0;
};

struct StageResult {
    std::vector<double> step_losses;  // one entry per optimizer step
    int steps = 0;
    int epochs = 0;
    int fine_samples = 0, coarse_samples = 0;  // batch audit

    double final_loss() const { return step_losses.empty() ? 0.0 : step_losses.back(); }
};

struct TrainStats {
    StageResult mpn, qun, mrn;
    uint64_t mpn_digest = 0, qun_digest = 0;  // taken when each stage froze
};

// All stages run serially and deterministically for a given config seed,
// guard against non-finite losses/parameters (NumericError), write one log
// line per step ("stage step loss lr wallclock", tab-separated) when log is
// non-null, and drop per-epoch plus final checkpoints into checkpoint_dir
// when it is nonempty.

// Stage 1: fine + coarse training records, inputs at config.net low res.
nets::Model train_mpn(const synthdata::DatasetManifest& manifest,
                      const TrainConfig& config, std::ostream* log = nullptr,
                      const std::string& checkpoint_dir = "",
                      StageResult* result = nullptr);

// Stage 2: fine records only; pairs x = (img, mask) / x' = (img, degraded
// mask). mpn supplies the x mask in QunPairMode::Mpn and may be null in
// QunPairMode::Gt. Frozen models are never written to.
nets::Model train_qun(const synthdata::DatasetManifest& manifest, nets::Model* mpn,
                      const TrainConfig& config, std::ostream* log = nullptr,
                      const std::string& checkpoint_dir = "",
                      StageResult* result = nullptr);

// Stage 3: fine records only, random foreground-biased crops; the injected
// mask comes from the frozen mpn -> qun cascade (MrnMaskSource::Pipeline,
// both required) or from downsampled ground truth (MrnMaskSource::Gt,
// models may be null).
nets::Model train_mrn(const synthdata::DatasetManifest& manifest, nets::Model* mpn,
                      nets::Model* qun, const TrainConfig& config,
                      std::ostream* log = nullptr,
                      const std::string& checkpoint_dir = "",
                      StageResult* result = nullptr);

struct TrainedModels {
    nets::Model mpn, qun, mrn;
    TrainStats stats;
};

// The full protocol: mpn -> freeze -> qun -> freeze -> mrn, verifying the
// frozen digests after each later stage, writing mpn.ckpt / qun.ckpt /
// mrn.ckpt (plus per-epoch files) into out_dir when nonempty.
TrainedModels train_all(const synthdata::DatasetManifest& manifest,
                        const TrainConfig& config, std::ostream* log = nullptr,
                        const std::string& out_dir = "");

}  // namespace matting::train
