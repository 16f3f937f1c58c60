#pragma once

#include <functional>
#include <string>
#include <vector>

#include "matting/imagery/image.hpp"
#include "matting/metrics/metrics.hpp"
#include "matting/synthdata/manifest.hpp"

namespace matting::metrics {

struct ImageScore {
    std::string id;  // composite path
    double sad = 0.0, mse = 0.0, grad = 0.0, conn = 0.0;
};

struct EvalReport {
    MetricParams params;
    std::vector<ImageScore> per_image;
    ImageScore aggregate;  // arithmetic mean, id = "aggregate"
};

using InferFn = std::function<imagery::AlphaMatte(const imagery::Image&)>;

// Runs infer over every test-split record of the manifest and scores the
// predicted matte against the ground-truth alpha with all four metrics.
// Throws DataError when the manifest holds no test records.
EvalReport evaluate(const synthdata::DatasetManifest& manifest, const InferFn& infer,
                    const MetricParams& params = {});

// Tab-separated report: a header naming the metric constants, one row per
// image, and the aggregate row last.
void write_report(const EvalReport& report, const std::string& path);

}  // namespace matting::metrics
