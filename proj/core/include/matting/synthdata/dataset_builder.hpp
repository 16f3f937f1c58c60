#pragma once

#include <set>
#include <string>
#include <vector>

#include "matting/imagery/image.hpp"
#include "matting/imagery/rng.hpp"
#include "matting/synthdata/manifest.hpp"

namespace matting::synthdata {

// A human cutout: foreground colors plus its annotation, tagged with the
// annotation quality of its source.
struct ForegroundSample {
    imagery::Image fg;
    imagery::AlphaMatte alpha;
    imagery::MaskQuality quality = imagery::MaskQuality::Fine;
    std::string id;
};

// A background candidate and the path it is referenced by in manifests.
struct BackgroundSample {
    imagery::Image image;
    std::string path;
};

// Record count law for a build: every foreground is composited onto
// exactly k backgrounds.
inline size_t expected_record_count(size_t foregrounds, int k) {
    return foregrounds * static_cast<size_t>(k);
}

// Composites each foreground onto k rng-sampled backgrounds (without
// replacement per foreground whenever k <= backgrounds.size()), resizing
// each background to the foreground's geometry first. Writes
// out_dir/{composite,alpha,fg}/<id>_<slot>.png plus out_dir/manifest.tsv
// and returns the manifest. Foregrounds whose id is in test_ids get
// split=test. Background sampling is derived from a per-foreground rng
// split, so record contents do not depend on iteration order.
DatasetManifest build_dataset(const std::vector<ForegroundSample>& foregrounds,
                              const std::vector<BackgroundSample>& backgrounds,
                              int k, imagery::Rng& rng, const std::string& out_dir,
                              const std::set<std::string>& test_ids = {});

}  // namespace matting::synthdata
