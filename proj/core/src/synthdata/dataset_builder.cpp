#include "matting/synthdata/dataset_builder.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <stdexcept>

#include "matting/common/errors.hpp"
#include "matting/imagery/geometry.hpp"
#include "matting/imagery/png_io.hpp"
#include "matting/synthdata/composite.hpp"

namespace matting::synthdata {

namespace fs = std::filesystem;

namespace {

// k indices into [0, n): a partial Fisher-Yates draw without replacement
// while k <= n, then fresh rounds for any remainder.
std::vector<size_t> sample_backgrounds(size_t n, int k, imagery::Rng& rng) {
    std::vector<size_t> out;
    out.reserve(k);
    while (out.size() < static_cast<size_t>(k)) {
        std::vector<size_t> pool(n);
        std::iota(pool.begin(), pool.end(), size_t{0});
        const size_t want = std::min(n, static_cast<size_t>(k) - out.size());
        for (size_t i = 0; i < want; ++i) {
            const size_t j = i + rng.below(pool.size() - i);
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
    }
    return out;
}

// FNV-1a: stable id -> split key, so per-foreground streams do not depend
// on the position of the sample in the list.
uint64_t id_key(const std::string& id) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (const unsigned char c : id) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace

DatasetManifest build_dataset(const std::vector<ForegroundSample>& foregrounds,
                              const std::vector<BackgroundSample>& backgrounds,
                              int k, imagery::Rng& rng, const std::string& out_dir,
                              const std::set<std::string>& test_ids) {
    if (foregrounds.empty()) throw std::invalid_argument("build_dataset: no foregrounds");
    if (backgrounds.empty()) throw std::invalid_argument("build_dataset: no backgrounds");
    if (k < 1) throw std::invalid_argument("build_dataset: k must be >= 1");

    const fs::path root(out_dir);
    std::error_code ec;
    for (const char* sub : {"composite", "alpha", "fg"}) {
        fs::create_directories(root / sub, ec);
        if (ec) throw DataError("cannot create output directory: " + (root / sub).string());
    }

    DatasetManifest m;
    m.base_dir = fs::absolute(root);

    for (size_t fi = 0; fi < foregrounds.size(); ++fi) {
        const ForegroundSample& f = foregrounds[fi];
        if (!imagery::same_size(f.fg, f.alpha))
            throw std::invalid_argument("build_dataset: foreground '" + f.id +
                                        "' and its alpha differ in size");
        imagery::Rng fg_rng = rng.split(id_key(f.id));
        const auto bg_indices = sample_backgrounds(backgrounds.size(), k, fg_rng);
        const Split split = test_ids.count(f.id) ? Split::Test : Split::Train;

        for (int slot = 0; slot < k; ++slot) {
            const BackgroundSample& bg = backgrounds[bg_indices[slot]];
            const imagery::Image bg_sized =
                imagery::resize(bg.image, f.fg.height, f.fg.width);
            const imagery::Image comp = composite(f.fg, f.alpha, bg_sized);

            const std::string stem = f.id + "_" + std::to_string(slot) + ".png";
            ManifestRecord r;
            r.composite_path = "composite/" + stem;
            r.alpha_path = "alpha/" + stem;
            r.fg_path = "fg/" + stem;
            r.bg_path = bg.path;
            r.quality = f.quality;
            r.split = split;

            imagery::save_image(comp, (root / r.composite_path).string());
            imagery::save_matte(f.alpha, (root / r.alpha_path).string());
            imagery::save_image(f.fg, (root / r.fg_path).string());
            m.records.push_back(std::move(r));
        }
    }

    save_manifest(m, (root / "manifest.tsv").string());
    return m;
}

}  // namespace matting::synthdata
