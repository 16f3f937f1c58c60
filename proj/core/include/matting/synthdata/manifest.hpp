#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "matting/imagery/image.hpp"

namespace matting::synthdata {

enum class Split : uint8_t { Train = 0, Test = 1 };

struct ManifestRecord {
    std::string composite_path;
    std::string alpha_path;
    std::string fg_path;
    std::string bg_path;
    imagery::MaskQuality quality = imagery::MaskQuality::Fine;
    Split split = Split::Train;
};

// Ordered index of composited records. Relative paths are resolved against
// base_dir (the directory holding the manifest file).
struct DatasetManifest {
    std::vector<ManifestRecord> records;
    std::filesystem::path base_dir;

    std::filesystem::path resolve(const std::string& p) const {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base_dir / fp;
    }
};

// Text format: one header line "matting-manifest<TAB>v1", then one record
// per line with exactly six tab-separated fields in declaration order.
// Round-trips losslessly; extra fields, missing fields, and unknown enum
// values are rejected with the offending line number. Loading also verifies
// that every referenced file exists.
void save_manifest(const DatasetManifest& m, const std::string& path);
DatasetManifest load_manifest(const std::string& path);

const char* to_string(imagery::MaskQuality q);
const char* to_string(Split s);

}  // namespace matting::synthdata
