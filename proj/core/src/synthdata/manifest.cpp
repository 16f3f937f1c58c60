#include "matting/synthdata/manifest.hpp"

#include <fstream>
#include <sstream>

#include "matting/common/errors.hpp"

namespace matting::synthdata {

namespace {

constexpr const char* kHeader = "matting-manifest\tv1";

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    for (;;) {
        const size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

[[noreturn]] void fail(const std::string& path, int lineno, const std::string& msg) {
    throw DataError(path + ":" + std::to_string(lineno) + ": " + msg);
}

}  // namespace

const char* to_string(imagery::MaskQuality q) {
    return q == imagery::MaskQuality::Fine ? "fine" : "coarse";
}

const char* to_string(Split s) { return s == Split::Train ? "train" : "test"; }

void save_manifest(const DatasetManifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest: " + path);
    out << kHeader << '\n';
    for (const auto& r : m.records) {
        out << r.composite_path << '\t' << r.alpha_path << '\t' << r.fg_path << '\t'
            << r.bg_path << '\t' << to_string(r.quality) << '\t' << to_string(r.split)
            << '\n';
    }
    if (!out) throw DataError("manifest write failed: " + path);
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest: " + path);

    DatasetManifest m;
    m.base_dir = std::filesystem::absolute(std::filesystem::path(path)).parent_path();

    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw DataError(path + ": empty manifest file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) fail(path, lineno, "bad header, expected '" + std::string(kHeader) + "'");

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 6)
            fail(path, lineno, "expected 6 tab-separated fields, got " +
                                   std::to_string(fields.size()));
        ManifestRecord r;
        r.composite_path = fields[0];
        r.alpha_path = fields[1];
        r.fg_path = fields[2];
        r.bg_path = fields[3];
        if (fields[4] == "fine") r.quality = imagery::MaskQuality::Fine;
        else if (fields[4] == "coarse") r.quality = imagery::MaskQuality::Coarse;
        else fail(path, lineno, "unknown quality '" + fields[4] + "'");
        if (fields[5] == "train") r.split = Split::Train;
        else if (fields[5] == "test") r.split = Split::Test;
        else fail(path, lineno, "unknown split '" + fields[5] + "'");

        for (const std::string* p : {&r.composite_path, &r.alpha_path, &r.fg_path, &r.bg_path}) {
            if (p->empty()) fail(path, lineno, "empty path field");
            if (!std::filesystem::exists(m.resolve(*p)))
                fail(path, lineno, "missing file reference: " + *p);
        }
        m.records.push_back(std::move(r));
    }
    return m;
}

}  // namespace matting::synthdata
