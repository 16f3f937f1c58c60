#include "matting/nets/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "matting/common/errors.hpp"

namespace matting::nets {

namespace {

constexpr char kMagic[5] = {'M', 'K', 'P', 'T', '1'};

void put_u32(std::ostream& out, uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw DataError("truncated checkpoint: " + path);
    return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 |
           static_cast<uint32_t>(b[2]) << 16 | static_cast<uint32_t>(b[3]) << 24;
}

void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in, const std::string& path) {
    const uint32_t n = get_u32(in, path);
    if (n > 4096) throw DataError("implausible string length in checkpoint: " + path);
    std::string s(n, '\0');
    if (!in.read(s.data(), n)) throw DataError("truncated checkpoint: " + path);
    return s;
}

void put_f32(std::ostream& out, float v) { put_u32(out, std::bit_cast<uint32_t>(v)); }

float get_f32(std::istream& in, const std::string& path) {
    return std::bit_cast<float>(get_u32(in, path));
}

}  // namespace

void save_checkpoint(Model& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint: " + path);
    out.write(kMagic, sizeof(kMagic));
    put_string(out, to_string(model.kind));
    const NetConfig& c = model.config;
    for (const int v : {c.base_width, c.depth, c.low_h, c.low_w, c.high_h, c.high_w,
                        c.scale_gap})
        put_u32(out, static_cast<uint32_t>(v));
    const std::vector<ParamRef> params = model.net.params();
    put_u32(out, static_cast<uint32_t>(params.size()));
    for (const ParamRef& p : params) {
        put_string(out, p.name);
        put_u32(out, static_cast<uint32_t>(p.shape.size()));
        for (const int d : p.shape) put_u32(out, static_cast<uint32_t>(d));
        for (const double v : *p.value) put_f32(out, static_cast<float>(v));
    }
    if (!out) throw DataError("write failed: " + path);
}

Model load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);
    char magic[5];
    if (!in.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0)
        throw DataError("bad checkpoint magic: " + path);
    NetKind kind;
    NetConfig config;
    try {
        kind = net_kind_from_string(get_string(in, path));
        config.base_width = static_cast<int>(get_u32(in, path));
        config.depth = static_cast<int>(get_u32(in, path));
        config.low_h = static_cast<int>(get_u32(in, path));
        config.low_w = static_cast<int>(get_u32(in, path));
        config.high_h = static_cast<int>(get_u32(in, path));
        config.high_w = static_cast<int>(get_u32(in, path));
        config.scale_gap = static_cast<int>(get_u32(in, path));
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(path + ": " + e.what());
    }

    Model model(kind, config);
    std::vector<ParamRef> params = model.net.params();
    const uint32_t count = get_u32(in, path);
    if (count != params.size())
        throw DataError(path + ": parameter array count mismatch");
    for (ParamRef& p : params) {
        const std::string name = get_string(in, path);
        if (name != p.name)
            throw DataError(path + ": unexpected array '" + name + "', wanted '" +
                            p.name + "'");
        const uint32_t ndim = get_u32(in, path);
        if (ndim != p.shape.size()) throw DataError(path + ": rank mismatch for " + name);
        size_t numel = 1;
        for (uint32_t d = 0; d < ndim; ++d) {
            const uint32_t dim = get_u32(in, path);
            if (static_cast<int>(dim) != p.shape[d])
                throw DataError(path + ": shape mismatch for " + name);
            numel *= dim;
        }
        if (numel != p.value->size())
            throw DataError(path + ": element count mismatch for " + name);
        for (double& v : *p.value) v = static_cast<double>(get_f32(in, path));
    }
    return model;
}

Model load_checkpoint_expect(const std::string& path, NetKind kind) {
    Model model = load_checkpoint(path);
    if (model.kind != kind)
        throw DataError(path + ": checkpoint holds a " + to_string(model.kind) +
                        ", expected " + to_string(kind));
    return model;
}

}  // namespace matting::nets
