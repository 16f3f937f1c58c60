#include "matting/imagery/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "matting/common/errors.hpp"

namespace matting::imagery {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    if (err) *err = msg ? msg : "png error";
    longjmp(png_jmpbuf(png), 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

struct Raw8 {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<uint8_t> pixels;  // interleaved rows
};

Raw8 read_png8(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw DataError("cannot open image file: " + path);

    png_byte sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw DataError("not a PNG file: " + path);

    std::string errmsg;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &errmsg,
                                             png_error_fn, png_warning_fn);
    if (!png) throw DataError("png reader allocation failed: " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DataError("png reader allocation failed: " + path);
    }

    Raw8 out;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("undecodable PNG '" + path + "': " + errmsg);
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (bit_depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("16-bit PNG not supported: " + path);
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);

    const size_t stride = png_get_rowbytes(png, info);
    out.pixels.resize(stride * out.height);
    row_ptrs.resize(out.height);
    for (int y = 0; y < out.height; ++y)
        row_ptrs[y] = out.pixels.data() + stride * y;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

void write_png8(const std::string& path, int width, int height, int channels,
                const std::vector<uint8_t>& pixels) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw DataError("cannot write image file: " + path);

    std::string errmsg;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &errmsg,
                                              png_error_fn, png_warning_fn);
    if (!png) throw DataError("png writer allocation failed: " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw DataError("png writer allocation failed: " + path);
    }

    std::vector<png_bytep> row_ptrs(height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("PNG write failed '" + path + "': " + errmsg);
    }

    png_init_io(png, fp.get());
    int color_type = PNG_COLOR_TYPE_RGB;
    if (channels == 1) color_type = PNG_COLOR_TYPE_GRAY;
    else if (channels == 4) color_type = PNG_COLOR_TYPE_RGB_ALPHA;
    png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const size_t stride = static_cast<size_t>(width) * channels;
    for (int y = 0; y < height; ++y)
        row_ptrs[y] = const_cast<png_bytep>(pixels.data() + stride * y);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

uint8_t quantize(double v) {
    const double c = std::clamp(v, 0.0, 1.0);
    return static_cast<uint8_t>(std::lround(c * 255.0));
}

}  // namespace

LoadedImage load_image(const std::string& path) {
    const Raw8 raw = read_png8(path);
    LoadedImage out;
    out.image = Image(raw.height, raw.width);
    const size_t n = static_cast<size_t>(raw.height) * raw.width;

    auto px = [&](size_t i, int c) {
        return raw.pixels[i * raw.channels + c] / 255.0;
    };

    switch (raw.channels) {
        case 1:
            for (size_t i = 0; i < n; ++i) {
                const double v = px(i, 0);
                out.image.data[i] = v;
                out.image.data[n + i] = v;
                out.image.data[2 * n + i] = v;
            }
            break;
        case 2:  // gray + alpha
            out.alpha = AlphaMatte(raw.height, raw.width);
            for (size_t i = 0; i < n; ++i) {
                const double v = px(i, 0);
                out.image.data[i] = v;
                out.image.data[n + i] = v;
                out.image.data[2 * n + i] = v;
                out.alpha->data[i] = px(i, 1);
            }
            break;
        case 3:
            for (size_t i = 0; i < n; ++i)
                for (int c = 0; c < 3; ++c) out.image.data[c * n + i] = px(i, c);
            break;
        case 4:
            out.alpha = AlphaMatte(raw.height, raw.width);
            for (size_t i = 0; i < n; ++i) {
                for (int c = 0; c < 3; ++c) out.image.data[c * n + i] = px(i, c);
                out.alpha->data[i] = px(i, 3);
            }
            break;
        default:
            throw DataError("unsupported channel count in " + path);
    }
    return out;
}

AlphaMatte load_matte(const std::string& path, MaskQuality quality) {
    const Raw8 raw = read_png8(path);
    if (raw.channels != 1)
        throw DataError("matte must be single-channel PNG, got " +
                        std::to_string(raw.channels) + " channels: " + path);
    AlphaMatte m(raw.height, raw.width, 0.0, quality);
    for (size_t i = 0; i < m.size(); ++i) m.data[i] = raw.pixels[i] / 255.0;
    return m;
}

void save_image(const Image& img, const std::string& path) {
    const size_t n = img.plane_size();
    std::vector<uint8_t> px(n * 3);
    for (size_t i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c)
            px[i * 3 + c] = quantize(img.data[c * n + i]);
    write_png8(path, img.width, img.height, 3, px);
}

void save_matte(const AlphaMatte& matte, const std::string& path) {
    std::vector<uint8_t> px(matte.size());
    for (size_t i = 0; i < matte.size(); ++i) px[i] = quantize(matte.data[i]);
    write_png8(path, matte.width, matte.height, 1, px);
}

void save_cutout(const Image& img, const AlphaMatte& alpha, const std::string& path) {
    if (!same_size(img, alpha))
        throw DataError("cutout image/alpha size mismatch: " + path);
    const size_t n = img.plane_size();
    std::vector<uint8_t> px(n * 4);
    for (size_t i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) px[i * 4 + c] = quantize(img.data[c * n + i]);
        px[i * 4 + 3] = quantize(alpha.data[i]);
    }
    write_png8(path, img.width, img.height, 4, px);
}

}  // namespace matting::imagery
