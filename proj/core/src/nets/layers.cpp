#include "matting/nets/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace matting::nets {

namespace {

using MatMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstMatMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Output rows per im2col strip, sized to keep the column buffer modest
// (~32 MB at 288 columns x 640 width) even for full-resolution inputs.
int strip_rows(int kcols, int out_w) {
    const size_t budget = static_cast<size_t>(4) * 1024 * 1024;  // doubles
    const size_t per_row = static_cast<size_t>(kcols) * out_w;
    return std::max<int>(1, static_cast<int>(budget / std::max<size_t>(1, per_row)));
}

// Fills col (kcols x strip_pixels, row-major) for output rows [r0, r1).
void im2col_strip(const Tensor& x, int ksize, int stride, int pad, int out_w,
                  int r0, int r1, std::vector<double>& col) {
    const int kcols = x.channels * ksize * ksize;
    const int pixels = (r1 - r0) * out_w;
    col.assign(static_cast<size_t>(kcols) * pixels, 0.0);
    for (int ic = 0; ic < x.channels; ++ic)
        for (int ky = 0; ky < ksize; ++ky)
            for (int kx = 0; kx < ksize; ++kx) {
                const int q = (ic * ksize + ky) * ksize + kx;
                double* row = col.data() + static_cast<size_t>(q) * pixels;
                for (int oy = r0; oy < r1; ++oy) {
                    const int iy = oy * stride + ky - pad;
                    if (iy < 0 || iy >= x.height) continue;
                    const double* src = x.plane(ic) + static_cast<size_t>(iy) * x.width;
                    double* dst = row + static_cast<size_t>(oy - r0) * out_w;
                    for (int ox = 0; ox < out_w; ++ox) {
                        const int ix = ox * stride + kx - pad;
                        if (ix >= 0 && ix < x.width) dst[ox] = src[ix];
                    }
                }
            }
}

// Scatter-add transpose of im2col_strip.
void col2im_strip(const std::vector<double>& col, int ksize, int stride, int pad,
                  int out_w, int r0, int r1, Tensor& dx) {
    const int pixels = (r1 - r0) * out_w;
    for (int ic = 0; ic < dx.channels; ++ic)
        for (int ky = 0; ky < ksize; ++ky)
            for (int kx = 0; kx < ksize; ++kx) {
                const int q = (ic * ksize + ky) * ksize + kx;
                const double* row = col.data() + static_cast<size_t>(q) * pixels;
                for (int oy = r0; oy < r1; ++oy) {
                    const int iy = oy * stride + ky - pad;
                    if (iy < 0 || iy >= dx.height) continue;
                    double* dst = dx.plane(ic) + static_cast<size_t>(iy) * dx.width;
                    const double* src = row + static_cast<size_t>(oy - r0) * out_w;
                    for (int ox = 0; ox < out_w; ++ox) {
                        const int ix = ox * stride + kx - pad;
                        if (ix >= 0 && ix < dx.width) dst[ix] += src[ox];
                    }
                }
            }
}

}  // namespace

Conv2d::Conv2d(int in, int out, int k, int s) : in_ch(in), out_ch(out), ksize(k), stride(s) {
    if (in < 1 || out < 1 || k < 1 || k % 2 == 0 || (s != 1 && s != 2))
        throw std::invalid_argument("bad convolution geometry");
    weight.assign(static_cast<size_t>(out) * in * k * k, 0.0);
    wgrad.assign(weight.size(), 0.0);
    bias.assign(out, 0.0);
    bgrad.assign(out, 0.0);
}

void Conv2d::init_he(imagery::Rng& rng) {
    const double std = std::sqrt(2.0 / (static_cast<double>(in_ch) * ksize * ksize));
    for (double& w : weight) w = rng.normal() * std;
    std::fill(bias.begin(), bias.end(), 0.0);
}

void Conv2d::init_zero() {
    std::fill(weight.begin(), weight.end(), 0.0);
    std::fill(bias.begin(), bias.end(), 0.0);
}

Tensor Conv2d::forward(const Tensor& x) {
    if (x.channels != in_ch) throw std::invalid_argument("conv channel mismatch");
    const int pad = ksize / 2;
    const int out_h = (x.height + 2 * pad - ksize) / stride + 1;
    const int out_w = (x.width + 2 * pad - ksize) / stride + 1;
    x_cache = x;
    Tensor y(out_ch, out_h, out_w);
    const int kcols = in_ch * ksize * ksize;
    const int rows_per = strip_rows(kcols, out_w);
    std::vector<double> col;
    ConstMatMap W(weight.data(), out_ch, kcols);
    for (int r0 = 0; r0 < out_h; r0 += rows_per) {
        const int r1 = std::min(out_h, r0 + rows_per);
        im2col_strip(x, ksize, stride, pad, out_w, r0, r1, col);
        const int pixels = (r1 - r0) * out_w;
        ConstMatMap C(col.data(), kcols, pixels);
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> P =
            W * C;  // out_ch x pixels
        for (int oc = 0; oc < out_ch; ++oc) {
            double* dst = y.plane(oc) + static_cast<size_t>(r0) * out_w;
            const double b = bias[oc];
            for (int p = 0; p < pixels; ++p) dst[p] = P(oc, p) + b;
        }
    }
    return y;
}

Tensor Conv2d::backward(const Tensor& dy) {
    const Tensor& x = x_cache;
    const int pad = ksize / 2;
    const int out_h = dy.height, out_w = dy.width;
    const int kcols = in_ch * ksize * ksize;
    Tensor dx(x.channels, x.height, x.width);
    const int rows_per = strip_rows(kcols, out_w);
    std::vector<double> col, colgrad, dyb;
    ConstMatMap W(weight.data(), out_ch, kcols);
    MatMap dW(wgrad.data(), out_ch, kcols);
    for (int r0 = 0; r0 < out_h; r0 += rows_per) {
        const int r1 = std::min(out_h, r0 + rows_per);
        const int pixels = (r1 - r0) * out_w;
        im2col_strip(x, ksize, stride, pad, out_w, r0, r1, col);
        // Gather the strip of dy into a contiguous out_ch x pixels block.
        dyb.resize(static_cast<size_t>(out_ch) * pixels);
        for (int oc = 0; oc < out_ch; ++oc) {
            const double* src = dy.plane(oc) + static_cast<size_t>(r0) * out_w;
            std::copy(src, src + pixels, dyb.data() + static_cast<size_t>(oc) * pixels);
            double acc = 0.0;
            for (int p = 0; p < pixels; ++p) acc += src[p];
            bgrad[oc] += acc;
        }
        ConstMatMap C(col.data(), kcols, pixels);
        ConstMatMap G(dyb.data(), out_ch, pixels);
        dW.noalias() += G * C.transpose();
        colgrad.resize(static_cast<size_t>(kcols) * pixels);
        MatMap CG(colgrad.data(), kcols, pixels);
        CG.noalias() = W.transpose() * G;
        col2im_strip(colgrad, ksize, stride, pad, out_w, r0, r1, dx);
    }
    return dx;
}

void Conv2d::collect(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back({prefix + ".weight", &weight, &wgrad, {out_ch, in_ch, ksize, ksize}});
    out.push_back({prefix + ".bias", &bias, &bgrad, {out_ch}});
}

InstanceNorm::InstanceNorm(int ch) : channels(ch) {
    gamma.assign(ch, 1.0);
    ggrad.assign(ch, 0.0);
    beta.assign(ch, 0.0);
    bgrad.assign(ch, 0.0);
}

Tensor InstanceNorm::forward(const Tensor& x) {
    if (x.channels != channels) throw std::invalid_argument("norm channel mismatch");
    const size_t n = x.plane_size();
    Tensor y(x.channels, x.height, x.width);
    xhat_cache = Tensor(x.channels, x.height, x.width);
    inv_std_cache.assign(channels, 0.0);
    for (int c = 0; c < channels; ++c) {
        const double* p = x.plane(c);
        double mean = 0.0;
        for (size_t i = 0; i < n; ++i) mean += p[i];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double d = p[i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);
        const double r = 1.0 / std::sqrt(var + eps);
        inv_std_cache[c] = r;
        double* xh = xhat_cache.plane(c);
        double* yp = y.plane(c);
        const double g = gamma[c], b = beta[c];
        for (size_t i = 0; i < n; ++i) {
            xh[i] = (p[i] - mean) * r;
            yp[i] = g * xh[i] + b;
        }
    }
    return y;
}

Tensor InstanceNorm::backward(const Tensor& dy) {
    const size_t n = dy.plane_size();
    Tensor dx(dy.channels, dy.height, dy.width);
    for (int c = 0; c < channels; ++c) {
        const double* g = dy.plane(c);
        const double* xh = xhat_cache.plane(c);
        double sum_g = 0.0, sum_gx = 0.0;
        for (size_t i = 0; i < n; ++i) {
            sum_g += g[i];
            sum_gx += g[i] * xh[i];
        }
        ggrad[c] += sum_gx;
        bgrad[c] += sum_g;
        const double mean_g = sum_g / static_cast<double>(n);
        const double mean_gx = sum_gx / static_cast<double>(n);
        const double scale = gamma[c] * inv_std_cache[c];
        double* d = dx.plane(c);
        for (size_t i = 0; i < n; ++i)
            d[i] = scale * (g[i] - mean_g - xh[i] * mean_gx);
    }
    return dx;
}

void InstanceNorm::collect(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back({prefix + ".gamma", &gamma, &ggrad, {channels}});
    out.push_back({prefix + ".beta", &beta, &bgrad, {channels}});
}

Tensor ReLU::forward(const Tensor& x) {
    x_cache = x;
    Tensor y = x;
    for (double& v : y.data) v = std::max(0.0, v);
    return y;
}

Tensor ReLU::backward(const Tensor& dy) {
    Tensor dx = dy;
    for (size_t i = 0; i < dx.data.size(); ++i)
        if (x_cache.data[i] <= 0.0) dx.data[i] = 0.0;
    return dx;
}

Tensor Sigmoid::forward(const Tensor& x) {
    Tensor y = x;
    for (double& v : y.data) v = 1.0 / (1.0 + std::exp(-v));
    y_cache = y;
    return y;
}

Tensor Sigmoid::backward(const Tensor& dy) {
    Tensor dx = dy;
    for (size_t i = 0; i < dx.data.size(); ++i) {
        const double s = y_cache.data[i];
        dx.data[i] *= s * (1.0 - s);
    }
    return dx;
}

Tensor upsample2x(const Tensor& x) {
    Tensor y(x.channels, x.height * 2, x.width * 2);
    for (int c = 0; c < x.channels; ++c)
        for (int yy = 0; yy < y.height; ++yy) {
            const double* src = x.plane(c) + static_cast<size_t>(yy / 2) * x.width;
            double* dst = y.plane(c) + static_cast<size_t>(yy) * y.width;
            for (int xx = 0; xx < y.width; ++xx) dst[xx] = src[xx / 2];
        }
    return y;
}

Tensor upsample2x_backward(const Tensor& dy) {
    Tensor dx(dy.channels, dy.height / 2, dy.width / 2);
    for (int c = 0; c < dy.channels; ++c)
        for (int yy = 0; yy < dy.height; ++yy) {
            const double* src = dy.plane(c) + static_cast<size_t>(yy) * dy.width;
            double* dst = dx.plane(c) + static_cast<size_t>(yy / 2) * dx.width;
            for (int xx = 0; xx < dy.width; ++xx) dst[xx / 2] += src[xx];
        }
    return dx;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    if (a.height != b.height || a.width != b.width)
        throw std::invalid_argument("concat spatial mismatch");
    Tensor y(a.channels + b.channels, a.height, a.width);
    std::copy(a.data.begin(), a.data.end(), y.data.begin());
    std::copy(b.data.begin(), b.data.end(), y.data.begin() + a.data.size());
    return y;
}

void split_channels(const Tensor& d, int a_channels, Tensor& da, Tensor& db) {
    da = Tensor(a_channels, d.height, d.width);
    db = Tensor(d.channels - a_channels, d.height, d.width);
    std::copy(d.data.begin(), d.data.begin() + da.data.size(), da.data.begin());
    std::copy(d.data.begin() + da.data.size(), d.data.end(), db.data.begin());
}

}  // namespace matting::nets
