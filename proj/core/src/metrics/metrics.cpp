#include "matting/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace matting::metrics {

namespace {

using imagery::AlphaMatte;

constexpr double kOpaqueTol = 1e-6;  // survives 8-bit quantization of 1.0

void require_pair(const AlphaMatte& a, const AlphaMatte& b) {
    if (!imagery::same_size(a, b))
        throw std::invalid_argument("metric inputs must share a size");
}

// Separable correlation with replicate edges: row taps applied along x,
// column taps along y.
std::vector<double> filter_separable(const AlphaMatte& m, const std::vector<double>& row,
                                     const std::vector<double>& col) {
    const int h = m.height, w = m.width;
    const int rr = static_cast<int>(row.size()) / 2;
    const int rc = static_cast<int>(col.size()) / 2;
    std::vector<double> tmp(static_cast<size_t>(h) * w), out(tmp.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -rr; k <= rr; ++k)
                acc += row[k + rr] * m.at(y, std::clamp(x + k, 0, w - 1));
            tmp[static_cast<size_t>(y) * w + x] = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -rc; k <= rc; ++k)
                acc += col[k + rc] * tmp[static_cast<size_t>(std::clamp(y + k, 0, h - 1)) * w + x];
            out[static_cast<size_t>(y) * w + x] = acc;
        }
    return out;
}

// Disjoint-set over pixel indices, path-halving.
struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Largest 4-connected component of `on`, returned as a pixel-index list.
std::vector<int> largest_component(const std::vector<char>& on, int h, int w) {
    Dsu dsu(h * w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int i = y * w + x;
            if (!on[i]) continue;
            if (x + 1 < w && on[i + 1]) dsu.unite(i, i + 1);
            if (y + 1 < h && on[i + w]) dsu.unite(i, i + w);
        }
    std::vector<int> count(h * w, 0), first(h * w, h * w);
    for (int i = 0; i < h * w; ++i)
        if (on[i]) {
            const int r = dsu.find(i);
            ++count[r];
            first[r] = std::min(first[r], i);
        }
    int best_root = -1;
    for (int r = 0; r < h * w; ++r) {
        if (count[r] == 0) continue;
        // Ties go to the component met first in raster order.
        if (best_root < 0 || count[r] > count[best_root] ||
            (count[r] == count[best_root] && first[r] < first[best_root]))
            best_root = r;
    }
    std::vector<int> omega;
    if (best_root < 0) return omega;
    for (int i = 0; i < h * w; ++i)
        if (on[i] && dsu.find(i) == best_root) omega.push_back(i);
    return omega;
}

// l_i per pixel: the highest threshold level at which pixel i is
// 4-connected to omega in the binarization a >= t - tol. Levels are
// processed descending with an incremental union-find; a pixel's level is
// fixed the first time its component contains an omega pixel.
std::vector<double> connection_levels(const AlphaMatte& a, const std::vector<int>& omega,
                                      const std::vector<double>& levels_desc) {
    const int h = a.height, w = a.width;
    const int n = h * w;
    std::vector<double> l(n, 0.0);
    std::vector<char> active(n, 0), done(n, 0);
    Dsu dsu(n);
    std::vector<char> omega_flag(n, 0);  // per root after find()
    std::vector<char> is_omega(n, 0);
    for (const int i : omega) is_omega[i] = 1;

    for (const double t : levels_desc) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const int i = y * w + x;
                if (active[i] || a.data[i] < t - kOpaqueTol) continue;
                active[i] = 1;
                if (is_omega[i]) omega_flag[dsu.find(i)] = 1;
                const int nb[4] = {x > 0 ? i - 1 : -1, x + 1 < w ? i + 1 : -1,
                                   y > 0 ? i - w : -1, y + 1 < h ? i + w : -1};
                for (const int j : nb) {
                    if (j < 0 || !active[j]) continue;
                    const int ri = dsu.find(i), rj = dsu.find(j);
                    if (ri == rj) continue;
                    const char merged = omega_flag[ri] | omega_flag[rj];
                    dsu.unite(ri, rj);
                    omega_flag[dsu.find(i)] = merged;
                }
            }
        for (int i = 0; i < n; ++i)
            if (active[i] && !done[i] && omega_flag[dsu.find(i)]) {
                done[i] = 1;
                l[i] = t;
            }
    }
    return l;
}

}  // namespace

double sad(const AlphaMatte& pred, const AlphaMatte& gt) {
    require_pair(pred, gt);
    double acc = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) acc += std::fabs(pred.data[i] - gt.data[i]);
    return acc / static_cast<double>(pred.size());
}

double mse(const AlphaMatte& pred, const AlphaMatte& gt) {
    require_pair(pred, gt);
    double acc = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const double d = pred.data[i] - gt.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

std::vector<double> gaussian_taps(double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        taps[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
        sum += taps[k + radius];
    }
    for (double& v : taps) v /= sum;
    return taps;
}

std::vector<double> gaussian_deriv_taps(double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(2 * radius + 1);
    double ramp_response = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        taps[k + radius] = -k * std::exp(-0.5 * k * k / (sigma * sigma));
        ramp_response += k * taps[k + radius];
    }
    for (double& v : taps) v /= ramp_response;  // unit slope on a unit ramp
    return taps;
}

double gradient_error(const AlphaMatte& pred, const AlphaMatte& gt, double sigma,
                      double q) {
    require_pair(pred, gt);
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    const std::vector<double> g = gaussian_taps(sigma);
    const std::vector<double> d = gaussian_deriv_taps(sigma);
    const std::vector<double> px = filter_separable(pred, d, g);
    const std::vector<double> py = filter_separable(pred, g, d);
    const std::vector<double> gx = filter_separable(gt, d, g);
    const std::vector<double> gy = filter_separable(gt, g, d);
    double acc = 0.0;
    for (size_t i = 0; i < px.size(); ++i) {
        const double dx = px[i] - gx[i];
        const double dy = py[i] - gy[i];
        acc += std::pow(dx * dx + dy * dy, 0.5 * q);
    }
    return acc / static_cast<double>(px.size());
}

double connectivity_error(const AlphaMatte& pred, const AlphaMatte& gt, double theta,
                          double step) {
    require_pair(pred, gt);
    if (!(theta > 0.0 && theta < 1.0) || !(step > 0.0 && step < 1.0))
        throw std::invalid_argument("theta and step must lie in (0,1)");
    const int h = pred.height, w = pred.width;
    const int n = h * w;

    std::vector<char> both(n, 0);
    for (int i = 0; i < n; ++i)
        both[i] = pred.data[i] >= 1.0 - kOpaqueTol && gt.data[i] >= 1.0 - kOpaqueTol;
    const std::vector<int> omega = largest_component(both, h, w);
    if (omega.empty()) return sad(pred, gt);

    std::vector<double> levels;
    for (int k = 0; k * step < 1.0 + step * 0.5; ++k)
        levels.push_back(std::min(1.0, k * step));
    if (levels.back() < 1.0) levels.push_back(1.0);
    std::vector<double> desc(levels.rbegin(), levels.rend());

    const std::vector<double> lp = connection_levels(pred, omega, desc);
    const std::vector<double> lg = connection_levels(gt, omega, desc);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dp = pred.data[i] - lp[i];
        const double dg = gt.data[i] - lg[i];
        const double phi_p = 1.0 - (dp >= theta ? dp : 0.0);
        const double phi_g = 1.0 - (dg >= theta ? dg : 0.0);
        acc += std::fabs(phi_p - phi_g);
    }
    return acc / static_cast<double>(n);
}

}  // namespace matting::metrics
