#include "matting/synthdata/composite.hpp"

#include <stdexcept>

namespace matting::synthdata {

imagery::Image composite(const imagery::Image& fg, const imagery::AlphaMatte& alpha,
                         const imagery::Image& bg) {
    if (!imagery::same_size(fg, alpha) || !imagery::same_size(fg, bg))
        throw std::invalid_argument("composite: foreground, alpha, background sizes differ");
    imagery::Image out(fg.height, fg.width);
    const size_t n = out.plane_size();
    for (int c = 0; c < 3; ++c) {
        const double* f = fg.plane(c);
        const double* b = bg.plane(c);
        double* o = out.plane(c);
        for (size_t i = 0; i < n; ++i) {
            const double a = alpha.data[i];
            o[i] = a * f[i] + (1.0 - a) * b[i];
        }
    }
    return out;
}

}  // namespace matting::synthdata
