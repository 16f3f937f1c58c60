#pragma once

#include "matting/imagery/image.hpp"

namespace matting::synthdata {

// Per-pixel weighted combination I = alpha*F + (1-alpha)*B. All three inputs
// must share spatial size; the caller resizes the background first.
// alpha==1 returns the foreground bitwise, alpha==0 the background.
imagery::Image composite(const imagery::Image& fg, const imagery::AlphaMatte& alpha,
                         const imagery::Image& bg);

}  // namespace matting::synthdata
