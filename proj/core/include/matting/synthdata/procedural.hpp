#pragma once

#include <string>

#include "matting/imagery/image.hpp"
#include "matting/imagery/rng.hpp"
#include "matting/synthdata/dataset_builder.hpp"

namespace matting::synthdata {

// Procedural subject: a soft-edged blob body with thin filament strokes
// sprouting from its top, mimicking a silhouette with stray hair. The
// returned alpha is soft at boundaries and the foreground is a smooth
// two-tone color field. Deterministic in rng.
ForegroundSample make_procedural_foreground(int height, int width, imagery::Rng rng,
                                            const std::string& id);

// Procedural scene: oriented color gradient plus low-frequency sinusoidal
// texture. Deterministic in rng.
imagery::Image make_procedural_background(int height, int width, imagery::Rng rng);

}  // namespace matting::synthdata
