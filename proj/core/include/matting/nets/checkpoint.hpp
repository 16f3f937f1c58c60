#pragma once

#include <string>

#include "matting/nets/models.hpp"

namespace matting::nets {

// Binary checkpoint layout, all integers and floats little-endian:
//   magic "MKPT1" | net id (u32 length + bytes) | config (7 x u32) |
//   array count (u32) | per array: name (u32 + bytes), ndim (u32),
//   dims (u32 each), float32 payload.
// Loading rejects bad magic, unknown ids, invalid configs, and any
// name/shape disagreement with the freshly constructed model.
void save_checkpoint(Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

// As load_checkpoint, but rejects a checkpoint of the wrong net kind.
Model load_checkpoint_expect(const std::string& path, NetKind kind);

}  // namespace matting::nets
