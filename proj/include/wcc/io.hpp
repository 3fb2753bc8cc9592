#pragma once

#include <string>

#include "wcc/tensor.hpp"

namespace wcc {

/// Reads a P5 (binary) or P2 (ASCII) PGM file, maxval <= 65535.
/// Returns a 1 x H x W tensor scaled into [0, 1] by dividing by maxval.
/// Parse failures throw ParseError naming the byte offset.
Tensor3 load_pgm(const std::string& path);

/// Writes a single-channel tensor as binary P5, clamping values to [0, 1]
/// and scaling by the given maxval (255 or 65535).
void save_pgm(const Tensor3& t, const std::string& path, int maxval = 255);

/// Raw tensor file: exactly 4*C*H*W bytes of little-endian float32 in
/// Tensor3 layout. Size mismatches throw ParseError reporting expected vs
/// actual byte counts.
Tensor3 load_raw(const std::string& path, int channels, int height, int width);
void save_raw(const Tensor3& t, const std::string& path);

}  // namespace wcc
