#pragma once

#include <string>

#include "uedge/map2d.hpp"
#include "uedge/tensor.hpp"

namespace uedge::png {

/// 8-bit grayscale mask with values in {0, 255} -> {0, 1} map.
/// Any other pixel value is an InvalidInput.
BinaryMap read_mask(const std::string& path);
void write_mask(const std::string& path, const BinaryMap& mask);

/// 8-bit image (gray, RGB or RGBA) -> 3 x H x W tensor in [0, 1].
Tensor read_rgb(const std::string& path);
void write_rgb(const std::string& path, const Tensor& image);

/// Grayscale probability map. Accepts 8- or 16-bit input; values are
/// scaled by 255 or 65535 respectively into [0, 1].
MapD read_gray(const std::string& path);

/// 16-bit grayscale output. Values are clamped to [0, scale_max] and
/// mapped linearly onto the full 16-bit range.
void write_gray16(const std::string& path, const MapD& map, double scale_max = 1.0);

}  // namespace uedge::png
