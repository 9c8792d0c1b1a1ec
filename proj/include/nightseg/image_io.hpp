#pragma once

#include <filesystem>

#include "nightseg/image.hpp"

namespace nightseg {

// Decodes a PNG or JPEG file. 16-bit sources are scaled down to [0,255].
// Throws FileNotFound, UnsupportedFormat, or CorruptImage.
RGBImage load_image(const std::filesystem::path& path);

// Loads a nominally binary mask image (grayscale or RGB): luminance >= 128
// maps to cloud, everything else to sky. Throws AmbiguousMask when more than
// 1% of the pixels fall in the luminance band (64, 192), which signals a
// non-binary file.
CloudMask load_mask(const std::filesystem::path& path);

// Writes an 8-bit grayscale PNG with cloud -> 255 and sky -> 0.
// load_mask(save_mask(m)) == m exactly.
void save_mask(const CloudMask& mask, const std::filesystem::path& path);

// Writes a color image as PNG or JPEG depending on the file extension.
void save_image(const RGBImage& img, const std::filesystem::path& path);

}  // namespace nightseg
