#pragma once

#include <string>

#include "iqa/image.hpp"

namespace iqa {

// Loads an 8-bit PGM (P5), PPM (P6), or PNG file. Samples are divided by
// 255 so planes land in [0, 1]. PNG alpha channels are dropped.
ImageTensor load_image(const std::string& path);

// Writes round(255 * clamp01(v)) samples. Format chosen by extension:
// .pgm / .ppm / .png (grayscale input to .ppm is replicated to 3 channels;
// color input to .pgm is converted to grayscale first).
void save_image(const std::string& path, const ImageTensor& img);
void save_image(const std::string& path, const ImagePlane& plane);

}  // namespace iqa
