#pragma once

#include "iqa/image.hpp"

namespace iqa {

// Stabilizers are the usual 8-bit values (140, 55, 550) rescaled by 255^2
// for unit-range planes.
struct MdsiConfig {
  double c1 = 140.0 / 65025.0;  // gradient similarity
  double c2 = 55.0 / 65025.0;   // fused-gradient similarity
  double c3 = 550.0 / 65025.0;  // chromaticity similarity
  double mix_weight = 0.6;      // gradient share of the combined map
  double map_power = 0.25;      // exponent applied to the map before pooling
  double pooling_exponent = 0.25;
};

struct MdsiResult {
  double score = 0.0;   // deviation-pooled distance, 0 for identical inputs
  ImagePlane gcs_map;   // combined gradient/chromaticity similarity, half resolution
};

// Mean absolute deviation of map^power around its mean, raised to q.
double deviation_pool(const ImagePlane& map, double power, double q);

// Mean-deviation similarity index for 3-channel pairs. Symmetric in its
// arguments; smaller scores mean more similar images.
MdsiResult mdsi(const ImageTensor& x, const ImageTensor& y, const MdsiConfig& cfg = {});

}  // namespace iqa
