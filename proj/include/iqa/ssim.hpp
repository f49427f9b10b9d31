#pragma once

#include <vector>

#include "iqa/image.hpp"

namespace iqa {

// Constants follow the usual (K * L)^2 convention with K1 = 0.01,
// K2 = 0.03 on a unit dynamic range.
struct SsimConfig {
  Kernel2D window = gaussian_window(11, 1.5);
  double dynamic_range = 1.0;
  double c1 = 1e-4;  // (0.01 * L)^2
  double c2 = 9e-4;  // (0.03 * L)^2
  BorderMode border = BorderMode::replicate;
};

struct SsimMaps {
  ImagePlane luminance;           // L map
  ImagePlane contrast_structure;  // CS map
  ImagePlane ssim;                // L .* CS
  double mean_ssim = 0.0;
};

struct MsSsimConfig {
  SsimConfig base;
  int scales = 5;
  // Per-scale exponents; empty selects the canonical weights (truncated and
  // renormalized to sum 1 when scales < 5). Scales beyond 5 need explicit
  // weights.
  std::vector<double> weights;
};

struct SsimDistance {
  ImagePlane map;        // per-pixel sqrt(2 - L - CS), radicand clamped at 0
  double global = 0.0;   // RMS pooling of the map
};

// Local means/variances via the config window; L, CS, and their product.
SsimMaps ssim_maps(const ImagePlane& x, const ImagePlane& y, const SsimConfig& cfg = {});

// Multi-scale score: mean CS per scale, luminance folded in at the
// coarsest scale only, combined as a weighted geometric mean.
double ms_ssim(const ImagePlane& x, const ImagePlane& y, const MsSsimConfig& cfg = {});

// Structural distance d(x, y) = sqrt(2 - L - CS), pooled globally as RMS.
// Zero iff x == y; symmetric; bounded by 2.
SsimDistance ssim_distance(const ImagePlane& x, const ImagePlane& y, const SsimConfig& cfg = {});

}  // namespace iqa
