#pragma once

#include <string>

#include "iqa/fsim.hpp"
#include "iqa/image.hpp"
#include "iqa/mdsi.hpp"
#include "iqa/ssim.hpp"

namespace iqa {

enum class MapMetric { ssim, ms_ssim, fsim, mdsi };

MapMetric map_metric_from_name(const std::string& name);
std::string map_metric_name(MapMetric metric);

// Per-pixel similarity raster in [0,1] after intensity scaling.
struct QualityMap {
  ImagePlane plane;
  MapMetric metric = MapMetric::ssim;
  double alpha = 1.0;
};

struct FusionWeights {
  double w1 = 1.0 / 3.0;
  double w2 = 1.0 / 3.0;
  double w3 = 1.0 / 3.0;
};

struct MapConfigs {
  SsimConfig ssim;
  MsSsimConfig ms_ssim;
  FsimConfig fsim;
  MdsiConfig mdsi;
};

// Pointwise m^alpha for alpha in [0.3, 1]; alpha = 1 is the exact identity.
// Lower alpha brightens: m^0.3 >= m on [0,1].
ImagePlane intensity_scale(const ImagePlane& m, double alpha);

// Similarity map between a reference and a test image, clamped to [0,1]
// and intensity-scaled. ssim uses the L*CS map; ms_ssim composes the
// finest-scale CS map with the coarsest-scale luminance map (upsampled);
// fsim uses the luminance similarity map; mdsi upsamples its half-resolution
// combined map back to input size.
QualityMap quality_map(MapMetric metric, const ImageTensor& x_ref, const ImageTensor& x_hat,
                       double alpha, const MapConfigs& cfg = {});

// Convex pointwise combination of three aligned maps.
ImagePlane fuse_maps(const QualityMap& m1, const QualityMap& m2, const QualityMap& m3,
                     const FusionWeights& w = {});

}  // namespace iqa
