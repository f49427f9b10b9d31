#pragma once

#include <string>
#include <vector>

#include "iqa/image.hpp"

namespace iqa {

struct NiqeConfig {
  Kernel2D window = gaussian_window(7, 7.0 / 6.0);
  int patch_size = 96;               // at unit scale; halved per further scale
  double sharpness_fraction = 0.75;  // share of patches kept when fitting pristine
  int scales = 2;
  // local-deviation stabilizer; 1/255 is the classic +1 rescaled to unit range
  double mscn_stabilizer = 1.0 / 255.0;
};

// Generalized Gaussian: f(x) ~ exp(-(|x|/scale)^shape).
struct GgdParams {
  double shape = 0.0;
  double scale = 0.0;
};

// Asymmetric generalized Gaussian with one-sided scales and mean offset eta.
struct AggdParams {
  double shape = 0.0;
  double scale_left = 0.0;
  double scale_right = 0.0;
  double mean_offset = 0.0;
};

// Multivariate Gaussian over natural-scene-statistics features.
struct MvgModel {
  std::vector<double> mean;
  std::vector<double> covariance;  // dim x dim, row major
  int scales = 2;
  int patch_size = 96;
  int dim() const { return static_cast<int>(mean.size()); }
};

struct MscnField {
  ImagePlane mscn;   // (I - mu) / (sigma + C)
  ImagePlane sigma;  // local deviation field, reused for patch sharpness
};

MscnField mscn_field(const ImagePlane& p, const NiqeConfig& cfg = {});

// Mean-subtracted contrast-normalized coefficients.
ImagePlane mscn(const ImagePlane& p, const NiqeConfig& cfg = {});

// Moment-matching fits; shape searched on a [0.2, 10] grid with 0.001 step.
GgdParams fit_ggd(const std::vector<double>& samples);
AggdParams fit_aggd(const std::vector<double>& samples);

// 18 features per scale: GGD (shape, scale) of the MSCN field plus AGGD
// (shape, mean_offset, scale_left, scale_right) of the four neighbor
// products (horizontal, vertical, both diagonals).
std::vector<double> nss_features(const ImagePlane& p, const NiqeConfig& cfg = {});

// MVG over per-patch feature vectors of one image. With sharpness_filter,
// only the top sharpness_fraction of patches (by mean local deviation,
// ties broken by scan order) enter the fit.
MvgModel fit_image_mvg(const ImagePlane& p, const NiqeConfig& cfg, bool sharpness_filter);

// Pristine naturalness model over a corpus of at least 10 images; the
// covariance diagonal is lifted by 1e-6 * trace / dim.
MvgModel fit_pristine(const std::vector<ImagePlane>& corpus, const NiqeConfig& cfg = {});

// sqrt((mu_a - mu_b)^T ((Sigma_a + Sigma_b) / 2)^-1 (mu_a - mu_b)).
double niqe_distance(const MvgModel& a, const MvgModel& b);

// Distance between the test image's patch MVG (all patches, no sharpness
// filter) and the pristine model. Lower is more natural.
double niqe_score(const ImagePlane& p, const MvgModel& pristine, const NiqeConfig& cfg = {});

// Versioned JSON model file: {format_version, scales, patch_size, mean,
// covariance}. Load-save round trips are byte identical.
void save_mvg_model(const std::string& path, const MvgModel& model);
MvgModel load_mvg_model(const std::string& path);

}  // namespace iqa
