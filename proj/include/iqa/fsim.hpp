#pragma once

#include <vector>

#include "iqa/image.hpp"

namespace iqa {

// Polar-separable log-Gabor filter bank in the frequency domain.
struct LogGaborBank {
  int scales = 4;
  int orientations = 4;
  double min_wavelength = 6.0;    // pixels, smallest-scale center wavelength
  double scaling_factor = 2.0;    // wavelength ratio between successive scales
  double sigma_on_f = 0.55;       // radial bandwidth as sigma / center frequency
  double angular_spread = 0.39269908169872414;  // pi / (2 * orientations) for 4
};

enum class GradientOperator { scharr, sobel, prewitt };

struct FsimConfig {
  LogGaborBank bank;
  double t1 = 0.85;               // phase congruency similarity stabilizer
  double t2 = 160.0 / 65025.0;    // gradient similarity stabilizer (8-bit 160 rescaled)
  GradientOperator gradient_operator = GradientOperator::scharr;
  double noise_threshold_k = 2.0; // noise energy threshold = mean + k * sigma
  double t_chroma = 200.0 / 65025.0;  // chroma similarity stabilizer (8-bit 200 rescaled)
  double chroma_exponent = 0.03;
};

struct FsimResult {
  double score = 0.0;
  ImagePlane similarity_map;  // per-pixel similarity before pooling
  ImagePlane pc_ref, pc_test;
  ImagePlane gm_ref, gm_test;
  bool chromatic = false;     // true when the I/Q term entered the map
};

// Frequency-domain filters for an h x w grid, real-valued, indexed
// scale * orientations + orientation. Every filter has zero DC response.
std::vector<ImagePlane> log_gabor_bank_filters(const LogGaborBank& bank, int height, int width);

// Phase congruency in [0, 1]: orientation-summed quadrature energy over
// total filter amplitude, with a per-orientation Rayleigh noise threshold
// (k sigmas above the estimated noise energy mean). Needs at least 16
// pixels on each side for a meaningful spectrum.
ImagePlane phase_congruency(const ImagePlane& p, const LogGaborBank& bank,
                            double noise_threshold_k = 2.0);

// 3x3 derivative stencil magnitude, replicate border. Stencils are scaled
// (scharr / 16, sobel / 4, prewitt / 3) so a unit-slope ramp reads 2.
ImagePlane gradient_magnitude(const ImagePlane& p, GradientOperator op);

// Feature-similarity score. Grayscale pairs use phase congruency and
// gradient similarity; 3-channel pairs additionally apply the chroma
// similarity term to the map. Pooling is weighted by max(pc_ref, pc_test).
FsimResult fsim(const ImageTensor& x, const ImageTensor& y, const FsimConfig& cfg = {});

}  // namespace iqa
