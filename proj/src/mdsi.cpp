#include "iqa/mdsi.hpp"

#include <cmath>

#include "iqa/errors.hpp"
#include "iqa/fsim.hpp"

namespace iqa {

double deviation_pool(const ImagePlane& map, double power, double q) {
  if (map.empty()) throw InvalidInput("deviation_pool: empty map");
  if (!(power > 0.0) || !(q > 0.0))
    throw InvalidParameter("deviation_pool: power and q must be positive");
  for (double v : map.data())
    if (v < 0.0) throw InvalidInput("deviation_pool: map values must be non-negative");
  std::vector<double> powered(map.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    powered[i] = std::pow(map.data()[i], power);
    mean += powered[i];
  }
  mean /= static_cast<double>(map.size());
  double mad = 0.0;
  for (double v : powered) mad += std::abs(v - mean);
  mad /= static_cast<double>(map.size());
  return std::pow(mad, q);
}

MdsiResult mdsi(const ImageTensor& x, const ImageTensor& y, const MdsiConfig& cfg) {
  if (x.channels() != 3 || y.channels() != 3)
    throw InvalidInput("mdsi: both inputs must have 3 channels");
  if (x.height() != y.height() || x.width() != y.width())
    throw InvalidInput("mdsi: dimension mismatch");
  if (x.height() < 6 || x.width() < 6)
    throw InvalidInput("mdsi: image must be at least 6x6");
  if (!(cfg.c1 > 0.0) || !(cfg.c2 > 0.0) || !(cfg.c3 > 0.0))
    throw InvalidParameter("mdsi: stabilizers must be positive");
  if (!(cfg.mix_weight >= 0.0 && cfg.mix_weight <= 1.0))
    throw InvalidParameter("mdsi: mix weight must lie in [0, 1]");

  // work at half resolution
  ImagePlane r1 = downsample2(x.plane(0)), g1 = downsample2(x.plane(1)), b1 = downsample2(x.plane(2));
  ImagePlane r2 = downsample2(y.plane(0)), g2 = downsample2(y.plane(1)), b2 = downsample2(y.plane(2));
  const int h = r1.height(), w = r1.width();
  const std::size_t n = r1.size();

  // luma plus two opponent chroma channels
  ImagePlane l1(h, w), l2(h, w), h1(h, w), h2(h, w), m1(h, w), m2(h, w);
  for (std::size_t i = 0; i < n; ++i) {
    l1.data()[i] = 0.299 * r1.data()[i] + 0.587 * g1.data()[i] + 0.114 * b1.data()[i];
    l2.data()[i] = 0.299 * r2.data()[i] + 0.587 * g2.data()[i] + 0.114 * b2.data()[i];
    h1.data()[i] = 0.30 * r1.data()[i] + 0.04 * g1.data()[i] - 0.35 * b1.data()[i];
    h2.data()[i] = 0.30 * r2.data()[i] + 0.04 * g2.data()[i] - 0.35 * b2.data()[i];
    m1.data()[i] = 0.34 * r1.data()[i] - 0.60 * g1.data()[i] + 0.17 * b1.data()[i];
    m2.data()[i] = 0.34 * r2.data()[i] - 0.60 * g2.data()[i] + 0.17 * b2.data()[i];
  }
  ImagePlane fused(h, w);
  for (std::size_t i = 0; i < n; ++i) fused.data()[i] = 0.5 * (l1.data()[i] + l2.data()[i]);

  ImagePlane gm1 = gradient_magnitude(l1, GradientOperator::prewitt);
  ImagePlane gm2 = gradient_magnitude(l2, GradientOperator::prewitt);
  ImagePlane gmf = gradient_magnitude(fused, GradientOperator::prewitt);

  MdsiResult result;
  result.gcs_map = ImagePlane(h, w);
  for (std::size_t i = 0; i < n; ++i) {
    double a = gm1.data()[i], b = gm2.data()[i], f = gmf.data()[i];
    double gs = (2.0 * a * b + cfg.c1) / (a * a + b * b + cfg.c1);
    double gs_xf = (2.0 * a * f + cfg.c2) / (a * a + f * f + cfg.c2);
    double gs_yf = (2.0 * b * f + cfg.c2) / (b * b + f * f + cfg.c2);
    // fused-gradient correction folded in as a symmetric penalty
    double gs_hvs = clamp01(gs - std::abs(gs_xf - gs_yf));
    double cs = (2.0 * (h1.data()[i] * h2.data()[i] + m1.data()[i] * m2.data()[i]) + cfg.c3) /
                (h1.data()[i] * h1.data()[i] + h2.data()[i] * h2.data()[i] +
                 m1.data()[i] * m1.data()[i] + m2.data()[i] * m2.data()[i] + cfg.c3);
    result.gcs_map.data()[i] = clamp01(cfg.mix_weight * gs_hvs + (1.0 - cfg.mix_weight) * cs);
  }
  result.score = deviation_pool(result.gcs_map, cfg.map_power, cfg.pooling_exponent);
  return result;
}

}  // namespace iqa
