#include "iqa/maps.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "iqa/errors.hpp"

namespace iqa {

MapMetric map_metric_from_name(const std::string& name) {
  if (name == "ssim") return MapMetric::ssim;
  if (name == "ms-ssim") return MapMetric::ms_ssim;
  if (name == "fsim") return MapMetric::fsim;
  if (name == "mdsi") return MapMetric::mdsi;
  throw InvalidParameter("unknown map metric: " + name);
}

std::string map_metric_name(MapMetric metric) {
  switch (metric) {
    case MapMetric::ssim: return "ssim";
    case MapMetric::ms_ssim: return "ms-ssim";
    case MapMetric::fsim: return "fsim";
    case MapMetric::mdsi: return "mdsi";
  }
  throw InvalidParameter("unknown map metric enumerator");
}

static void check_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.3 || alpha > 1.0)
    throw InvalidParameter("alpha must lie in [0.3, 1]");
}

ImagePlane intensity_scale(const ImagePlane& m, double alpha) {
  check_alpha(alpha);
  if (m.empty()) throw InvalidInput("intensity_scale: empty map");
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    if (!(v >= 0.0 && v <= 1.0))
      throw InvalidInput("intensity_scale: map values must lie in [0, 1]");
    out[i] = alpha == 1.0 ? v : std::pow(v, alpha);
  }
  return ImagePlane(m.height(), m.width(), std::move(out));
}

// Finest-scale CS map modulated by the coarsest-scale luminance map.
static ImagePlane ms_ssim_raw_map(const ImagePlane& x, const ImagePlane& y,
                                  const MsSsimConfig& cfg) {
  if (cfg.scales < 1) throw InvalidParameter("scales must be >= 1");
  const std::size_t wdim = std::max(cfg.base.window.height(), cfg.base.window.width());
  const std::size_t need = wdim << (cfg.scales - 1);
  const std::size_t mind = std::min(x.height(), x.width());
  if (mind < need) {
    std::size_t feasible = 0;
    for (std::size_t d = mind; d >= wdim; d /= 2) ++feasible;
    throw InvalidInput("image supports at most " + std::to_string(feasible) +
                       " scales for this window");
  }
  ImagePlane cs_fine = clamp01(ssim_maps(x, y, cfg.base).contrast_structure);
  ImagePlane xs = x, ys = y;
  for (int s = 1; s < cfg.scales; ++s) {
    xs = downsample2(xs);
    ys = downsample2(ys);
  }
  ImagePlane lum = clamp01(ssim_maps(xs, ys, cfg.base).luminance);
  ImagePlane lum_up = resize_bilinear(lum, static_cast<int>(x.height()),
                                      static_cast<int>(x.width()));
  std::vector<double> out(cs_fine.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = cs_fine.data()[i] * lum_up.data()[i];
  return ImagePlane(x.height(), x.width(), std::move(out));
}

QualityMap quality_map(MapMetric metric, const ImageTensor& x_ref, const ImageTensor& x_hat,
                       double alpha, const MapConfigs& cfg) {
  check_alpha(alpha);
  ImagePlane raw;
  switch (metric) {
    case MapMetric::ssim:
      raw = clamp01(ssim_maps(to_grayscale(x_ref), to_grayscale(x_hat), cfg.ssim).ssim);
      break;
    case MapMetric::ms_ssim:
      raw = clamp01(ms_ssim_raw_map(to_grayscale(x_ref), to_grayscale(x_hat), cfg.ms_ssim));
      break;
    case MapMetric::fsim: {
      // Luminance similarity only, so the map stays comparable across inputs.
      ImageTensor gr(to_grayscale(x_ref));
      ImageTensor gh(to_grayscale(x_hat));
      raw = clamp01(fsim(gr, gh, cfg.fsim).similarity_map);
      break;
    }
    case MapMetric::mdsi: {
      MdsiResult r = mdsi(x_ref, x_hat, cfg.mdsi);
      raw = clamp01(resize_bilinear(r.gcs_map, static_cast<int>(x_ref.height()),
                                    static_cast<int>(x_ref.width())));
      break;
    }
  }
  QualityMap qm;
  qm.plane = intensity_scale(raw, alpha);
  qm.metric = metric;
  qm.alpha = alpha;
  return qm;
}

ImagePlane fuse_maps(const QualityMap& m1, const QualityMap& m2, const QualityMap& m3,
                     const FusionWeights& w) {
  const ImagePlane& p1 = m1.plane;
  const ImagePlane& p2 = m2.plane;
  const ImagePlane& p3 = m3.plane;
  if (p1.empty()) throw InvalidInput("fuse_maps: empty map");
  if (p2.height() != p1.height() || p2.width() != p1.width() || p3.height() != p1.height() ||
      p3.width() != p1.width())
    throw InvalidInput("fuse_maps: maps must share dimensions");
  if (!(w.w1 >= 0.0) || !(w.w2 >= 0.0) || !(w.w3 >= 0.0))
    throw InvalidParameter("fusion weights must be nonnegative");
  if (std::abs(w.w1 + w.w2 + w.w3 - 1.0) > 1e-12)
    throw InvalidParameter("fusion weights must sum to 1");
  std::vector<double> out(p1.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = p1.data()[i], b = p2.data()[i], c = p3.data()[i];
    const double lo = std::min(a, std::min(b, c));
    const double hi = std::max(a, std::max(b, c));
    // Clamp to the input hull so convexity holds bit-for-bit.
    out[i] = std::clamp(w.w1 * a + w.w2 * b + w.w3 * c, lo, hi);
  }
  return ImagePlane(p1.height(), p1.width(), std::move(out));
}

}  // namespace iqa
