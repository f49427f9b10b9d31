#include "iqa/ssim.hpp"

#include <cmath>
#include <string>

#include "iqa/errors.hpp"

namespace iqa {

namespace {

void check_pair(const ImagePlane& x, const ImagePlane& y, const SsimConfig& cfg) {
  if (x.empty() || y.empty()) throw InvalidInput("ssim: empty image");
  if (x.height() != y.height() || x.width() != y.width())
    throw InvalidInput("ssim: dimension mismatch " + std::to_string(x.height()) + "x" +
                       std::to_string(x.width()) + " vs " + std::to_string(y.height()) + "x" +
                       std::to_string(y.width()));
  if (!(cfg.c1 > 0.0) || !(cfg.c2 > 0.0))
    throw InvalidParameter("ssim: stabilizers c1 and c2 must be positive");
  if (!(cfg.dynamic_range > 0.0)) throw InvalidParameter("ssim: dynamic range must be positive");
  if (x.height() < cfg.window.height() || x.width() < cfg.window.width())
    throw InvalidInput("ssim: image smaller than the " + std::to_string(cfg.window.height()) + "x" +
                       std::to_string(cfg.window.width()) + " window");
}

const std::vector<double>& canonical_weights() {
  // classic five-scale exponents, normalized so they sum to exactly 1
  static const std::vector<double> w = [] {
    std::vector<double> v{0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
    double s = 0.0;
    for (double x : v) s += x;
    for (double& x : v) x /= s;
    return v;
  }();
  return w;
}

}  // namespace

SsimMaps ssim_maps(const ImagePlane& x, const ImagePlane& y, const SsimConfig& cfg) {
  check_pair(x, y, cfg);

  ImagePlane xx(x.height(), x.width()), yy(x.height(), x.width()), xy(x.height(), x.width());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx.data()[i] = x.data()[i] * x.data()[i];
    yy.data()[i] = y.data()[i] * y.data()[i];
    xy.data()[i] = x.data()[i] * y.data()[i];
  }
  ImagePlane mu_x = convolve_same(x, cfg.window, cfg.border);
  ImagePlane mu_y = convolve_same(y, cfg.window, cfg.border);
  ImagePlane m_xx = convolve_same(xx, cfg.window, cfg.border);
  ImagePlane m_yy = convolve_same(yy, cfg.window, cfg.border);
  ImagePlane m_xy = convolve_same(xy, cfg.window, cfg.border);

  SsimMaps maps;
  maps.luminance = ImagePlane(x.height(), x.width());
  maps.contrast_structure = ImagePlane(x.height(), x.width());
  maps.ssim = ImagePlane(x.height(), x.width());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double mx = mu_x.data()[i], my = mu_y.data()[i];
    // sigma_x^2 = E[x^2] - mu_x^2, sigma_xy = E[xy] - mu_x mu_y
    double sxx = m_xx.data()[i] - mx * mx;
    double syy = m_yy.data()[i] - my * my;
    double sxy = m_xy.data()[i] - mx * my;
    double l = (2.0 * mx * my + cfg.c1) / (mx * mx + my * my + cfg.c1);
    double cs = (2.0 * sxy + cfg.c2) / (sxx + syy + cfg.c2);
    maps.luminance.data()[i] = l;
    maps.contrast_structure.data()[i] = cs;
    maps.ssim.data()[i] = l * cs;
    sum += l * cs;
  }
  maps.mean_ssim = sum / static_cast<double>(x.size());
  return maps;
}

double ms_ssim(const ImagePlane& x, const ImagePlane& y, const MsSsimConfig& cfg) {
  if (cfg.scales < 1) throw InvalidParameter("ms_ssim: scales must be >= 1");
  const std::vector<double>& canon = canonical_weights();
  std::vector<double> truncated;
  if (cfg.weights.empty() && cfg.scales < static_cast<int>(canon.size())) {
    // fewer scales: keep the leading canonical exponents, renormalized to 1
    truncated.assign(canon.begin(), canon.begin() + cfg.scales);
    double s = 0.0;
    for (double w : truncated) s += w;
    for (double& w : truncated) w /= s;
  }
  const std::vector<double>& weights = !cfg.weights.empty() ? cfg.weights
                                       : cfg.scales == static_cast<int>(canon.size())
                                           ? canon
                                           : truncated;
  if (static_cast<int>(weights.size()) != cfg.scales)
    throw InvalidParameter("ms_ssim: need one weight per scale (" + std::to_string(cfg.scales) +
                           "), got " + std::to_string(weights.size()));
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidParameter("ms_ssim: weights must be positive");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw InvalidParameter("ms_ssim: weights must sum to 1");

  // every scale must still fit the window after repeated halving
  int need = std::max(cfg.base.window.height(), cfg.base.window.width()) << (cfg.scales - 1);
  int have = std::min({x.height(), x.width(), y.height(), y.width()});
  if (have < need) {
    int feasible = 0;
    for (int d = have / std::max(cfg.base.window.height(), cfg.base.window.width()); d >= 1; d /= 2)
      ++feasible;
    throw InvalidInput("ms_ssim: image supports at most " + std::to_string(feasible) +
                       " scales, requested " + std::to_string(cfg.scales));
  }

  ImagePlane a = x, b = y;
  double score = 1.0;
  for (int s = 0; s < cfg.scales; ++s) {
    SsimMaps maps = ssim_maps(a, b, cfg.base);
    double factor;
    if (s + 1 == cfg.scales) {
      factor = maps.mean_ssim;  // luminance enters only at the coarsest scale
    } else {
      factor = plane_mean(maps.contrast_structure);
      a = downsample2(a);
      b = downsample2(b);
    }
    score *= std::pow(std::max(factor, 0.0), weights[s]);
  }
  return score;
}

SsimDistance ssim_distance(const ImagePlane& x, const ImagePlane& y, const SsimConfig& cfg) {
  SsimMaps maps = ssim_maps(x, y, cfg);
  SsimDistance d;
  d.map = ImagePlane(x.height(), x.width());
  double sumsq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    // radicand clamped at 0: L + CS can exceed 2 by rounding when x == y
    double r = std::max(0.0, 2.0 - maps.luminance.data()[i] - maps.contrast_structure.data()[i]);
    d.map.data()[i] = std::sqrt(r);
    sumsq += r;
  }
  d.global = std::sqrt(sumsq / static_cast<double>(x.size()));
  return d;
}

}  // namespace iqa
