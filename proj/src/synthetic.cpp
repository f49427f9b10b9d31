#include "iqa/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "iqa/errors.hpp"
#include "iqa/fft.hpp"
#include "iqa/rng.hpp"

namespace iqa {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Rescales to mean 0.5 / stddev `target_sd`, then clamps to [0, 1].
ImagePlane standardize(ImagePlane p, double target_sd) {
  double mean = plane_mean(p);
  double var = 0.0;
  for (double v : p.data()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(p.size());
  double sd = std::sqrt(var);
  double gain = sd > 0.0 ? target_sd / sd : 0.0;
  for (double& v : p.data()) v = clamp01(0.5 + gain * (v - mean));
  return p;
}

}  // namespace

ImagePlane pink_noise(int height, int width, std::uint64_t seed) {
  Rng rng(seed);
  ImagePlane white(height, width);
  for (double& v : white.data()) v = rng.gaussian();
  Spectrum s = fft2(white);
  // 1/f amplitude falloff; DC removed so the mean is set by standardize()
  for (int u = 0; u < height; ++u) {
    double fu = static_cast<double>(std::min(u, height - u)) / height;
    for (int v = 0; v < width; ++v) {
      double fv = static_cast<double>(std::min(v, width - v)) / width;
      double f = std::sqrt(fu * fu + fv * fv);
      s.at(u, v) *= (f > 0.0) ? 1.0 / f : 0.0;
    }
  }
  return standardize(ifft2(s), 0.15);
}

ImagePlane uniform_noise(int height, int width, std::uint64_t seed) {
  Rng rng(seed);
  ImagePlane out(height, width);
  for (double& v : out.data()) v = rng.uniform();
  return out;
}

ImagePlane gaussian_noise(int height, int width, std::uint64_t seed, double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("gaussian_noise: sigma must be positive");
  Rng rng(seed);
  ImagePlane out(height, width);
  for (double& v : out.data()) v = clamp01(0.5 + sigma * rng.gaussian());
  return out;
}

ImagePlane ramp(int height, int width) {
  ImagePlane out(height, width);
  for (int i = 0; i < height; ++i)
    for (int j = 0; j < width; ++j)
      out.at(i, j) = width > 1 ? static_cast<double>(j) / (width - 1) : 0.0;
  return out;
}

ImagePlane checkerboard(int height, int width, int cell) {
  if (cell <= 0) throw InvalidParameter("checkerboard: cell must be positive");
  ImagePlane out(height, width);
  for (int i = 0; i < height; ++i)
    for (int j = 0; j < width; ++j) out.at(i, j) = ((i / cell + j / cell) % 2 == 0) ? 0.0 : 1.0;
  return out;
}

ImagePlane grating_texture(int height, int width, std::uint64_t seed, double cycles,
                           double angle) {
  ImagePlane noise = pink_noise(height, width, seed);
  ImagePlane out(height, width);
  double ca = std::cos(angle), sa = std::sin(angle);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      double u = (ca * j + sa * i) / std::max(height, width);
      double w = (ca * i - sa * j) / std::max(height, width);
      // amplitude 0.55 drives the peaks into clamping, which keeps the
      // texture from being a pure sinusoid
      double v = 0.5 + 0.55 * std::sin(2.0 * kPi * cycles * u) * std::cos(2.0 * kPi * 0.5 * cycles * w) +
                 0.4 * (noise.at(i, j) - 0.5);
      out.at(i, j) = clamp01(v);
    }
  }
  return out;
}

ImageTensor pink_noise_rgb(int height, int width, std::uint64_t seed) {
  return ImageTensor(pink_noise(height, width, seed), pink_noise(height, width, seed + 1),
                     pink_noise(height, width, seed + 2));
}

DistortKind distort_kind_from_name(const std::string& name) {
  if (name == "agn") return DistortKind::agn;
  if (name == "gaussian_blur") return DistortKind::gaussian_blur;
  if (name == "block_jpeg_like") return DistortKind::block_jpeg_like;
  if (name == "mean_shift") return DistortKind::mean_shift;
  throw InvalidParameter("unknown distortion kind '" + name + "'");
}

std::string distort_kind_name(DistortKind kind) {
  switch (kind) {
    case DistortKind::agn: return "agn";
    case DistortKind::gaussian_blur: return "gaussian_blur";
    case DistortKind::block_jpeg_like: return "block_jpeg_like";
    case DistortKind::mean_shift: return "mean_shift";
  }
  return "?";
}

namespace {

ImagePlane apply_agn(const ImagePlane& p, double sigma, Rng& rng) {
  ImagePlane out(p.height(), p.width());
  for (std::size_t i = 0; i < p.size(); ++i)
    out.data()[i] = clamp01(p.data()[i] + sigma * rng.gaussian());
  return out;
}

ImagePlane apply_blur(const ImagePlane& p, double sigma) {
  int size = 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
  int cap = 2 * std::min(p.height(), p.width()) - 1;
  size = std::min(size, cap | 1);
  return clamp01(convolve_same(p, gaussian_window(size, sigma), BorderMode::replicate));
}

// Orthonormal 8x8 DCT-II basis, row k = frequency k.
const double* dct8_basis() {
  static double c[64];
  static bool ready = false;
  if (!ready) {
    for (int k = 0; k < 8; ++k) {
      double norm = std::sqrt((k == 0 ? 1.0 : 2.0) / 8.0);
      for (int n = 0; n < 8; ++n) c[k * 8 + n] = norm * std::cos(kPi * (2 * n + 1) * k / 16.0);
    }
    ready = true;
  }
  return c;
}

ImagePlane apply_jpeg_like(const ImagePlane& p, double step) {
  const double* c = dct8_basis();
  // pad to a multiple of 8 by edge replication, then crop after the transform
  int ph = (p.height() + 7) / 8 * 8, pw = (p.width() + 7) / 8 * 8;
  ImagePlane pad(ph, pw);
  for (int i = 0; i < ph; ++i)
    for (int j = 0; j < pw; ++j)
      pad.at(i, j) = p.at(std::min(i, p.height() - 1), std::min(j, p.width() - 1));
  double blk[64], tmp[64];
  for (int bi = 0; bi < ph; bi += 8) {
    for (int bj = 0; bj < pw; bj += 8) {
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) blk[i * 8 + j] = pad.at(bi + i, bj + j);
      // coef = C * blk * C^T
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
          double a = 0.0;
          for (int n = 0; n < 8; ++n) a += c[i * 8 + n] * blk[n * 8 + j];
          tmp[i * 8 + j] = a;
        }
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
          double a = 0.0;
          for (int n = 0; n < 8; ++n) a += tmp[i * 8 + n] * c[j * 8 + n];
          blk[i * 8 + j] = std::round(a / step) * step;
        }
      // back: C^T * coef * C
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
          double a = 0.0;
          for (int n = 0; n < 8; ++n) a += c[n * 8 + i] * blk[n * 8 + j];
          tmp[i * 8 + j] = a;
        }
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
          double a = 0.0;
          for (int n = 0; n < 8; ++n) a += tmp[i * 8 + n] * c[n * 8 + j];
          pad.at(bi + i, bj + j) = a;
        }
    }
  }
  ImagePlane out(p.height(), p.width());
  for (int i = 0; i < p.height(); ++i)
    for (int j = 0; j < p.width(); ++j) out.at(i, j) = clamp01(pad.at(i, j));
  return out;
}

ImagePlane apply_shift(const ImagePlane& p, double level) {
  ImagePlane out(p.height(), p.width());
  for (std::size_t i = 0; i < p.size(); ++i) out.data()[i] = clamp01(p.data()[i] + level);
  return out;
}

}  // namespace

ImageTensor synth_distort(const ImageTensor& img, DistortKind kind, double level,
                          std::uint64_t seed) {
  if (!(level > 0.0) || !std::isfinite(level))
    throw InvalidParameter("distortion level must be positive and finite");
  if (img.channels() != 1 && img.channels() != 3)
    throw InvalidInput("synth_distort: expected 1 or 3 channels");
  std::vector<ImagePlane> planes;
  Rng rng(seed);  // shared across channels so RGB noise is decorrelated
  for (int c = 0; c < img.channels(); ++c) {
    switch (kind) {
      case DistortKind::agn: planes.push_back(apply_agn(img.plane(c), level, rng)); break;
      case DistortKind::gaussian_blur: planes.push_back(apply_blur(img.plane(c), level)); break;
      case DistortKind::block_jpeg_like: planes.push_back(apply_jpeg_like(img.plane(c), level)); break;
      case DistortKind::mean_shift: planes.push_back(apply_shift(img.plane(c), level)); break;
    }
  }
  if (planes.size() == 1) return ImageTensor(std::move(planes[0]));
  return ImageTensor(std::move(planes[0]), std::move(planes[1]), std::move(planes[2]));
}

ImagePlane synth_distort(const ImagePlane& p, DistortKind kind, double level, std::uint64_t seed) {
  ImageTensor out = synth_distort(ImageTensor(p), kind, level, seed);
  return out.plane(0);
}

}  // namespace iqa
