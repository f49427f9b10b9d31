#include "iqa/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iqa/errors.hpp"

namespace iqa {

namespace {

void check_dims(int height, int width) {
  if (height <= 0 || width <= 0)
    throw InvalidInput("image dimensions must be positive, got " + std::to_string(height) + "x" +
                       std::to_string(width));
}

// Maps an out-of-range index into [0, n) for the given border mode.
// Returns -1 when the sample should read as 0.
int resolve_index(int i, int n, BorderMode border) {
  if (i >= 0 && i < n) return i;
  switch (border) {
    case BorderMode::replicate:
      return i < 0 ? 0 : n - 1;
    case BorderMode::reflect: {
      // ... c b a | a b c | c b a ... (period 2n)
      int m = i % (2 * n);
      if (m < 0) m += 2 * n;
      return m < n ? m : 2 * n - 1 - m;
    }
    case BorderMode::zero:
      return -1;
  }
  return -1;
}

}  // namespace

ImagePlane::ImagePlane(int height, int width, double fill)
    : height_(height), width_(width) {
  check_dims(height, width);
  data_.assign(static_cast<std::size_t>(height) * width, fill);
}

ImagePlane::ImagePlane(int height, int width, std::vector<double> samples)
    : height_(height), width_(width), data_(std::move(samples)) {
  check_dims(height, width);
  if (data_.size() != static_cast<std::size_t>(height) * width)
    throw InvalidInput("sample count " + std::to_string(data_.size()) + " does not match " +
                       std::to_string(height) + "x" + std::to_string(width));
  for (double v : data_)
    if (!std::isfinite(v)) throw InvalidInput("image samples must be finite");
}

double ImagePlane::at_border(int row, int col, BorderMode border) const {
  int r = resolve_index(row, height_, border);
  int c = resolve_index(col, width_, border);
  if (r < 0 || c < 0) return 0.0;
  return at(r, c);
}

ImageTensor::ImageTensor(ImagePlane gray) {
  if (gray.empty()) throw InvalidInput("tensor plane must be non-empty");
  planes_.push_back(std::move(gray));
}

ImageTensor::ImageTensor(ImagePlane r, ImagePlane g, ImagePlane b) {
  if (r.empty()) throw InvalidInput("tensor plane must be non-empty");
  if (g.height() != r.height() || g.width() != r.width() || b.height() != r.height() ||
      b.width() != r.width())
    throw InvalidInput("tensor planes must share dimensions");
  planes_.push_back(std::move(r));
  planes_.push_back(std::move(g));
  planes_.push_back(std::move(b));
}

Kernel2D::Kernel2D(int height, int width, std::vector<double> weights)
    : height_(height), width_(width), weights_(std::move(weights)) {
  if (height <= 0 || width <= 0 || height % 2 == 0 || width % 2 == 0)
    throw InvalidParameter("kernel dimensions must be odd and positive, got " +
                           std::to_string(height) + "x" + std::to_string(width));
  if (weights_.size() != static_cast<std::size_t>(height) * width)
    throw InvalidParameter("kernel weight count does not match dimensions");
  for (double w : weights_)
    if (!std::isfinite(w)) throw InvalidParameter("kernel weights must be finite");
}

ImagePlane to_grayscale(const ImageTensor& img) {
  if (img.channels() == 1) return img.plane(0);
  if (img.channels() != 3) throw InvalidInput("expected 1 or 3 channels");
  const ImagePlane& r = img.plane(0);
  const ImagePlane& g = img.plane(1);
  const ImagePlane& b = img.plane(2);
  ImagePlane out(r.height(), r.width());
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = 0.299 * r.data()[i] + 0.587 * g.data()[i] + 0.114 * b.data()[i];
  return out;
}

Kernel2D gaussian_window(int size, double sigma) {
  if (size <= 0 || size % 2 == 0) throw InvalidParameter("window size must be odd and positive");
  if (!(sigma > 0.0)) throw InvalidParameter("window sigma must be positive");
  int half = size / 2;
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      double dy = i - half, dx = j - half;
      double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      w[static_cast<std::size_t>(i) * size + j] = v;
      sum += v;
    }
  }
  for (double& v : w) v /= sum;
  return Kernel2D(size, size, std::move(w));
}

ImagePlane convolve_same(const ImagePlane& p, const Kernel2D& k, BorderMode border) {
  if (p.empty()) throw InvalidInput("convolve_same: empty image");
  int md = std::min(p.height(), p.width());
  if (k.height() > 2 * md || k.width() > 2 * md)
    throw InvalidParameter("kernel " + std::to_string(k.height()) + "x" + std::to_string(k.width()) +
                           " too large for image " + std::to_string(p.height()) + "x" +
                           std::to_string(p.width()));
  int hh = k.height() / 2, hw = k.width() / 2;
  ImagePlane out(p.height(), p.width());
  for (int i = 0; i < p.height(); ++i) {
    for (int j = 0; j < p.width(); ++j) {
      double acc = 0.0;
      // true convolution: kernel index runs opposite to the image offset
      for (int ki = 0; ki < k.height(); ++ki)
        for (int kj = 0; kj < k.width(); ++kj)
          acc += k.at(ki, kj) * p.at_border(i - (ki - hh), j - (kj - hw), border);
      out.at(i, j) = acc;
    }
  }
  return out;
}

ImagePlane downsample2(const ImagePlane& p) {
  if (p.empty()) throw InvalidInput("downsample2: empty image");
  int oh = p.height() / 2, ow = p.width() / 2;
  if (oh < 1 || ow < 1) throw InvalidInput("downsample2: image too small to halve");
  ImagePlane out(oh, ow);
  for (int i = 0; i < oh; ++i)
    for (int j = 0; j < ow; ++j)
      out.at(i, j) =
          0.25 * (p.at(2 * i, 2 * j) + p.at(2 * i, 2 * j + 1) + p.at(2 * i + 1, 2 * j) +
                  p.at(2 * i + 1, 2 * j + 1));
  return out;
}

ImagePlane resize_bilinear(const ImagePlane& p, int out_height, int out_width) {
  if (p.empty()) throw InvalidInput("resize_bilinear: empty image");
  check_dims(out_height, out_width);
  ImagePlane out(out_height, out_width);
  double sy = static_cast<double>(p.height()) / out_height;
  double sx = static_cast<double>(p.width()) / out_width;
  for (int i = 0; i < out_height; ++i) {
    double fy = (i + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(p.height() - 1));
    int y0 = static_cast<int>(fy);
    int y1 = std::min(y0 + 1, p.height() - 1);
    double wy = fy - y0;
    for (int j = 0; j < out_width; ++j) {
      double fx = (j + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(p.width() - 1));
      int x0 = static_cast<int>(fx);
      int x1 = std::min(x0 + 1, p.width() - 1);
      double wx = fx - x0;
      out.at(i, j) = (1.0 - wy) * ((1.0 - wx) * p.at(y0, x0) + wx * p.at(y0, x1)) +
                     wy * ((1.0 - wx) * p.at(y1, x0) + wx * p.at(y1, x1));
    }
  }
  return out;
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

ImagePlane clamp01(const ImagePlane& p) {
  ImagePlane out = p;
  for (double& v : out.data()) v = clamp01(v);
  return out;
}

double plane_mean(const ImagePlane& p) {
  if (p.empty()) throw InvalidInput("plane_mean: empty image");
  double s = 0.0;
  for (double v : p.data()) s += v;
  return s / static_cast<double>(p.size());
}

}  // namespace iqa
