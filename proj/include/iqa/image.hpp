#pragma once

#include <cstddef>
#include <vector>

namespace iqa {

// How pixels outside the image are read during filtering.
enum class BorderMode {
  replicate,  // clamp to the nearest edge pixel
  reflect,    // mirror about the edge (edge pixel repeated)
  zero,       // treat the outside as 0
};

// Single channel of double samples, row major.
class ImagePlane {
 public:
  ImagePlane() = default;
  ImagePlane(int height, int width, double fill = 0.0);
  // Takes ownership of samples; throws InvalidInput on size mismatch or
  // non-finite values.
  ImagePlane(int height, int width, std::vector<double> samples);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int row, int col) { return data_[static_cast<std::size_t>(row) * width_ + col]; }
  double at(int row, int col) const { return data_[static_cast<std::size_t>(row) * width_ + col]; }

  // Reads at(row, col) with out-of-range indices resolved by `border`.
  double at_border(int row, int col, BorderMode border) const;

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

// 1 (grayscale) or 3 (RGB) planes of identical size.
class ImageTensor {
 public:
  ImageTensor() = default;
  explicit ImageTensor(ImagePlane gray);
  ImageTensor(ImagePlane r, ImagePlane g, ImagePlane b);

  int channels() const { return static_cast<int>(planes_.size()); }
  int height() const { return planes_.empty() ? 0 : planes_[0].height(); }
  int width() const { return planes_.empty() ? 0 : planes_[0].width(); }

  ImagePlane& plane(int c) { return planes_[c]; }
  const ImagePlane& plane(int c) const { return planes_[c]; }

 private:
  std::vector<ImagePlane> planes_;
};

// Odd-sized filter kernel, row major.
class Kernel2D {
 public:
  Kernel2D() = default;
  // Throws InvalidParameter unless height and width are odd and positive
  // and weights has height*width finite entries.
  Kernel2D(int height, int width, std::vector<double> weights);

  int height() const { return height_; }
  int width() const { return width_; }
  double at(int row, int col) const { return weights_[static_cast<std::size_t>(row) * width_ + col]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> weights_;
};

// Rec.601 luma: 0.299 R + 0.587 G + 0.114 B. Grayscale input passes through.
ImagePlane to_grayscale(const ImageTensor& img);

// size x size Gaussian, normalized to sum 1.
Kernel2D gaussian_window(int size, double sigma);

// True 2-D convolution (kernel flipped), output size equals input size.
ImagePlane convolve_same(const ImagePlane& p, const Kernel2D& k,
                         BorderMode border = BorderMode::replicate);

// 2x2 mean pooling; trailing odd row/column dropped. ceil(dim/2) >= 1 required.
ImagePlane downsample2(const ImagePlane& p);

// Bilinear resample to out_height x out_width (pixel-center alignment).
ImagePlane resize_bilinear(const ImagePlane& p, int out_height, int out_width);

double clamp01(double v);

// Elementwise clamp of a plane into [0, 1].
ImagePlane clamp01(const ImagePlane& p);

double plane_mean(const ImagePlane& p);

}  // namespace iqa
