#pragma once

#include <complex>
#include <vector>

#include "iqa/image.hpp"

namespace iqa {

// Complex 2-D spectrum in standard DFT order (DC at bin 0,0), row major.
struct Spectrum {
  int height = 0;
  int width = 0;
  std::vector<std::complex<double>> bins;

  std::complex<double>& at(int row, int col) {
    return bins[static_cast<std::size_t>(row) * width + col];
  }
  std::complex<double> at(int row, int col) const {
    return bins[static_cast<std::size_t>(row) * width + col];
  }
};

// Unnormalized forward DFT: the DC bin of a constant plane c is c * N.
Spectrum fft2(const ImagePlane& p);

// Inverse DFT scaled by 1/N; returns the real part.
ImagePlane ifft2(const Spectrum& s);

// Inverse DFT scaled by 1/N, full complex output (for quadrature filters).
Spectrum ifft2_complex(const Spectrum& s);

}  // namespace iqa
