#pragma once

#include <cstdint>
#include <string>

#include "iqa/image.hpp"

namespace iqa {

// --- seeded test-image generators (all values in [0, 1]) ---

// 1/f spectral-slope noise, normalized to mean 0.5 / stddev 0.15 and clamped.
// Mimics natural-scene second-order statistics.
ImagePlane pink_noise(int height, int width, std::uint64_t seed);

// i.i.d. uniform [0, 1) samples.
ImagePlane uniform_noise(int height, int width, std::uint64_t seed);

// i.i.d. normal samples, mean 0.5, stddev `sigma`, clamped to [0, 1].
ImagePlane gaussian_noise(int height, int width, std::uint64_t seed, double sigma = 0.15);

// Horizontal ramp: value = col / (width - 1) (zeros when width == 1).
ImagePlane ramp(int height, int width);

// cell x cell checkerboard of 0 / 1 squares.
ImagePlane checkerboard(int height, int width, int cell);

// Oriented sinusoidal grating mixed with a little pink noise; `seed` drives
// the noise, `cycles` the dominant frequency.
ImagePlane grating_texture(int height, int width, std::uint64_t seed, double cycles = 8.0,
                           double angle = 0.6);

// Three decorrelated pink-noise planes as an RGB tensor.
ImageTensor pink_noise_rgb(int height, int width, std::uint64_t seed);

// --- synthetic distortions ---

enum class DistortKind {
  agn,              // additive white Gaussian noise, stddev = level
  gaussian_blur,    // Gaussian kernel, sigma = level
  block_jpeg_like,  // 8x8 DCT quantization, step = level
  mean_shift,       // add the constant `level`
};

DistortKind distort_kind_from_name(const std::string& name);
std::string distort_kind_name(DistortKind kind);

// Applies one distortion at the given positive level. The seed only
// influences agn; outputs are clamped to [0, 1] and fully deterministic
// for a fixed (input, kind, level, seed).
ImageTensor synth_distort(const ImageTensor& img, DistortKind kind, double level,
                          std::uint64_t seed);
ImagePlane synth_distort(const ImagePlane& p, DistortKind kind, double level, std::uint64_t seed);

}  // namespace iqa
