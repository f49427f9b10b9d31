#include "iqa/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "iqa/errors.hpp"

namespace iqa {

namespace {

// FFTW's planner is not thread safe; executing distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// in/out may alias. sign is FFTW_FORWARD or FFTW_BACKWARD.
void run_dft(int height, int width, const std::complex<double>* in, std::complex<double>* out,
             int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps planning cheap and does not touch the arrays.
    plan = fftw_plan_dft_2d(height, width,
                            reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                            reinterpret_cast<fftw_complex*>(out), sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericError("FFT planning failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

Spectrum fft2(const ImagePlane& p) {
  if (p.empty()) throw InvalidInput("fft2: empty image");
  Spectrum s;
  s.height = p.height();
  s.width = p.width();
  s.bins.resize(p.size());
  std::vector<std::complex<double>> in(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) in[i] = p.data()[i];
  run_dft(s.height, s.width, in.data(), s.bins.data(), FFTW_FORWARD);
  return s;
}

Spectrum ifft2_complex(const Spectrum& s) {
  if (s.height <= 0 || s.width <= 0 ||
      s.bins.size() != static_cast<std::size_t>(s.height) * s.width)
    throw InvalidInput("ifft2: malformed spectrum");
  Spectrum out;
  out.height = s.height;
  out.width = s.width;
  out.bins.resize(s.bins.size());
  run_dft(s.height, s.width, s.bins.data(), out.bins.data(), FFTW_BACKWARD);
  double norm = 1.0 / static_cast<double>(s.bins.size());
  for (auto& v : out.bins) v *= norm;
  return out;
}

ImagePlane ifft2(const Spectrum& s) {
  Spectrum c = ifft2_complex(s);
  ImagePlane out(c.height, c.width);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = c.bins[i].real();
  return out;
}

}  // namespace iqa
