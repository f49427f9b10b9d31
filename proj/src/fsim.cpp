#include "iqa/fsim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "iqa/errors.hpp"
#include "iqa/fft.hpp"

namespace iqa {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_bank(const LogGaborBank& bank) {
  if (bank.scales < 1) throw InvalidParameter("log-Gabor bank: scales must be >= 1");
  if (bank.orientations < 1) throw InvalidParameter("log-Gabor bank: orientations must be >= 1");
  if (!(bank.min_wavelength >= 2.0))
    throw InvalidParameter("log-Gabor bank: min wavelength must be >= 2 pixels");
  if (!(bank.scaling_factor > 1.0))
    throw InvalidParameter("log-Gabor bank: scaling factor must exceed 1");
  if (!(bank.sigma_on_f > 0.0 && bank.sigma_on_f < 1.0))
    throw InvalidParameter("log-Gabor bank: sigma-on-f must lie in (0, 1)");
  if (!(bank.angular_spread > 0.0))
    throw InvalidParameter("log-Gabor bank: angular spread must be positive");
}

double median_of(std::vector<double> v) {
  std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  double hi = v[n / 2];
  if (n % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.begin() + n / 2);
  return 0.5 * (v[n / 2 - 1] + hi);
}

// Radial (per scale) and angular (per orientation) factors of the filter
// bank on an h x w frequency grid; a full filter is their product.
struct BankGrids {
  std::vector<std::vector<double>> radial;
  std::vector<std::vector<double>> angular;
};

BankGrids make_bank_grids(const LogGaborBank& bank, int h, int w) {
  const std::size_t n = static_cast<std::size_t>(h) * w;
  std::vector<double> radius(n), theta(n);
  for (int u = 0; u < h; ++u) {
    double fy = (u <= h / 2) ? static_cast<double>(u) / h : static_cast<double>(u - h) / h;
    for (int v = 0; v < w; ++v) {
      double fx = (v <= w / 2) ? static_cast<double>(v) / w : static_cast<double>(v - w) / w;
      std::size_t i = static_cast<std::size_t>(u) * w + v;
      radius[i] = std::sqrt(fx * fx + fy * fy);
      theta[i] = std::atan2(-fy, fx);
    }
  }
  radius[0] = 1.0;  // dummy so log() at DC is safe; DC is zeroed below

  BankGrids g;
  g.radial.assign(bank.scales, std::vector<double>(n));
  double log_sigma = std::log(bank.sigma_on_f);
  for (std::size_t i = 0; i < n; ++i) {
    // Butterworth low-pass trims the spectrum corners
    double lowpass = 1.0 / (1.0 + std::pow(radius[i] / 0.45, 30.0));
    for (int s = 0; s < bank.scales; ++s) {
      double f0 = 1.0 / (bank.min_wavelength * std::pow(bank.scaling_factor, s));
      double lr = std::log(radius[i] / f0);
      g.radial[s][i] = std::exp(-(lr * lr) / (2.0 * log_sigma * log_sigma)) * lowpass;
    }
  }
  for (int s = 0; s < bank.scales; ++s) g.radial[s][0] = 0.0;

  g.angular.assign(bank.orientations, std::vector<double>(n));
  for (int o = 0; o < bank.orientations; ++o) {
    double angle = o * kPi / bank.orientations;
    double ca = std::cos(angle), sa = std::sin(angle);
    for (std::size_t i = 0; i < n; ++i) {
      // angular distance wrapped by atan2 keeps the filter one-sided
      double ds = std::sin(theta[i]) * ca - std::cos(theta[i]) * sa;
      double dc = std::cos(theta[i]) * ca + std::sin(theta[i]) * sa;
      double dt = std::abs(std::atan2(ds, dc));
      g.angular[o][i] = std::exp(-(dt * dt) / (2.0 * bank.angular_spread * bank.angular_spread));
    }
  }
  return g;
}

}  // namespace

std::vector<ImagePlane> log_gabor_bank_filters(const LogGaborBank& bank, int height, int width) {
  check_bank(bank);
  if (height <= 0 || width <= 0) throw InvalidInput("log_gabor_bank_filters: empty grid");
  BankGrids g = make_bank_grids(bank, height, width);
  std::vector<ImagePlane> filters;
  filters.reserve(static_cast<std::size_t>(bank.scales) * bank.orientations);
  for (int s = 0; s < bank.scales; ++s) {
    for (int o = 0; o < bank.orientations; ++o) {
      ImagePlane f(height, width);
      for (std::size_t i = 0; i < f.size(); ++i) f.data()[i] = g.radial[s][i] * g.angular[o][i];
      filters.push_back(std::move(f));
    }
  }
  return filters;
}

ImagePlane phase_congruency(const ImagePlane& p, const LogGaborBank& bank,
                            double noise_threshold_k) {
  check_bank(bank);
  if (p.empty()) throw InvalidInput("phase_congruency: empty image");
  if (p.height() < 16 || p.width() < 16)
    throw InvalidInput("phase_congruency: image must be at least 16x16");
  if (noise_threshold_k < 0.0)
    throw InvalidParameter("phase_congruency: noise threshold k must be >= 0");

  const int h = p.height(), w = p.width();
  const std::size_t n = p.size();
  Spectrum spec = fft2(p);
  BankGrids grids = make_bank_grids(bank, h, w);

  std::vector<double> energy_all(n, 0.0), an_all(n, 0.0);
  std::vector<double> sum_e(n), sum_o(n), sum_an(n);
  std::vector<Spectrum> eo(bank.scales);

  for (int o = 0; o < bank.orientations; ++o) {
    const std::vector<double>& spread = grids.angular[o];
    std::fill(sum_e.begin(), sum_e.end(), 0.0);
    std::fill(sum_o.begin(), sum_o.end(), 0.0);
    std::fill(sum_an.begin(), sum_an.end(), 0.0);
    double tau = 0.0;
    for (int s = 0; s < bank.scales; ++s) {
      Spectrum filtered;
      filtered.height = h;
      filtered.width = w;
      filtered.bins.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        filtered.bins[i] = spec.bins[i] * (grids.radial[s][i] * spread[i]);
      eo[s] = ifft2_complex(filtered);
      std::vector<double> an(n);
      for (std::size_t i = 0; i < n; ++i) {
        an[i] = std::abs(eo[s].bins[i]);
        sum_an[i] += an[i];
        sum_e[i] += eo[s].bins[i].real();
        sum_o[i] += eo[s].bins[i].imag();
      }
      // smallest scale carries the noise estimate: median of a Rayleigh
      // amplitude distribution over sqrt(ln 4) is its sigma
      if (s == 0) tau = median_of(an) / std::sqrt(std::log(4.0));
    }

    std::vector<double> energy(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double x_energy = std::sqrt(sum_e[i] * sum_e[i] + sum_o[i] * sum_o[i]) + 1e-4;
      double me = sum_e[i] / x_energy, mo = sum_o[i] / x_energy;
      for (int s = 0; s < bank.scales; ++s) {
        double e = eo[s].bins[i].real(), od = eo[s].bins[i].imag();
        energy[i] += e * me + od * mo - std::abs(e * mo - od * me);
      }
    }

    // total noise amplitude over all scales assuming geometric falloff
    double inv_m = 1.0 / bank.scaling_factor;
    double total_tau = tau * (1.0 - std::pow(inv_m, bank.scales)) / (1.0 - inv_m);
    double noise_mean = total_tau * std::sqrt(kPi / 2.0);
    double noise_sigma = total_tau * std::sqrt((4.0 - kPi) / 2.0);
    double t = noise_mean + noise_threshold_k * noise_sigma;
    for (std::size_t i = 0; i < n; ++i) {
      energy_all[i] += std::max(energy[i] - t, 0.0);
      an_all[i] += sum_an[i];
    }
  }

  ImagePlane pc(h, w);
  for (std::size_t i = 0; i < n; ++i) pc.data()[i] = energy_all[i] / (an_all[i] + 1e-12);
  return pc;
}

ImagePlane gradient_magnitude(const ImagePlane& p, GradientOperator op) {
  if (p.empty()) throw InvalidInput("gradient_magnitude: empty image");
  if (p.height() < 3 || p.width() < 3)
    throw InvalidInput("gradient_magnitude: image must be at least 3x3");
  double a = 0.0, b = 0.0;  // stencil column [a b a] / norm, with the scharr row shape [a b a]
  switch (op) {
    case GradientOperator::scharr: a = 3.0 / 16.0; b = 10.0 / 16.0; break;
    case GradientOperator::sobel: a = 1.0 / 4.0; b = 2.0 / 4.0; break;
    case GradientOperator::prewitt: a = 1.0 / 3.0; b = 1.0 / 3.0; break;
  }
  ImagePlane out(p.height(), p.width());
  for (int i = 0; i < p.height(); ++i) {
    for (int j = 0; j < p.width(); ++j) {
      auto px = [&](int di, int dj) { return p.at_border(i + di, j + dj, BorderMode::replicate); };
      double gx = a * (px(-1, -1) - px(-1, 1)) + b * (px(0, -1) - px(0, 1)) +
                  a * (px(1, -1) - px(1, 1));
      double gy = a * (px(-1, -1) - px(1, -1)) + b * (px(-1, 0) - px(1, 0)) +
                  a * (px(-1, 1) - px(1, 1));
      out.at(i, j) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

FsimResult fsim(const ImageTensor& x, const ImageTensor& y, const FsimConfig& cfg) {
  if (x.channels() == 0 || y.channels() == 0) throw InvalidInput("fsim: empty image");
  if (x.channels() != y.channels())
    throw InvalidInput("fsim: channel count mismatch (" + std::to_string(x.channels()) + " vs " +
                       std::to_string(y.channels()) + ")");
  if (x.height() != y.height() || x.width() != y.width())
    throw InvalidInput("fsim: dimension mismatch");
  if (x.height() < 16 || x.width() < 16)
    throw InvalidInput("fsim: image must be at least 16x16 for the filter bank");
  if (!(cfg.t1 > 0.0) || !(cfg.t2 > 0.0) || !(cfg.t_chroma > 0.0))
    throw InvalidParameter("fsim: stabilizers must be positive");
  check_bank(cfg.bank);

  ImagePlane lx = to_grayscale(x);
  ImagePlane ly = to_grayscale(y);

  FsimResult r;
  r.pc_ref = phase_congruency(lx, cfg.bank, cfg.noise_threshold_k);
  r.pc_test = phase_congruency(ly, cfg.bank, cfg.noise_threshold_k);
  r.gm_ref = gradient_magnitude(lx, cfg.gradient_operator);
  r.gm_test = gradient_magnitude(ly, cfg.gradient_operator);
  r.chromatic = x.channels() == 3;

  const std::size_t n = lx.size();
  r.similarity_map = ImagePlane(lx.height(), lx.width());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p1 = r.pc_ref.data()[i], p2 = r.pc_test.data()[i];
    double g1 = r.gm_ref.data()[i], g2 = r.gm_test.data()[i];
    double s_pc = (2.0 * p1 * p2 + cfg.t1) / (p1 * p1 + p2 * p2 + cfg.t1);
    double s_g = (2.0 * g1 * g2 + cfg.t2) / (g1 * g1 + g2 * g2 + cfg.t2);
    double s = s_pc * s_g;
    if (r.chromatic) {
      // NTSC chroma: I = 0.596R - 0.274G - 0.322B, Q = 0.211R - 0.523G + 0.312B
      double i1 = 0.596 * x.plane(0).data()[i] - 0.274 * x.plane(1).data()[i] - 0.322 * x.plane(2).data()[i];
      double i2 = 0.596 * y.plane(0).data()[i] - 0.274 * y.plane(1).data()[i] - 0.322 * y.plane(2).data()[i];
      double q1 = 0.211 * x.plane(0).data()[i] - 0.523 * x.plane(1).data()[i] + 0.312 * x.plane(2).data()[i];
      double q2 = 0.211 * y.plane(0).data()[i] - 0.523 * y.plane(1).data()[i] + 0.312 * y.plane(2).data()[i];
      double s_i = (2.0 * i1 * i2 + cfg.t_chroma) / (i1 * i1 + i2 * i2 + cfg.t_chroma);
      double s_q = (2.0 * q1 * q2 + cfg.t_chroma) / (q1 * q1 + q2 * q2 + cfg.t_chroma);
      // the chroma product can dip below zero on opposing hues; clamp
      // before the fractional power
      s *= std::pow(std::max(s_i * s_q, 0.0), cfg.chroma_exponent);
    }
    r.similarity_map.data()[i] = s;
    double pcm = std::max(p1, p2);
    num += s * pcm;
    den += pcm;
  }
  // both maps vanish only for structureless images; fall back to the plain mean
  r.score = den > 0.0 ? num / den : plane_mean(r.similarity_map);
  return r;
}

}  // namespace iqa
