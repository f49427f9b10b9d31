#include "iqa/losses.hpp"

#include <cmath>
#include <string>

#include "iqa/errors.hpp"

namespace iqa {

double dual_norm(const ImagePlane& grad, const DualNormSpec& spec) {
  if (grad.empty()) throw InvalidInput("dual_norm: empty gradient field");
  if (spec.variant != DualNormSpec::Variant::lp)
    throw InvalidParameter(
        "dual_norm: only the lp family has a closed form; ssim_db and niqe_mvg "
        "norms are supplied as precomputed scalars");
  if (!(spec.p >= 1.0) || !std::isfinite(spec.p))
    throw InvalidParameter("dual_norm: lp exponent must be a finite real >= 1");
  for (double v : grad.data())
    if (!std::isfinite(v)) throw InvalidInput("dual_norm: gradient field must be finite");

  if (spec.p == 1.0) {
    double m = 0.0;
    for (double v : grad.data()) m = std::max(m, std::abs(v));
    return m;
  }
  double q = spec.p / (spec.p - 1.0);
  double acc = 0.0;
  for (double v : grad.data()) acc += std::pow(std::abs(v), q);
  acc /= static_cast<double>(grad.size());
  return std::pow(acc, 1.0 / q);
}

double banach_gp(const std::vector<double>& dual_norm_values, const PenaltyConfig& cfg) {
  if (dual_norm_values.empty()) throw InvalidInput("banach_gp: empty norm sequence");
  if (!(cfg.gamma > 0.0)) throw InvalidParameter("banach_gp: gamma must be positive");
  if (cfg.lambda < 0.0) throw InvalidParameter("banach_gp: lambda must be nonnegative");
  double acc = 0.0;
  for (double n : dual_norm_values) {
    if (n < 0.0 || !std::isfinite(n)) throw InvalidInput("banach_gp: norms must be finite and >= 0");
    double d = n / cfg.gamma - 1.0;
    acc += d * d;
  }
  return cfg.lambda * acc / static_cast<double>(dual_norm_values.size());
}

double ssim_gp(const std::vector<CriticSample>& samples, const SsimConfig& cfg) {
  if (samples.empty()) throw InvalidInput("ssim_gp: empty sample batch");
  double acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const CriticSample& s = samples[i];
    double db = ssim_distance(s.x, s.xhat, cfg).global;
    if (db < 1e-8)
      throw InvalidInput("ssim_gp: sample " + std::to_string(i) +
                         " is a degenerate pair (structural distance below 1e-8)");
    double d = std::abs(s.d_x - s.d_xhat) / db - 1.0;
    acc += d * d;
  }
  return acc / static_cast<double>(samples.size());
}

double niqe_regularizer(const std::vector<MvgModel>& grad_models, const MvgModel& pristine) {
  if (grad_models.empty()) throw InvalidInput("niqe_regularizer: empty model sequence");
  double acc = 0.0;
  for (const MvgModel& m : grad_models) acc += niqe_distance(m, pristine);
  return acc / static_cast<double>(grad_models.size());
}

double one_gp(const std::vector<double>& grad_norms) {
  if (grad_norms.empty()) throw InvalidInput("one_gp: empty norm sequence");
  double acc = 0.0;
  for (double n : grad_norms) {
    if (n < 0.0 || !std::isfinite(n)) throw InvalidInput("one_gp: norms must be finite and >= 0");
    double d = n - 1.0;
    acc += d * d;
  }
  return acc / static_cast<double>(grad_norms.size());
}

double l_bp(double niqe_term, double ssim_term, double one_gp_term, const LbpWeights& w) {
  if (!std::isfinite(niqe_term) || !std::isfinite(ssim_term) || !std::isfinite(one_gp_term))
    throw InvalidInput("l_bp: terms must be finite");
  if (w.lambda1 < 0.0 || w.lambda2 < 0.0 || w.lambda3 < 0.0)
    throw InvalidParameter("l_bp: weights must be nonnegative");
  return w.lambda1 * niqe_term + w.lambda2 * ssim_term + w.lambda3 * one_gp_term;
}

double gan_objective(double d_x, double d_g_xhat, double s, double l_bp) {
  if (!(d_x > 0.0 && d_x < 1.0))
    throw NumericError("gan_objective: d_x = " + std::to_string(d_x) + " outside (0,1)");
  if (!(d_g_xhat > 0.0 && d_g_xhat < 1.0))
    throw NumericError("gan_objective: d_g_xhat = " + std::to_string(d_g_xhat) + " outside (0,1)");
  double arg = 1.0 - d_g_xhat - s;
  if (!(arg > 0.0))
    throw NumericError("gan_objective: log argument 1 - d_g_xhat - s = " + std::to_string(arg) +
                       " is not positive");
  if (!std::isfinite(l_bp)) throw NumericError("gan_objective: l_bp must be finite");
  return std::log(d_x) + std::log(arg) + l_bp;
}

ImagePlane finite_diff_grad(const std::function<double(const ImagePlane&)>& f,
                            const ImagePlane& p, double h) {
  if (!(h > 0.0)) throw InvalidParameter("finite_diff_grad: step must be positive");
  if (p.empty()) throw InvalidInput("finite_diff_grad: empty image");
  ImagePlane grad(p.height(), p.width());
  ImagePlane probe = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double v = p.data()[i];
    probe.data()[i] = v + h;
    double fp = f(probe);
    probe.data()[i] = v - h;
    double fm = f(probe);
    probe.data()[i] = v;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NumericError("finite_diff_grad: functional returned a non-finite value");
    grad.data()[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

}  // namespace iqa
