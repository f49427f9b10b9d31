#pragma once

#include <functional>
#include <vector>

#include "iqa/image.hpp"
#include "iqa/niqe.hpp"
#include "iqa/ssim.hpp"

namespace iqa {

struct PenaltyConfig {
  double lambda = 10.0;  // penalty weight
  double gamma = 1.0;    // Lipschitz target
};

// One batch entry: critic outputs on a real/synthesized pair, the critic
// gradient at the synthesized point, and the pair itself.
struct CriticSample {
  double d_x = 0.0;
  double d_xhat = 0.0;
  ImagePlane grad_xhat;
  ImagePlane x;
  ImagePlane xhat;
};

struct LbpWeights {
  double lambda1 = 1.0;  // naturalness-regularizer weight
  double lambda2 = 1.0;  // structural-penalty weight
  double lambda3 = 1.0;  // unit-penalty weight
};

// Which dual norm measures the critic differential. Only the lp family has
// a closed form here; the other two variants take an externally computed
// scalar distance as the norm value.
struct DualNormSpec {
  enum class Variant { lp, ssim_db, niqe_mvg };
  Variant variant = Variant::lp;
  double p = 2.0;  // primal exponent, >= 1; the dual exponent is q = p/(p-1)

  static DualNormSpec lp(double p) { return {Variant::lp, p}; }
};

// Normalized dual L^q norm of a gradient field (counting measure: the mean
// of |g|^q, then the 1/q root), so constant fields score their magnitude.
// p = 1 dually selects max-abs.
double dual_norm(const ImagePlane& grad, const DualNormSpec& spec);

// lambda * mean((norm / gamma - 1)^2) over the supplied dual norms.
double banach_gp(const std::vector<double>& dual_norm_values, const PenaltyConfig& cfg);

// mean((|d_x - d_xhat| / d_b(x, xhat) - 1)^2), with d_b the global
// structural distance of each pair. Near-identical pairs (d_b < 1e-8) are
// rejected, naming the sample index.
double ssim_gp(const std::vector<CriticSample>& samples, const SsimConfig& cfg = {});

// mean distance from each gradient-statistics model to the pristine model.
double niqe_regularizer(const std::vector<MvgModel>& grad_models, const MvgModel& pristine);

// mean((norm - 1)^2): the two-sided unit-Lipschitz penalty.
double one_gp(const std::vector<double>& grad_norms);

// lambda1 * niqe_term + lambda2 * ssim_term + lambda3 * one_gp_term.
double l_bp(double niqe_term, double ssim_term, double one_gp_term, const LbpWeights& w);

// ln(d_x) + ln(1 - d_g_xhat - s) + l_bp, guarded against non-positive
// log arguments.
double gan_objective(double d_x, double d_g_xhat, double s, double l_bp);

// Central-difference gradient of a scalar functional, one pixel at a time.
ImagePlane finite_diff_grad(const std::function<double(const ImagePlane&)>& f,
                            const ImagePlane& p, double h);

}  // namespace iqa
