#include "iqa/niqe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "iqa/errors.hpp"

namespace iqa {

namespace {

// shape grid shared by both estimators: gamma in [0.2, 10], step 0.001
struct ShapeGrid {
  std::vector<double> gamma;
  std::vector<double> ggd_ratio;   // Gamma(1/g) Gamma(3/g) / Gamma(2/g)^2
  std::vector<double> aggd_ratio;  // Gamma(2/g)^2 / (Gamma(1/g) Gamma(3/g))
};

const ShapeGrid& shape_grid() {
  static const ShapeGrid grid = [] {
    ShapeGrid g;
    for (int i = 0; i <= 9800; ++i) {
      double gam = 0.2 + 0.001 * i;
      double lg1 = std::lgamma(1.0 / gam);
      double lg2 = std::lgamma(2.0 / gam);
      double lg3 = std::lgamma(3.0 / gam);
      g.gamma.push_back(gam);
      g.ggd_ratio.push_back(std::exp(lg1 + lg3 - 2.0 * lg2));
      g.aggd_ratio.push_back(std::exp(2.0 * lg2 - lg1 - lg3));
    }
    return g;
  }();
  return grid;
}

double nearest_shape(const std::vector<double>& ratios, double target) {
  const ShapeGrid& g = shape_grid();
  std::size_t best = 0;
  double best_err = std::abs(ratios[0] - target);
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    double err = std::abs(ratios[i] - target);
    if (err < best_err) {
      best_err = err;
      best = i;
    }
  }
  return g.gamma[best];
}

void check_niqe_cfg(const NiqeConfig& cfg) {
  if (cfg.scales < 1) throw InvalidParameter("niqe: scales must be >= 1");
  if (!(cfg.sharpness_fraction > 0.0 && cfg.sharpness_fraction <= 1.0))
    throw InvalidParameter("niqe: sharpness fraction must lie in (0, 1]");
  if (!(cfg.mscn_stabilizer > 0.0)) throw InvalidParameter("niqe: stabilizer must be positive");
}

// Patch geometry is only constrained where patches are actually cut.
void check_patch_cfg(const NiqeConfig& cfg) {
  int divisor = 1 << (cfg.scales - 1);
  if (cfg.patch_size < 16 * divisor || cfg.patch_size % divisor != 0)
    throw InvalidParameter("niqe: patch size must be a multiple of " + std::to_string(divisor) +
                           " and at least " + std::to_string(16 * divisor));
}

// 18 features of one scale from a rectangular block of an MSCN plane.
void block_features(const ImagePlane& m, int r0, int c0, int bh, int bw,
                    std::vector<double>& out) {
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(bh) * bw);
  for (int i = 0; i < bh; ++i)
    for (int j = 0; j < bw; ++j) samples.push_back(m.at(r0 + i, c0 + j));
  GgdParams ggd = fit_ggd(samples);
  out.push_back(ggd.shape);
  out.push_back(ggd.scale);

  // neighbor products, non-wrapping: H, V, main diagonal, anti-diagonal
  static const int kShift[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  for (const auto& sh : kShift) {
    std::vector<double> prod;
    prod.reserve(samples.size());
    for (int i = 0; i < bh; ++i) {
      for (int j = 0; j < bw; ++j) {
        int i2 = i + sh[0], j2 = j + sh[1];
        if (i2 < 0 || i2 >= bh || j2 < 0 || j2 >= bw) continue;
        prod.push_back(m.at(r0 + i, c0 + j) * m.at(r0 + i2, c0 + j2));
      }
    }
    AggdParams aggd = fit_aggd(prod);
    out.push_back(aggd.shape);
    out.push_back(aggd.mean_offset);
    out.push_back(aggd.scale_left);
    out.push_back(aggd.scale_right);
  }
}

struct PatchSet {
  std::vector<std::vector<double>> features;  // row per patch, scan order
  std::vector<double> sharpness;              // mean local deviation per patch
};

// Patch indices surviving the sharpness filter: top sharpness_fraction by
// mean local deviation, ties broken by scan order, returned in scan order.
std::vector<std::size_t> select_sharp(const std::vector<double>& sharpness, double fraction) {
  std::vector<std::size_t> order(sharpness.size());
  std::iota(order.begin(), order.end(), 0);
  if (order.size() <= 1) return order;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sharpness[a] > sharpness[b]; });
  std::size_t keep =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(order.size())));
  keep = std::max<std::size_t>(1, std::min(keep, order.size()));
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

PatchSet collect_patch_features(const ImagePlane& p, const NiqeConfig& cfg) {
  check_niqe_cfg(cfg);
  check_patch_cfg(cfg);
  int np_y = p.height() / cfg.patch_size;
  int np_x = p.width() / cfg.patch_size;
  if (np_y < 1 || np_x < 1)
    throw EstimationError("niqe: image " + std::to_string(p.height()) + "x" +
                          std::to_string(p.width()) + " holds no " +
                          std::to_string(cfg.patch_size) + "-pixel patch");

  PatchSet set;
  set.features.assign(static_cast<std::size_t>(np_y) * np_x, {});
  set.sharpness.assign(set.features.size(), 0.0);

  ImagePlane plane = p;
  for (int s = 0; s < cfg.scales; ++s) {
    MscnField field = mscn_field(plane, cfg);
    int ps = cfg.patch_size >> s;
    for (int pi = 0; pi < np_y; ++pi) {
      for (int pj = 0; pj < np_x; ++pj) {
        std::size_t idx = static_cast<std::size_t>(pi) * np_x + pj;
        block_features(field.mscn, pi * ps, pj * ps, ps, ps, set.features[idx]);
        if (s == 0) {
          double acc = 0.0;
          for (int i = 0; i < ps; ++i)
            for (int j = 0; j < ps; ++j) acc += field.sigma.at(pi * ps + i, pj * ps + j);
          set.sharpness[idx] = acc / (static_cast<double>(ps) * ps);
        }
      }
    }
    if (s + 1 < cfg.scales) plane = downsample2(plane);
  }
  return set;
}

MvgModel model_from_rows(const std::vector<std::vector<double>>& rows, const NiqeConfig& cfg,
                         bool regularize) {
  const std::size_t n = rows.size();
  const std::size_t dim = rows[0].size();
  MvgModel m;
  m.scales = cfg.scales;
  m.patch_size = cfg.patch_size;
  m.mean.assign(dim, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < dim; ++j) m.mean[j] += r[j];
  for (double& v : m.mean) v /= static_cast<double>(n);

  m.covariance.assign(dim * dim, 0.0);
  if (n > 1) {
    for (const auto& r : rows)
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          m.covariance[i * dim + j] += (r[i] - m.mean[i]) * (r[j] - m.mean[j]);
    for (double& v : m.covariance) v /= static_cast<double>(n - 1);
  }
  if (regularize) {
    double trace = 0.0;
    for (std::size_t i = 0; i < dim; ++i) trace += m.covariance[i * dim + i];
    double lift = 1e-6 * trace / static_cast<double>(dim);
    for (std::size_t i = 0; i < dim; ++i) m.covariance[i * dim + i] += lift;
  }
  return m;
}

}  // namespace

MscnField mscn_field(const ImagePlane& p, const NiqeConfig& cfg) {
  check_niqe_cfg(cfg);
  if (p.empty()) throw InvalidInput("mscn: empty image");
  if (p.height() < cfg.window.height() || p.width() < cfg.window.width())
    throw InvalidInput("mscn: image smaller than the local-statistics window");

  ImagePlane sq(p.height(), p.width());
  for (std::size_t i = 0; i < p.size(); ++i) sq.data()[i] = p.data()[i] * p.data()[i];
  ImagePlane mu = convolve_same(p, cfg.window, BorderMode::replicate);
  ImagePlane m2 = convolve_same(sq, cfg.window, BorderMode::replicate);

  MscnField f;
  f.mscn = ImagePlane(p.height(), p.width());
  f.sigma = ImagePlane(p.height(), p.width());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double m = mu.data()[i];
    // variance can round below zero on constant regions
    double var = std::max(m2.data()[i] - m * m, 0.0);
    double sd = std::sqrt(var);
    f.sigma.data()[i] = sd;
    f.mscn.data()[i] = (p.data()[i] - m) / (sd + cfg.mscn_stabilizer);
  }
  return f;
}

ImagePlane mscn(const ImagePlane& p, const NiqeConfig& cfg) { return mscn_field(p, cfg).mscn; }

GgdParams fit_ggd(const std::vector<double>& samples) {
  if (samples.size() < 100) throw EstimationError("fit_ggd: need at least 100 samples");
  double m_abs = 0.0, m2 = 0.0;
  for (double x : samples) {
    m_abs += std::abs(x);
    m2 += x * x;
  }
  m_abs /= static_cast<double>(samples.size());
  m2 /= static_cast<double>(samples.size());
  if (m2 <= 0.0 || m_abs <= 0.0) throw EstimationError("fit_ggd: zero-variance samples");

  // rho = E[x^2] / E|x|^2 identifies the shape through the Gamma ratio
  double rho = m2 / (m_abs * m_abs);
  GgdParams p;
  p.shape = nearest_shape(shape_grid().ggd_ratio, rho);
  double lg1 = std::lgamma(1.0 / p.shape);
  double lg3 = std::lgamma(3.0 / p.shape);
  p.scale = std::sqrt(m2 * std::exp(lg1 - lg3));
  return p;
}

AggdParams fit_aggd(const std::vector<double>& samples) {
  if (samples.size() < 100) throw EstimationError("fit_aggd: need at least 100 samples");
  double left_sq = 0.0, right_sq = 0.0, m_abs = 0.0, m2 = 0.0;
  std::size_t n_left = 0, n_right = 0;
  for (double x : samples) {
    if (x < 0.0) {
      left_sq += x * x;
      ++n_left;
    } else if (x > 0.0) {
      right_sq += x * x;
      ++n_right;
    }
    m_abs += std::abs(x);
    m2 += x * x;
  }
  if (n_left == 0 || n_right == 0)
    throw EstimationError("fit_aggd: samples must include both signs");
  double left_sd = std::sqrt(left_sq / static_cast<double>(n_left));
  double right_sd = std::sqrt(right_sq / static_cast<double>(n_right));
  if (left_sd <= 0.0 || right_sd <= 0.0) throw EstimationError("fit_aggd: degenerate samples");
  m_abs /= static_cast<double>(samples.size());
  m2 /= static_cast<double>(samples.size());

  double gammahat = left_sd / right_sd;
  double rhat = (m_abs * m_abs) / m2;
  double rhatnorm = rhat * (gammahat * gammahat * gammahat + 1.0) * (gammahat + 1.0) /
                    ((gammahat * gammahat + 1.0) * (gammahat * gammahat + 1.0));

  AggdParams p;
  p.shape = nearest_shape(shape_grid().aggd_ratio, rhatnorm);
  double lg1 = std::lgamma(1.0 / p.shape);
  double lg2 = std::lgamma(2.0 / p.shape);
  double lg3 = std::lgamma(3.0 / p.shape);
  double sd_to_scale = std::sqrt(std::exp(lg1 - lg3));
  p.scale_left = left_sd * sd_to_scale;
  p.scale_right = right_sd * sd_to_scale;
  p.mean_offset = (p.scale_right - p.scale_left) * std::exp(lg2 - lg1);
  return p;
}

std::vector<double> nss_features(const ImagePlane& p, const NiqeConfig& cfg) {
  check_niqe_cfg(cfg);
  ImagePlane plane = p;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(18) * cfg.scales);
  for (int s = 0; s < cfg.scales; ++s) {
    MscnField field = mscn_field(plane, cfg);
    block_features(field.mscn, 0, 0, field.mscn.height(), field.mscn.width(), out);
    if (s + 1 < cfg.scales) plane = downsample2(plane);
  }
  return out;
}

MvgModel fit_image_mvg(const ImagePlane& p, const NiqeConfig& cfg, bool sharpness_filter) {
  PatchSet set = collect_patch_features(p, cfg);
  std::vector<std::size_t> order;
  if (sharpness_filter) {
    order = select_sharp(set.sharpness, cfg.sharpness_fraction);
  } else {
    order.resize(set.features.size());
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(order.size());
  for (std::size_t idx : order) rows.push_back(set.features[idx]);
  return model_from_rows(rows, cfg, false);
}

MvgModel fit_pristine(const std::vector<ImagePlane>& corpus, const NiqeConfig& cfg) {
  check_niqe_cfg(cfg);
  if (corpus.size() < 10)
    throw EstimationError("fit_pristine: need at least 10 corpus images, got " +
                          std::to_string(corpus.size()));
  std::vector<std::vector<double>> rows;
  for (const ImagePlane& img : corpus) {
    PatchSet set = collect_patch_features(img, cfg);
    for (std::size_t idx : select_sharp(set.sharpness, cfg.sharpness_fraction))
      rows.push_back(std::move(set.features[idx]));
  }
  if (rows.size() < 2) throw EstimationError("fit_pristine: too few patches for a covariance");
  return model_from_rows(rows, cfg, true);
}

double niqe_distance(const MvgModel& a, const MvgModel& b) {
  const int dim = a.dim();
  if (dim == 0 || b.dim() != dim)
    throw InvalidInput("niqe_distance: model dimensions differ (" + std::to_string(dim) + " vs " +
                       std::to_string(b.dim()) + ")");
  if (a.covariance.size() != static_cast<std::size_t>(dim) * dim ||
      b.covariance.size() != static_cast<std::size_t>(dim) * dim)
    throw InvalidInput("niqe_distance: malformed covariance");

  Eigen::Map<const Eigen::MatrixXd> ca(a.covariance.data(), dim, dim);
  Eigen::Map<const Eigen::MatrixXd> cb(b.covariance.data(), dim, dim);
  Eigen::MatrixXd pooled = 0.5 * (ca + cb);
  Eigen::VectorXd diff(dim);
  for (int i = 0; i < dim; ++i) diff(i) = a.mean[i] - b.mean[i];

  Eigen::FullPivLU<Eigen::MatrixXd> lu(pooled);
  if (!lu.isInvertible()) throw NumericError("niqe_distance: pooled covariance is singular");
  double q = diff.dot(lu.solve(diff));
  return std::sqrt(std::max(q, 0.0));
}

double niqe_score(const ImagePlane& p, const MvgModel& pristine, const NiqeConfig& cfg) {
  MvgModel test = fit_image_mvg(p, cfg, false);
  if (test.dim() != pristine.dim())
    throw InvalidInput("niqe_score: feature dimension " + std::to_string(test.dim()) +
                       " does not match pristine model dimension " +
                       std::to_string(pristine.dim()));
  return niqe_distance(test, pristine);
}

void save_mvg_model(const std::string& path, const MvgModel& model) {
  const int dim = model.dim();
  nlohmann::json j;
  j["format_version"] = 1;
  j["scales"] = model.scales;
  j["patch_size"] = model.patch_size;
  j["mean"] = model.mean;
  nlohmann::json cov = nlohmann::json::array();
  for (int i = 0; i < dim; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < dim; ++k) row.push_back(model.covariance[static_cast<std::size_t>(i) * dim + k]);
    cov.push_back(std::move(row));
  }
  j["covariance"] = std::move(cov);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError(path + ": write failed");
}

MvgModel load_mvg_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": model parse failed: " + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1)
      throw IoError(path + ": unsupported model format version");
    MvgModel m;
    m.scales = j.at("scales").get<int>();
    m.patch_size = j.at("patch_size").get<int>();
    m.mean = j.at("mean").get<std::vector<double>>();
    const auto& cov = j.at("covariance");
    const std::size_t dim = m.mean.size();
    if (dim == 0 || cov.size() != dim) throw IoError(path + ": model dimensions inconsistent");
    m.covariance.reserve(dim * dim);
    for (const auto& row : cov) {
      if (row.size() != dim) throw IoError(path + ": covariance is not square");
      for (const auto& v : row) m.covariance.push_back(v.get<double>());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": model fields invalid: " + e.what());
  }
}

}  // namespace iqa
