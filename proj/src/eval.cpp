#include "iqa/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "iqa/errors.hpp"
#include "iqa/imageio.hpp"

namespace iqa {

namespace {

void check_pair_lengths(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidInput("sequences must have equal length");
  if (a.size() < 2) throw InvalidInput("correlation needs at least 2 samples");
  for (double v : a)
    if (!std::isfinite(v)) throw InvalidInput("sequence contains a non-finite value");
  for (double v : b)
    if (!std::isfinite(v)) throw InvalidInput("sequence contains a non-finite value");
}

// 1-based ranks, ties replaced by the average rank of the tied group.
std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && v[idx[j]] == v[idx[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = rank;
    i = j;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sxx += da * da;
    syy += db * db;
    sxy += da * db;
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    throw UndefinedCorrelation("correlation undefined: zero variance in input");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

double srocc(const std::vector<double>& a, const std::vector<double>& b) {
  check_pair_lengths(a, b);
  return pearson(average_ranks(a), average_ranks(b));
}

double lcc(const std::vector<double>& a, const std::vector<double>& b) {
  check_pair_lengths(a, b);
  return pearson(a, b);
}

namespace {

void check_glcm_cfg(const ImagePlane& p, const GlcmConfig& cfg) {
  if (p.height() < 2 || p.width() < 2) throw InvalidInput("glcm needs an image of at least 2x2");
  if (cfg.levels < 2) throw InvalidParameter("glcm levels must be >= 2");
  if (cfg.offsets.empty()) throw InvalidParameter("glcm needs at least one offset");
  for (const auto& [di, dj] : cfg.offsets)
    if (di == 0 && dj == 0) throw InvalidParameter("glcm offset must be nonzero");
}

}  // namespace

std::vector<double> glcm_matrix(const ImagePlane& p, const GlcmConfig& cfg,
                                std::size_t offset_index) {
  check_glcm_cfg(p, cfg);
  if (offset_index >= cfg.offsets.size()) throw InvalidParameter("glcm offset index out of range");

  const std::size_t h = p.height(), w = p.width();
  const std::size_t levels = cfg.levels;
  std::vector<std::size_t> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = std::clamp(p.data()[i], 0.0, 1.0);
    q[i] = std::min(levels - 1,
                    static_cast<std::size_t>(std::floor(v * static_cast<double>(levels))));
  }

  const auto [di, dj] = cfg.offsets[offset_index];
  std::vector<double> mat(levels * levels, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < h; ++i) {
    const long i2 = static_cast<long>(i) + di;
    if (i2 < 0 || i2 >= static_cast<long>(h)) continue;
    for (std::size_t j = 0; j < w; ++j) {
      const long j2 = static_cast<long>(j) + dj;
      if (j2 < 0 || j2 >= static_cast<long>(w)) continue;
      const std::size_t qa = q[i * w + j];
      const std::size_t qb = q[static_cast<std::size_t>(i2) * w + static_cast<std::size_t>(j2)];
      mat[qa * levels + qb] += 1.0;
      total += 1.0;
      if (cfg.symmetric) {
        mat[qb * levels + qa] += 1.0;
        total += 1.0;
      }
    }
  }
  if (total == 0.0) throw InvalidInput("glcm offset exceeds image extent");
  for (double& m : mat) m /= total;
  return mat;
}

GlcmFeatures glcm_features(const ImagePlane& p, const GlcmConfig& cfg) {
  check_glcm_cfg(p, cfg);
  const std::size_t levels = cfg.levels;
  GlcmFeatures acc;
  for (std::size_t k = 0; k < cfg.offsets.size(); ++k) {
    const std::vector<double> mat = glcm_matrix(p, cfg, k);

    double entropy = 0.0, contrast = 0.0, homogeneity = 0.0;
    double mi = 0.0, mj = 0.0;
    for (std::size_t i = 0; i < levels; ++i)
      for (std::size_t j = 0; j < levels; ++j) {
        const double pr = mat[i * levels + j];
        if (pr > 0.0) entropy -= pr * std::log2(pr);
        const double d = static_cast<double>(i) - static_cast<double>(j);
        contrast += pr * d * d;
        homogeneity += pr / (1.0 + std::abs(d));
        mi += pr * static_cast<double>(i);
        mj += pr * static_cast<double>(j);
      }
    double vi = 0.0, vj = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < levels; ++i)
      for (std::size_t j = 0; j < levels; ++j) {
        const double pr = mat[i * levels + j];
        vi += pr * (static_cast<double>(i) - mi) * (static_cast<double>(i) - mi);
        vj += pr * (static_cast<double>(j) - mj) * (static_cast<double>(j) - mj);
        cov += pr * (static_cast<double>(i) - mi) * (static_cast<double>(j) - mj);
      }
    const double denom = std::sqrt(vi * vj);
    acc.entropy += entropy;
    acc.contrast += contrast;
    acc.homogeneity += homogeneity;
    acc.correlation += denom > 0.0 ? cov / denom : 1.0;
  }
  const double m = static_cast<double>(cfg.offsets.size());
  acc.entropy /= m;
  acc.contrast /= m;
  acc.homogeneity /= m;
  acc.correlation /= m;
  return acc;
}

std::vector<double> hog_descriptor(const ImagePlane& p, const HogConfig& cfg) {
  if (cfg.cell_size < 1 || cfg.bins < 2 || cfg.block_cells < 1)
    throw InvalidParameter("invalid hog configuration");
  if (!(cfg.clip > 0.0)) throw InvalidParameter("hog clip must be positive");
  const int minimum = static_cast<int>(cfg.cell_size * cfg.block_cells);
  if (p.height() < minimum || p.width() < minimum)
    throw InvalidInput("image too small for one hog block");

  const std::size_t h = p.height(), w = p.width();
  const std::size_t cells_y = h / cfg.cell_size;
  const std::size_t cells_x = w / cfg.cell_size;
  const double pi = 3.14159265358979323846;

  // Per-cell orientation histograms; hard binning, magnitude-weighted.
  std::vector<double> hist(cells_y * cells_x * cfg.bins, 0.0);
  for (std::size_t i = 0; i < cells_y * cfg.cell_size; ++i)
    for (std::size_t j = 0; j < cells_x * cfg.cell_size; ++j) {
      const double gx = p.at_border(static_cast<long>(i), static_cast<long>(j) + 1,
                                    BorderMode::replicate) -
                        p.at_border(static_cast<long>(i), static_cast<long>(j) - 1,
                                    BorderMode::replicate);
      const double gy = p.at_border(static_cast<long>(i) + 1, static_cast<long>(j),
                                    BorderMode::replicate) -
                        p.at_border(static_cast<long>(i) - 1, static_cast<long>(j),
                                    BorderMode::replicate);
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      double ang = std::atan2(gy, gx);
      if (ang < 0.0) ang += pi;
      if (ang >= pi) ang -= pi;
      const std::size_t bin =
          std::min(cfg.bins - 1,
                   static_cast<std::size_t>(ang / pi * static_cast<double>(cfg.bins)));
      const std::size_t cy = i / cfg.cell_size, cx = j / cfg.cell_size;
      hist[(cy * cells_x + cx) * cfg.bins + bin] += mag;
    }

  const std::size_t bc = cfg.block_cells;
  const std::size_t blocks_y = cells_y - bc + 1;
  const std::size_t blocks_x = cells_x - bc + 1;
  const std::size_t block_len = bc * bc * cfg.bins;
  std::vector<double> desc;
  desc.reserve(blocks_y * blocks_x * block_len);
  std::vector<double> v(block_len);
  const double eps = 1e-10;
  for (std::size_t by = 0; by < blocks_y; ++by)
    for (std::size_t bx = 0; bx < blocks_x; ++bx) {
      std::size_t t = 0;
      for (std::size_t cy = by; cy < by + bc; ++cy)
        for (std::size_t cx = bx; cx < bx + bc; ++cx)
          for (std::size_t b = 0; b < cfg.bins; ++b)
            v[t++] = hist[(cy * cells_x + cx) * cfg.bins + b];
      // L2-hys: normalize, clip, renormalize.
      double s = 0.0;
      for (double x : v) s += x * x;
      double nrm = std::sqrt(s + eps * eps);
      for (double& x : v) x = std::min(x / nrm, cfg.clip);
      s = 0.0;
      for (double x : v) s += x * x;
      nrm = std::sqrt(s + eps * eps);
      for (double& x : v) desc.push_back(x / nrm);
    }
  return desc;
}

double hog_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || a.size() != b.size())
    throw InvalidInput("descriptors must be nonempty and of equal length");
  if (a == b) return 1.0;
  double sa = 0.0, sb = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i] * a[i];
    sb += b[i] * b[i];
    dot += a[i] * b[i];
  }
  if (sa == 0.0 || sb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(sa * sb), -1.0, 1.0);
}

MetricKind metric_kind_from_name(const std::string& name) {
  if (name == "ssim") return MetricKind::ssim;
  if (name == "ms-ssim") return MetricKind::ms_ssim;
  if (name == "fsim") return MetricKind::fsim;
  if (name == "fsimc") return MetricKind::fsimc;
  if (name == "mdsi") return MetricKind::mdsi;
  if (name == "niqe") return MetricKind::niqe;
  throw InvalidParameter("unknown metric: " + name);
}

std::string metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::ssim: return "ssim";
    case MetricKind::ms_ssim: return "ms-ssim";
    case MetricKind::fsim: return "fsim";
    case MetricKind::fsimc: return "fsimc";
    case MetricKind::mdsi: return "mdsi";
    case MetricKind::niqe: return "niqe";
  }
  throw InvalidParameter("unknown metric enumerator");
}

bool metric_lower_is_better(MetricKind kind) {
  return kind == MetricKind::mdsi || kind == MetricKind::niqe;
}

double score_pair(MetricKind kind, const ImageTensor& ref, const ImageTensor& test,
                  const MetricParams& params) {
  switch (kind) {
    case MetricKind::ssim:
      return ssim_maps(to_grayscale(ref), to_grayscale(test), params.ssim).mean_ssim;
    case MetricKind::ms_ssim:
      return ms_ssim(to_grayscale(ref), to_grayscale(test), params.ms_ssim);
    case MetricKind::fsim: {
      ImageTensor gr(to_grayscale(ref));
      ImageTensor gt(to_grayscale(test));
      return fsim(gr, gt, params.fsim).score;
    }
    case MetricKind::fsimc:
      if (ref.channels() != 3 || test.channels() != 3)
        throw InvalidInput("fsimc requires 3-channel input");
      return fsim(ref, test, params.fsim).score;
    case MetricKind::mdsi:
      return mdsi(ref, test, params.mdsi).score;
    case MetricKind::niqe:
      if (!params.pristine) throw InvalidInput("pristine model required");
      return niqe_score(to_grayscale(test), *params.pristine, params.niqe);
  }
  throw InvalidParameter("unknown metric enumerator");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

EvalManifest parse_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open manifest: " + path);
  std::string line;
  if (!std::getline(f, line)) throw IoError("manifest is empty: " + path);
  if (trim(line) != "ref,test,mos,distortion")
    throw IoError("manifest header must be \"ref,test,mos,distortion\"");
  EvalManifest m;
  std::size_t rowno = 0;
  while (std::getline(f, line)) {
    if (trim(line).empty()) continue;
    ++rowno;
    const std::string where = "manifest row " + std::to_string(rowno) + ": ";
    auto fields = split_csv(line);
    if (fields.size() != 4) throw IoError(where + "expected 4 fields, got " +
                                          std::to_string(fields.size()));
    ManifestRow row;
    row.ref_path = fields[0];
    row.test_path = fields[1];
    if (row.ref_path.empty() || row.test_path.empty())
      throw IoError(where + "empty image path");
    try {
      std::size_t used = 0;
      row.mos = std::stod(fields[2], &used);
      if (used != fields[2].size() || !std::isfinite(row.mos))
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw IoError(where + "invalid mos value '" + fields[2] + "'");
    }
    row.distortion = fields[3];
    if (row.distortion.empty()) throw IoError(where + "empty distortion label");
    m.rows.push_back(std::move(row));
  }
  return m;
}

namespace {

CorrEntry correlate(const std::vector<double>& scores, const std::vector<double>& mos) {
  CorrEntry e;
  e.n = scores.size();
  try {
    e.srocc = srocc(scores, mos);
  } catch (const UndefinedCorrelation&) {
  }
  try {
    e.lcc = lcc(scores, mos);
  } catch (const UndefinedCorrelation&) {
  }
  return e;
}

[[noreturn]] void rethrow_with_context(std::exception_ptr ep, const std::string& ctx) {
  try {
    std::rethrow_exception(ep);
  } catch (const IoError& e) {
    throw IoError(ctx + e.what());
  } catch (const InvalidParameter& e) {
    throw InvalidParameter(ctx + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(ctx + e.what());
  } catch (const UndefinedCorrelation& e) {
    throw UndefinedCorrelation(ctx + e.what());
  } catch (const EstimationError& e) {
    throw EstimationError(ctx + e.what());
  } catch (const NumericError& e) {
    throw NumericError(ctx + e.what());
  }
}

}  // namespace

EvalReport evaluate_manifest(const EvalManifest& manifest, MetricKind kind,
                             const MetricParams& params, unsigned jobs) {
  if (manifest.rows.empty()) throw InvalidInput("manifest has no rows");
  {
    std::map<std::string, std::size_t> counts;
    for (const auto& row : manifest.rows) ++counts[row.distortion];
    for (const auto& [label, n] : counts)
      if (n < 2)
        throw InvalidInput("distortion label '" + label + "' needs at least 2 rows");
  }
  if (const char* env = std::getenv("IQA_NO_PARALLEL"); env && std::string(env) == "1")
    jobs = 1;
  jobs = std::max(1u, jobs);

  const std::size_t n = manifest.rows.size();
  std::vector<double> scores(n, 0.0);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        const ImageTensor ref = load_image(manifest.rows[i].ref_path);
        const ImageTensor test = load_image(manifest.rows[i].test_path);
        scores[i] = score_pair(kind, ref, test, params);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1 || n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(jobs, n));
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  // Report the first failing row in manifest order regardless of worker count.
  for (std::size_t i = 0; i < n; ++i)
    if (errors[i])
      rethrow_with_context(errors[i],
                           "row " + std::to_string(i + 1) + " (" + manifest.rows[i].ref_path +
                               " -> " + manifest.rows[i].test_path + "): ");

  EvalReport report;
  report.metric = kind;
  report.scores = scores;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  std::vector<double> all_mos(n);
  for (std::size_t i = 0; i < n; ++i) {
    groups[manifest.rows[i].distortion].first.push_back(scores[i]);
    groups[manifest.rows[i].distortion].second.push_back(manifest.rows[i].mos);
    all_mos[i] = manifest.rows[i].mos;
  }
  for (const auto& [label, sm] : groups)
    report.per_distortion.emplace_back(label, correlate(sm.first, sm.second));
  report.overall = correlate(scores, all_mos);
  return report;
}

namespace {

std::string fmt4(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

std::string json_num(const std::optional<double>& v) {
  if (!v) return "null";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string format_report(const EvalReport& report, const std::string& config_json) {
  std::ostringstream os;
  os << "metric: " << metric_kind_name(report.metric) << "\n";
  os << "rows: " << report.scores.size() << "\n\n";

  std::size_t lw = std::string("distortion").size();
  for (const auto& [label, e] : report.per_distortion) lw = std::max(lw, label.size());
  lw = std::max(lw, std::string("overall").size());
  auto row = [&](const std::string& label, const CorrEntry& e) {
    os << label << std::string(lw - label.size() + 2, ' ');
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%6zu  %9s  %9s\n", e.n, fmt4(e.srocc).c_str(),
                  fmt4(e.lcc).c_str());
    os << buf;
  };
  os << "distortion" << std::string(lw - 10 + 2, ' ');
  {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%6s  %9s  %9s\n", "n", "srocc", "lcc");
    os << buf;
  }
  for (const auto& [label, e] : report.per_distortion) row(label, e);
  row("overall", report.overall);

  auto entry_json = [&](const CorrEntry& e) {
    return "{\"lcc\":" + json_num(e.lcc) + ",\"n\":" + std::to_string(e.n) +
           ",\"srocc\":" + json_num(e.srocc) + "}";
  };
  os << "\n{\"config\":" << (config_json.empty() ? "{}" : config_json)
     << ",\"metric\":\"" << metric_kind_name(report.metric) << "\",\"overall\":"
     << entry_json(report.overall) << ",\"per_distortion\":{";
  bool first = true;
  for (const auto& [label, e] : report.per_distortion) {
    if (!first) os << ",";
    first = false;
    os << "\"" << json_escape(label) << "\":" << entry_json(e);
  }
  os << "}}\n";
  return os.str();
}

}  // namespace iqa
