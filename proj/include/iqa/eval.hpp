#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iqa/fsim.hpp"
#include "iqa/image.hpp"
#include "iqa/mdsi.hpp"
#include "iqa/niqe.hpp"
#include "iqa/ssim.hpp"

namespace iqa {

// Spearman rank correlation with average ranks for ties.
// Throws UndefinedCorrelation when either sequence has zero rank variance.
double srocc(const std::vector<double>& a, const std::vector<double>& b);

// Pearson linear correlation.
// Throws UndefinedCorrelation when either sequence is constant.
double lcc(const std::vector<double>& a, const std::vector<double>& b);

struct GlcmConfig {
  std::size_t levels = 8;
  // Row/column displacement of the co-occurring pixel.
  std::vector<std::pair<int, int>> offsets = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  bool symmetric = true;
};

struct GlcmFeatures {
  double entropy = 0.0;      // bits
  double contrast = 0.0;
  double homogeneity = 0.0;  // sum p / (1 + |i-j|)
  double correlation = 0.0;
};

// Normalized co-occurrence matrix (levels x levels, row major) for the
// offset at offset_index.
std::vector<double> glcm_matrix(const ImagePlane& p, const GlcmConfig& cfg,
                                std::size_t offset_index);

// Gray-level co-occurrence statistics averaged over the configured offsets.
GlcmFeatures glcm_features(const ImagePlane& p, const GlcmConfig& cfg = {});

struct HogConfig {
  std::size_t cell_size = 8;
  std::size_t bins = 9;        // unsigned orientations over [0, pi)
  std::size_t block_cells = 2; // block spans block_cells x block_cells cells
  double clip = 0.2;           // L2-hys clipping threshold
};

// Block-normalized histogram-of-oriented-gradients descriptor; length is
// blocks_y * blocks_x * block_cells^2 * bins.
std::vector<double> hog_descriptor(const ImagePlane& p, const HogConfig& cfg = {});

// Cosine similarity between two descriptors of equal length.
double hog_similarity(const std::vector<double>& a, const std::vector<double>& b);

enum class MetricKind { ssim, ms_ssim, fsim, fsimc, mdsi, niqe };

MetricKind metric_kind_from_name(const std::string& name);
std::string metric_kind_name(MetricKind kind);

// Higher is better for every kind except mdsi and niqe, where lower is better.
bool metric_lower_is_better(MetricKind kind);

struct MetricParams {
  SsimConfig ssim;
  MsSsimConfig ms_ssim;
  FsimConfig fsim;
  MdsiConfig mdsi;
  NiqeConfig niqe;
  std::optional<MvgModel> pristine;  // required for niqe
};

// One scalar score for a reference/test pair under the selected metric.
// niqe ignores the reference and scores the test against the pristine model.
double score_pair(MetricKind kind, const ImageTensor& ref, const ImageTensor& test,
                  const MetricParams& params = {});

struct ManifestRow {
  std::string ref_path;
  std::string test_path;
  double mos = 0.0;
  std::string distortion;
};

struct EvalManifest {
  std::vector<ManifestRow> rows;
};

// CSV with header "ref,test,mos,distortion"; errors name the offending row.
EvalManifest parse_manifest(const std::string& path);

struct CorrEntry {
  std::optional<double> srocc;
  std::optional<double> lcc;
  std::size_t n = 0;
};

struct EvalReport {
  MetricKind metric = MetricKind::ssim;
  std::vector<double> scores;  // manifest order
  std::vector<std::pair<std::string, CorrEntry>> per_distortion;  // sorted by label
  CorrEntry overall;
};

// Scores every row (optionally across a worker pool; results are reduced in
// manifest order so the output is independent of jobs) and correlates scores
// against MOS per distortion label and overall. Degenerate correlations are
// reported as absent rather than raised.
EvalReport evaluate_manifest(const EvalManifest& manifest, MetricKind kind,
                             const MetricParams& params = {}, unsigned jobs = 1);

// Human-readable table followed by a single-line JSON section. config_json is
// echoed verbatim into the JSON "config" field (pass "{}" when defaulted).
std::string format_report(const EvalReport& report, const std::string& config_json = "{}");

}  // namespace iqa
