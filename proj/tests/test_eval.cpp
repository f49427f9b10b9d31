#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "iqa/errors.hpp"
#include "iqa/eval.hpp"
#include "iqa/image.hpp"
#include "iqa/imageio.hpp"
#include "iqa/rng.hpp"
#include "iqa/synthetic.hpp"

using namespace iqa;

namespace {

ImagePlane constant_plane(int h, int w, double v) {
  ImagePlane p(h, w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) p.at(i, j) = v;
  return p;
}

std::vector<double> seeded_values(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform();
  return v;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  f << body;
}

std::string last_line(const std::string& text) {
  // Report text ends with a newline; the JSON section is the final line.
  const std::size_t end = text.size() - 1;
  const std::size_t pos = text.rfind('\n', end - 1);
  return text.substr(pos + 1, end - pos - 1);
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("rank correlation hand oracles") {
  const std::vector<double> a = {1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> b = {1.0, 4.0, 9.0, 16.0, 25.0};
  // Strictly increasing against strictly increasing: rank vectors coincide.
  CHECK(srocc(a, b) == 1.0);

  const std::vector<double> r = {25.0, 16.0, 9.0, 4.0, 1.0};
  CHECK(srocc(a, r) == -1.0);

  // Ranks {1, 2.5, 2.5, 4} vs {1, 2, 3, 4}: r = 4.5 / sqrt(4.5 * 5).
  const std::vector<double> tied = {1.0, 2.0, 2.0, 3.0};
  const std::vector<double> strict = {1.0, 2.0, 3.0, 4.0};
  CHECK(srocc(tied, strict) == doctest::Approx(0.9486832980505138).epsilon(1e-12));
}

TEST_CASE("rank correlation is invariant under strictly monotone maps") {
  const std::vector<double> a = seeded_values(40, 11);
  const std::vector<double> b = seeded_values(40, 12);
  std::vector<double> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) t[i] = a[i] * a[i] * a[i] + 2.0;
  // The transform preserves every pairwise order, so the ranks are identical.
  CHECK(srocc(t, b) == srocc(a, b));
  CHECK(srocc(a, b) == srocc(b, a));
}

TEST_CASE("correlation input validation") {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(srocc(a, {1.0, 2.0}), InvalidInput);
  CHECK_THROWS_AS(lcc(a, {1.0, 2.0}), InvalidInput);
  CHECK_THROWS_AS(srocc({1.0}, {2.0}), InvalidInput);
  CHECK_THROWS_AS(lcc({1.0, std::nan("")}, {1.0, 2.0}), InvalidInput);
  CHECK_THROWS_AS(srocc({2.0, 2.0, 2.0}, a), UndefinedCorrelation);
  CHECK_THROWS_AS(lcc({2.0, 2.0, 2.0}, a), UndefinedCorrelation);
}

TEST_CASE("linear correlation hand oracles") {
  const std::vector<double> a = seeded_values(30, 13);
  std::vector<double> affine(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) affine[i] = 2.0 * a[i] + 1.0;
  CHECK(lcc(a, affine) == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> x = {0.0, 1.0, 2.0, 3.0};
  const std::vector<double> nx = {0.0, -1.0, -2.0, -3.0};
  CHECK(lcc(x, nx) == -1.0);

  // Deviations {-1, 0, 1} against {-1/3, 2/3, -1/3}: the cross terms cancel.
  CHECK(lcc({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}) == 0.0);
}

TEST_CASE("linear correlation is invariant under positive affine maps") {
  const std::vector<double> a = seeded_values(50, 14);
  const std::vector<double> b = seeded_values(50, 15);
  std::vector<double> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) t[i] = 2.5 * a[i] - 0.7;
  CHECK(lcc(t, b) == doctest::Approx(lcc(a, b)).epsilon(1e-12));
}

TEST_CASE("glcm of a constant image") {
  const GlcmFeatures f = glcm_features(constant_plane(16, 16, 0.5));
  CHECK(f.entropy == 0.0);
  CHECK(f.contrast == 0.0);
  CHECK(f.homogeneity == 1.0);
  // Degenerate marginals fall back to perfect correlation.
  CHECK(f.correlation == 1.0);
}

TEST_CASE("glcm of a unit checkerboard") {
  GlcmConfig cfg;
  cfg.levels = 2;
  cfg.offsets = {{0, 1}};
  cfg.symmetric = true;
  // Every horizontal neighbor differs: mass 0.5 on (0,1) and 0.5 on (1,0).
  const GlcmFeatures f = glcm_features(checkerboard(6, 6, 1), cfg);
  CHECK(f.contrast == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.homogeneity == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.entropy == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("glcm matrices are stochastic and symmetric") {
  const ImagePlane p = clamp01(pink_noise(32, 32, 21));
  const GlcmConfig cfg;
  for (std::size_t k = 0; k < cfg.offsets.size(); ++k) {
    const std::vector<double> mat = glcm_matrix(p, cfg, k);
    REQUIRE(mat.size() == cfg.levels * cfg.levels);
    double sum = 0.0;
    for (double m : mat) {
      CHECK(m >= 0.0);
      sum += m;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // Symmetric accumulation keeps identical integer counts on (i,j) and (j,i).
    for (std::size_t i = 0; i < cfg.levels; ++i)
      for (std::size_t j = 0; j < i; ++j)
        CHECK(mat[i * cfg.levels + j] == mat[j * cfg.levels + i]);
  }
}

TEST_CASE("glcm input validation") {
  const ImagePlane p = clamp01(pink_noise(8, 8, 22));
  CHECK_THROWS_AS(glcm_features(ImagePlane(1, 5)), InvalidInput);

  GlcmConfig bad;
  bad.levels = 1;
  CHECK_THROWS_AS(glcm_features(p, bad), InvalidParameter);

  GlcmConfig empty;
  empty.offsets.clear();
  CHECK_THROWS_AS(glcm_features(p, empty), InvalidParameter);

  GlcmConfig zero;
  zero.offsets = {{0, 0}};
  CHECK_THROWS_AS(glcm_features(p, zero), InvalidParameter);

  GlcmConfig far;
  far.offsets = {{0, 10}};
  CHECK_THROWS_AS(glcm_features(p, far), InvalidInput);

  CHECK_THROWS_AS(glcm_matrix(p, GlcmConfig{}, 4), InvalidParameter);
}

TEST_CASE("hog descriptor length follows the block grid") {
  // 16x16 at cell 8: 2x2 cells, one 2x2 block, 4 * 9 entries.
  CHECK(hog_descriptor(clamp01(pink_noise(16, 16, 23))).size() == 36);
  // 40x48: 5x6 cells, 4x5 blocks.
  CHECK(hog_descriptor(clamp01(pink_noise(40, 48, 24))).size() == 4 * 5 * 36);
}

TEST_CASE("hog orientation bins separate horizontal and vertical ramps") {
  const ImagePlane r = ramp(32, 32);
  ImagePlane rt(32, 32);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) rt.at(i, j) = r.at(j, i);

  const HogConfig cfg;
  const std::vector<double> dh = hog_descriptor(r, cfg);
  const std::vector<double> dv = hog_descriptor(rt, cfg);
  REQUIRE(dh.size() == dv.size());

  auto dominant_bin = [&](const std::vector<double>& d) {
    std::vector<double> mass(cfg.bins, 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) mass[i % cfg.bins] += d[i];
    std::size_t best = 0;
    for (std::size_t b = 1; b < cfg.bins; ++b)
      if (mass[b] > mass[best]) best = b;
    return best;
  };
  // A horizontal ramp has gradient angle 0; its transpose sits at pi/2.
  CHECK(dominant_bin(dh) == 0);
  CHECK(dominant_bin(dv) == 4);
  // Disjoint orientation support makes the descriptors orthogonal.
  CHECK(hog_similarity(dh, dv) == 0.0);
}

TEST_CASE("hog entries are nonnegative with bounded block norms") {
  const HogConfig cfg;
  const std::vector<double> d = hog_descriptor(clamp01(pink_noise(40, 48, 25)), cfg);
  const std::size_t block_len = cfg.block_cells * cfg.block_cells * cfg.bins;
  REQUIRE(d.size() % block_len == 0);
  for (double v : d) CHECK(v >= 0.0);
  for (std::size_t b = 0; b < d.size(); b += block_len) {
    double s = 0.0;
    for (std::size_t i = 0; i < block_len; ++i) s += d[b + i] * d[b + i];
    CHECK(std::sqrt(s) <= 1.0 + 1e-9);
  }
}

TEST_CASE("hog similarity identities and validation") {
  const std::vector<double> d = hog_descriptor(clamp01(pink_noise(24, 24, 26)));
  CHECK(hog_similarity(d, d) == 1.0);
  CHECK_THROWS_AS(hog_similarity(d, std::vector<double>(d.size() + 1, 0.0)), InvalidInput);
  CHECK_THROWS_AS(hog_similarity({}, {}), InvalidInput);
}

TEST_CASE("hog input validation") {
  const ImagePlane p = clamp01(pink_noise(32, 32, 27));
  HogConfig bad;
  bad.cell_size = 0;
  CHECK_THROWS_AS(hog_descriptor(p, bad), InvalidParameter);
  bad = HogConfig{};
  bad.bins = 1;
  CHECK_THROWS_AS(hog_descriptor(p, bad), InvalidParameter);
  bad = HogConfig{};
  bad.clip = 0.0;
  CHECK_THROWS_AS(hog_descriptor(p, bad), InvalidParameter);
  // Default block needs 16x16 pixels.
  CHECK_THROWS_AS(hog_descriptor(ImagePlane(8, 15)), InvalidInput);
}

TEST_CASE("metric names round-trip and orient the score scale") {
  for (MetricKind k : {MetricKind::ssim, MetricKind::ms_ssim, MetricKind::fsim,
                       MetricKind::fsimc, MetricKind::mdsi, MetricKind::niqe})
    CHECK(metric_kind_from_name(metric_kind_name(k)) == k);
  CHECK_THROWS_AS(metric_kind_from_name("psnr"), InvalidParameter);

  CHECK(metric_lower_is_better(MetricKind::mdsi));
  CHECK(metric_lower_is_better(MetricKind::niqe));
  CHECK_FALSE(metric_lower_is_better(MetricKind::ssim));
  CHECK_FALSE(metric_lower_is_better(MetricKind::ms_ssim));
  CHECK_FALSE(metric_lower_is_better(MetricKind::fsim));
  CHECK_FALSE(metric_lower_is_better(MetricKind::fsimc));
}

TEST_CASE("score_pair dispatches the full-reference metrics") {
  const ImageTensor x = pink_noise_rgb(192, 192, 31);
  CHECK(score_pair(MetricKind::ssim, x, x) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(score_pair(MetricKind::ms_ssim, x, x) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(score_pair(MetricKind::fsim, x, x) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(score_pair(MetricKind::fsimc, x, x) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(score_pair(MetricKind::mdsi, x, x) <= 1e-9);
}

TEST_CASE("score_pair niqe contract") {
  const ImageTensor gray(to_grayscale(pink_noise_rgb(96, 96, 32)));
  CHECK_THROWS_WITH_AS(score_pair(MetricKind::niqe, gray, gray),
                       doctest::Contains("pristine model required"), InvalidInput);
  CHECK_THROWS_AS(score_pair(MetricKind::fsimc, gray, gray), InvalidInput);

  NiqeConfig cfg;
  cfg.patch_size = 32;
  std::vector<ImagePlane> corpus;
  for (int k = 0; k < 10; ++k) corpus.push_back(pink_noise(96, 96, 3300 + k));
  MetricParams params;
  params.niqe = cfg;
  params.pristine = fit_pristine(corpus, cfg);

  const ImageTensor test(pink_noise(96, 96, 3399));
  const double s = score_pair(MetricKind::niqe, gray, test, params);
  CHECK(std::isfinite(s));
  CHECK(s >= 0.0);
  // The reference image plays no part in a no-reference score.
  const ImageTensor other_ref(pink_noise(96, 96, 3398));
  CHECK(score_pair(MetricKind::niqe, other_ref, test, params) == s);
}

TEST_CASE("manifest parsing accepts padded fields and blank lines") {
  const std::string path = "evalu_manifest_ok.csv";
  write_text(path,
             "ref,test,mos,distortion\n"
             "evalu_a.pgm, evalu_b.pgm , 3.5 ,agn\n"
             "\n"
             "evalu_a.pgm,evalu_a.pgm,-1.25,blur\n");
  const EvalManifest m = parse_manifest(path);
  REQUIRE(m.rows.size() == 2);
  CHECK(m.rows[0].ref_path == "evalu_a.pgm");
  CHECK(m.rows[0].test_path == "evalu_b.pgm");
  CHECK(m.rows[0].mos == 3.5);
  CHECK(m.rows[0].distortion == "agn");
  CHECK(m.rows[1].mos == -1.25);
  CHECK(m.rows[1].distortion == "blur");
  std::remove(path.c_str());
}

TEST_CASE("manifest parsing errors name the offending row") {
  CHECK_THROWS_WITH_AS(parse_manifest("evalu_no_such_manifest.csv"),
                       doctest::Contains("cannot open manifest"), IoError);

  const std::string path = "evalu_manifest_bad.csv";
  write_text(path, "");
  CHECK_THROWS_WITH_AS(parse_manifest(path), doctest::Contains("manifest is empty"), IoError);

  write_text(path, "ref,test,score,distortion\n");
  CHECK_THROWS_WITH_AS(parse_manifest(path), doctest::Contains("header"), IoError);

  write_text(path, "ref,test,mos,distortion\na.pgm,b.pgm,1.0\n");
  CHECK_THROWS_WITH_AS(parse_manifest(path),
                       doctest::Contains("manifest row 1: expected 4 fields"), IoError);

  write_text(path, "ref,test,mos,distortion\na.pgm,b.pgm,ok,agn\n");
  CHECK_THROWS_WITH_AS(parse_manifest(path),
                       doctest::Contains("manifest row 1: invalid mos value"), IoError);

  write_text(path, "ref,test,mos,distortion\na.pgm,b.pgm,1.5,agn\n,b.pgm,1.0,agn\n");
  CHECK_THROWS_WITH_AS(parse_manifest(path),
                       doctest::Contains("manifest row 2: empty image path"), IoError);

  write_text(path, "ref,test,mos,distortion\na.pgm,b.pgm,1.5,\n");
  CHECK_THROWS_WITH_AS(parse_manifest(path),
                       doctest::Contains("manifest row 1: empty distortion label"), IoError);

  std::remove(path.c_str());
}

TEST_CASE("manifest evaluation recovers a monotone distortion sweep") {
  const ImagePlane ref = clamp01(pink_noise(48, 48, 41));
  save_image("evalu_ref.pgm", ref);

  const std::vector<double> agn_levels = {0.02, 0.05, 0.1, 0.2};
  const std::vector<double> blur_levels = {0.6, 1.2, 2.0, 3.0};
  std::string body = "ref,test,mos,distortion\n";
  std::vector<std::string> files = {"evalu_ref.pgm"};
  for (std::size_t i = 0; i < agn_levels.size(); ++i) {
    const std::string f = "evalu_agn_" + std::to_string(i) + ".pgm";
    save_image(f, synth_distort(ref, DistortKind::agn, agn_levels[i], 500 + i));
    body += "evalu_ref.pgm," + f + "," + std::to_string(-agn_levels[i]) + ",agn\n";
    files.push_back(f);
  }
  for (std::size_t i = 0; i < blur_levels.size(); ++i) {
    const std::string f = "evalu_blur_" + std::to_string(i) + ".pgm";
    save_image(f, synth_distort(ref, DistortKind::gaussian_blur, blur_levels[i], 0));
    body += "evalu_ref.pgm," + f + "," + std::to_string(-blur_levels[i]) + ",blur\n";
    files.push_back(f);
  }
  const std::string mpath = "evalu_manifest_sweep.csv";
  write_text(mpath, body);

  const EvalManifest m = parse_manifest(mpath);
  const EvalReport report = evaluate_manifest(m, MetricKind::ssim);
  REQUIRE(report.scores.size() == 8);
  REQUIRE(report.per_distortion.size() == 2);
  CHECK(report.per_distortion[0].first == "agn");
  CHECK(report.per_distortion[1].first == "blur");
  CHECK(report.per_distortion[0].second.n == 4);
  CHECK(report.per_distortion[1].second.n == 4);
  CHECK(report.overall.n == 8);

  // Structural similarity falls as either distortion grows, and the stated
  // opinion score is minus the level, so rank agreement is perfect.
  REQUIRE(report.per_distortion[0].second.srocc.has_value());
  REQUIRE(report.per_distortion[1].second.srocc.has_value());
  CHECK(*report.per_distortion[0].second.srocc == 1.0);
  CHECK(*report.per_distortion[1].second.srocc == 1.0);
  REQUIRE(report.overall.lcc.has_value());
  CHECK(std::abs(*report.overall.lcc) <= 1.0);

  // The reduction runs in manifest order, so worker count cannot change it.
  const EvalReport threaded = evaluate_manifest(m, MetricKind::ssim, {}, 4);
  CHECK(threaded.scores == report.scores);

  setenv("IQA_NO_PARALLEL", "1", 1);
  const EvalReport serial = evaluate_manifest(m, MetricKind::ssim, {}, 4);
  unsetenv("IQA_NO_PARALLEL");
  CHECK(serial.scores == report.scores);

  std::remove(mpath.c_str());
  for (const std::string& f : files) std::remove(f.c_str());
}

TEST_CASE("manifest evaluation reports degenerate correlations as absent") {
  const ImagePlane ref = clamp01(pink_noise(32, 32, 42));
  save_image("evalu_same.pgm", ref);
  const std::string mpath = "evalu_manifest_same.csv";
  write_text(mpath,
             "ref,test,mos,distortion\n"
             "evalu_same.pgm,evalu_same.pgm,1.0,none\n"
             "evalu_same.pgm,evalu_same.pgm,2.0,none\n");
  const EvalReport report = evaluate_manifest(parse_manifest(mpath), MetricKind::ssim);
  REQUIRE(report.scores.size() == 2);
  CHECK(report.scores[0] == report.scores[1]);
  CHECK_FALSE(report.overall.srocc.has_value());
  CHECK_FALSE(report.overall.lcc.has_value());
  CHECK_FALSE(report.per_distortion[0].second.srocc.has_value());
  std::remove(mpath.c_str());
  std::remove("evalu_same.pgm");
}

TEST_CASE("manifest evaluation input validation") {
  CHECK_THROWS_AS(evaluate_manifest(EvalManifest{}, MetricKind::ssim), InvalidInput);

  EvalManifest lone;
  lone.rows.push_back({"a.pgm", "b.pgm", 1.0, "agn"});
  CHECK_THROWS_WITH_AS(evaluate_manifest(lone, MetricKind::ssim),
                       doctest::Contains("needs at least 2 rows"), InvalidInput);

  const ImagePlane ref = clamp01(pink_noise(32, 32, 43));
  save_image("evalu_io.pgm", ref);
  EvalManifest m;
  m.rows.push_back({"evalu_io.pgm", "evalu_io.pgm", 1.0, "agn"});
  m.rows.push_back({"evalu_io.pgm", "evalu_missing.pgm", 2.0, "agn"});
  CHECK_THROWS_WITH_AS(evaluate_manifest(m, MetricKind::ssim),
                       doctest::Contains("row 2 (evalu_io.pgm -> evalu_missing.pgm)"), IoError);
  std::remove("evalu_io.pgm");
}

TEST_CASE("report formatting produces a table and a JSON line") {
  EvalReport r;
  r.metric = MetricKind::ms_ssim;
  r.scores = {0.9, 0.8, 0.7};
  CorrEntry agn;
  agn.srocc = 1.0;
  agn.lcc = 0.5;
  agn.n = 2;
  CorrEntry blur;
  blur.n = 1;
  r.per_distortion = {{"agn", agn}, {"blur", blur}};
  r.overall.srocc = 0.9486832980505138;
  r.overall.lcc = -0.25;
  r.overall.n = 3;

  const std::string text = format_report(r);
  CHECK(text.rfind("metric: ms-ssim\nrows: 3\n\n", 0) == 0);
  CHECK(text.find("n/a") != std::string::npos);
  CHECK(text.find("1.0000") != std::string::npos);
  CHECK(text.find("0.9487") != std::string::npos);
  CHECK(text.find("overall") != std::string::npos);
  CHECK(text.back() == '\n');

  const nlohmann::json j = nlohmann::json::parse(last_line(text));
  CHECK(j["metric"] == "ms-ssim");
  CHECK(j["config"].is_object());
  CHECK(j["overall"]["n"] == 3);
  CHECK(j["overall"]["srocc"].get<double>() == doctest::Approx(0.9487).epsilon(1e-9));
  CHECK(j["overall"]["lcc"].get<double>() == doctest::Approx(-0.25).epsilon(1e-9));
  CHECK(j["per_distortion"]["agn"]["n"] == 2);
  CHECK(j["per_distortion"]["blur"]["srocc"].is_null());

  const nlohmann::json j2 =
      nlohmann::json::parse(last_line(format_report(r, "{\"alpha\":0.55}")));
  CHECK(j2["config"]["alpha"].get<double>() == doctest::Approx(0.55).epsilon(1e-12));
}

}  // TEST_SUITE("eval")
