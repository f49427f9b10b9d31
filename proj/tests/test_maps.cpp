#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "iqa/errors.hpp"
#include "iqa/image.hpp"
#include "iqa/imageio.hpp"
#include "iqa/maps.hpp"
#include "iqa/synthetic.hpp"

using namespace iqa;

namespace {

ImagePlane constant_plane(int h, int w, double v) {
  ImagePlane p(h, w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) p.at(i, j) = v;
  return p;
}

}  // namespace

TEST_SUITE("maps") {

TEST_CASE("metric names round-trip") {
  for (MapMetric m : {MapMetric::ssim, MapMetric::ms_ssim, MapMetric::fsim, MapMetric::mdsi})
    CHECK(map_metric_from_name(map_metric_name(m)) == m);
  CHECK_THROWS_AS(map_metric_from_name("niqe"), InvalidParameter);
}

TEST_CASE("intensity scaling at alpha one is the identity") {
  ImagePlane m = clamp01(pink_noise(16, 16, 3));
  ImagePlane out = intensity_scale(m, 1.0);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(out.data()[i] == m.data()[i]);
}

TEST_CASE("intensity scaling hand oracles") {
  CHECK(intensity_scale(constant_plane(2, 2, 1.0), 0.3).at(0, 0) == 1.0);
  CHECK(intensity_scale(constant_plane(2, 2, 0.25), 0.5).at(0, 0) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("intensity scaling is monotone in both arguments") {
  // m^alpha grows with m at fixed alpha, falls with alpha at fixed m in (0,1).
  const double alphas[] = {0.3, 0.5, 0.75, 1.0};
  for (double alpha : alphas) {
    double prev = -1.0;
    for (double m : {0.0, 0.1, 0.4, 0.7, 1.0}) {
      double v = intensity_scale(constant_plane(1, 1, m), alpha).at(0, 0);
      CHECK(v >= prev);
      prev = v;
    }
  }
  for (double m : {0.1, 0.4, 0.7, 0.9}) {
    double prev = 2.0;
    for (double alpha : alphas) {
      double v = intensity_scale(constant_plane(1, 1, m), alpha).at(0, 0);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("intensity scaling input validation") {
  CHECK_THROWS_AS(intensity_scale(constant_plane(2, 2, 1.2), 0.5), InvalidInput);
  CHECK_THROWS_AS(intensity_scale(constant_plane(2, 2, -0.1), 0.5), InvalidInput);
  CHECK_THROWS_AS(intensity_scale(constant_plane(2, 2, 0.5), 0.2), InvalidParameter);
  CHECK_THROWS_AS(intensity_scale(constant_plane(2, 2, 0.5), 1.1), InvalidParameter);
}

TEST_CASE("identical inputs yield all-ones maps at alpha one") {
  ImageTensor x(pink_noise(192, 192, 5));
  QualityMap ssim_map = quality_map(MapMetric::ssim, x, x, 1.0);
  for (double v : ssim_map.plane.data()) CHECK(v == 1.0);

  QualityMap ms_map = quality_map(MapMetric::ms_ssim, x, x, 1.0);
  CHECK(ms_map.plane.height() == 192);
  for (double v : ms_map.plane.data()) CHECK(std::abs(v - 1.0) <= 1e-12);

  ImageTensor small(pink_noise(64, 64, 6));
  QualityMap fsim_map = quality_map(MapMetric::fsim, small, small, 1.0);
  for (double v : fsim_map.plane.data()) CHECK(std::abs(v - 1.0) <= 1e-6);

  ImageTensor rgb = pink_noise_rgb(64, 64, 7);
  QualityMap mdsi_map = quality_map(MapMetric::mdsi, rgb, rgb, 1.0);
  CHECK(mdsi_map.plane.height() == 64);
  CHECK(mdsi_map.plane.width() == 64);
  for (double v : mdsi_map.plane.data()) CHECK(std::abs(v - 1.0) <= 1e-12);
}

TEST_CASE("lower alpha brightens the map pointwise") {
  ImageTensor x(pink_noise(64, 64, 9));
  ImageTensor y(synth_distort(pink_noise(64, 64, 9), DistortKind::agn, 0.1, 1));
  for (MapMetric metric : {MapMetric::ssim, MapMetric::fsim}) {
    QualityMap soft = quality_map(metric, x, y, 0.3);
    QualityMap mid = quality_map(metric, x, y, 0.5);
    QualityMap hard = quality_map(metric, x, y, 1.0);
    for (std::size_t i = 0; i < hard.plane.size(); ++i) {
      CHECK(soft.plane.data()[i] >= mid.plane.data()[i]);
      CHECK(mid.plane.data()[i] >= hard.plane.data()[i]);
    }
  }
}

TEST_CASE("maps are symmetric in reference and test for ssim and fsim") {
  ImageTensor x(pink_noise(64, 64, 11));
  ImageTensor y(synth_distort(pink_noise(64, 64, 11), DistortKind::gaussian_blur, 1.0, 0));
  for (MapMetric metric : {MapMetric::ssim, MapMetric::fsim}) {
    QualityMap ab = quality_map(metric, x, y, 1.0);
    QualityMap ba = quality_map(metric, y, x, 1.0);
    for (std::size_t i = 0; i < ab.plane.size(); ++i)
      CHECK(std::abs(ab.plane.data()[i] - ba.plane.data()[i]) <= 1e-9);
  }
}

TEST_CASE("map values stay inside the unit interval") {
  ImageTensor x(pink_noise(64, 64, 13));
  ImageTensor y(synth_distort(pink_noise(64, 64, 13), DistortKind::agn, 0.2, 3));
  for (MapMetric metric : {MapMetric::ssim, MapMetric::fsim}) {
    QualityMap m = quality_map(metric, x, y, 0.5);
    CHECK(m.metric == metric);
    CHECK(m.alpha == 0.5);
    for (double v : m.plane.data()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("quality map input validation") {
  ImageTensor x(pink_noise(64, 64, 15));
  CHECK_THROWS_AS(quality_map(MapMetric::ssim, x, x, 0.2), InvalidParameter);
  CHECK_THROWS_AS(quality_map(MapMetric::ssim, x, x, 1.2), InvalidParameter);
  CHECK_THROWS_AS(quality_map(MapMetric::mdsi, x, x, 0.5), InvalidInput);
  CHECK_THROWS_AS(quality_map(MapMetric::ssim, x, ImageTensor(pink_noise(64, 32, 15)), 0.5),
                  InvalidInput);
  // Five default scales need at least 176 px on each side.
  CHECK_THROWS_AS(quality_map(MapMetric::ms_ssim, x, x, 1.0), InvalidInput);
}

TEST_CASE("fusing identical maps reproduces the map") {
  ImagePlane plane = clamp01(pink_noise(32, 32, 17));
  QualityMap m{plane, MapMetric::ssim, 1.0};
  ImagePlane fused = fuse_maps(m, m, m);
  for (std::size_t i = 0; i < plane.size(); ++i) CHECK(fused.data()[i] == plane.data()[i]);
}

TEST_CASE("degenerate weights select a single map") {
  QualityMap zero{constant_plane(8, 8, 0.0), MapMetric::ssim, 1.0};
  QualityMap one{constant_plane(8, 8, 1.0), MapMetric::fsim, 1.0};
  ImagePlane fused = fuse_maps(zero, one, one, FusionWeights{1.0, 0.0, 0.0});
  for (double v : fused.data()) CHECK(v == 0.0);
}

TEST_CASE("weighted-mean arithmetic at a pixel") {
  QualityMap a{constant_plane(4, 4, 0.2), MapMetric::ssim, 1.0};
  QualityMap b{constant_plane(4, 4, 0.4), MapMetric::fsim, 1.0};
  QualityMap c{constant_plane(4, 4, 0.8), MapMetric::mdsi, 1.0};
  ImagePlane fused = fuse_maps(a, b, c, FusionWeights{0.5, 0.25, 0.25});
  for (double v : fused.data()) CHECK(v == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("fusion stays inside the pointwise input hull") {
  QualityMap a{clamp01(pink_noise(16, 16, 19)), MapMetric::ssim, 1.0};
  QualityMap b{clamp01(pink_noise(16, 16, 20)), MapMetric::fsim, 1.0};
  QualityMap c{clamp01(pink_noise(16, 16, 21)), MapMetric::mdsi, 1.0};
  ImagePlane fused = fuse_maps(a, b, c, FusionWeights{0.2, 0.3, 0.5});
  for (std::size_t i = 0; i < fused.size(); ++i) {
    double lo = std::min(a.plane.data()[i], std::min(b.plane.data()[i], c.plane.data()[i]));
    double hi = std::max(a.plane.data()[i], std::max(b.plane.data()[i], c.plane.data()[i]));
    CHECK(fused.data()[i] >= lo);
    CHECK(fused.data()[i] <= hi);
  }
}

TEST_CASE("fusion input validation") {
  QualityMap a{constant_plane(8, 8, 0.5), MapMetric::ssim, 1.0};
  QualityMap wide{constant_plane(8, 9, 0.5), MapMetric::fsim, 1.0};
  CHECK_THROWS_AS(fuse_maps(a, wide, a), InvalidInput);
  CHECK_THROWS_AS(fuse_maps(a, a, a, FusionWeights{0.5, 0.5, 0.5}), InvalidParameter);
  CHECK_THROWS_AS(fuse_maps(a, a, a, FusionWeights{1.5, -0.5, 0.0}), InvalidParameter);
}

TEST_CASE("maps survive 8-bit export within one quantization step") {
  ImageTensor x(pink_noise(64, 64, 23));
  ImageTensor y(synth_distort(pink_noise(64, 64, 23), DistortKind::agn, 0.1, 5));
  QualityMap m = quality_map(MapMetric::ssim, x, y, 0.7);
  const std::string path = "map_roundtrip_test.pgm";
  save_image(path, m.plane);
  ImageTensor back = load_image(path);
  REQUIRE(back.channels() == 1);
  for (std::size_t i = 0; i < m.plane.size(); ++i)
    CHECK(std::abs(back.plane(0).data()[i] - m.plane.data()[i]) <= 1.0 / 255.0);
  std::remove(path.c_str());
}

}  // TEST_SUITE
