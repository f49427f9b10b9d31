#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "iqa/errors.hpp"
#include "iqa/image.hpp"
#include "iqa/losses.hpp"
#include "iqa/niqe.hpp"
#include "iqa/ssim.hpp"
#include "iqa/synthetic.hpp"

using namespace iqa;

namespace {

ImagePlane constant_plane(int h, int w, double v) {
  ImagePlane p(h, w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) p.at(i, j) = v;
  return p;
}

ImagePlane row_plane(const std::vector<double>& values) {
  ImagePlane p(1, static_cast<int>(values.size()));
  for (std::size_t j = 0; j < values.size(); ++j) p.data()[j] = values[j];
  return p;
}

MvgModel identity_model(int dim, double mean_value) {
  MvgModel m;
  m.mean.assign(dim, mean_value);
  m.covariance.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) m.covariance[static_cast<std::size_t>(i) * dim + i] = 1.0;
  return m;
}

}  // namespace

TEST_SUITE("losses") {

TEST_CASE("dual norm: normalized lp family") {
  CHECK(std::abs(dual_norm(constant_plane(4, 4, 2.0), DualNormSpec::lp(2.0)) - 2.0) <= 1e-12);
  // {3,4}: sqrt((9+16)/2) = sqrt(12.5).
  CHECK(std::abs(dual_norm(row_plane({3.0, 4.0}), DualNormSpec::lp(2.0)) - std::sqrt(12.5)) <=
        1e-12);
  // p = 1 dually selects max-abs.
  CHECK(dual_norm(row_plane({1.0, -5.0, 2.0}), DualNormSpec::lp(1.0)) == 5.0);
}

TEST_CASE("dual norm input validation") {
  CHECK_THROWS_AS(dual_norm(row_plane({1.0}), DualNormSpec::lp(0.5)), InvalidParameter);
  DualNormSpec ssim_spec{DualNormSpec::Variant::ssim_db, 2.0};
  CHECK_THROWS_AS(dual_norm(row_plane({1.0}), ssim_spec), InvalidParameter);
  CHECK_THROWS_AS(dual_norm(ImagePlane(), DualNormSpec::lp(2.0)), InvalidInput);
  CHECK_THROWS_AS(dual_norm(row_plane({std::numeric_limits<double>::infinity()}),
                            DualNormSpec::lp(2.0)),
                  InvalidInput);
}

TEST_CASE("banach penalty vanishes on the Lipschitz target") {
  PenaltyConfig cfg;
  cfg.gamma = 0.7;
  CHECK(banach_gp({0.7, 0.7, 0.7}, cfg) == 0.0);
}

TEST_CASE("banach penalty hand oracles") {
  CHECK(banach_gp({3.0}, PenaltyConfig{1.0, 1.0}) == 4.0);
  // 10 * ((0-1)^2 + (2-1)^2) / 2 = 10.
  CHECK(banach_gp({0.0, 2.0}, PenaltyConfig{10.0, 1.0}) == 10.0);
}

TEST_CASE("banach penalty with lp(2) at unit gamma equals the 1-GP") {
  std::vector<double> norms;
  for (std::uint64_t seed = 1; seed <= 3; ++seed)
    norms.push_back(dual_norm(pink_noise(8, 8, seed), DualNormSpec::lp(2.0)));
  CHECK(banach_gp(norms, PenaltyConfig{1.0, 1.0}) == one_gp(norms));
}

TEST_CASE("banach penalty input validation") {
  CHECK_THROWS_AS(banach_gp({}, PenaltyConfig{}), InvalidInput);
  CHECK_THROWS_AS(banach_gp({-1.0}, PenaltyConfig{}), InvalidInput);
  CHECK_THROWS_AS(banach_gp({1.0}, PenaltyConfig{1.0, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(banach_gp({1.0}, PenaltyConfig{-1.0, 1.0}), InvalidParameter);
}

TEST_CASE("structural penalty vanishes when the critic matches the distance") {
  ImagePlane x = pink_noise(32, 32, 5);
  ImagePlane xhat = synth_distort(x, DistortKind::agn, 0.1, 6);
  double db = ssim_distance(x, xhat).global;
  REQUIRE(db > 1e-6);
  CriticSample s{db, 0.0, ImagePlane(), x, xhat};
  CHECK(ssim_gp({s}) <= 1e-12);
}

TEST_CASE("structural penalty ratio arithmetic") {
  // Critic difference twice the structural distance: (2 - 1)^2 = 1.
  ImagePlane x = pink_noise(32, 32, 7);
  ImagePlane xhat = synth_distort(x, DistortKind::gaussian_blur, 1.0, 0);
  double db = ssim_distance(x, xhat).global;
  CriticSample s{2.0 * db, 0.0, ImagePlane(), x, xhat};
  CHECK(ssim_gp({s}) == 1.0);
}

TEST_CASE("structural penalty is invariant to swapping the pair") {
  ImagePlane x = pink_noise(32, 32, 8);
  ImagePlane xhat = synth_distort(x, DistortKind::agn, 0.05, 9);
  CriticSample fwd{0.9, 0.4, ImagePlane(), x, xhat};
  CriticSample rev{0.4, 0.9, ImagePlane(), xhat, x};
  CHECK(ssim_gp({fwd}) == ssim_gp({rev}));
}

TEST_CASE("structural penalty rejects degenerate pairs by index") {
  ImagePlane x = pink_noise(32, 32, 10);
  ImagePlane xhat = synth_distort(x, DistortKind::agn, 0.1, 11);
  std::vector<CriticSample> samples;
  samples.push_back({0.5, 0.0, ImagePlane(), x, xhat});
  samples.push_back({0.5, 0.0, ImagePlane(), x, x});
  CHECK_THROWS_WITH_AS(ssim_gp(samples), doctest::Contains("sample 1"), InvalidInput);
  CHECK_THROWS_AS(ssim_gp({}), InvalidInput);
}

TEST_CASE("naturalness regularizer identities") {
  MvgModel pristine = identity_model(4, 0.3);
  MvgModel same = pristine;
  MvgModel offset = pristine;
  offset.mean[0] += 1.0;  // unit-basis shift against identity covariance
  CHECK(niqe_regularizer({same, same}, pristine) == 0.0);
  CHECK(std::abs(niqe_regularizer({offset}, pristine) - 1.0) <= 1e-12);
  CHECK(std::abs(niqe_regularizer({same, offset}, pristine) - 0.5) <= 1e-12);
  CHECK_THROWS_AS(niqe_regularizer({identity_model(3, 0.0)}, pristine), InvalidInput);
  CHECK_THROWS_AS(niqe_regularizer({}, pristine), InvalidInput);
}

TEST_CASE("unit penalty hand oracles") {
  CHECK(one_gp({1.0, 1.0}) == 0.0);
  CHECK(one_gp({0.0}) == 1.0);
  CHECK(one_gp({1.0, 3.0}) == 2.0);
  CHECK_THROWS_AS(one_gp({}), InvalidInput);
  CHECK_THROWS_AS(one_gp({-0.5}), InvalidInput);
}

TEST_CASE("combined penalty is the weighted sum of its terms") {
  CHECK(l_bp(0.0, 0.0, 0.0, LbpWeights{}) == 0.0);
  CHECK(l_bp(1.0, 1.0, 1.0, LbpWeights{0.1, 0.2, 0.3}) == doctest::Approx(0.6).epsilon(1e-12));
  // Doubling every weight doubles the value.
  LbpWeights w{0.7, 1.3, 2.1};
  LbpWeights w2{1.4, 2.6, 4.2};
  double base = l_bp(0.4, 0.9, 1.7, w);
  CHECK(l_bp(0.4, 0.9, 1.7, w2) == 2.0 * base);
  CHECK_THROWS_AS(l_bp(std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, LbpWeights{}),
                  InvalidInput);
  CHECK_THROWS_AS(l_bp(0.0, 0.0, 0.0, LbpWeights{-1.0, 0.0, 0.0}), InvalidParameter);
}

TEST_CASE("objective hand oracles") {
  CHECK(gan_objective(0.5, 0.5, 0.0, 0.0) ==
        doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-12));
  // ln(e^-1) + ln(e^-1) + 2 = 0.
  double e1 = std::exp(-1.0);
  CHECK(std::abs(gan_objective(e1, 1.0 - e1, 0.0, 2.0)) <= 1e-12);
}

TEST_CASE("objective domain guards") {
  CHECK_THROWS_AS(gan_objective(1.0, 0.5, 0.0, 0.0), NumericError);
  CHECK_THROWS_AS(gan_objective(0.0, 0.5, 0.0, 0.0), NumericError);
  CHECK_THROWS_AS(gan_objective(0.5, 0.5, 0.5, 0.0), NumericError);
  CHECK_THROWS_AS(gan_objective(0.5, 0.25, 0.0, std::numeric_limits<double>::infinity()),
                  NumericError);
}

TEST_CASE("finite differences match analytic gradients") {
  // f = sum of squares: gradient 2p.
  auto sum_sq = [](const ImagePlane& q) {
    double acc = 0.0;
    for (double v : q.data()) acc += v * v;
    return acc;
  };
  ImagePlane p = row_plane({1.0, 2.0});
  ImagePlane g = finite_diff_grad(sum_sq, p, 1e-4);
  CHECK(std::abs(g.data()[0] - 2.0) <= 1e-6);
  CHECK(std::abs(g.data()[1] - 4.0) <= 1e-6);

  ImagePlane zero = finite_diff_grad([](const ImagePlane&) { return 3.0; }, p, 1e-4);
  CHECK(std::abs(zero.data()[0]) <= 1e-10);
  CHECK(std::abs(zero.data()[1]) <= 1e-10);

  // f = sum of sines: gradient cos(p).
  auto sum_sin = [](const ImagePlane& q) {
    double acc = 0.0;
    for (double v : q.data()) acc += std::sin(v);
    return acc;
  };
  ImagePlane r = pink_noise(6, 6, 17);
  ImagePlane gs = finite_diff_grad(sum_sin, r, 1e-5);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double d = gs.data()[i] - std::cos(r.data()[i]);
    acc += d * d;
  }
  CHECK(std::sqrt(acc / static_cast<double>(r.size())) <= 1e-6);
}

TEST_CASE("finite differences verify the squared dual-norm gradient") {
  // d/dp of dual_norm(p, lp(2))^2 = 2p / N under the counting measure.
  auto f = [](const ImagePlane& q) {
    double n = dual_norm(q, DualNormSpec::lp(2.0));
    return n * n;
  };
  ImagePlane p = pink_noise(8, 8, 19);
  ImagePlane g = finite_diff_grad(f, p, 1e-5);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double d = g.data()[i] - 2.0 * p.data()[i] / static_cast<double>(p.size());
    acc += d * d;
  }
  CHECK(std::sqrt(acc / static_cast<double>(p.size())) <= 1e-5);
}

TEST_CASE("finite difference input validation") {
  auto f = [](const ImagePlane&) { return 1.0; };
  CHECK_THROWS_AS(finite_diff_grad(f, row_plane({1.0}), 0.0), InvalidParameter);
  auto bad = [](const ImagePlane&) { return std::numeric_limits<double>::infinity(); };
  CHECK_THROWS_AS(finite_diff_grad(bad, row_plane({1.0}), 1e-4), NumericError);
}

}  // TEST_SUITE
