#include "shadows/minkowski_family.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace shadows;

namespace {

Mat hexagon_directions() {
  Mat dirs(3, 2);
  for (int i = 0; i < 3; ++i) dirs.row(i) << std::cos(i * std::numbers::pi / 3), std::sin(i * std::numbers::pi / 3);
  return dirs;
}

Mat random_directions(int n, int m, RandomSource& rng) {
  Mat dirs(m, n);
  for (int i = 0; i < m; ++i) dirs.row(i) = sample_unit_sphere(n, rng).transpose();
  return dirs;
}

SlabFamilySpec random_spec(int n, int m, RandomSource& rng) {
  Vec gamma(m);
  for (int i = 0; i < m; ++i) gamma[i] = rng.uniform(0.5, 1.5);
  return {random_directions(n, m, rng), gamma / m};
}

}  // namespace

TEST(FamilySpec, Validation) {
  EXPECT_THROW((SlabFamilySpec{Mat::Identity(2, 2), Vec::Ones(3)}.validate()), InvalidArgument);
  EXPECT_THROW((SlabFamilySpec{Mat::Identity(2, 2), Vec::Constant(2, -1.0)}.validate()), InvalidArgument);
  Mat flat(2, 2);
  flat << 1, 0, 1, 0;
  EXPECT_THROW((SlabFamilySpec{flat, Vec::Ones(2)}.validate()), InvalidArgument);
  EXPECT_THROW(maximize_volume_in_family(SlabFamilySpec{Mat::Identity(2, 2), Vec::Ones(2)}, 0.1), InvalidArgument);
}

TEST(FamilyMaximum, CubeIsOptimalForCoordinateSlabs) {
  for (int n = 2; n <= 4; ++n) {
    const SlabFamilySpec spec{Mat::Identity(n, n), Vec::Constant(n, 1.0 / n)};
    const auto k = maximize_volume_in_family(spec);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(k.offsets[i], 1.0, 1e-7);
    EXPECT_NEAR(k.volume, std::ldexp(1.0, n), 1e-7 * std::ldexp(1.0, n));
  }
}

TEST(FamilyMaximum, CubeFromSkewedStart) {
  const SlabFamilySpec spec{Mat::Identity(3, 3), Vec::Constant(3, 1.0 / 3.0)};
  Vec start(3);
  start << 0.3, 1.2, 1.5;
  const auto k = maximize_volume_in_family(spec, 1e-8, start);
  EXPECT_NEAR(k.volume, 8.0, 1e-7);
}

TEST(FamilyMaximum, HexagonFromThreeDirections) {
  const SlabFamilySpec spec{hexagon_directions(), Vec::Constant(3, 1.0 / 3.0)};
  RandomSource rng(61);
  const auto ms = maximize_volume_multistart(spec, rng);
  EXPECT_NEAR(ms.best.volume, 2.0 * std::sqrt(3.0), 1e-7);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ms.best.offsets[i], 1.0, 1e-6);
  EXPECT_LE(ms.volume_spread, 1e-6);
}

TEST(FamilyMaximum, KktHoldsOnRandomSpecs) {
  RandomSource rng(62);
  for (int trial = 0; trial < 5; ++trial) {
    const auto spec = random_spec(3, 6, rng);
    const auto k = maximize_volume_in_family(spec);
    EXPECT_LE(k.kkt.max_relative_residual, 1e-3) << "trial " << trial;
    EXPECT_LE(k.kkt.floor_violation, 1e-3);
    EXPECT_NEAR(spec.gamma.dot(k.offsets), 1.0, 1e-12);
    // at the optimum the multiplier is n|K| (Euler's relation for the homogeneous volume)
    EXPECT_NEAR(k.kkt.multiplier, 3.0 * k.volume, 1e-4 * k.volume);
  }
}

TEST(FamilyMaximum, MultistartAgrees) {
  RandomSource rng(63);
  for (int trial = 0; trial < 3; ++trial) {
    const auto spec = random_spec(3, 6, rng);
    const auto ms = maximize_volume_multistart(spec, rng);
    EXPECT_LE(ms.volume_spread, 1e-6) << "trial " << trial;
    EXPECT_LE(ms.offset_spread, 1e-4) << "trial " << trial;
  }
}

TEST(FamilyGradient, MatchesFiniteDifferences) {
  RandomSource rng(64);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 3;
    const auto spec = random_spec(n, n + 3, rng);
    const SlabArrangement arr(spec.directions);
    Vec t(spec.size());
    for (int i = 0; i < spec.size(); ++i) t[i] = rng.uniform(0.8, 1.2);
    const auto base = evaluate_family(spec, arr, t);
    const double h = 1e-5;
    for (int i = 0; i < spec.size(); ++i) {
      Vec tp = t;
      tp[i] += h;
      const double fd = (evaluate_family(spec, arr, tp).volume - base.volume) / h;
      if (base.gradient[i] == 0.0) {
        EXPECT_NEAR(fd, 0.0, 1e-6) << "redundant slab " << i;
      } else {
        EXPECT_NEAR(fd, base.gradient[i], 1e-2 * base.gradient[i]) << "trial " << trial << " slab " << i;
      }
    }
  }
}

TEST(ProjectionIdentity, CubeAndHexagon) {
  RandomSource rng(65);
  const SlabFamilySpec cube{Mat::Identity(3, 3), Vec::Constant(3, 1.0 / 3.0)};
  const auto kc = maximize_volume_in_family(cube);
  EXPECT_LE(verify_projection_identity(kc.body, cube, 1000, rng).max_relative_error, 1e-6);
  EXPECT_NEAR(shadow_area(kc.body, Vec::Unit(3, 0)), 4.0, 1e-6);

  const SlabFamilySpec hex{hexagon_directions(), Vec::Constant(3, 1.0 / 3.0)};
  const auto kh = maximize_volume_in_family(hex);
  const double predicted = 0.5 * 2 * kh.volume * hex.gamma.dot((hex.directions * Vec::Unit(2, 0)).cwiseAbs());
  EXPECT_NEAR(predicted, 4.0 * std::sqrt(3.0) / 3.0, 1e-6);
  EXPECT_NEAR(shadow_area(kh.body, Vec::Unit(2, 0)), 4.0 * std::sqrt(3.0) / 3.0, 1e-6);
  EXPECT_LE(verify_projection_identity(kh.body, hex, 1000, rng).max_relative_error, 1e-6);
}

TEST(ProjectionIdentity, RandomSpecs) {
  RandomSource rng(66);
  for (int trial = 0; trial < 5; ++trial) {
    const auto spec = random_spec(3, 5 + trial % 3, rng);
    const auto k = maximize_volume_in_family(spec);
    EXPECT_LE(verify_projection_identity(k.body, spec, 1000, rng).max_relative_error, 1e-3) << "trial " << trial;
  }
}

TEST(Delta, Examples) {
  const auto a = spread_delta(Mat::Identity(2, 2));
  EXPECT_NEAR(a.delta_hat, 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(a.branch, "exact");
  Mat twice(4, 2);
  twice << 1, 0, 0, 1, 1, 0, 0, 1;
  EXPECT_NEAR(spread_delta(twice).delta_hat, std::sqrt(2.0), 1e-12);
}

TEST(Delta, BranchesAgree) {
  RandomSource rng(67);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat dirs = random_directions(4, 8, rng);
    const auto exact = spread_delta(dirs, SearchBranch::exact);
    const auto est = spread_delta(dirs, SearchBranch::sampling);
    EXPECT_EQ(est.branch, "estimate");
    EXPECT_NEAR(est.delta_hat, exact.delta_hat, 1e-6) << "trial " << trial;
    EXPECT_LE(exact.delta_hat, est.delta_hat + 1e-15);
  }
}

TEST(SectionBound, Examples) {
  const auto cube = unit_slab_volume_check(Mat::Identity(3, 3));
  EXPECT_NEAR(cube.volume_root, 2.0, 1e-12);
  EXPECT_NEAR(cube.bound, 2.0, 1e-12);
  EXPECT_TRUE(cube.holds);
  const auto hex = unit_slab_volume_check(hexagon_directions());
  EXPECT_NEAR(hex.volume_root, std::sqrt(2.0 * std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(hex.bound, 2.0 * std::sqrt(2.0 / 3.0), 1e-12);
  RandomSource rng(68);
  for (int n = 2; n <= 5; ++n) {
    const auto r = unit_slab_volume_check(random_directions(n, 2 * n, rng));
    EXPECT_NEAR(r.bound, std::sqrt(2.0), 1e-12);
    EXPECT_TRUE(r.holds) << "n=" << n;
  }
}

TEST(Pathological, FloorsHold) {
  RandomSource rng(69);
  for (int n = 2; n <= 4; ++n) {
    const auto r = construct_pathological(n, rng);
    EXPECT_GE(r.volume_root, std::sqrt(2.0) - 1e-9);
    EXPECT_GE(r.ratio, r.floor - 1e-6);
    EXPECT_NEAR(r.floor, r.delta_hat * std::sqrt(n) / (2.0 * std::sqrt(2.0)), 1e-15);
    // every shadow follows the identity, so the minimum is |K| sqrt(n) delta_hat / 4 exactly
    EXPECT_NEAR(r.min_shadow, r.volume * std::sqrt(n) * r.delta_hat / 4.0, 1e-4 * r.min_shadow);
  }
}

TEST(Pathological, DuplicatedDirectionsStillSatisfyFloors) {
  RandomSource rng(70);
  Mat dirs = random_directions(3, 6, rng);
  dirs.row(1) = dirs.row(0);
  const auto r = construct_pathological(3, rng, dirs);
  EXPECT_GE(r.volume_root, std::sqrt(2.0) - 1e-9);
  EXPECT_GE(r.ratio, r.floor - 1e-6);
}

TEST(Pathological, RejectsBadDimension) {
  RandomSource rng(71);
  EXPECT_THROW(construct_pathological(1, rng), InvalidArgument);
  EXPECT_THROW(construct_pathological(7, rng), InvalidArgument);
}

TEST(Shephard, ArithmeticIsConsistent) {
  RandomSource rng(72);
  const auto r = shephard_demonstration(3, rng);
  EXPECT_LE(r.arithmetic_gap, 1e-9);
  EXPECT_TRUE(std::isfinite(r.shadow_ratio));
  EXPECT_NEAR(r.ball_ratio, ball_shadow_ratio(3), 1e-15);
}

TEST(Shephard, CubeLosesToBall) {
  const auto r = shephard_comparison(SymmetricHPolytope::cube(3));
  EXPECT_NEAR(r.min_shadow / std::pow(r.volume, 2.0 / 3.0), 1.0, 1e-12);
  EXPECT_NEAR(r.shadow_ratio, 1.0 / ball_shadow_ratio(3), 1e-9);
  EXPECT_LT(r.shadow_ratio, 1.0);
}
