#include "shadows/polytope.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace shadows;

namespace {

SymmetricHPolytope hexagon() {
  Mat dirs(3, 2);
  for (int i = 0; i < 3; ++i) {
    const double a = i * std::numbers::pi / 3.0;
    dirs.row(i) << std::cos(a), std::sin(a);
  }
  return SymmetricHPolytope(dirs, Vec::Ones(3));
}

SymmetricHPolytope diamond() {
  Mat dirs(2, 2);
  dirs << 1, 1, 1, -1;
  return SymmetricHPolytope::from_normals(dirs, Vec::Ones(2));
}

Vec unit(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v.normalized();
}

}  // namespace

TEST(Polytope, ConstructionRejectsBadInput) {
  EXPECT_THROW(SymmetricHPolytope(Mat::Identity(2, 2), Vec::Zero(2)), InvalidArgument);
  Mat parallel(2, 2);
  parallel << 1, 0, 1, 0;
  EXPECT_THROW(SymmetricHPolytope(parallel, Vec::Ones(2)), InvalidArgument);
  Mat nonunit = 2.0 * Mat::Identity(2, 2);
  EXPECT_THROW(SymmetricHPolytope(nonunit, Vec::Ones(2)), InvalidArgument);
  EXPECT_THROW(SymmetricHPolytope(Mat::Identity(3, 3).topRows(2), Vec::Ones(2)), InvalidArgument);
}

TEST(Polytope, CapacityGuard) {
  RandomSource rng(1);
  const auto p = random_symmetric_polytope(8, 9, rng);
  EXPECT_THROW(enumerate_vertices(p), CapacityError);
}

TEST(Vertices, SquareAndCube) {
  EXPECT_EQ(enumerate_vertices(SymmetricHPolytope::cube(2)).points.size(), 4u);
  const auto cube = enumerate_vertices(SymmetricHPolytope::cube(3));
  EXPECT_EQ(cube.points.size(), 8u);
  for (const Vec& v : cube.points) EXPECT_NEAR(v.cwiseAbs().minCoeff(), 1.0, 1e-15);
}

TEST(Vertices, HexagonRadius) {
  const auto vs = enumerate_vertices(hexagon());
  ASSERT_EQ(vs.points.size(), 6u);
  for (const Vec& v : vs.points) EXPECT_NEAR(v.norm(), 2.0 / std::sqrt(3.0), 1e-12);
}

TEST(Vertices, ClosedUnderNegationAndFeasible) {
  RandomSource rng(4);
  const auto p = random_symmetric_polytope(4, 9, rng);
  const auto vs = enumerate_vertices(p);
  for (const Vec& v : vs.points) {
    EXPECT_TRUE(p.contains(v, 1e-9));
    bool found = false;
    for (const Vec& w : vs.points) found = found || (v + w).norm() < 1e-8;
    EXPECT_TRUE(found);
  }
}

TEST(Facets, CubeHexagonDiamond) {
  const auto cube = facet_decomposition(SymmetricHPolytope::cube(3));
  ASSERT_EQ(cube.size(), 6u);
  for (const auto& f : cube) {
    EXPECT_NEAR(f.measure, 4.0, 1e-12);
    EXPECT_EQ(f.vertices.size(), 4u);
  }
  const auto hex = facet_decomposition(hexagon());
  ASSERT_EQ(hex.size(), 6u);
  for (const auto& f : hex) EXPECT_NEAR(f.measure, 2.0 / std::sqrt(3.0), 1e-12);
  const auto dia = facet_decomposition(diamond());
  ASSERT_EQ(dia.size(), 4u);
  for (const auto& f : dia) EXPECT_NEAR(f.measure, std::sqrt(2.0), 1e-12);
}

TEST(Facets, VerticesLieOnFacetHyperplane) {
  RandomSource rng(8);
  const auto p = random_symmetric_polytope(3, 7, rng);
  const PolytopeGeometry g(p);
  for (const auto& f : g.facets())
    for (int v : f.vertices) EXPECT_NEAR(g.vertices().points[v].dot(f.normal), f.offset, 1e-9);
}

TEST(Facets, DuplicateSlabsCountedOnce) {
  Mat dirs(3, 2);
  dirs << 1, 0, 0, 1, 1, 0;
  const SymmetricHPolytope p(dirs, Vec::Ones(3));
  EXPECT_EQ(facet_decomposition(p).size(), 4u);
  EXPECT_NEAR(volume(p), 4.0, 1e-12);
  Vec offs(3);
  offs << 1, 1, 2;
  const SymmetricHPolytope loose(dirs, offs);
  EXPECT_NEAR(volume(loose), 4.0, 1e-12);
  EXPECT_EQ(PolytopeGeometry(loose).slab_face_measures()[2], 0.0);
}

TEST(Volume, Basics) {
  EXPECT_NEAR(volume(SymmetricHPolytope::cube(3)), 8.0, 1e-12);
  EXPECT_NEAR(volume(diamond()), 2.0, 1e-12);
  EXPECT_NEAR(volume(hexagon()), 2.0 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(volume(SymmetricHPolytope::cube(1, 3.0)), 6.0, 1e-15);
}

TEST(Volume, AgreesWithMonteCarlo) {
  RandomSource rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const int m = n + 1 + trial % 4;
    const auto p = random_symmetric_polytope(n, m, rng);
    const auto est = oracle::mc_volume(p, 1000000, rng);
    const double v = volume(p);
    EXPECT_LE(std::abs(v - est.value), 3.0 * est.sigma + 1e-12) << "trial " << trial << " n=" << n << " m=" << m;
  }
}

TEST(Volume, RandomFourDimensionalEightSlabs) {
  RandomSource rng(22);
  const auto p = random_symmetric_polytope(4, 8, rng);
  const auto est = oracle::mc_volume(p, 1000000, rng);
  EXPECT_LE(std::abs(volume(p) - est.value), 3.0 * est.sigma);
}

TEST(Shadow, CubeAndDiamond) {
  const PolytopeGeometry cube(SymmetricHPolytope::cube(3));
  EXPECT_NEAR(cube.shadow_area(unit({1, 0, 0})), 4.0, 1e-12);
  EXPECT_NEAR(cube.shadow_area(unit({1, 1, 1})), 4.0 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(oracle::projected_hull_area_3d(cube.vertices().points, unit({1, 1, 1})), 4.0 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(shadow_area(diamond(), unit({1, 0})), 2.0, 1e-12);
  EXPECT_THROW(cube.shadow_area(Vec::Ones(3)), InvalidArgument);
}

TEST(Shadow, MatchesProjectedHullArea) {
  RandomSource rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_symmetric_polytope(3, 3 + trial % 6, rng);
    const PolytopeGeometry g(p);
    const Vec theta = sample_unit_sphere(3, rng);
    const double hull = oracle::projected_hull_area_3d(g.vertices().points, theta);
    EXPECT_LE(std::abs(g.shadow_area(theta) - hull), 1e-7 * hull) << "trial " << trial;
  }
}

TEST(Shadow, EvenInDirection) {
  RandomSource rng(32);
  const PolytopeGeometry g(random_symmetric_polytope(4, 7, rng));
  for (int i = 0; i < 20; ++i) {
    const Vec t = sample_unit_sphere(4, rng);
    EXPECT_EQ(g.shadow_area(t), g.shadow_area(-t));
  }
}

TEST(Shadow, MonotoneInOffsets) {
  RandomSource rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_symmetric_polytope(3, 6, rng);
    Vec bigger = p.offsets();
    for (Eigen::Index i = 0; i < bigger.size(); ++i) bigger[i] += rng.uniform(0.0, 0.5);
    const PolytopeGeometry small(p), large(p.with_offsets(bigger));
    EXPECT_LE(small.volume(), large.volume() * (1 + 1e-12));
    for (int k = 0; k < 10; ++k) {
      const Vec t = sample_unit_sphere(3, rng);
      EXPECT_LE(small.shadow_area(t), large.shadow_area(t) * (1 + 1e-12));
    }
  }
}

TEST(SurfaceArea, Basics) {
  EXPECT_NEAR(surface_area(SymmetricHPolytope::cube(2)), 8.0, 1e-12);
  EXPECT_NEAR(surface_area(SymmetricHPolytope::cube(3)), 24.0, 1e-12);
  EXPECT_NEAR(surface_area(hexagon()), 6.0 * 2.0 / std::sqrt(3.0), 1e-12);
}

TEST(SurfaceArea, CauchyFormulaOnSquare) {
  RandomSource rng(41);
  const auto r = cauchy_check(SymmetricHPolytope::cube(2), 100000, rng);
  EXPECT_GE(r.cauchy_estimate, 7.9);
  EXPECT_LE(r.cauchy_estimate, 8.1);
}

TEST(AffineImage, IdentityAndDiagonal) {
  const auto cube = SymmetricHPolytope::cube(2);
  const auto same = affine_image(cube, Mat::Identity(2, 2));
  EXPECT_LE((same.directions() - cube.directions()).norm(), 1e-15);
  EXPECT_LE((same.offsets() - cube.offsets()).norm(), 1e-15);
  Mat a = Mat::Identity(2, 2);
  a(0, 0) = 2;
  const auto b = affine_image(cube, a);
  EXPECT_NEAR(volume(b), 8.0, 1e-12);
  EXPECT_TRUE(b.contains(unit({1, 0}) * 2.0));
  EXPECT_FALSE(b.contains(unit({0, 1}) * 1.01));
  EXPECT_THROW(affine_image(cube, Mat::Zero(2, 2)), InvalidArgument);
}

TEST(AffineImage, VolumeScalesByDeterminant) {
  RandomSource rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_symmetric_polytope(3, 5, rng);
    Mat a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = rng.normal();
    const double expected = std::abs(a.determinant()) * volume(p);
    EXPECT_LE(std::abs(volume(affine_image(p, a)) - expected), 1e-8 * expected);
  }
}
