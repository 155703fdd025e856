#include <doctest.h>

#include "illumdepth/ellipsoid.hpp"
#include "illumdepth/illumination_depth.hpp"
#include "illumdepth/random.hpp"
#include "illumdepth/special.hpp"

#include <cmath>
#include <numbers>

using namespace illumdepth;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<int>(v.size()));
  int i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

PointCloud normal_cloud(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  RowMatrix X(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) X(i, j) = rng.normal();
  return PointCloud(std::move(X));
}

Polytope unit_square() { return make_box(vec({0, 0}), vec({1, 1})); }

RowMatrix circle_directions(int k) { return sphere_points(2, k); }

bool convex_ccw(const RowMatrix& ring) {
  const int m = static_cast<int>(ring.rows());
  for (int i = 0; i < m; ++i) {
    const Eigen::RowVector2d a = ring.row(i), b = ring.row((i + 1) % m), c = ring.row((i + 2) % m);
    const double cr = (b - a)[0] * (c - b)[1] - (b - a)[1] * (c - b)[0];
    if (cr < -1e-9 * (b - a).norm() * (c - b).norm()) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("illumination_depth") {

TEST_CASE("illumination examples") {
  CHECK(illumination(vec({0.3, 0.6}), unit_square()).norm_illum == 1.0);
  const Illumination s = illumination(vec({2, 0.5}), unit_square());
  CHECK(s.norm_illum == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(s.ill == doctest::Approx(1.5).epsilon(1e-12));
  const Polytope gon = convex_hull(sphere_points(2, 10000));
  CHECK(std::abs(illumination(vec({2, 0}), gon).norm_illum - g(2, 2.0)) < 1e-3);
  const Polytope point = tukey_region(PointCloud::from_rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}), 0.5).region;
  CHECK_THROWS_AS(illumination(vec({1, 1}), point), DegenerateRegion);
}

TEST_CASE("id_vector at the median and far away") {
  const PointCloud P = normal_cloud(300, 2, 1);
  const IlluminationDepthModel model(P, 0.2);
  const MaxDepth m = max_depth_and_median(model.family());
  const IlluminationDepth at_median = model.evaluate(m.median);
  CHECK(at_median.hd == doctest::Approx(m.pi_n));
  CHECK(at_median.norm_illum == 1.0);
  double prev = 1.0;
  for (double t = 5; t < 200; t *= 1.5) {
    const IlluminationDepth far = model.evaluate(m.median + t * vec({0.6, 0.8}));
    CHECK(far.hd == 0.0);
    CHECK(far.norm_illum > prev);
    prev = far.norm_illum;
  }
  CHECK_THROWS_AS(IlluminationDepthModel(P, 0.9), EmptyRegion);
}

TEST_CASE("illumination depth matches the population value for a normal sample") {
  const double alpha = 0.2;
  const double radius = special::normal_quantile(1 - alpha);
  for (std::uint64_t seed : {11, 12, 13}) {
    const IlluminationDepthModel model(normal_cloud(2000, 2, seed), alpha);
    for (double a : {0.0, 1.0, 2.5}) {
      const Vector x = 3.0 * vec({std::cos(a), std::sin(a)});
      const double expected = g(2, 3.0 / radius);
      CHECK(std::abs(model.evaluate(x).norm_illum / expected - 1.0) < 0.1);
    }
  }
}

TEST_CASE("invariants of the depth vector") {
  const PointCloud P = normal_cloud(200, 2, 3);
  const IlluminationDepthModel model(P, 0.15);
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const IlluminationDepth v = model.evaluate(2.0 * rng.normal_vector(2));
    CHECK(v.hd >= 0.0);
    CHECK(v.hd <= 1.0);
    CHECK(v.norm_illum >= 1.0);
    if (v.hd >= v.alpha_used) CHECK(v.norm_illum == 1.0);
  }
}

TEST_CASE("affine invariance of the depth vector") {
  Rng rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    const PointCloud P = normal_cloud(150, 2, 50 + rep);
    Matrix A(2, 2);
    A << rng.normal(), rng.normal(), rng.normal(), rng.normal();
    const Vector b = 3.0 * rng.normal_vector(2);
    const IlluminationDepthModel m1(P, 0.2);
    const IlluminationDepthModel m2(P.transformed(A, b), 0.2);
    for (int q = 0; q < 20; ++q) {
      const Vector x = 2.5 * rng.normal_vector(2);
      const IlluminationDepth u = m1.evaluate(x), v = m2.evaluate(A * x + b);
      CHECK(u.depth_count == v.depth_count);
      CHECK(std::abs(u.norm_illum - v.norm_illum) <= 1e-7 * u.norm_illum);
    }
  }
}

TEST_CASE("monotonicity along rays from the median") {
  const PointCloud P = normal_cloud(250, 2, 6);
  const IlluminationDepthModel model(P, 0.2);
  const Vector c = max_depth_and_median(model.family()).median;
  for (int r = 0; r < 100; ++r) {
    const double a = 2 * std::numbers::pi * r / 100;
    const Vector u = vec({std::cos(a), std::sin(a)});
    IlluminationDepth prev = model.evaluate(c);
    for (int s = 1; s <= 20; ++s) {
      const IlluminationDepth cur = model.evaluate(c + 0.25 * s * u);
      CHECK(cur.depth_count <= prev.depth_count);
      CHECK(cur.norm_illum >= prev.norm_illum - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("vanishing depth and linear growth far away") {
  const IlluminationDepthModel model(normal_cloud(200, 2, 7), 0.2);
  const Vector u = vec({0.28, 0.96});
  const double r3 = model.evaluate(1e3 * u).norm_illum / 1e3;
  const double r4 = model.evaluate(1e4 * u).norm_illum / 1e4;
  CHECK(model.evaluate(1e3 * u).hd == 0.0);
  CHECK(r3 > 0.0);
  CHECK(std::abs(r4 / r3 - 1.0) < 0.01);
}

TEST_CASE("level set membership") {
  const Polytope sq = unit_square();
  CHECK(level_set_membership(vec({0.5, 0.5}), sq, 1.0));
  CHECK_FALSE(level_set_membership(vec({1.01, 0.5}), sq, 1.0));
  CHECK(level_set_membership(vec({2, 0.5}), sq, 1.5));
  CHECK_FALSE(level_set_membership(vec({2.001, 0.5}), sq, 1.5));
  CHECK_THROWS_AS(level_set_membership(vec({2, 0.5}), sq, 0.9), DomainError);
  Rng rng(8);
  int pairs = 0;
  while (pairs < 300) {
    const Vector a = 3 * rng.normal_vector(2), b = 3 * rng.normal_vector(2);
    if (!level_set_membership(a, sq, 2.5) || !level_set_membership(b, sq, 2.5)) continue;
    CHECK(level_set_membership(0.5 * (a + b), sq, 2.5));
    ++pairs;
  }
}

TEST_CASE("level set boundary tracing") {
  const Polytope sq = unit_square();
  const RowMatrix U = circle_directions(64);
  const RowMatrix on_square = level_set_boundary(sq, 1.0, U);
  for (int i = 0; i < on_square.rows(); ++i) CHECK(std::abs(sq.max_violation(on_square.row(i).transpose())) < 1e-12);
  const RowMatrix at = level_set_boundary(sq, 1.5, U);
  for (int i = 0; i < at.rows(); ++i)
    CHECK(illumination(at.row(i).transpose(), sq).norm_illum == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(convex_ccw(at));

  const Polytope disk = convex_hull(sphere_points(2, 10000));
  const RowMatrix ring = level_set_boundary(disk, g(2, 2.0), circle_directions(90));
  for (int i = 0; i < ring.rows(); ++i) CHECK(std::abs(ring.row(i).norm() - 2.0) < 1e-3);
  CHECK(convex_ccw(ring));

  const IlluminationDepthModel model(normal_cloud(300, 2, 9), 0.2);
  for (double delta : {1.0, 1.3, 3.0, 10.0}) CHECK(convex_ccw(model.level_set_boundary(delta, circle_directions(120))));
}

TEST_CASE("affine surface area diagnostic") {
  const std::vector<double> deltas{0.1, 0.03, 0.01, 0.003, 0.001};
  const auto square = affine_surface_area_estimate(unit_square(), deltas);
  CHECK(square.size() == deltas.size());
  for (std::size_t i = 1; i < square.size(); ++i) CHECK(square[i] < square[i - 1]);
  const auto disk = affine_surface_area_estimate(convex_hull(sphere_points(2, 5000)), deltas);
  CHECK(disk.size() == deltas.size());
  CHECK(disk.back() > 0.0);
  CHECK(std::abs(disk[4] / disk[3] - 1.0) < 0.05);
  CHECK(std::abs(disk[3] / disk[2] - 1.0) < 0.05);
  CHECK(disk.back() > 2 * square.back());
  CHECK_THROWS_AS(affine_surface_area_estimate(unit_square(), {0.01, 0.1}), DomainError);
}

TEST_CASE("robust cutoff and presets") {
  CHECK(robust_alpha(0.5) == doctest::Approx(1.0 / 3.0));
  CHECK(kAlphaLogConcave == doctest::Approx(std::exp(-1.0)));
  const IlluminationDepthModel model = IlluminationDepthModel::robust(normal_cloud(400, 2, 10));
  CHECK(model.alpha() == doctest::Approx(robust_alpha(model.pi_n())));
  CHECK(model.level() == depth_level(model.alpha(), 400));
}

TEST_CASE("breakdown of the level sets") {
  const PointCloud P = normal_cloud(150, 2, 12);
  const double alpha = IlluminationDepthModel::robust(P).alpha();
  const int n = P.n();
  const int safe = static_cast<int>(std::ceil(alpha / (1 - alpha) * n - 1e-9)) - 1;
  const RowMatrix U = circle_directions(180);
  const Polytope base = convex_hull(IlluminationDepthModel(P, alpha).level_set_boundary(2.0, U));
  auto with_outliers = [&](int m) {
    RowMatrix X(n + m, 2);
    X.topRows(n) = P.matrix();
    for (int i = 0; i < m; ++i) X.row(n + i) << 1e4, 1e4 + 0.01 * i;
    return PointCloud(std::move(X));
  };
  const Polytope held = convex_hull(IlluminationDepthModel(with_outliers(safe), alpha).level_set_boundary(2.0, U));
  CHECK(hausdorff_distance(base, held) < 5.0);
  const Polytope broken =
      convex_hull(IlluminationDepthModel(with_outliers(safe + 1), alpha).level_set_boundary(2.0, U));
  CHECK(hausdorff_distance(base, broken) > 1e3);
}

TEST_CASE("approximate depth and direction regions in d = 3") {
  const PointCloud P = normal_cloud(300, 3, 14);
  const IlluminationDepthModel model(P, 0.15, Evaluation::automatic(3));
  const IlluminationDepth center = model.evaluate(vec({0, 0, 0}));
  CHECK(center.norm_illum == 1.0);
  CHECK(center.hd > 0.3);
  const IlluminationDepth far = model.evaluate(vec({4, 0, 0}));
  CHECK(far.hd == 0.0);
  CHECK(far.norm_illum > 1.0);
  CHECK(model.evaluate(vec({8, 0, 0})).norm_illum > far.norm_illum);
}

}
