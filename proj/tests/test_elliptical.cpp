#include <doctest.h>

#include "illumdepth/elliptical.hpp"
#include "illumdepth/random.hpp"
#include "illumdepth/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

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

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t s = 0; s < idx.size();) {
    std::size_t e = s + 1;
    while (e < idx.size() && v[idx[e]] == v[idx[s]]) ++e;
    for (std::size_t j = s; j < e; ++j) r[idx[j]] = 0.5 * (s + e - 1);
    s = e;
  }
  return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n, mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) { return pearson(ranks(a), ranks(b)); }

}  // namespace

TEST_SUITE("elliptical_estimators") {

TEST_CASE("symmetric step cdf") {
  const StepCdf two = StepCdf::symmetrized({-1.0});
  CHECK(two.cdf(0.0) == 0.5);
  CHECK(two.cdf(-1.0) == 0.5);
  CHECK(two.left_limit(-1.0) == 0.0);
  CHECK(two.cdf(1.0) == 1.0);
  Rng rng(1);
  std::vector<double> v(101);
  for (double& x : v) x = rng.normal();
  const StepCdf F = StepCdf::symmetrized(v);
  for (int i = 0; i < 200; ++i) {
    const double t = 3 * rng.normal();
    CHECK(F.cdf(t) + F.left_limit(-t) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(F.cdf(F.quantile(0.01 + 0.98 * rng.uniform())) >= 0.01);
  }
  for (int k = 1; k < 202; ++k) {
    const double p = (k - 0.5) / 202.0;
    CHECK(F.quantile(p) == -F.quantile(1 - p));
    CHECK(F.cdf(F.quantile(p)) >= p);
    CHECK(F.left_limit(F.quantile(p)) < p);
  }
}

TEST_CASE("robust whitening") {
  const PointCloud cross = PointCloud::from_rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  const Whitening wc = robust_whiten(cross, 0.25);
  CHECK(wc.mu.norm() < 1e-12);
  CHECK(wc.sigma.determinant() == doctest::Approx(1.0).epsilon(1e-12));

  const PointCloud G = normal_cloud(2000, 2, 2);
  const Whitening w = robust_whiten(G, 0.1);
  CHECK((w.sigma - Matrix::Identity(2, 2)).norm() < 0.1);
  CHECK(std::abs(w.sigma.determinant() - 1.0) <= 1e-9);

  Matrix A(2, 2);
  A << 1.5, 0.7, -0.4, 0.9;
  const Vector b = vec({2, -3});
  const PointCloud P = normal_cloud(300, 2, 3);
  const Whitening w1 = robust_whiten(P, 0.2);
  const Whitening w2 = robust_whiten(P.transformed(A, b), 0.2);
  const Matrix S = A * w1.sigma * A.transpose();
  CHECK((w2.mu - (A * w1.mu + b)).norm() < 1e-9);
  CHECK((w2.sigma - S / std::pow(S.determinant(), 0.5)).norm() < 1e-9);
}

TEST_CASE("estimated F is close to the normal cdf") {
  const PointCloud G = normal_cloud(2000, 2, 4);
  const Whitening w = robust_whiten(G, 0.1);
  const StepCdf F = estimate_F(G, w);
  double sup = 0.0;
  for (double s : F.support())
    sup = std::max({sup, std::abs(F.cdf(s) - special::normal_cdf(s)), std::abs(F.left_limit(s) - special::normal_cdf(s))});
  CHECK(sup < 0.05);
  CHECK(F.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("Fisher consistency at the population") {
  Matrix S(2, 2);
  S << 2.0, 0.6, 0.6, 0.5;
  const EllipticalPopulation pop{Ellipsoid(vec({1, -1}), S), std::make_shared<NormalCdf>()};
  Rng rng(5);
  for (double alpha : {0.1, 0.25, 1.0 / 3.0}) {
    for (int i = 0; i < 200; ++i) {
      const Vector x = pop.shape.center() + 2.5 * pop.shape.factor() * rng.normal_vector(2);
      const double dist = pop.shape.mahalanobis(x);
      CHECK(std::abs(pop.m_alpha(x, alpha) - dist) <= 1e-9 * std::max(1.0, dist));
      CHECK(std::abs(pop.rhd(x, alpha) - pop.hd(x)) <= 1e-12);
    }
  }
  // polytope region close to the population ellipsoid
  const double alpha = 0.2;
  const double r = pop.region_radius(alpha);
  const Polytope fine = discretize_ellipsoid(Ellipsoid(pop.shape.center(), S * r * r), 20000);
  for (double t : {1.5, 3.0, 6.0}) {
    const Vector x = pop.shape.center() + t * pop.shape.factor() * vec({0.6, 0.8});
    const double norm = illumination(x, fine).norm_illum;
    CHECK(std::abs(m_alpha_value(0.0, false, norm, 2, NormalCdf(), alpha) - t) < 1e-3 * t);
  }
}

TEST_CASE("m_alpha and rhd on a normal sample") {
  for (std::uint64_t seed : {7, 8, 9}) {
    const ECModel model = ECModel::fit(normal_cloud(2000, 2, seed), 1.0 / 3.0);
    for (double a : {0.3, 2.0, 4.4}) {
      const Vector x = 3.0 * vec({std::cos(a), std::sin(a)});
      const double m = model.m_alpha(x);
      CHECK(m >= 2.5);
      CHECK(m <= 3.5);
      const double r = model.rhd(x);
      const double target = special::normal_cdf(-3.0);
      CHECK(r >= target / 3);
      CHECK(r <= target * 3);
    }
  }
}

TEST_CASE("branches, seam and monotonicity") {
  const PointCloud P = normal_cloud(500, 2, 9);
  const double alpha = 0.2;
  const ECModel model = ECModel::fit(P, alpha);
  const IlluminationDepthModel& dm = model.depth_model();
  Rng rng(10);
  for (int i = 0; i < 300; ++i) {
    const Vector x = 2.0 * rng.normal_vector(2);
    const IlluminationDepth e = dm.evaluate(x);
    const double r = model.rhd(x);
    if (e.depth_count >= dm.level()) {
      CHECK(r == e.hd);
    } else {
      CHECK(r >= 0.0);
      CHECK(r <= alpha + 1e-12);
    }
    CHECK(model.m_alpha(x) >= 0.0);
  }
  // straddle the region boundary
  const Polytope& R = dm.region().region;
  const Vector c = R.barycenter();
  const RowMatrix edge = level_set_boundary(R, 1.0, sphere_points(2, 24));
  for (int i = 0; i < edge.rows(); ++i) {
    const Vector u = (edge.row(i).transpose() - c).normalized();
    const Vector in = edge.row(i).transpose() - 5e-7 * u, out = edge.row(i).transpose() + 5e-7 * u;
    CHECK(std::abs(model.m_alpha(in) - model.m_alpha(out)) < 0.1);
    CHECK(std::abs(model.rhd(in) - model.rhd(out)) < 0.03);
  }
  const Vector med = model.mu();
  for (int k = 0; k < 40; ++k) {
    const double a = 2 * std::numbers::pi * k / 40;
    const Vector u = vec({std::cos(a), std::sin(a)});
    double prev_r = 2.0, prev_m = -1.0;
    for (int s = 0; s <= 30; ++s) {
      const Vector x = med + 0.15 * s * u;
      const double r = model.rhd(x), m = model.m_alpha(x);
      CHECK(r <= prev_r + 1e-12);
      CHECK(m >= prev_m - 1e-12);
      prev_r = r;
      prev_m = m;
    }
  }
}

TEST_CASE("level sets of M_alpha are convex") {
  const ECModel model = ECModel::fit(normal_cloud(400, 2, 11), 1.0 / 3.0);
  Rng rng(12);
  for (double delta : {0.8, 1.5, 3.0}) {
    int pairs = 0;
    while (pairs < 100) {
      const Vector a = 2.5 * rng.normal_vector(2), b = 2.5 * rng.normal_vector(2);
      if (model.m_alpha(a) > delta || model.m_alpha(b) > delta) continue;
      CHECK(model.m_alpha(0.5 * (a + b)) <= delta + 1e-9);
      ++pairs;
    }
  }
}

TEST_CASE("affine invariance of m_alpha") {
  const PointCloud P = normal_cloud(300, 2, 13);
  const double alpha = 0.25;
  // known F: invariance for any nonsingular map
  Matrix A(2, 2);
  A << 1.3, -0.8, 0.5, 2.0;
  const Vector b = vec({-4, 7});
  const auto Phi = std::make_shared<NormalCdf>();
  const Evaluation ev = Evaluation::automatic(2);
  const ECModel m1 = ECModel::fit(P, alpha, ev, Phi);
  const ECModel m2 = ECModel::fit(P.transformed(A, b), alpha, ev, Phi);
  // estimated F: invariant under unit-determinant signed permutations,
  // scaled by |det|^(1/d) otherwise
  Matrix B(2, 2);
  B << 0, -1, 1, 0;
  const ECModel f1 = ECModel::fit(P, alpha);
  const ECModel f2 = ECModel::fit(P.transformed(B, b), alpha);
  const ECModel f3 = ECModel::fit(P.transformed(2.5 * B, b), alpha);
  Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const Vector x = 3.0 * rng.normal_vector(2);
    CHECK(std::abs(m1.m_alpha(x) - m2.m_alpha(A * x + b)) <= 1e-7 * std::max(1.0, m1.m_alpha(x)));
    CHECK(std::abs(m1.rhd(x) - m2.rhd(A * x + b)) <= 1e-9);
    CHECK(std::abs(f1.m_alpha(x) - f2.m_alpha(B * x + b)) <= 1e-7 * std::max(1.0, f1.m_alpha(x)));
    CHECK(std::abs(2.5 * f1.m_alpha(x) - f3.m_alpha(2.5 * B * x + b)) <= 1e-7 * std::max(1.0, f1.m_alpha(x)));
    CHECK(std::abs(f1.rhd(x) - f3.rhd(2.5 * B * x + b)) <= 1e-9);
  }
}

TEST_CASE("breakdown of the M_alpha level sets") {
  const PointCloud P = normal_cloud(200, 2, 15);
  const double alpha = 1.0 / 3.0;
  const int n = P.n();
  const Vector far = vec({50, 50});
  auto contaminated = [&](int m) {
    RowMatrix X(n + m, 2);
    X.topRows(n) = P.matrix();
    for (int i = 0; i < m; ++i) X.row(n + i) = far.transpose() + Eigen::RowVector2d(0.01 * (i % 10), 0.01 * (i / 10));
    return PointCloud(std::move(X));
  };
  // 10% and 40% contamination
  const ECModel held = ECModel::fit(contaminated(n / 9), alpha);
  CHECK(held.m_alpha(far) > 5.0);
  CHECK(held.depth_model().region().region.barycenter().norm() < 1.0);
  // the cutoff region, hence every level set, leaves the bulk
  const PointCloud heavy = contaminated(2 * n / 3);
  CHECK(IlluminationDepthModel(heavy, alpha).region().region.barycenter().norm() > 10.0);
  CHECK_THROWS_AS(ECModel::fit(heavy, alpha), SingularScatter);
}

TEST_CASE("tie-break cutoff") {
  const PointCloud P = normal_cloud(400, 2, 16);
  const std::vector<int> counts = sample_depth_counts(P);
  std::vector<int> sorted = counts;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const Polytope H = convex_hull(P.matrix());
  const Vector v = H.vertex(0);
  CHECK(depth_count(v, P) == 1);
  CHECK(tiebreak_cutoff(v, P) == doctest::Approx(sorted[199] / 400.0));
  int deepest = 0;
  for (int i = 1; i < P.n(); ++i)
    if (counts[i] > counts[deepest]) deepest = i;
  const double top = tiebreak_cutoff(P.point(deepest), P);
  CHECK(top >= counts[deepest] / 400.0);
  CHECK(top <= sorted[0] / 400.0);
  for (int i = 0; i < P.n(); i += 7) {
    int strictly = 0;
    for (int c : counts) strictly += c > counts[i] ? 1 : 0;
    if (strictly >= 2) CHECK(tiebreak_level(counts[i], counts) > counts[i]);
  }
}

TEST_CASE("centre-outward ranking") {
  const PointCloud P = normal_cloud(1000, 2, 17);
  const IlluminationDepthModel model(P, 0.2);
  const CentreOutwardRanking r = rank_centre_outward(P.matrix(), model);
  std::vector<double> rank(P.n()), radius(P.n());
  for (int i = 0; i < P.n(); ++i) {
    rank[i] = r.rank[i];
    radius[i] = P.point(i).norm();
  }
  CHECK(spearman(rank, radius) > 0.9);
  for (int j = 1; j < P.n(); ++j)
    CHECK(r.depth[r.order[j - 1]].depth_count >= r.depth[r.order[j]].depth_count);
  int broken = 0;
  for (char t : r.tie_broken) broken += t;
  CHECK(broken > 0);

  // hull vertices share depth 1/n; larger illumination ranks as more extreme
  const Polytope H = convex_hull(P.matrix());
  for (int a = 0; a + 1 < H.num_vertices(); ++a) {
    const Vector x = H.vertex(a), y = H.vertex(a + 1);
    RowMatrix Q(2, 2);
    Q.row(0) = x.transpose();
    Q.row(1) = y.transpose();
    const CentreOutwardRanking q = rank_centre_outward(Q, model);
    const double ix = illumination(x, model.region()).norm_illum, iy = illumination(y, model.region()).norm_illum;
    if (ix != iy) CHECK((q.rank[0] > q.rank[1]) == (ix > iy));
  }
  // inside points with distinct depth: order by depth alone
  RowMatrix inner(3, 2);
  inner << 0.05, 0.0, 0.5, 0.3, 0.9, -0.4;
  const CentreOutwardRanking in = rank_centre_outward(inner, model);
  std::vector<int> by_depth{0, 1, 2};
  std::stable_sort(by_depth.begin(), by_depth.end(),
                   [&](int a, int b) { return in.depth[a].depth_count > in.depth[b].depth_count; });
  if (in.depth[0].depth_count != in.depth[1].depth_count && in.depth[1].depth_count != in.depth[2].depth_count)
    CHECK(in.order == by_depth);
}

TEST_CASE("model text form") {
  const ECModel model = ECModel::fit(normal_cloud(100, 2, 18), 0.25);
  const std::string text = model.to_text();
  CHECK(text.rfind("2 0.25", 0) == 0);
  CHECK(text.find("400\n") != std::string::npos);
}

TEST_CASE("quantile precondition") {
  const PointCloud P = normal_cloud(100, 2, 19);
  CHECK_THROWS_AS(m_alpha_value(0.0, false, 2.0, 2, NormalCdf(), 0.6), QuantileUndefined);
  const CallbackCdf logistic([](double t) { return 1.0 / (1.0 + std::exp(-t)); });
  CHECK(logistic.quantile(0.75) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

}
