#include <doctest.h>

#include "illumdepth/bench.hpp"
#include "illumdepth/distributions.hpp"
#include "illumdepth/random.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace illumdepth;

namespace {

// Kolmogorov-Smirnov statistic of a sample against a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> x, Cdf cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double D = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = cdf(x[i]);
    D = std::max({D, F - i / n, (i + 1) / n - F});
  }
  return D;
}

std::vector<double> radii(const RowMatrix& X) {
  std::vector<double> r(X.rows());
  for (int i = 0; i < X.rows(); ++i) r[i] = X.row(i).norm();
  return r;
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

double variance(const std::vector<double>& v) {
  double m = 0.0;
  for (double a : v) m += a;
  m /= v.size();
  double s = 0.0;
  for (double a : v) s += (a - m) * (a - m);
  return s / (v.size() - 1);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("illumdepth_bench_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

constexpr double kKsCritical = 0.0052;  // 1% level at n = 1e5

ExperimentConfig small_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.threads = 1;
  if (e == Experiment::Tiebreak) {
    c.n = 200;
    c.reps = 3;
  } else if (e == Experiment::Extreme) {
    c.n = 300;
    c.k = 45;
    c.reps = 3;
  } else {
    c.n = 200;
    c.k = 30;
    c.reps = 2;
    c.contamination = {0.0, 0.1};
    c.test_per_class = 200;
    c.outsider_pool = 300;
  }
  return c;
}

}  // namespace

TEST_SUITE("cli_bench") {

TEST_CASE("cauchy radius law") {
  Rng rng(101);
  const std::vector<double> r = radii(sample_cauchy2d(100000, rng));
  CHECK(ks_statistic(r, [](double t) { return 1.0 - 1.0 / std::sqrt(1.0 + t * t); }) < kKsCritical);
  CHECK(median(r) == doctest::Approx(std::sqrt(3.0)).epsilon(0.02));
  const double tail = std::count_if(r.begin(), r.end(), [](double t) { return t > 100.0; }) / 1e5;
  CHECK(tail == doctest::Approx(1.0 / std::sqrt(1.0 + 1e4)).epsilon(0.1));
}

TEST_CASE("he-einmahl radius law and shape") {
  Rng rng(102);
  const RowMatrix Y = sample_he_einmahl(100000, rng);
  RowMatrix Z = Y;
  Z.col(0) /= 2.0;
  const std::vector<double> r = radii(Z);
  CHECK(ks_statistic(r, [](double t) { return 1.0 - 1.0 / std::sqrt(1.0 + std::pow(t, 6)); }) < kKsCritical);
  CHECK(median(r) == doctest::Approx(std::pow(3.0, 1.0 / 6.0)).epsilon(0.02));
  // Trimmed at the 0.99 quantile of the spherical radius.
  std::vector<double> sorted_r = r;
  std::nth_element(sorted_r.begin(), sorted_r.begin() + 99000, sorted_r.end());
  const double cut = sorted_r[99000];
  std::vector<double> y1, y2;
  for (int i = 0; i < Y.rows(); ++i)
    if (r[i] <= cut) {
      y1.push_back(Y(i, 0));
      y2.push_back(Y(i, 1));
    }
  CHECK(variance(y1) / variance(y2) == doctest::Approx(4.0).epsilon(0.05));
  std::vector<double> z2(Y.rows());
  for (int i = 0; i < Y.rows(); ++i) z2[i] = Y(i, 1);
  HeEinmahlMarginalCdf F;
  CHECK(ks_statistic(z2, [&](double t) { return F.cdf(t); }) < kKsCritical);
}

TEST_CASE("he-einmahl density matches sample histogram") {
  Rng rng(103);
  const int n = 100000;
  const RowMatrix Y = sample_he_einmahl(n, rng);
  const int nx = 6, ny = 6, sub = 24;
  const double x0 = -3.0, x1 = 3.0, y0 = -1.5, y1 = 1.5;
  const double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
  std::vector<int> counts(nx * ny + 1, 0);
  for (int i = 0; i < n; ++i) {
    const int a = static_cast<int>(std::floor((Y(i, 0) - x0) / hx));
    const int b = static_cast<int>(std::floor((Y(i, 1) - y0) / hy));
    ++counts[(a >= 0 && a < nx && b >= 0 && b < ny) ? a * ny + b : nx * ny];
  }
  std::vector<double> expected(nx * ny + 1, 0.0);
  double inside = 0.0;
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b) {
      double mass = 0.0;
      for (int s = 0; s < sub; ++s)
        for (int t = 0; t < sub; ++t)
          mass += he_einmahl_density(x0 + hx * (a + (s + 0.5) / sub), y0 + hy * (b + (t + 0.5) / sub));
      mass *= hx * hy / (sub * sub);
      expected[a * ny + b] = n * mass;
      inside += mass;
    }
  expected[nx * ny] = n * (1.0 - inside);
  double chi2 = 0.0;
  for (int c = 0; c <= nx * ny; ++c) chi2 += (counts[c] - expected[c]) * (counts[c] - expected[c]) / expected[c];
  CHECK(chi2 < 67.99);  // 0.999 quantile of chi-square with 36 degrees of freedom
}

TEST_CASE("normal sampler with location and scale") {
  Matrix A(2, 2);
  A << 2.0, 0.0, 0.5, 1.0;
  Vector mu(2);
  mu << 4.0, -1.0;
  Rng rng(104);
  const int n = 100000;
  const RowMatrix X = sample_normal(n, mu, A, rng);
  const Vector mean = X.colwise().mean().transpose();
  const Matrix cov = A * A.transpose();
  for (int j = 0; j < 2; ++j) CHECK(std::abs(mean[j] - mu[j]) < 4.0 * std::sqrt(cov(j, j) / n));
  const RowMatrix C = X.rowwise() - mean.transpose();
  const Matrix S = C.transpose() * C / (n - 1);
  CHECK((S - cov).norm() < 0.05);
  Rng again(104);
  CHECK(sample_normal(n, mu, A, again) == X);
  Rng other(104);
  CHECK_THROWS_AS(sample_normal(3, Vector::Zero(3), A, other), DimensionMismatch);
}

TEST_CASE("average ranks and spearman") {
  const std::vector<double> r = average_ranks({10, 20, 20, 30, 5});
  CHECK(r == std::vector<double>{2, 3.5, 3.5, 5, 1});
  CHECK(spearman({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}) == doctest::Approx(0.8));
  CHECK(spearman({1, 2, 3}, {30, 20, 10}) == doctest::Approx(-1.0));
  CHECK(spearman({1, 2, 3}, {0.1, 5, 100}) == doctest::Approx(1.0));
  // Ties: Pearson on the average ranks {1,2.5,2.5,4} and {1,2,3,4}.
  CHECK(spearman({1, 2, 2, 3}, {1, 2, 3, 4}) == doctest::Approx(4.5 / std::sqrt(4.5 * 5.0)));
  CHECK(std::isnan(spearman({1, 1, 1}, {1, 2, 3})));
  CHECK_THROWS_AS(spearman({1, 2}, {1}), DimensionMismatch);
}

TEST_CASE("mean and standard deviation skip nan") {
  const MeanSd s = mean_sd({1.0, 3.0, std::nan(""), 5.0});
  CHECK(s.count == 3);
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.sd == doctest::Approx(2.0));
  CHECK(std::isnan(mean_sd({}).mean));
}

TEST_CASE("experiment names round trip") {
  for (Experiment e : {Experiment::Tiebreak, Experiment::Extreme, Experiment::ClassifyNormalLocScale,
                       Experiment::ClassifyNormalLoc, Experiment::ClassifyEllipticalLocScale,
                       Experiment::ClassifyEllipticalLoc})
    CHECK(parse_experiment(experiment_name(e)) == e);
  CHECK_THROWS_AS(parse_experiment("classify"), ConfigError);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  auto rejects = [](auto mutate) {
    ExperimentConfig bad;
    mutate(bad);
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  };
  rejects([](ExperimentConfig& b) { b.reps = 0; });
  rejects([](ExperimentConfig& b) { b.n = 3; });
  rejects([](ExperimentConfig& b) { b.d = 1; });
  rejects([](ExperimentConfig& b) {
    b.experiment = Experiment::Extreme;
    b.d = 3;
  });
  rejects([](ExperimentConfig& b) {
    b.experiment = Experiment::Extreme;
    b.k = 500;
  });
  rejects([](ExperimentConfig& b) {
    b.experiment = Experiment::Extreme;
    b.delta = 0.2;
  });
  rejects([](ExperimentConfig& b) { b.delta = 0.0; });
  rejects([](ExperimentConfig& b) { b.contamination = {0.0, 1.0}; });
  rejects([](ExperimentConfig& b) { b.contamination.clear(); });
  rejects([](ExperimentConfig& b) { b.offset = Vector::Zero(3); });
  rejects([](ExperimentConfig& b) { b.tiebreak_deltas = {0.0}; });
  rejects([](ExperimentConfig& b) { b.directions = 4; });
  rejects([](ExperimentConfig& b) { b.threads = -1; });
}

TEST_CASE("replication streams") {
  Rng a = replication_rng(7, 3), b = replication_rng(7, 3), c = replication_rng(7, 4), e = replication_rng(8, 3);
  const double va = a.uniform();
  CHECK(va == b.uniform());
  CHECK(va != c.uniform());
  CHECK(va != e.uniform());
  std::vector<int> seen(20, 0);
  for_each_replication(20, 4, [&](int r) { ++seen[r]; });
  CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
  CHECK_THROWS_AS(for_each_replication(5, 2, [](int r) {
                    if (r == 3) throw DomainError("boom");
                  }),
                  DomainError);
}

TEST_CASE("tiebreak run") {
  const ExperimentConfig c = small_config(Experiment::Tiebreak);
  const TiebreakReport t = run_tiebreak(c);
  REQUIRE(t.subsets.size() == 6);
  CHECK(t.subsets.front() == "hd<=0.5");
  CHECK(t.subsets.back() == "hull");
  REQUIRE(t.rows.size() == 18);
  for (const auto& r : t.rows) {
    if (r.subset == "hd<=0.5") CHECK(r.count == c.n);
    if (r.count >= 2 && !std::isnan(r.cor_illumination)) CHECK(std::abs(r.cor_illumination) <= 1.0 + 1e-12);
  }
  // Hull points all share depth count 1.
  for (const auto& r : t.rows)
    if (r.subset == "hull") CHECK(std::isnan(r.cor_depth));
  CHECK(t.summary_count("hull").mean > 5.0);
  CHECK(t.summary_illumination("hull").mean > 0.5);
  CHECK(t.hull_rank_correct.size() == t.hull_rank_illumination.size());
  CHECK(!t.hull_rank_correct.empty());
  CHECK(tiebreak_table(t).find("hull") != std::string::npos);
}

TEST_CASE("extreme run") {
  const ExperimentConfig c = small_config(Experiment::Extreme);
  const ExtremeReport e = run_extreme(c);
  REQUIRE(e.rows.size() == 3);
  CHECK(e.true_radius == doctest::Approx(std::tan(std::numbers::pi * (0.5 - 1.0 / 300))));
  for (const auto& r : e.rows) {
    CHECK(r.hausdorff_illumination >= 0.0);
    CHECK(r.hausdorff_inflation >= 0.0);
    CHECK(r.c == doctest::Approx(std::pow(45.0, 1.0 / r.tail_index)));
  }
  CHECK(e.win_fraction() >= 0.0);
  CHECK(e.win_fraction() <= 1.0);
  CHECK(e.sample.rows() == 300);
  CHECK(e.illumination_boundary.rows() == c.directions);
}

TEST_CASE("classification run") {
  for (Experiment s : {Experiment::ClassifyNormalLocScale, Experiment::ClassifyEllipticalLoc}) {
    const ExperimentConfig c = small_config(s);
    const ClassifyReport k = run_classify(c);
    CHECK(k.scenario == s);
    if (s == Experiment::ClassifyNormalLocScale)
      CHECK(k.delta == doctest::Approx(normal_half_content_delta()));
    else
      CHECK(k.delta == doctest::Approx(he_einmahl_half_content_delta()));
    REQUIRE(k.rows.size() == 4);
    CHECK(k.levels() == std::vector<double>{0.0, 0.1});
    CHECK(k.rows[0].contamination == 0.0);
    CHECK(k.rows[3].contamination == 0.1);
    for (const auto& r : k.rows) {
      for (double v : {r.illumination, r.classical, r.refined}) {
        CHECK(v >= 0.0);
        CHECK(v < 0.5);
      }
      CHECK(r.outsiders > 0);
      CHECK(r.outsiders <= 2 * c.outsider_pool);
    }
    CHECK(classify_table(k).find("10%") != std::string::npos);
  }
  ExperimentConfig wrong = small_config(Experiment::Extreme);
  CHECK_THROWS_AS(run_classify(wrong), ConfigError);
}

TEST_CASE("contamination degrades classical qda more") {
  ExperimentConfig c = small_config(Experiment::ClassifyNormalLocScale);
  c.n = 300;
  c.reps = 3;
  c.test_per_class = 500;
  const ClassifyReport k = run_classify(c);
  const double ill = k.summary(0.1, &ClassifyRow::illumination).mean - k.summary(0.0, &ClassifyRow::illumination).mean;
  const double qda = k.summary(0.1, &ClassifyRow::classical).mean - k.summary(0.0, &ClassifyRow::classical).mean;
  CHECK(qda > ill);
}

TEST_CASE("output is byte identical across thread counts") {
  ExperimentConfig c = small_config(Experiment::Tiebreak);
  const auto d1 = scratch_dir("t1"), d2 = scratch_dir("t2");
  write_tiebreak(run_tiebreak(c), d1.string());
  c.threads = 3;
  write_tiebreak(run_tiebreak(c), d2.string());
  for (const char* f : {"tiebreak_reps.csv", "tiebreak_summary.csv", "tiebreak_hull.svg"}) {
    CAPTURE(f);
    CHECK(!slurp(d1 / f).empty());
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }

  ExperimentConfig k = small_config(Experiment::ClassifyNormalLoc);
  k.reps = 1;
  const auto k1 = scratch_dir("k1"), k2 = scratch_dir("k2");
  write_classify(run_classify(k), k1.string());
  write_classify(run_classify(k), k2.string());
  for (const char* f : {"classify-normal-loc_reps.csv", "classify-normal-loc_summary.csv"}) {
    CAPTURE(f);
    CHECK(slurp(k1 / f) == slurp(k2 / f));
  }
  CHECK(slurp(k1 / "classify-normal-loc_reps.csv").rfind("contamination,rep,illumination,qda,refined", 0) == 0);

  const ExperimentConfig e = small_config(Experiment::Extreme);
  const auto e1 = scratch_dir("e1");
  write_extreme(run_extreme(e), e1.string());
  CHECK(std::filesystem::exists(e1 / "extreme_reps.csv"));
  CHECK(slurp(e1 / "extreme_regions.svg").find("<svg") == 0);
}

TEST_CASE("replications do not depend on the replication count") {
  ExperimentConfig c = small_config(Experiment::Extreme);
  c.reps = 2;
  const ExtremeReport few = run_extreme(c);
  c.reps = 4;
  const ExtremeReport many = run_extreme(c);
  for (int r = 0; r < 2; ++r) {
    CHECK(few.rows[r].hausdorff_illumination == many.rows[r].hausdorff_illumination);
    CHECK(few.rows[r].tail_index == many.rows[r].tail_index);
  }
}

TEST_CASE("points csv round trip and errors") {
  const auto dir = scratch_dir("csv");
  std::filesystem::create_directories(dir);
  RowMatrix X(3, 2);
  X << 1.5, -2.0, 0.125, 1e-7, 3.0, 4.0;
  write_points_csv((dir / "p.csv").string(), X, {"x", "y"});
  CHECK(slurp(dir / "p.csv").rfind("x,y\n", 0) == 0);
  CHECK(read_points_csv((dir / "p.csv").string()) == X);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir / name) << body;
    return (dir / name).string();
  };
  CHECK_THROWS_AS(read_points_csv(write("bad.csv", "x,y\n1,abc\n")), ConfigError);
  CHECK_THROWS_AS(read_points_csv(write("ragged.csv", "x,y\n1,2\n3\n")), ConfigError);
  CHECK_THROWS_AS(read_points_csv(write("empty.csv", "x,y\n")), ConfigError);
  CHECK_THROWS_AS(read_points_csv((dir / "missing.csv").string()), ConfigError);
}

}
