#pragma once

#include "illumdepth/core.hpp"
#include "illumdepth/elliptical.hpp"
#include "illumdepth/ellipsoid.hpp"
#include "illumdepth/halfspace_depth.hpp"
#include "illumdepth/illumination_depth.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace illumdepth {

// Hill estimator on the radii ||X_i - center||, using the k largest.
// Throws DomainError unless 2 <= k < n, InsufficientTail if R_(n-k) = 0.
double hill_tail_index(const PointCloud& P, const Vector& center, int k);
double hill_tail_index(std::vector<double> radii, int k);

// (k / (n delta))^(1 / tail_index); InflationOverflow when not finite.
double inflation_factor(int k, int n, double delta, double tail_index);

enum class ExtremeKind { Inflate, Illuminate };

struct ExtremeOptions {
  Evaluation eval = Evaluation::automatic(2);
  int directions = 720;
  // Replaces the Hill estimate when set.
  std::optional<double> tail_index;
};

struct ExtremeRegionEstimate {
  DepthRegion base;  // S = P_{n,k/n}
  Vector center;     // halfspace median
  double tail_index = 0.0;
  double c = 1.0;
  ExtremeKind kind = ExtremeKind::Illuminate;
  // Inflate: c S about the center. Illuminate: hull of the traced boundary.
  Polytope region;
  RowMatrix boundary;  // traced along the option directions

  bool contains(const Vector& x) const;
};

ExtremeRegionEstimate extreme_region(const PointCloud& P, int k, double delta, ExtremeKind kind,
                                     const ExtremeOptions& opts = {});

// Central region P_delta of the spherical bivariate Cauchy law: the disk of
// radius tan(pi (1/2 - delta)) about the origin.
Ellipsoid true_cauchy_region(double delta);

// Largest |h_K(u) - h_B(u)| over `directions` evenly spaced unit vectors,
// K the convex hull of the boundary points and B the ball (d = 2).
double hausdorff_to_ball(const RowMatrix& boundary, const Vector& center, double radius, int directions = 720);

// Two-class discriminant built from illumination depth.
struct QdaOptions {
  double prior1 = 0.5;
  // Inside either cutoff region, decide by the larger depth.
  bool simplified_inside = false;
  Evaluation eval = Evaluation::automatic(2);
};

// 2 log(prior / volume) - distance^2
double qda_score(double prior, double volume, double distance);

class QdaModel {
 public:
  // F is the generator CDF shared by both classes (standard normal if null).
  static QdaModel fit(const PointCloud& P1, const PointCloud& P2, double delta,
                      std::shared_ptr<const SymmetricCdf> F = nullptr, const QdaOptions& opts = {});

  // 1 or 2; ties go to class 1.
  int classify(const Vector& x) const;
  std::vector<int> classify_many(const RowMatrix& Q) const;
  // Score of class j (1 or 2) in the quadratic rule.
  double score(int j, const Vector& x) const;
  // Estimated Mahalanobis distance to class j.
  double distance(int j, const Vector& x) const;

  const IlluminationDepthModel& class_model(int j) const;
  double volume(int j) const;
  double prior(int j) const;
  double delta() const { return delta_; }
  const SymmetricCdf& F() const { return *F_; }

 private:
  QdaModel(IlluminationDepthModel m1, IlluminationDepthModel m2, double delta,
           std::shared_ptr<const SymmetricCdf> F, QdaOptions opts);
  double distance(const IlluminationDepthModel& m, const IlluminationDepth& v) const;
  IlluminationDepthModel m1_, m2_;
  double delta_;
  double cutoff_quantile_;  // F^{-1}(1 - delta)
  std::shared_ptr<const SymmetricCdf> F_;
  QdaOptions opts_;
};

// Textbook QDA with sample means and covariances.
class ClassicalQda {
 public:
  static ClassicalQda fit(const PointCloud& P1, const PointCloud& P2, double prior1 = 0.5);
  int classify(const Vector& x) const;
  std::vector<int> classify_many(const RowMatrix& Q) const;
  double score(int j, const Vector& x) const;

 private:
  struct Class {
    Vector mean;
    Matrix precision;
    double logdet = 0.0;
    double prior = 0.5;
  };
  static Class estimate(const PointCloud& P, double prior);
  Class c1_, c2_;
};

// Refined depth by inflation: hd inside S = P_{n,k/n}, and
// (k/n) gamma(x)^(-tail_index) outside, gamma the gauge of S about the median.
class RefinedDepth {
 public:
  RefinedDepth(const PointCloud& P, int k, const Evaluation& eval = Evaluation::automatic(2));
  double operator()(const Vector& x) const;
  double tail_index() const { return tail_index_; }
  const Vector& center() const { return center_; }

 private:
  IlluminationDepthModel model_;  // cutoff k/n
  Vector center_;
  double tail_index_ = 0.0;
};

// Max-refined-depth classifier, depths weighted by the priors.
class RefinedDepthClassifier {
 public:
  RefinedDepthClassifier(const PointCloud& P1, const PointCloud& P2, int k, double prior1 = 0.5,
                         const Evaluation& eval = Evaluation::automatic(2));
  int classify(const Vector& x) const;
  std::vector<int> classify_many(const RowMatrix& Q) const;

 private:
  RefinedDepth d1_, d2_;
  double prior1_;
};

}  // namespace illumdepth
