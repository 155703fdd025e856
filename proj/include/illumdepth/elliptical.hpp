#pragma once

#include "illumdepth/core.hpp"
#include "illumdepth/ellipsoid.hpp"
#include "illumdepth/halfspace_depth.hpp"
#include "illumdepth/illumination_depth.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace illumdepth {

// Univariate CDF symmetric about 0.
class SymmetricCdf {
 public:
  virtual ~SymmetricCdf() = default;
  virtual double cdf(double t) const = 0;
  // Generalized inverse inf{t : F(t) >= p}, p in (0, 1).
  virtual double quantile(double p) const = 0;
};

class NormalCdf final : public SymmetricCdf {
 public:
  double cdf(double t) const override;
  double quantile(double p) const override;
};

// Continuous CDF given as a callable; quantiles by bracketing and bisection.
class CallbackCdf final : public SymmetricCdf {
 public:
  explicit CallbackCdf(std::function<double(double)> cdf) : cdf_(std::move(cdf)) {}
  double cdf(double t) const override { return cdf_(t); }
  double quantile(double p) const override;

 private:
  std::function<double(double)> cdf_;
};

// Right-continuous step CDF with equal atoms on a sorted support.
class StepCdf final : public SymmetricCdf {
 public:
  StepCdf() = default;
  // ECDF of the values together with their negations.
  static StepCdf symmetrized(const std::vector<double>& values);

  double cdf(double t) const override;
  double left_limit(double t) const;
  // s_(ceil(M p)) on the sorted support of size M.
  double quantile(double p) const override;
  const std::vector<double>& support() const { return support_; }

 private:
  std::vector<double> support_;
};

struct Whitening {
  Vector mu;     // halfspace median
  Matrix sigma;  // depth-trimmed covariance, unit determinant
};

// mu = barycenter of the deepest region; sigma = covariance of the sample
// points inside P_{n,alpha}, scaled to det 1.
Whitening robust_whiten(const IlluminationDepthModel& model);
Whitening robust_whiten(const PointCloud& P, double alpha, const Evaluation& eval);
Whitening robust_whiten(const PointCloud& P, double alpha);

// Symmetrized pooled ECDF of the coordinates of sigma^{-1/2}(X_i - mu)
// (symmetric square root).
StepCdf estimate_F(const PointCloud& P, const Whitening& w);

// M_alpha and the refined depth from the two depth components.
// depth_inside: whether hd reaches the cutoff (exact count comparison).
double m_alpha_value(double hd, bool depth_inside, double norm_illum, int d, const SymmetricCdf& F, double alpha);
double rhd_value(double hd, bool depth_inside, double norm_illum, int d, const SymmetricCdf& F, double alpha);

// Fitted elliptical model: depth model at alpha, whitening and F.
class ECModel {
 public:
  // F estimated from the sample.
  static ECModel fit(const PointCloud& P, double alpha, const Evaluation& eval);
  static ECModel fit(const PointCloud& P, double alpha);
  // Known reference F replaces the estimate.
  static ECModel fit(const PointCloud& P, double alpha, const Evaluation& eval, std::shared_ptr<const SymmetricCdf> F);

  const IlluminationDepthModel& depth_model() const { return depth_; }
  const Vector& mu() const { return whitening_.mu; }
  const Matrix& sigma() const { return whitening_.sigma; }
  const SymmetricCdf& F() const { return *F_; }
  double alpha() const { return depth_.alpha(); }
  int d() const { return depth_.sample().d(); }
  // Volume of the cutoff region.
  double region_volume() const { return depth_.region().region.volume(); }

  double m_alpha(const Vector& x) const;
  double rhd(const Vector& x) const;
  // Text form: d, mu, sigma rows, then the F support (step models only).
  std::string to_text() const;

 private:
  ECModel(IlluminationDepthModel depth, Whitening w, std::shared_ptr<const SymmetricCdf> F);
  IlluminationDepthModel depth_;
  Whitening whitening_;
  std::shared_ptr<const SymmetricCdf> F_;
};

// Elliptical law EC(mu, Sigma, F) with closed-form depth and regions.
struct EllipticalPopulation {
  Ellipsoid shape;  // center mu, scatter Sigma
  std::shared_ptr<const SymmetricCdf> F;

  double hd(const Vector& x) const;
  // Radius multiplier of the depth region: P_alpha = E(mu, Sigma r^2).
  double region_radius(double alpha) const;
  double norm_illum(const Vector& x, double alpha) const;
  double m_alpha(const Vector& x, double alpha) const;
  double rhd(const Vector& x, double alpha) const;
};

// Largest depth level delta such that P_{n,delta} holds at least half of the
// k observations with depth >= depth_count; raised to the next deeper sample
// level when that would not exceed depth_count. Returns a count.
int tiebreak_level(int depth_count, const std::vector<int>& sample_counts);
double tiebreak_cutoff(const Vector& x, const PointCloud& P, const DepthOptions& opts = {});

// norm_illum of x on the region at its tie-break level (1 when that region
// is degenerate or does not exclude x).
double tiebreak_illumination(const Vector& x, int depth_count, const RegionFamily& family,
                             const std::vector<int>& sample_counts);

struct CentreOutwardRanking {
  std::vector<int> order;                 // query indices, most central first
  std::vector<int> rank;                  // rank[i] = position of query i
  std::vector<char> tie_broken;           // resolved by the per-point cutoff
  std::vector<IlluminationDepth> depth;   // per query
};

// Order by (depth desc, illumination asc); remaining ties by illumination on
// the per-point tie-break region; stable on exact ties.
CentreOutwardRanking rank_centre_outward(const RowMatrix& Q, const IlluminationDepthModel& model);
CentreOutwardRanking rank_centre_outward(const RowMatrix& Q, const PointCloud& P, double alpha);

}  // namespace illumdepth
