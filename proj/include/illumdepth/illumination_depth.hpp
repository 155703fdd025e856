#pragma once

#include "illumdepth/core.hpp"
#include "illumdepth/halfspace_depth.hpp"
#include "illumdepth/polytope.hpp"

#include <memory>
#include <vector>

namespace illumdepth {

struct Illumination {
  double ill = 0.0;         // vol(conv(K u {x}))
  double norm_illum = 1.0;  // ill / vol(K)
};

// Volume added to K by x: vol(conv(K u {x})) - vol(K), without cancellation.
double illumination_excess(const Polytope& K, const Vector& x);

// Throws DegenerateRegion when K has volume 0.
Illumination illumination(const Vector& x, const Polytope& K);
Illumination illumination(const Vector& x, const DepthRegion& R);

struct IlluminationDepth {
  double hd = 0.0;
  double norm_illum = 1.0;
  double alpha_used = 0.0;
  int depth_count = 0;
};

// Centre-outward comparison of two depth vectors: larger hd first; among
// points below the cutoff, smaller illumination first. Returns -1 when a is
// more central, 1 when b is, 0 on a tie.
int compare_centrality(const IlluminationDepth& a, const IlluminationDepth& b);

// Cutoff presets when the maximal depth is unknown.
inline constexpr double kAlphaHalfspaceSymmetric = 0.5;
inline constexpr double kAlphaLogConcave = 0.36787944117144233;  // exp(-1)
// Pi / (1 + Pi): the cutoff with the best breakdown.
double robust_alpha(double pi_n);

// Illumination depth of one sample at one cutoff. Holds the sample's region
// family, so further cutoffs on the same sample reuse its preprocessing.
class IlluminationDepthModel {
 public:
  IlluminationDepthModel(PointCloud P, double alpha, const Evaluation& eval);
  IlluminationDepthModel(const PointCloud& P, double alpha);
  // alpha = Pi(P_n) / (1 + Pi(P_n))
  static IlluminationDepthModel robust(PointCloud P, const Evaluation& eval);
  static IlluminationDepthModel robust(PointCloud P);

  const PointCloud& sample() const { return family_->sample(); }
  const RegionFamily& family() const { return *family_; }
  const Evaluation& evaluation() const { return eval_; }
  const DepthRegion& region() const { return *region_; }
  double alpha() const { return alpha_; }
  int level() const { return region_->level; }
  double pi_n() const;

  IlluminationDepth evaluate(const Vector& x) const;
  std::vector<IlluminationDepth> evaluate_many(const RowMatrix& Q) const;
  int depth_count(const Vector& x) const;

  bool level_set_member(const Vector& x, double delta) const;
  // Rows: points of {norm_illum = delta} along each direction from the
  // region barycenter.
  RowMatrix level_set_boundary(double delta, const RowMatrix& directions) const;

 private:
  IlluminationDepthModel(std::shared_ptr<RegionFamily> family, double alpha, const Evaluation& eval);

  Evaluation eval_;
  std::shared_ptr<RegionFamily> family_;
  std::shared_ptr<ProjectionIndex> index_;
  const DepthRegion* region_ = nullptr;
  double alpha_ = 0.0;
};

IlluminationDepth id_vector(const Vector& x, const PointCloud& P, double alpha);
IlluminationDepth id_vector(const Vector& x, const PointCloud& P, double alpha, const Evaluation& eval);

// norm_illum(x) <= delta on a full-dimensional region.
bool level_set_membership(const Vector& x, const Polytope& K, double delta);
bool level_set_membership(const Vector& x, const DepthRegion& R, double delta);

// For each direction u (rows, any length), the point c + t u with t the
// largest value such that norm_illum(c + t u) <= delta, c the vertex
// barycenter of K. The excess is piecewise linear along a ray, so t is
// solved exactly; delta = 1 gives the boundary of K.
RowMatrix level_set_boundary(const Polytope& K, double delta, const RowMatrix& directions);
RowMatrix level_set_boundary(const DepthRegion& R, double delta, const RowMatrix& directions);

// Same for the absolute level {x : Ill(x; K) <= vol(K) + excess}.
RowMatrix illumination_body_boundary(const Polytope& K, double excess, const RowMatrix& directions);

// (vol(K^delta) - vol(K)) / delta^(2/(d+1)) for each delta, with K^delta
// traced along `directions` rays (polar integration in d = 2, hull volume
// otherwise).
std::vector<double> affine_surface_area_estimate(const Polytope& K, const std::vector<double>& deltas,
                                                 int directions = 4096);

}  // namespace illumdepth
