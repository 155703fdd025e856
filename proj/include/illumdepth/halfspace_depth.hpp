#pragma once

#include "illumdepth/core.hpp"
#include "illumdepth/polytope.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace illumdepth {

enum class DepthMode { Exact2d, Combinatorial, Approximate };
enum class RegionMode { Exact2d, Directions };

struct DepthOptions {
  DepthMode mode = DepthMode::Exact2d;
  int directions = 2000;  // Approximate only
  std::uint64_t seed = 0x1d2e3f4a5b6c7d8eULL;
};

struct RegionOptions {
  RegionMode mode = RegionMode::Exact2d;
  int directions = 5000;  // Directions only
  std::uint64_t seed = 0x1d2e3f4a5b6c7d8eULL;
};

// Depth and region methods used together by the higher-level estimators.
struct Evaluation {
  DepthOptions depth;
  RegionOptions region;
  // Exact sweeps for d <= 2, direction approximations above.
  static Evaluation automatic(int d);
};

// Integer level k = ceil(alpha n) of a probability cutoff, snapping values
// within 1e-9 of the grid {1/n, 2/n, ...}. Always >= 1.
int depth_level(double alpha, int n);

// Unit directions: a deterministic covering (evenly spaced half circle in
// d = 2, Fibonacci lattice in d = 3, axes and axis pairs above) topped up with
// seeded Gaussian directions.
RowMatrix direction_set(int d, int m, std::uint64_t seed);

// Number of sample points in the least-populated closed halfspace containing x.
int depth_count(const Vector& x, const PointCloud& P, const DepthOptions& opts = {});
double hd(const Vector& x, const PointCloud& P, const DepthOptions& opts = {});

// Sorted projections of a sample on a fixed direction set, for repeated
// approximate depth queries.
class ProjectionIndex {
 public:
  ProjectionIndex(const PointCloud& P, const RowMatrix& directions);
  int depth_count(const Vector& x) const;
  // k-th smallest / largest projection on direction j (k >= 1).
  double lower(int j, int k) const { return sorted_[static_cast<std::size_t>(j) * n_ + (k - 1)]; }
  double upper(int j, int k) const { return sorted_[static_cast<std::size_t>(j) * n_ + (n_ - k)]; }
  const RowMatrix& directions() const { return directions_; }
  int n() const { return n_; }

 private:
  RowMatrix directions_;
  int n_ = 0;
  std::vector<double> sorted_;
};

// Depth counts of every sample point. In Approximate mode the vertices of the
// sample hull get their exact value (their multiplicity).
std::vector<int> sample_depth_counts(const PointCloud& P, const DepthOptions& opts = {});

struct DepthRegion {
  double alpha = 0.0;  // requested cutoff
  int level = 0;       // ceil(alpha n)
  int n = 0;
  Polytope region;
  int n_inside = 0;    // sample points with depth >= alpha
  bool degenerate() const { return region.degenerate(); }
};

// Tukey central region {x : HD(x; P_n) >= alpha}.
DepthRegion tukey_region(const PointCloud& P, double alpha, const RegionOptions& opts = {});

// Tukey regions of one sample at several levels, sharing the expensive
// preprocessing (angular sweeps in d = 2, sorted projections otherwise).
// Thread-safe; results are cached per level.
class RegionFamily {
 public:
  RegionFamily(PointCloud P, RegionOptions opts = {});
  ~RegionFamily();
  RegionFamily(const RegionFamily&) = delete;
  RegionFamily& operator=(const RegionFamily&) = delete;

  const PointCloud& sample() const { return sample_; }
  const RegionOptions& options() const { return opts_; }

  // Throws EmptyRegion when no point reaches depth level k.
  const DepthRegion& at_level(int k) const;
  const DepthRegion& at_alpha(double alpha) const { return at_level(depth_level(alpha, sample_.n())); }
  bool nonempty(int k) const;
  // Largest non-empty level (binary search).
  int max_level() const;

 private:
  struct Impl;
  PointCloud sample_;
  RegionOptions opts_;
  std::unique_ptr<Impl> impl_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<DepthRegion>> cache_;
  mutable int max_level_ = -1;
};

struct MaxDepth {
  double pi_n = 0.0;
  int level = 0;
  Vector median;
};

// Maximal sample depth and the barycenter of the deepest region's vertices.
MaxDepth max_depth_and_median(const PointCloud& P, const RegionOptions& opts = {});
MaxDepth max_depth_and_median(const RegionFamily& family);

// Largest delta on the depth grid with #{i : HD(X_i) >= delta} >= ceil(p n).
double cutoff_for_probability(const PointCloud& P, double p, const DepthOptions& opts = {});
double cutoff_for_probability(const std::vector<int>& sample_counts, double p);

}  // namespace illumdepth
