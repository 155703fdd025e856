#pragma once

#include "illumdepth/core.hpp"

#include <vector>

namespace illumdepth::detail {

constexpr int kMaxDim = 8;

// max over coordinates of (max - min), falling back to max |x| and then 1.
double coordinate_scale(const RowMatrix& pts);

struct HullTopology {
  int affine_dim = 0;
  std::vector<int> vertices;  // indices into the input rows
  std::vector<int> facets;    // flat, d indices per facet (empty unless full-dimensional)
};

// Extreme points (and facets when full-dimensional) of the input rows.
HullTopology hull_topology(const RowMatrix& pts, double eps);

// Normal of the hyperplane through d points (rows idx[0..d-1] of pts) with
// norm equal to (d-1)! times the simplex area. d >= 2.
Vector raw_facet_normal(const RowMatrix& pts, const int* idx, int d);

}  // namespace illumdepth::detail
