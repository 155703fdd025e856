#pragma once

#include "illumdepth/core.hpp"
#include "illumdepth/polytope.hpp"

namespace illumdepth {

// Normalized illumination of an ellipsoid as a function of the Mahalanobis
// distance t of the illuminating point: Ill(x; E) / vol(E) = g(d, t).
double g(int d, double t);
// g(d, t) - 1, accurate near t = 1 where g itself rounds to 1.
double g_excess(int d, double t);
double g_prime(int d, double t);
double g_inverse(int d, double y);
// Inverse of g_excess: the t >= 1 with g(d, t) = 1 + h.
double g_inverse_excess(int d, double h);

// Limit of g_prime(d, t) as t grows.
double g_slope_limit(int d);
// Limit of (g(d, 1 + h) - 1) / h^((d+1)/2) as h -> 0.
double g_near_one_constant(int d);

class Ellipsoid {
 public:
  Ellipsoid(Vector center, Matrix scatter);

  int dim() const { return static_cast<int>(center_.size()); }
  const Vector& center() const { return center_; }
  const Matrix& scatter() const { return scatter_; }
  double det() const { return det_; }
  double volume() const { return volume_; }

  double mahalanobis(const Vector& x) const;
  // Cholesky factor L with scatter = L L^T.
  const Matrix& factor() const { return factor_; }

 private:
  Vector center_;
  Matrix scatter_;
  Matrix factor_;
  double det_ = 1.0;
  double volume_ = 0.0;
};

double mahalanobis(const Ellipsoid& E, const Vector& x);
double ellipsoid_volume(const Ellipsoid& E);
double illumination_ellipsoid(const Ellipsoid& E, const Vector& x);

// Polytope inscribed in E: affine image of a regular polygon (d = 2) or a
// Fibonacci sphere (d = 3) with `count` vertices.
Polytope discretize_ellipsoid(const Ellipsoid& E, int count);

}  // namespace illumdepth
