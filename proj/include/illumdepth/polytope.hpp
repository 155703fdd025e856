#pragma once

#include "illumdepth/core.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace illumdepth {

// Convex polytope in V-representation with a simplicial facet list.
//
// Vertices are the extreme points in lexicographic order. Facets are stored as
// simplicial pieces (d vertex indices each, edges in d = 2, single points in
// d = 1) with unit outward normal u and offset b so that the body is
// {x : u.x <= b}. Coplanar pieces share the same hyperplane. Degenerate
// polytopes (affine dimension < d) carry vertices only and volume 0.
class Polytope {
 public:
  int dim() const { return static_cast<int>(vertices_.cols()); }
  int num_vertices() const { return static_cast<int>(vertices_.rows()); }
  const RowMatrix& vertices() const { return vertices_; }
  Vector vertex(int i) const { return vertices_.row(i).transpose(); }

  bool degenerate() const { return affine_dim_ < dim(); }
  int affine_dim() const { return affine_dim_; }
  double volume() const { return volume_; }

  int num_facets() const { return static_cast<int>(facet_offsets_.size()); }
  const RowMatrix& facet_normals() const { return facet_normals_; }
  const Vector& facet_offsets() const { return facet_offsets_; }
  const Vector& facet_areas() const { return facet_areas_; }
  const std::vector<int>& facet_vertex_indices() const { return facet_vertices_; }

  // Mean of the vertex set.
  Vector barycenter() const;
  // Typical coordinate magnitude, used to scale tolerances.
  double scale() const { return scale_; }

  // Membership with absolute slack tol (default 1e-9 * scale).
  bool contains(const Vector& x, double tol = -1.0) const;
  // Largest facet violation u.x - b (<= 0 inside). Needs a full-dimensional body.
  double max_violation(const Vector& x) const;
  // max over vertices of u.v
  double support(const Vector& u) const;
  // Euclidean distance from x to the body (0 inside).
  double distance(const Vector& x) const;

  std::string to_text() const;
  static Polytope from_text(const std::string& text);

 private:
  friend Polytope convex_hull(const RowMatrix& points);
  friend Polytope affine_image(const Polytope& P, const Matrix& A, const Vector& b);
  friend class PolytopeAssembler;

  void compute_facet_geometry();

  RowMatrix vertices_;
  RowMatrix facet_normals_;
  Vector facet_offsets_;
  Vector facet_areas_;
  std::vector<int> facet_vertices_;  // num_facets * d indices
  int affine_dim_ = 0;
  double volume_ = 0.0;
  double scale_ = 1.0;
};

struct Halfspace {
  Vector normal;  // body side is normal.x <= offset
  double offset = 0.0;
};

Polytope convex_hull(const RowMatrix& points);
Polytope convex_hull(const std::vector<Vector>& points);

double volume(const Polytope& P);

// vol(conv(P u {x})): the volume of P plus pyramids over facets visible from x.
double hull_volume_with_point(const Polytope& P, const Vector& x);

Polytope halfspace_intersection(const std::vector<Halfspace>& halfspaces, const Polytope& bounding_box);
// Same, with the constraints packed row-wise: normals.row(i).x <= offsets(i).
Polytope halfspace_intersection(const RowMatrix& normals, const Vector& offsets, const Polytope& bounding_box);

double hausdorff_distance(const Polytope& P, const Polytope& Q);

Polytope scale_about(const Polytope& P, double c, const Vector& center);
Polytope affine_image(const Polytope& P, const Matrix& A, const Vector& b);

Polytope make_box(const Vector& lo, const Vector& hi);

// Deterministic near-uniform points on the unit sphere S^{d-1}: regular
// polygon for d = 2, Fibonacci lattice for d = 3.
RowMatrix sphere_points(int d, int count);

struct ChebyshevBall {
  Vector center;
  double radius = 0.0;
};
// Largest ball inside {x : a_i.x <= b_i}; rows of A must be unit vectors.
// A negative radius means the system is infeasible.
ChebyshevBall chebyshev_center(const RowMatrix& A, const Vector& b);

}  // namespace illumdepth
