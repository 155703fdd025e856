#include "illumdepth/polytope.hpp"

#include "hull_internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace illumdepth {

namespace {

// Minimum-norm point of conv(rows of V), Wolfe's method.
Vector min_norm_point(const RowMatrix& V) {
  const int m = static_cast<int>(V.rows()), d = static_cast<int>(V.cols());
  const Vector norms = V.rowwise().squaredNorm();
  int start = 0;
  norms.minCoeff(&start);
  const double scale2 = std::max(norms.maxCoeff(), 1e-300);
  std::vector<int> S{start};
  std::vector<double> lambda{1.0};
  Vector x = V.row(start).transpose();
  for (int major = 0; major < 10 * (m + d); ++major) {
    int j = 0;
    (V * x).minCoeff(&j);
    if (x.squaredNorm() - V.row(j).dot(x) <= 1e-13 * scale2) break;
    if (std::find(S.begin(), S.end(), j) != S.end()) break;
    S.push_back(j);
    lambda.push_back(0.0);
    for (int minor = 0; minor < 10 * (d + 2); ++minor) {
      const int k = static_cast<int>(S.size());
      Matrix Sm(k, d);
      for (int i = 0; i < k; ++i) Sm.row(i) = V.row(S[i]);
      Matrix K = Sm * Sm.transpose();
      K.array() += 1.0;
      Vector mu = K.fullPivLu().solve(Vector::Ones(k));
      mu /= mu.sum();
      if ((mu.array() > 1e-12).all()) {
        for (int i = 0; i < k; ++i) lambda[i] = mu[i];
        x = Sm.transpose() * mu;
        break;
      }
      double theta = 1.0;
      for (int i = 0; i < k; ++i)
        if (mu[i] <= 1e-12) theta = std::min(theta, lambda[i] / (lambda[i] - mu[i]));
      for (int i = 0; i < k; ++i) lambda[i] = (1.0 - theta) * lambda[i] + theta * mu[i];
      std::vector<int> S2;
      std::vector<double> l2;
      int smallest = 0;
      for (int i = 1; i < k; ++i)
        if (lambda[i] < lambda[smallest]) smallest = i;
      for (int i = 0; i < k; ++i) {
        if (i == smallest || lambda[i] <= 1e-14) continue;
        S2.push_back(S[i]);
        l2.push_back(lambda[i]);
      }
      double total = 0.0;
      for (double l : l2) total += l;
      for (double& l : l2) l /= total;
      S = std::move(S2);
      lambda = std::move(l2);
      x.setZero();
      for (std::size_t i = 0; i < S.size(); ++i) x += lambda[i] * V.row(S[i]).transpose();
    }
  }
  return x;
}

double segment_distance(const Vector& x, const Vector& a, const Vector& b) {
  const Vector ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (x - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - x).norm();
}

}  // namespace

double Polytope::distance(const Vector& x) const {
  require_dim(x, dim(), "Polytope::distance");
  if (!degenerate() && max_violation(x) <= 0) return 0.0;
  if (!degenerate() && dim() == 2) {
    double best = std::numeric_limits<double>::infinity();
    for (int f = 0; f < num_facets(); ++f)
      best = std::min(best, segment_distance(x, vertex(facet_vertices_[2 * f]), vertex(facet_vertices_[2 * f + 1])));
    return best;
  }
  RowMatrix shifted = vertices_;
  shifted.rowwise() -= x.transpose();
  return min_norm_point(shifted).norm();
}

double hausdorff_distance(const Polytope& P, const Polytope& Q) {
  if (P.num_vertices() == 0 || Q.num_vertices() == 0) throw EmptyRegion("hausdorff_distance of an empty set");
  if (P.dim() != Q.dim()) throw DimensionMismatch("hausdorff_distance: dimensions differ");
  double h = 0.0;
  for (int i = 0; i < P.num_vertices(); ++i) h = std::max(h, Q.distance(P.vertex(i)));
  for (int i = 0; i < Q.num_vertices(); ++i) h = std::max(h, P.distance(Q.vertex(i)));
  return h;
}

// Revised simplex on the dual of max r s.t. a_i.c + r <= b_i:
//   min b.y  s.t.  sum y_i a_i = 0, sum y_i = 1, y >= 0.
// The optimal simplex multipliers are (c, r).
ChebyshevBall chebyshev_center(const RowMatrix& A, const Vector& b_in) {
  const int m = static_cast<int>(A.rows()), d = static_cast<int>(A.cols());
  const int R = d + 1;
  if (m == 0) throw DomainError("chebyshev_center: no constraints");
  const double bscale = std::max(1.0, b_in.cwiseAbs().maxCoeff());
  const Vector b = b_in / bscale;
  auto column = [&](int j) {
    Vector col(R);
    if (j < m) {
      col.head(d) = A.row(j).transpose();
      col[d] = 1.0;
    } else {
      col.setZero();
      col[j - m] = 1.0;
    }
    return col;
  };

  std::vector<int> basis(R);
  for (int r = 0; r < R; ++r) basis[r] = m + r;
  std::vector<char> in_basis(m + R, 0);
  for (int r = 0; r < R; ++r) in_basis[m + r] = 1;
  Matrix Binv = Matrix::Identity(R, R);
  Vector xB = Vector::Zero(R);
  xB[d] = 1.0;

  const double rc_tol = 1e-11, piv_tol = 1e-10;

  auto refactor = [&]() {
    Matrix B(R, R);
    for (int r = 0; r < R; ++r) B.col(r) = column(basis[r]);
    Binv = B.partialPivLu().inverse();
    Vector rhs = Vector::Zero(R);
    rhs[d] = 1.0;
    xB = Binv * rhs;
    for (int r = 0; r < R; ++r)
      if (xB[r] < 0 && xB[r] > -1e-12) xB[r] = 0.0;
  };

  auto pivot = [&](int r, int enter, const Vector& w) {
    const double pr = w[r];
    const double step = xB[r] / pr;
    for (int i = 0; i < R; ++i)
      if (i != r) xB[i] -= step * w[i];
    xB[r] = step;
    const Eigen::RowVectorXd pivot_row = Binv.row(r) / pr;
    for (int i = 0; i < R; ++i)
      if (i != r) Binv.row(i) -= w[i] * pivot_row;
    Binv.row(r) = pivot_row;
    in_basis[basis[r]] = 0;
    basis[r] = enter;
    in_basis[enter] = 1;
  };

  auto run_phase = [&](auto cost) {
    bool bland = false;
    int degenerate_run = 0;
    for (int iter = 0; iter < 200000; ++iter) {
      if (iter > 0 && iter % 64 == 0) refactor();
      Eigen::RowVectorXd cB(R);
      for (int r = 0; r < R; ++r) cB[r] = cost(basis[r]);
      const Eigen::RowVectorXd pi = cB * Binv;
      int enter = -1;
      double best = -rc_tol;
      for (int j = 0; j < m; ++j) {
        if (in_basis[j]) continue;
        const double rc = cost(j) - (pi.head(d).dot(A.row(j)) + pi[d]);
        if (rc < best) {
          best = rc;
          enter = j;
          if (bland) break;
        }
      }
      if (enter < 0) return pi;
      const Vector w = Binv * column(enter);
      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < R; ++r) {
        double q;
        if (basis[r] >= m && xB[r] <= 1e-12 && std::abs(w[r]) > piv_tol) {
          q = 0.0;  // zero-level artificial must leave before it can move
        } else if (w[r] > piv_tol) {
          q = std::max(0.0, xB[r]) / w[r];
        } else {
          continue;
        }
        if (q < ratio - 1e-15 || (std::abs(q - ratio) <= 1e-15 && leave >= 0 && basis[r] < basis[leave])) {
          ratio = q;
          leave = r;
        }
      }
      if (leave < 0) throw GeometryError("chebyshev_center: unbounded dual (region not bounded)");
      if (w[leave] < 0) {
        // artificial at level zero leaving with a negative pivot: keep xB unchanged
        xB[leave] = 0.0;
      }
      pivot(leave, enter, w);
      degenerate_run = ratio <= 1e-14 ? degenerate_run + 1 : 0;
      if (degenerate_run > 50) bland = true;
    }
    throw GeometryError("chebyshev_center: iteration limit");
  };

  run_phase([&](int j) { return j >= m ? 1.0 : 0.0; });
  double infeasibility = 0.0;
  for (int r = 0; r < R; ++r)
    if (basis[r] >= m) infeasibility += std::max(0.0, xB[r]);
  if (infeasibility > 1e-9) throw GeometryError("chebyshev_center: constraint normals do not bound the region");
  for (int r = 0; r < R; ++r) {
    if (basis[r] < m) continue;
    for (int j = 0; j < m; ++j) {
      if (in_basis[j]) continue;
      const Vector w = Binv * column(j);
      if (std::abs(w[r]) > 1e-9) {
        xB[r] = 0.0;
        pivot(r, j, w);
        break;
      }
    }
  }
  const Eigen::RowVectorXd pi = run_phase([&](int j) { return j >= m ? 0.0 : b[j]; });
  ChebyshevBall ball;
  ball.center = pi.head(d).transpose() * bscale;
  ball.radius = pi[d] * bscale;
  return ball;
}

namespace {

std::vector<Eigen::Vector2d> ccw_ring(const Polytope& P) {
  const Vector c = P.barycenter();
  std::vector<Eigen::Vector2d> ring;
  for (int i = 0; i < P.num_vertices(); ++i) ring.emplace_back(P.vertices()(i, 0), P.vertices()(i, 1));
  std::sort(ring.begin(), ring.end(), [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return std::atan2(a.y() - c[1], a.x() - c[0]) < std::atan2(b.y() - c[1], b.x() - c[0]);
  });
  return ring;
}

// One Sutherland-Hodgman step against normal.x <= offset on a convex ring.
std::vector<Eigen::Vector2d> clip(const std::vector<Eigen::Vector2d>& ring, const Eigen::Vector2d& normal, double offset,
                                  double eps) {
  std::vector<Eigen::Vector2d> out;
  const std::size_t k = ring.size();
  if (k == 0) return out;
  out.reserve(k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Vector2d& p = ring[i];
    const Eigen::Vector2d& q = ring[(i + 1) % k];
    const double sp = normal.dot(p) - offset, sq = normal.dot(q) - offset;
    const bool pin = sp <= eps, qin = sq <= eps;
    if (pin) out.push_back(p);
    if (pin != qin) {
      const double t = std::clamp(sp / (sp - sq), 0.0, 1.0);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

}  // namespace

Polytope halfspace_intersection(const std::vector<Halfspace>& halfspaces, const Polytope& bounding_box) {
  const int d = bounding_box.dim();
  RowMatrix normals(static_cast<int>(halfspaces.size()), d);
  Vector offsets(static_cast<int>(halfspaces.size()));
  for (std::size_t i = 0; i < halfspaces.size(); ++i) {
    require_dim(halfspaces[i].normal, d, "halfspace_intersection");
    normals.row(static_cast<int>(i)) = halfspaces[i].normal.transpose();
    offsets[static_cast<int>(i)] = halfspaces[i].offset;
  }
  return halfspace_intersection(normals, offsets, bounding_box);
}

Polytope halfspace_intersection(const RowMatrix& normals_in, const Vector& offsets_in, const Polytope& box) {
  const int d = box.dim();
  if (normals_in.rows() == 0) throw DomainError("halfspace_intersection: no halfspaces");
  if (normals_in.cols() != d || offsets_in.size() != normals_in.rows())
    throw DimensionMismatch("halfspace_intersection: shape mismatch");
  if (box.degenerate()) throw DegenerateInput("halfspace_intersection: bounding box is degenerate");
  const double eps = 1e-9 * box.scale();

  // unit normals; zero normals are either vacuous or infeasible
  std::vector<int> keep;
  for (int i = 0; i < normals_in.rows(); ++i) {
    const double len = normals_in.row(i).norm();
    if (len > 0) keep.push_back(i);
    else if (offsets_in[i] < -eps) throw EmptyRegion("halfspace_intersection: infeasible constant constraint");
  }
  const int m = static_cast<int>(keep.size()) + box.num_facets();
  RowMatrix A(m, d);
  Vector b(m);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const double len = normals_in.row(keep[k]).norm();
    A.row(static_cast<int>(k)) = normals_in.row(keep[k]) / len;
    b[static_cast<int>(k)] = offsets_in[keep[k]] / len;
  }
  A.bottomRows(box.num_facets()) = box.facet_normals();
  b.tail(box.num_facets()) = box.facet_offsets();

  if (d == 1) {
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (A(i, 0) > 0) hi = std::min(hi, b[i]);
      else lo = std::max(lo, -b[i]);
    }
    if (lo > hi + eps) throw EmptyRegion("halfspace_intersection: empty interval");
    RowMatrix v(2, 1);
    v << std::min(lo, hi), std::max(lo, hi);
    if (hi - lo <= eps) v(1, 0) = v(0, 0) = 0.5 * (lo + hi);
    return convex_hull(v);
  }

  if (d == 2) {
    std::vector<Eigen::Vector2d> ring = ccw_ring(box);
    for (int i = 0; i < m && !ring.empty(); ++i) ring = clip(ring, Eigen::Vector2d(A(i, 0), A(i, 1)), b[i], eps);
    if (ring.empty()) throw EmptyRegion("halfspace_intersection: empty polygon");
    RowMatrix v(static_cast<int>(ring.size()), 2);
    for (std::size_t i = 0; i < ring.size(); ++i) v.row(static_cast<int>(i)) = ring[i].transpose();
    return convex_hull(v);
  }

  const ChebyshevBall ball = chebyshev_center(A, b);
  if (ball.radius < -eps) throw EmptyRegion("halfspace_intersection: no feasible point");
  if (ball.radius <= eps) {
    RowMatrix v(1, d);
    v.row(0) = ball.center.transpose();
    return convex_hull(v);
  }
  // Polar dual about the Chebyshev center: facets of the dual hull are vertices of the region.
  RowMatrix dual(m, d);
  for (int i = 0; i < m; ++i) dual.row(i) = A.row(i) / (b[i] - A.row(i).dot(ball.center));
  const double dual_eps = 1e-9 * detail::coordinate_scale(dual);
  const detail::HullTopology topo = detail::hull_topology(dual, dual_eps);
  if (topo.affine_dim < d) throw GeometryError("halfspace_intersection: unbounded region");
  const int facets = static_cast<int>(topo.facets.size()) / d;
  RowMatrix primal(facets, d);
  for (int f = 0; f < facets; ++f) {
    const int* idx = topo.facets.data() + static_cast<std::ptrdiff_t>(f) * d;
    Vector nrm = detail::raw_facet_normal(dual, idx, d);
    nrm.normalize();
    double h = nrm.dot(dual.row(idx[0]).transpose());
    if (h < 0) { nrm = -nrm; h = -h; }
    primal.row(f) = (ball.center + nrm / h).transpose();
  }
  return convex_hull(primal);
}

}  // namespace illumdepth
