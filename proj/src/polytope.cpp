#include "illumdepth/polytope.hpp"

#include "hull_internal.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>

namespace illumdepth {

class PolytopeAssembler {
 public:
  // vertex_rows: candidate coordinates; vertex_ids: rows that are vertices;
  // facets: flat simplicial index lists into vertex_rows.
  static Polytope assemble(const RowMatrix& rows, const std::vector<int>& vertex_ids, const std::vector<int>& facets,
                           int affine_dim) {
    Polytope P;
    const int d = static_cast<int>(rows.cols());
    std::vector<int> order = vertex_ids;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      for (int j = 0; j < d; ++j) {
        if (rows(a, j) < rows(b, j)) return true;
        if (rows(a, j) > rows(b, j)) return false;
      }
      return a < b;
    });
    std::vector<int> remap(rows.rows(), -1);
    P.vertices_.resize(static_cast<int>(order.size()), d);
    for (std::size_t i = 0; i < order.size(); ++i) {
      remap[order[i]] = static_cast<int>(i);
      P.vertices_.row(static_cast<int>(i)) = rows.row(order[i]);
    }
    P.affine_dim_ = affine_dim;
    P.scale_ = detail::coordinate_scale(P.vertices_);
    if (affine_dim == d) {
      P.facet_vertices_.reserve(facets.size());
      for (int f : facets) P.facet_vertices_.push_back(remap[f]);
      P.compute_facet_geometry();
    }
    return P;
  }
};

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

// Normals, offsets, areas and volume from vertices + facet index lists.
void Polytope::compute_facet_geometry() {
  const int d = dim();
  const int count = static_cast<int>(facet_vertices_.size()) / d;
  const Vector c = barycenter();
  const double area_scale = factorial(d - 1);
  const double tiny = 1e-14 * std::pow(scale_, d - 1);
  std::vector<int> kept;
  std::vector<Vector> normals;
  std::vector<double> offsets, areas;
  kept.reserve(facet_vertices_.size());
  for (int f = 0; f < count; ++f) {
    const int* idx = facet_vertices_.data() + static_cast<std::ptrdiff_t>(f) * d;
    Vector u(d);
    double area = 1.0;
    if (d == 1) {
      u[0] = vertices_(idx[0], 0) >= c[0] ? 1.0 : -1.0;
    } else {
      u = detail::raw_facet_normal(vertices_, idx, d);
      const double len = u.norm();
      area = len / area_scale;
      if (area <= tiny) continue;
      u /= len;
    }
    double b = u.dot(vertices_.row(idx[0]).transpose());
    if (u.dot(c) > b) { u = -u; b = -b; }
    kept.insert(kept.end(), idx, idx + d);
    normals.push_back(u);
    offsets.push_back(b);
    areas.push_back(area);
  }
  facet_vertices_ = std::move(kept);
  const int m = static_cast<int>(normals.size());
  facet_normals_.resize(m, d);
  facet_offsets_.resize(m);
  facet_areas_.resize(m);
  double vol = 0.0;
  for (int f = 0; f < m; ++f) {
    facet_normals_.row(f) = normals[f].transpose();
    facet_offsets_[f] = offsets[f];
    facet_areas_[f] = areas[f];
    vol += areas[f] * (offsets[f] - normals[f].dot(c));
  }
  volume_ = vol / d;
}

Vector Polytope::barycenter() const { return vertices_.colwise().mean().transpose(); }

double Polytope::max_violation(const Vector& x) const {
  require_dim(x, dim(), "Polytope::max_violation");
  if (degenerate()) throw DegenerateInput("facet violation of a degenerate polytope");
  return ((facet_normals_ * x) - facet_offsets_).maxCoeff();
}

bool Polytope::contains(const Vector& x, double tol) const {
  require_dim(x, dim(), "Polytope::contains");
  if (tol < 0) tol = 1e-9 * scale_;
  if (!degenerate()) return max_violation(x) <= tol;
  return distance(x) <= tol;
}

double Polytope::support(const Vector& u) const {
  require_dim(u, dim(), "Polytope::support");
  return (vertices_ * u).maxCoeff();
}

std::string Polytope::to_text() const {
  std::ostringstream os;
  os << dim() << ' ' << num_vertices() << '\n' << std::setprecision(17);
  for (int i = 0; i < num_vertices(); ++i) {
    for (int j = 0; j < dim(); ++j) os << (j ? " " : "") << vertices_(i, j);
    os << '\n';
  }
  return os.str();
}

Polytope Polytope::from_text(const std::string& text) {
  std::istringstream is(text);
  int d = 0, k = 0;
  if (!(is >> d >> k) || d < 1 || k < 1) throw ConfigError("polytope text: bad header");
  RowMatrix v(k, d);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < d; ++j)
      if (!(is >> v(i, j))) throw ConfigError("polytope text: truncated vertex rows");
  return convex_hull(v);
}

Polytope convex_hull(const RowMatrix& points) {
  if (points.rows() == 0 || points.cols() == 0) throw DegenerateInput("convex hull of an empty point set");
  if (!points.allFinite()) throw DomainError("convex hull input has non-finite coordinates");
  const double eps = 1e-9 * detail::coordinate_scale(points);
  const detail::HullTopology topo = detail::hull_topology(points, eps);
  return PolytopeAssembler::assemble(points, topo.vertices, topo.facets, topo.affine_dim);
}

Polytope convex_hull(const std::vector<Vector>& points) {
  if (points.empty()) throw DegenerateInput("convex hull of an empty point set");
  RowMatrix m(static_cast<int>(points.size()), static_cast<int>(points.front().size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_dim(points[i], static_cast<int>(m.cols()), "convex_hull");
    m.row(static_cast<int>(i)) = points[i].transpose();
  }
  return convex_hull(m);
}

double volume(const Polytope& P) { return P.degenerate() ? 0.0 : P.volume(); }

double hull_volume_with_point(const Polytope& P, const Vector& x) {
  require_dim(x, P.dim(), "hull_volume_with_point");
  if (P.degenerate()) throw DegenerateInput("illumination onto a degenerate polytope");
  const RowMatrix& U = P.facet_normals();
  const Vector& b = P.facet_offsets();
  const Vector& a = P.facet_areas();
  const int d = P.dim();
  double extra = 0.0;
  for (int f = 0; f < P.num_facets(); ++f) {
    const double h = U.row(f).dot(x) - b[f];
    if (h > 0) extra += a[f] * h;
  }
  return P.volume() + extra / d;
}

Polytope affine_image(const Polytope& P, const Matrix& A, const Vector& b) {
  const int d = P.dim();
  if (A.rows() != d || A.cols() != d || b.size() != d) throw DimensionMismatch("affine_image: shape mismatch");
  RowMatrix mapped = P.vertices() * A.transpose();
  mapped.rowwise() += b.transpose();
  const double det = A.determinant();
  if (P.degenerate() || std::abs(det) == 0.0) return convex_hull(mapped);
  std::vector<int> ids(P.num_vertices());
  std::iota(ids.begin(), ids.end(), 0);
  return PolytopeAssembler::assemble(mapped, ids, P.facet_vertex_indices(), d);
}

Polytope scale_about(const Polytope& P, double c, const Vector& center) {
  if (!(c > 0) || !std::isfinite(c)) throw DomainError("scale_about: factor must be positive and finite");
  require_dim(center, P.dim(), "scale_about");
  const Matrix A = c * Matrix::Identity(P.dim(), P.dim());
  return affine_image(P, A, (1.0 - c) * center);
}

Polytope make_box(const Vector& lo, const Vector& hi) {
  const int d = static_cast<int>(lo.size());
  if (hi.size() != d) throw DimensionMismatch("make_box: bound sizes differ");
  if (d > detail::kMaxDim) throw DomainError("dimensions above 8 are not supported");
  const int corners = 1 << d;
  RowMatrix v(corners, d);
  for (int m = 0; m < corners; ++m)
    for (int j = 0; j < d; ++j) v(m, j) = (m >> j & 1) ? hi[j] : lo[j];
  return convex_hull(v);
}

RowMatrix sphere_points(int d, int count) {
  if (count < d + 1) throw DomainError("sphere_points: too few points");
  RowMatrix out(count, d);
  if (d == 2) {
    for (int i = 0; i < count; ++i) {
      const double t = 2.0 * std::numbers::pi * i / count;
      out(i, 0) = std::cos(t);
      out(i, 1) = std::sin(t);
    }
    return out;
  }
  if (d == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      out(i, 0) = r * std::cos(golden * i);
      out(i, 1) = r * std::sin(golden * i);
      out(i, 2) = z;
    }
    return out;
  }
  throw DomainError("sphere_points: only d = 2 and d = 3 have a deterministic lattice");
}

}  // namespace illumdepth
