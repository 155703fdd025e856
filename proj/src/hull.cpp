#include "hull_internal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

namespace illumdepth::detail {

namespace {

struct Frame {
  int dim = 0;                 // affine dimension found
  std::vector<int> simplex;    // dim + 1 point indices spanning the affine hull
  Vector origin;
  Matrix basis;                // d x dim, orthonormal columns
};

// Greedy farthest-point simplex. Stops when nothing lies farther than eps
// from the current affine span.
Frame affine_frame(const RowMatrix& pts, double eps) {
  const int n = static_cast<int>(pts.rows()), d = static_cast<int>(pts.cols());
  Frame f;
  int first = 0;
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      if (pts(i, j) < pts(first, j)) { first = i; break; }
      if (pts(i, j) > pts(first, j)) break;
    }
  }
  f.simplex.push_back(first);
  f.origin = pts.row(first).transpose();
  f.basis.resize(d, 0);
  Vector residual(d);
  while (f.dim < d) {
    int best = -1;
    double best_dist = eps;
    for (int i = 0; i < n; ++i) {
      residual = pts.row(i).transpose() - f.origin;
      if (f.dim > 0) residual -= f.basis * (f.basis.transpose() * residual);
      const double r = residual.norm();
      if (r > best_dist) { best_dist = r; best = i; }
    }
    if (best < 0) break;
    residual = pts.row(best).transpose() - f.origin;
    if (f.dim > 0) residual -= f.basis * (f.basis.transpose() * residual);
    // second Gram-Schmidt pass for orthogonality
    if (f.dim > 0) residual -= f.basis * (f.basis.transpose() * residual);
    f.basis.conservativeResize(d, f.dim + 1);
    f.basis.col(f.dim) = residual.normalized();
    f.simplex.push_back(best);
    ++f.dim;
  }
  return f;
}

double cross2(const RowMatrix& p, int o, int a, int b) {
  return (p(a, 0) - p(o, 0)) * (p(b, 1) - p(o, 1)) - (p(a, 1) - p(o, 1)) * (p(b, 0) - p(o, 0));
}

// Andrew's monotone chain; returns counter-clockwise vertex indices.
std::vector<int> monotone_chain(const RowMatrix& p) {
  const int n = static_cast<int>(p.rows());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return p(a, 0) < p(b, 0) || (p(a, 0) == p(b, 0) && p(a, 1) < p(b, 1));
  });
  std::vector<int> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross2(p, hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
    hull[k++] = idx[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && cross2(p, hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
    hull[k++] = idx[i];
  }
  hull.resize(std::max(k - 1, 1));
  return hull;
}

struct WorkFacet {
  std::array<int, kMaxDim> v{};
  std::array<int, kMaxDim> nb{};
  std::array<double, kMaxDim> normal{};
  double offset = 0.0;
  std::vector<int> outside;
  int furthest = -1;
  double furthest_dist = 0.0;
  bool alive = true;
  int stamp = -1;
  bool visible = false;
};

class IncrementalHull {
 public:
  IncrementalHull(const RowMatrix& pts, double eps, const Frame& frame)
      : p_(pts), d_(static_cast<int>(pts.cols())), eps_(eps) {
    interior_ = Vector::Zero(d_);
    for (int s : frame.simplex) interior_ += p_.row(s).transpose();
    interior_ /= static_cast<double>(frame.simplex.size());
    build_simplex(frame.simplex);
  }

  std::vector<int> run() {
    std::vector<int> pending;
    for (std::size_t f = 0; f < facets_.size(); ++f) pending.push_back(static_cast<int>(f));
    while (!pending.empty()) {
      const int f = pending.back();
      pending.pop_back();
      if (!facets_[f].alive || facets_[f].outside.empty()) continue;
      add_point(f, pending);
    }
    std::vector<int> flat;
    for (const auto& f : facets_)
      if (f.alive) flat.insert(flat.end(), f.v.begin(), f.v.begin() + d_);
    return flat;
  }

 private:
  double dist(const WorkFacet& f, int q) const {
    const double* x = p_.data() + static_cast<std::ptrdiff_t>(q) * d_;
    double s = -f.offset;
    for (int j = 0; j < d_; ++j) s += f.normal[j] * x[j];
    return s;
  }

  void set_plane(WorkFacet& f) {
    Vector n = raw_facet_normal(p_, f.v.data(), d_);
    const double len = n.norm();
    if (len > 0) n /= len;
    double off = n.dot(p_.row(f.v[0]).transpose());
    if (n.dot(interior_) > off) { n = -n; off = -off; }
    for (int j = 0; j < d_; ++j) f.normal[j] = n[j];
    f.offset = off;
  }

  int new_facet() {
    if (!free_.empty()) {
      const int id = free_.back();
      free_.pop_back();
      facets_[id] = WorkFacet{};
      return id;
    }
    facets_.emplace_back();
    return static_cast<int>(facets_.size()) - 1;
  }

  void assign(int q, const std::vector<int>& candidates) {
    for (int f : candidates) {
      const double h = dist(facets_[f], q);
      if (h > eps_) {
        auto& F = facets_[f];
        F.outside.push_back(q);
        if (h > F.furthest_dist) { F.furthest_dist = h; F.furthest = q; }
        return;
      }
    }
  }

  void build_simplex(const std::vector<int>& s) {
    const int m = d_ + 1;
    std::vector<int> ids;
    for (int i = 0; i < m; ++i) ids.push_back(new_facet());
    for (int i = 0; i < m; ++i) {
      auto& f = facets_[ids[i]];
      int pos = 0;
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        f.v[pos] = s[j];
        f.nb[pos] = ids[j];  // facet omitting s[j] lies across the ridge opposite s[j]
        ++pos;
      }
      set_plane(f);
    }
    std::vector<char> in_simplex(p_.rows(), 0);
    for (int q : s) in_simplex[q] = 1;
    for (int q = 0; q < p_.rows(); ++q)
      if (!in_simplex[q]) assign(q, ids);
  }

  void add_point(int start, std::vector<int>& pending) {
    const int apex = facets_[start].furthest;
    ++stamp_;
    std::vector<int> visible{start};
    facets_[start].stamp = stamp_;
    facets_[start].visible = true;
    std::vector<std::pair<int, int>> horizon;  // (visible facet, slot)
    for (std::size_t k = 0; k < visible.size(); ++k) {
      const int g = visible[k];
      for (int j = 0; j < d_; ++j) {
        const int h = facets_[g].nb[j];
        auto& H = facets_[h];
        if (H.stamp != stamp_) {
          H.stamp = stamp_;
          H.visible = dist(H, apex) > eps_;
          if (H.visible) visible.push_back(h);
        }
        if (!H.visible) horizon.emplace_back(g, j);
      }
    }

    std::vector<int> created;
    created.reserve(horizon.size());
    std::map<std::vector<int>, std::pair<int, int>> open_ridges;
    for (auto [g, j] : horizon) {
      const int id = new_facet();
      auto& F = facets_[id];
      const auto& G = facets_[g];
      F.v = G.v;
      F.v[j] = apex;
      const int across = G.nb[j];
      F.nb[j] = across;
      auto& A = facets_[across];
      for (int t = 0; t < d_; ++t)
        if (A.nb[t] == g) { A.nb[t] = id; break; }
      set_plane(F);
      created.push_back(id);
      for (int i = 0; i < d_; ++i) {
        if (i == j) continue;
        std::vector<int> key;
        key.reserve(d_ - 1);
        for (int t = 0; t < d_; ++t)
          if (t != i) key.push_back(facets_[id].v[t]);
        std::sort(key.begin(), key.end());
        auto it = open_ridges.find(key);
        if (it == open_ridges.end()) {
          open_ridges.emplace(std::move(key), std::make_pair(id, i));
        } else {
          facets_[id].nb[i] = it->second.first;
          facets_[it->second.first].nb[it->second.second] = id;
          open_ridges.erase(it);
        }
      }
    }

    for (int g : visible) {
      auto outside = std::move(facets_[g].outside);
      for (int q : outside)
        if (q != apex) assign(q, created);
      facets_[g].alive = false;
      facets_[g].outside.clear();
      free_.push_back(g);
    }
    for (int id : created)
      if (!facets_[id].outside.empty()) pending.push_back(id);
  }

  const RowMatrix& p_;
  int d_;
  double eps_;
  Vector interior_;
  std::vector<WorkFacet> facets_;
  std::vector<int> free_;
  int stamp_ = 0;
};

std::vector<int> unique_sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

double coordinate_scale(const RowMatrix& pts) {
  if (pts.rows() == 0) return 1.0;
  const double extent = (pts.colwise().maxCoeff() - pts.colwise().minCoeff()).maxCoeff();
  if (extent > 0) return extent;
  const double mag = pts.cwiseAbs().maxCoeff();
  return mag > 0 ? mag : 1.0;
}

Vector raw_facet_normal(const RowMatrix& pts, const int* idx, int d) {
  Vector n(d);
  if (d == 2) {
    const double ex = pts(idx[1], 0) - pts(idx[0], 0), ey = pts(idx[1], 1) - pts(idx[0], 1);
    n << ey, -ex;
    return n;
  }
  if (d == 3) {
    const Eigen::Vector3d a = (pts.row(idx[1]) - pts.row(idx[0])).transpose();
    const Eigen::Vector3d b = (pts.row(idx[2]) - pts.row(idx[0])).transpose();
    const Eigen::Vector3d c = a.cross(b);
    n << c[0], c[1], c[2];
    return n;
  }
  Matrix E(d - 1, d);
  for (int i = 1; i < d; ++i) E.row(i - 1) = pts.row(idx[i]) - pts.row(idx[0]);
  Matrix minor(d - 1, d - 1);
  for (int j = 0; j < d; ++j) {
    int c = 0;
    for (int k = 0; k < d; ++k)
      if (k != j) minor.col(c++) = E.col(k);
    n[j] = ((j % 2) ? -1.0 : 1.0) * minor.determinant();
  }
  return n;
}

HullTopology hull_topology(const RowMatrix& pts, double eps) {
  const int n = static_cast<int>(pts.rows()), d = static_cast<int>(pts.cols());
  if (n == 0) throw DegenerateInput("convex hull of an empty point set");
  if (d > kMaxDim) throw DomainError("dimensions above 8 are not supported");
  HullTopology out;
  const Frame frame = affine_frame(pts, eps);
  out.affine_dim = frame.dim;
  if (frame.dim == 0) {
    out.vertices = {frame.simplex[0]};
    return out;
  }
  if (frame.dim < d) {
    RowMatrix projected(n, frame.dim);
    for (int i = 0; i < n; ++i)
      projected.row(i) = ((pts.row(i).transpose() - frame.origin).transpose() * frame.basis);
    HullTopology sub = hull_topology(projected, eps);
    out.affine_dim = std::min(frame.dim, sub.affine_dim);
    out.vertices = std::move(sub.vertices);
    return out;
  }
  if (d == 1) {
    int lo = 0, hi = 0;
    for (int i = 1; i < n; ++i) {
      if (pts(i, 0) < pts(lo, 0)) lo = i;
      if (pts(i, 0) > pts(hi, 0)) hi = i;
    }
    out.vertices = {lo, hi};
    out.facets = {lo, hi};
    return out;
  }
  if (d == 2) {
    const std::vector<int> ring = monotone_chain(pts);
    out.vertices = ring;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      out.facets.push_back(ring[i]);
      out.facets.push_back(ring[(i + 1) % ring.size()]);
    }
    std::sort(out.vertices.begin(), out.vertices.end());
    return out;
  }
  IncrementalHull hull(pts, eps, frame);
  out.facets = hull.run();
  out.vertices = unique_sorted(out.facets);
  return out;
}

}  // namespace illumdepth::detail
