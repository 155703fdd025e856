#include "illumdepth/halfspace_depth.hpp"

#include "hull_internal.hpp"
#include "illumdepth/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace illumdepth {

namespace {

constexpr int kCombinatorialMaxN = 80;
constexpr int kCombinatorialMaxD = 4;
constexpr int kLineCacheMaxN = 1500;

// ---------------------------------------------------------------------------
// angular sweep in the plane

struct Planar {
  double x, y;
};

int half_plane(const Planar& v) { return (v.y < 0.0 || (v.y == 0.0 && v.x < 0.0)) ? 1 : 0; }
double cross(const Planar& a, const Planar& b) { return a.x * b.y - a.y * b.x; }
double dot(const Planar& a, const Planar& b) { return a.x * b.x + a.y * b.y; }

// Directions sharing one angle, with the counts a line along them sees.
struct AngularRun {
  int rep;    // index of one member in the input
  int count;  // members in the run
  int left;   // vectors strictly left of the direction
  int opp;    // vectors pointing the opposite way
};

// Groups nonzero vectors by angle and counts left / opposite populations.
std::vector<AngularRun> angular_runs(const std::vector<Planar>& v) {
  const int N = static_cast<int>(v.size());
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const int ha = half_plane(v[a]), hb = half_plane(v[b]);
    if (ha != hb) return ha < hb;
    return cross(v[a], v[b]) > 0.0;
  });
  std::vector<AngularRun> runs;
  for (int s = 0; s < N;) {
    int e = s + 1;
    while (e < N && half_plane(v[order[e]]) == half_plane(v[order[s]]) && cross(v[order[s]], v[order[e]]) == 0.0) ++e;
    runs.push_back({order[s], e - s, 0, 0});
    s = e;
  }
  const int r = static_cast<int>(runs.size());
  if (r <= 1) return runs;
  std::vector<int> cum(2 * r + 1, 0);
  for (int i = 0; i < 2 * r; ++i) cum[i + 1] = cum[i] + runs[i % r].count;
  int p = 1;
  for (int a = 0; a < r; ++a) {
    const Planar& w = v[runs[a].rep];
    p = std::max(p, a + 1);
    while (p < a + r && cross(w, v[runs[p % r].rep]) > 0.0) ++p;
    runs[a].left = cum[p] - cum[a + 1];
    if (p < a + r) {
      const Planar& u = v[runs[p % r].rep];
      if (cross(w, u) == 0.0 && dot(w, u) < 0.0) runs[a].opp = runs[p % r].count;
    }
  }
  return runs;
}

// Depth count of the origin among the given offsets, plus coincident points.
int planar_depth_count(const std::vector<Planar>& v, int coincident) {
  if (v.empty()) return coincident;
  const int N = static_cast<int>(v.size());
  const auto runs = angular_runs(v);
  int best = N;
  for (const auto& r : runs) {
    const int right = N - r.left - r.opp - r.count;
    best = std::min({best, r.left + r.opp, right + r.count});
  }
  return coincident + best;
}

int exact1d_count(const Vector& x, const PointCloud& P) {
  int below = 0, above = 0;
  for (int i = 0; i < P.n(); ++i) {
    const double v = P.matrix()(i, 0);
    if (v <= x[0]) ++below;
    if (v >= x[0]) ++above;
  }
  return std::min(below, above);
}

int exact2d_count(const Vector& x, const PointCloud& P) {
  std::vector<Planar> v;
  v.reserve(P.n());
  int coincident = 0;
  for (int i = 0; i < P.n(); ++i) {
    const Planar w{P.matrix()(i, 0) - x[0], P.matrix()(i, 1) - x[1]};
    if (w.x == 0.0 && w.y == 0.0) ++coincident;
    else v.push_back(w);
  }
  return planar_depth_count(v, coincident);
}

// ---------------------------------------------------------------------------
// combinatorial depth in low dimension

// Orthonormal basis (columns) of the span of the rows of Y, relative tolerance tol.
Matrix span_basis(const Matrix& Y, double tol) {
  if (Y.rows() == 0) return Matrix(Y.cols(), 0);
  Eigen::JacobiSVD<Matrix> svd(Y, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s[r] > tol * s[0]) ++r;
  return svd.matrixV().leftCols(r);
}

// min over unit u of #{y : u.y >= 0} for nonzero rows y.
int origin_depth(const Matrix& Y) {
  const int m = static_cast<int>(Y.rows());
  if (m == 0) return 0;
  const int d = static_cast<int>(Y.cols());
  const double scale = Y.cwiseAbs().maxCoeff();
  const double tol = 1e-12;
  const Matrix B = span_basis(Y, tol);
  if (B.cols() < d) return origin_depth(Y * B);
  if (d == 1) {
    int pos = 0;
    for (int i = 0; i < m; ++i) pos += Y(i, 0) > 0 ? 1 : 0;
    return std::min(pos, m - pos);
  }
  int best = m;
  std::vector<int> pick(d - 1);
  std::iota(pick.begin(), pick.end(), 0);
  Matrix S(d - 1, d);
  for (;;) {
    for (int j = 0; j < d - 1; ++j) S.row(j) = Y.row(pick[j]);
    Eigen::FullPivLU<Matrix> lu(S);
    lu.setThreshold(tol);
    if (lu.rank() == d - 1) {
      Vector u = lu.kernel().col(0);
      u.normalize();
      const Vector proj = Y * u;
      std::vector<int> on;
      int pos = 0, neg = 0;
      for (int i = 0; i < m; ++i) {
        const double t = proj[i];
        if (std::abs(t) <= tol * std::max(scale, Y.row(i).cwiseAbs().maxCoeff())) on.push_back(i);
        else if (t > 0) ++pos;
        else ++neg;
      }
      const int side = std::min(pos, neg);
      if (side < best) {
        // tilt inside the hyperplane: recurse on the points it contains
        Matrix Y0(static_cast<int>(on.size()), d);
        for (std::size_t k = 0; k < on.size(); ++k) Y0.row(static_cast<int>(k)) = Y.row(on[k]);
        best = std::min(best, side + origin_depth(Y0));
      }
    }
    int j = d - 2;
    while (j >= 0 && pick[j] == m - (d - 1) + j) --j;
    if (j < 0) break;
    ++pick[j];
    for (int k = j + 1; k < d - 1; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

int combinatorial_count(const Vector& x, const PointCloud& P) {
  if (P.n() > kCombinatorialMaxN || P.d() > kCombinatorialMaxD)
    throw ModeUnsupported("combinatorial depth needs n <= 80 and d <= 4");
  std::vector<int> rest;
  int coincident = 0;
  for (int i = 0; i < P.n(); ++i) {
    if ((P.point(i) - x).cwiseAbs().maxCoeff() == 0.0) ++coincident;
    else rest.push_back(i);
  }
  Matrix Y(static_cast<int>(rest.size()), P.d());
  for (std::size_t k = 0; k < rest.size(); ++k) Y.row(static_cast<int>(k)) = P.matrix().row(rest[k]) - x.transpose();
  return coincident + origin_depth(Y);
}

double project(const double* row, const double* u, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) s += row[j] * u[j];
  return s;
}

// ---------------------------------------------------------------------------
// helpers for regions

Polytope enlarged_box(const RowMatrix& pts) {
  const Vector lo = pts.colwise().minCoeff().transpose();
  const Vector hi = pts.colwise().maxCoeff().transpose();
  const double pad = 0.1 * std::max((hi - lo).maxCoeff(), 1e-9 * std::max(1.0, pts.cwiseAbs().maxCoeff()));
  return make_box(lo.array() - pad, hi.array() + pad);
}

int count_inside(const Polytope& R, const PointCloud& P) {
  int c = 0;
  for (int i = 0; i < P.n(); ++i) c += R.contains(P.point(i)) ? 1 : 0;
  return c;
}

Polytope interval_region(const PointCloud& P, int k) {
  std::vector<double> v(P.n());
  for (int i = 0; i < P.n(); ++i) v[i] = P.matrix()(i, 0);
  std::sort(v.begin(), v.end());
  const int n = P.n();
  if (k > n || v[k - 1] > v[n - k]) throw EmptyRegion("tukey_region: level exceeds the maximal depth");
  RowMatrix ends(2, 1);
  ends << v[k - 1], v[n - k];
  return convex_hull(ends);
}

// Directed line through sample point i along X_j - X_i with its side counts.
struct SweepLine {
  int i, j, left, on;
};

void sweep_lines_from(const PointCloud& P, int i, std::vector<SweepLine>& out, int kmin, int kmax) {
  std::vector<Planar> v;
  std::vector<int> owner;
  v.reserve(P.n());
  owner.reserve(P.n());
  int coincident = 0;
  const double xi = P.matrix()(i, 0), yi = P.matrix()(i, 1);
  for (int j = 0; j < P.n(); ++j) {
    const Planar w{P.matrix()(j, 0) - xi, P.matrix()(j, 1) - yi};
    if (w.x == 0.0 && w.y == 0.0) ++coincident;
    else {
      v.push_back(w);
      owner.push_back(j);
    }
  }
  for (const auto& r : angular_runs(v)) {
    const int on = coincident + r.count + r.opp;
    // tight for levels k with left < k <= left + on
    if (r.left + 1 > kmax || r.left + on < kmin) continue;
    out.push_back({i, owner[r.rep], r.left, on});
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Evaluation Evaluation::automatic(int d) {
  Evaluation e;
  if (d <= 2) {
    e.depth.mode = DepthMode::Exact2d;
    e.region.mode = RegionMode::Exact2d;
  } else {
    e.depth.mode = DepthMode::Approximate;
    e.region.mode = RegionMode::Directions;
  }
  return e;
}

int depth_level(double alpha, int n) {
  if (!(alpha > 0.0) || !(alpha <= 1.0 + 1e-12)) throw DomainError("depth level: alpha must lie in (0, 1]");
  const double k = alpha * n;
  const double r = std::round(k);
  const int level = std::abs(k - r) <= 1e-9 * std::max(1.0, k) ? static_cast<int>(r) : static_cast<int>(std::ceil(k));
  return std::clamp(level, 1, n);
}

RowMatrix direction_set(int d, int m, std::uint64_t seed) {
  if (d < 1) throw DomainError("direction_set: d must be >= 1");
  if (m < 1) throw DomainError("direction_set: need at least one direction");
  RowMatrix U(m, d);
  if (d == 1) {
    U.setOnes();
    return U;
  }
  const int fixed = (m + 1) / 2;
  int row = 0;
  if (d == 2) {
    for (; row < fixed; ++row) {
      const double a = std::numbers::pi * row / fixed;
      U(row, 0) = std::cos(a);
      U(row, 1) = std::sin(a);
    }
  } else if (d == 3) {
    const RowMatrix F = sphere_points(3, fixed);
    for (; row < fixed; ++row) U.row(row) = F.row(row);
  } else {
    for (int a = 0; a < d && row < fixed; ++a, ++row) {
      U.row(row).setZero();
      U(row, a) = 1.0;
    }
    for (int a = 0; a < d && row < fixed; ++a)
      for (int b = a + 1; b < d && row < fixed; ++b)
        for (double s : {1.0, -1.0}) {
          if (row >= fixed) break;
          U.row(row).setZero();
          U(row, a) = std::numbers::sqrt2 / 2;
          U(row, b) = s * std::numbers::sqrt2 / 2;
          ++row;
        }
  }
  Rng rng(seed, static_cast<std::uint64_t>(d) * 1000003ULL + static_cast<std::uint64_t>(m));
  for (; row < m; ++row) U.row(row) = rng.unit_vector(d).transpose();
  return U;
}

ProjectionIndex::ProjectionIndex(const PointCloud& P, const RowMatrix& directions)
    : directions_(directions), n_(P.n()) {
  if (directions.cols() != P.d()) throw DimensionMismatch("ProjectionIndex: direction dimension");
  const int m = static_cast<int>(directions.rows());
  const int d = P.d();
  sorted_.resize(static_cast<std::size_t>(m) * n_);
  for (int j = 0; j < m; ++j) {
    double* out = sorted_.data() + static_cast<std::size_t>(j) * n_;
    const double* u = directions_.data() + static_cast<std::ptrdiff_t>(j) * d;
    for (int i = 0; i < n_; ++i) out[i] = project(P.row_data(i), u, d);
    std::sort(out, out + n_);
  }
}

int ProjectionIndex::depth_count(const Vector& x) const {
  const int d = static_cast<int>(directions_.cols());
  require_dim(x, d, "ProjectionIndex::depth_count");
  int best = n_;
  for (int j = 0; j < directions_.rows() && best > 0; ++j) {
    const double t = project(x.data(), directions_.data() + static_cast<std::ptrdiff_t>(j) * d, d);
    const double* s = sorted_.data() + static_cast<std::size_t>(j) * n_;
    const int below = static_cast<int>(std::upper_bound(s, s + n_, t) - s);
    const int above = n_ - static_cast<int>(std::lower_bound(s, s + n_, t) - s);
    best = std::min({best, below, above});
  }
  return best;
}

int depth_count(const Vector& x, const PointCloud& P, const DepthOptions& opts) {
  require_dim(x, P.d(), "hd");
  switch (opts.mode) {
    case DepthMode::Exact2d:
      if (P.d() == 1) return exact1d_count(x, P);
      if (P.d() != 2) throw ModeUnsupported("exact2d depth needs d <= 2");
      return exact2d_count(x, P);
    case DepthMode::Combinatorial:
      return combinatorial_count(x, P);
    case DepthMode::Approximate: {
      if (opts.directions < 1) throw DomainError("approximate depth needs at least one direction");
      const RowMatrix U = direction_set(P.d(), opts.directions, opts.seed);
      const int d = P.d();
      int best = P.n();
      for (int j = 0; j < U.rows(); ++j) {
        const double* u = U.data() + static_cast<std::ptrdiff_t>(j) * d;
        const double t = project(x.data(), u, d);
        int below = 0, above = 0;
        for (int i = 0; i < P.n(); ++i) {
          const double s = project(P.row_data(i), u, d);
          below += s <= t ? 1 : 0;
          above += s >= t ? 1 : 0;
        }
        best = std::min({best, below, above});
      }
      return best;
    }
  }
  throw ModeUnsupported("unknown depth mode");
}

double hd(const Vector& x, const PointCloud& P, const DepthOptions& opts) {
  return static_cast<double>(depth_count(x, P, opts)) / P.n();
}

std::vector<int> sample_depth_counts(const PointCloud& P, const DepthOptions& opts) {
  std::vector<int> counts(P.n());
  if (opts.mode != DepthMode::Approximate) {
    for (int i = 0; i < P.n(); ++i) counts[i] = depth_count(P.point(i), P, opts);
    return counts;
  }
  const ProjectionIndex index(P, direction_set(P.d(), opts.directions, opts.seed));
  for (int i = 0; i < P.n(); ++i) counts[i] = index.depth_count(P.point(i));
  if (P.d() <= detail::kMaxDim) {
    const auto topo = detail::hull_topology(P.matrix(), 1e-9 * detail::coordinate_scale(P.matrix()));
    if (topo.affine_dim == P.d()) {
      for (int v : topo.vertices) {
        int mult = 0;
        for (int i = 0; i < P.n(); ++i) mult += (P.matrix().row(i) == P.matrix().row(v)) ? 1 : 0;
        for (int i = 0; i < P.n(); ++i)
          if (P.matrix().row(i) == P.matrix().row(v)) counts[i] = mult;
      }
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------
// region family

struct RegionFamily::Impl {
  int n = 0;
  int d = 0;
  // affine reduction for lower-dimensional samples
  bool reduced = false;
  Vector origin;
  Matrix basis;  // d x r
  std::unique_ptr<RegionFamily> inner;
  bool single_point = false;

  Polytope box;
  // exact planar lines, sorted by left count (cached for moderate n)
  std::vector<SweepLine> lines;
  bool lines_cached = false;
  int max_on = 0;
  // direction projections
  std::unique_ptr<ProjectionIndex> index;
};

RegionFamily::RegionFamily(PointCloud P, RegionOptions opts)
    : sample_(std::move(P)), opts_(opts), impl_(std::make_unique<Impl>()) {
  if (sample_.empty()) throw DomainError("RegionFamily: empty sample");
  const int n = sample_.n(), d = sample_.d();
  impl_->n = n;
  impl_->d = d;
  if (opts_.mode == RegionMode::Exact2d && d > 2) throw ModeUnsupported("exact2d regions need d <= 2");
  if (opts_.mode == RegionMode::Directions && opts_.directions < 1)
    throw DomainError("direction regions need at least one direction");

  const Vector mean = sample_.mean();
  Matrix centered = sample_.matrix().rowwise() - mean.transpose();
  const Matrix B = centered.cwiseAbs().maxCoeff() == 0.0 ? Matrix(d, 0) : span_basis(centered, 1e-10);
  if (B.cols() < d) {
    impl_->reduced = true;
    impl_->origin = mean;
    impl_->basis = B;
    if (B.cols() == 0) {
      impl_->single_point = true;
      return;
    }
    RowMatrix coords = centered * B;
    RegionOptions inner_opts = opts_;
    inner_opts.mode = B.cols() <= 2 ? RegionMode::Exact2d : RegionMode::Directions;
    impl_->inner = std::make_unique<RegionFamily>(PointCloud(std::move(coords)), inner_opts);
    return;
  }

  impl_->box = enlarged_box(sample_.matrix());
  if (d == 1) return;
  if (opts_.mode == RegionMode::Exact2d) {
    if (n <= kLineCacheMaxN) {
      for (int i = 0; i < n; ++i) sweep_lines_from(sample_, i, impl_->lines, 1, n);
      std::sort(impl_->lines.begin(), impl_->lines.end(),
                [](const SweepLine& a, const SweepLine& b) { return a.left < b.left; });
      for (const auto& l : impl_->lines) impl_->max_on = std::max(impl_->max_on, l.on);
      impl_->lines_cached = true;
    }
  } else {
    impl_->index = std::make_unique<ProjectionIndex>(sample_, direction_set(d, opts_.directions, opts_.seed));
  }
}

RegionFamily::~RegionFamily() = default;

namespace {

Polytope planar_region(const PointCloud& P, const std::vector<SweepLine>& lines, const Polytope& box) {
  RowMatrix normals(static_cast<int>(lines.size()), 2);
  Vector offsets(static_cast<int>(lines.size()));
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto& l = lines[r];
    const double wx = P.matrix()(l.j, 0) - P.matrix()(l.i, 0);
    const double wy = P.matrix()(l.j, 1) - P.matrix()(l.i, 1);
    const double len = std::hypot(wx, wy);
    const int k = static_cast<int>(r);
    normals(k, 0) = -wy / len;
    normals(k, 1) = wx / len;
    offsets[k] = normals(k, 0) * P.matrix()(l.i, 0) + normals(k, 1) * P.matrix()(l.i, 1);
  }
  return halfspace_intersection(normals, offsets, box);
}

}  // namespace

const DepthRegion& RegionFamily::at_level(int k) const {
  const int n = impl_->n;
  if (k < 1) throw DomainError("tukey_region: level must be >= 1");
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(k);
    if (it != cache_.end()) {
      if (!it->second) throw EmptyRegion("tukey_region: level exceeds the maximal depth");
      return *it->second;
    }
  }
  auto result = std::make_unique<DepthRegion>();
  result->alpha = static_cast<double>(k) / n;
  result->level = k;
  result->n = n;
  try {
    if (k > n) throw EmptyRegion("tukey_region: level exceeds the sample size");
    if (impl_->single_point) {
      result->region = convex_hull(RowMatrix(sample_.matrix().topRows(1)));
    } else if (impl_->reduced) {
      const Polytope& low = impl_->inner->at_level(k).region;
      RowMatrix lifted = (low.vertices() * impl_->basis.transpose()).rowwise() + impl_->origin.transpose();
      result->region = convex_hull(lifted);
    } else if (impl_->d == 1) {
      result->region = interval_region(sample_, k);
    } else if (opts_.mode == RegionMode::Exact2d) {
      std::vector<SweepLine> tight;
      if (impl_->lines_cached) {
        const auto& L = impl_->lines;
        auto it = std::lower_bound(L.begin(), L.end(), k - impl_->max_on,
                                   [](const SweepLine& l, int v) { return l.left < v; });
        for (; it != L.end() && it->left <= k - 1; ++it)
          if (it->left + it->on >= k) tight.push_back(*it);
      } else {
        for (int i = 0; i < n; ++i) sweep_lines_from(sample_, i, tight, k, k);
      }
      if (tight.empty()) throw EmptyRegion("tukey_region: level exceeds the maximal depth");
      result->region = planar_region(sample_, tight, impl_->box);
    } else {
      const ProjectionIndex& idx = *impl_->index;
      const int m = static_cast<int>(idx.directions().rows());
      const int d = impl_->d;
      RowMatrix normals(2 * m, d);
      Vector offsets(2 * m);
      for (int j = 0; j < m; ++j) {
        const double lo = idx.lower(j, k), hi = idx.upper(j, k);
        if (lo > hi) throw EmptyRegion("tukey_region: level exceeds the maximal depth");
        normals.row(2 * j) = idx.directions().row(j);
        offsets[2 * j] = hi;
        normals.row(2 * j + 1) = -idx.directions().row(j);
        offsets[2 * j + 1] = -lo;
      }
      result->region = halfspace_intersection(normals, offsets, impl_->box);
    }
  } catch (const EmptyRegion&) {
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(k, nullptr);
    throw;
  }
  result->n_inside = count_inside(result->region, sample_);
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = cache_.emplace(k, std::move(result));
  return *it->second;
}

bool RegionFamily::nonempty(int k) const {
  try {
    at_level(k);
    return true;
  } catch (const EmptyRegion&) {
    return false;
  }
}

int RegionFamily::max_level() const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (max_level_ > 0) return max_level_;
  }
  int lo = 1, hi = impl_->n;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (nonempty(mid)) lo = mid;
    else hi = mid - 1;
  }
  std::lock_guard<std::mutex> lock(mutex_);
  max_level_ = lo;
  return lo;
}

DepthRegion tukey_region(const PointCloud& P, double alpha, const RegionOptions& opts) {
  const RegionFamily family(P, opts);
  DepthRegion r = family.at_alpha(alpha);
  r.alpha = alpha;
  return r;
}

MaxDepth max_depth_and_median(const RegionFamily& family) {
  MaxDepth out;
  out.level = family.max_level();
  out.pi_n = static_cast<double>(out.level) / family.sample().n();
  out.median = family.at_level(out.level).region.barycenter();
  return out;
}

MaxDepth max_depth_and_median(const PointCloud& P, const RegionOptions& opts) {
  const RegionFamily family(P, opts);
  return max_depth_and_median(family);
}

double cutoff_for_probability(const std::vector<int>& sample_counts, double p) {
  const int n = static_cast<int>(sample_counts.size());
  if (n == 0) throw DomainError("cutoff_for_probability: empty sample");
  if (!(p > 0.0) || !(p <= 1.0)) throw DomainError("cutoff_for_probability: p must lie in (0, 1]");
  const int need = depth_level(p, n);
  std::vector<int> sorted = sample_counts;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return static_cast<double>(std::max(1, sorted[need - 1])) / n;
}

double cutoff_for_probability(const PointCloud& P, double p, const DepthOptions& opts) {
  return cutoff_for_probability(sample_depth_counts(P, opts), p);
}

}  // namespace illumdepth
