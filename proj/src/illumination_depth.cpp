#include "illumdepth/illumination_depth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace illumdepth {

namespace {

void require_full(const Polytope& K, const char* where) {
  if (K.degenerate() || !(K.volume() > 0.0)) throw DegenerateRegion(std::string(where) + ": region has volume 0");
}

// Excess along the ray c + t u is piecewise linear in t: facet f joins once
// t passes its breakpoint and then adds area_f / d * (n_f.u) * (t - t_f).
class RayProfile {
 public:
  RayProfile(const Polytope& K, const Vector& c, const Vector& u) {
    const RowMatrix& N = K.facet_normals();
    const int d = K.dim();
    std::vector<std::pair<double, double>> joins;  // (breakpoint, slope)
    for (int f = 0; f < K.num_facets(); ++f) {
      const double s = N.row(f).dot(u);
      if (!(s > 0.0)) continue;
      const double t = std::max(0.0, (K.facet_offsets()[f] - N.row(f).dot(c)) / s);
      joins.emplace_back(t, K.facet_areas()[f] / d * s);
    }
    if (joins.empty()) throw InflationOverflow("level_set_boundary: region is unbounded along a ray");
    std::sort(joins.begin(), joins.end());
    breaks_.reserve(joins.size());
    slope_.reserve(joins.size());
    shift_.reserve(joins.size());
    double s1 = 0.0, s0 = 0.0;
    for (const auto& [t, w] : joins) {
      s1 += w;
      s0 += w * t;
      breaks_.push_back(t);
      slope_.push_back(s1);
      shift_.push_back(s0);
    }
  }

  double exit() const { return breaks_.front(); }

  // Largest t with excess(t) <= target.
  double solve(double target) const {
    if (target <= 0.0) return exit();
    const std::size_t m = breaks_.size();
    for (std::size_t j = 0; j + 1 < m; ++j) {
      if (slope_[j] * breaks_[j + 1] - shift_[j] > target) return (target + shift_[j]) / slope_[j];
    }
    return (target + shift_[m - 1]) / slope_[m - 1];
  }

 private:
  std::vector<double> breaks_, slope_, shift_;
};

RowMatrix trace_all(const Polytope& K, const RowMatrix& directions, double target) {
  if (directions.cols() != K.dim()) throw DimensionMismatch("level_set_boundary: direction dimension");
  const Vector c = K.barycenter();
  RowMatrix out(directions.rows(), K.dim());
  for (int i = 0; i < directions.rows(); ++i) {
    const Vector u = directions.row(i).transpose();
    if (!(u.norm() > 0.0)) throw DomainError("level_set_boundary: zero direction");
    out.row(i) = (c + RayProfile(K, c, u).solve(target) * u).transpose();
  }
  return out;
}

}  // namespace

double illumination_excess(const Polytope& K, const Vector& x) {
  require_dim(x, K.dim(), "illumination");
  require_full(K, "illumination");
  const RowMatrix& N = K.facet_normals();
  const int d = K.dim();
  double s = 0.0;
  for (int f = 0; f < K.num_facets(); ++f) {
    const double h = N.row(f).dot(x) - K.facet_offsets()[f];
    if (h > 0.0) s += K.facet_areas()[f] * h;
  }
  return s / d;
}

Illumination illumination(const Vector& x, const Polytope& K) {
  const double excess = illumination_excess(K, x);
  return {K.volume() + excess, 1.0 + excess / K.volume()};
}

Illumination illumination(const Vector& x, const DepthRegion& R) { return illumination(x, R.region); }

int compare_centrality(const IlluminationDepth& a, const IlluminationDepth& b) {
  if (a.depth_count != b.depth_count) return a.depth_count > b.depth_count ? -1 : 1;
  if (a.norm_illum != b.norm_illum) return a.norm_illum < b.norm_illum ? -1 : 1;
  return 0;
}

double robust_alpha(double pi_n) {
  if (!(pi_n > 0.0) || pi_n > 1.0) throw DomainError("robust_alpha: maximal depth must lie in (0, 1]");
  return pi_n / (1.0 + pi_n);
}

IlluminationDepthModel::IlluminationDepthModel(std::shared_ptr<RegionFamily> family, double alpha,
                                               const Evaluation& eval)
    : eval_(eval), family_(std::move(family)), alpha_(alpha) {
  region_ = &family_->at_alpha(alpha);
  if (region_->degenerate()) throw DegenerateRegion("illumination depth: the cutoff region has volume 0");
  if (eval_.depth.mode == DepthMode::Approximate)
    index_ = std::make_shared<ProjectionIndex>(
        sample(), direction_set(sample().d(), eval_.depth.directions, eval_.depth.seed));
}

IlluminationDepthModel::IlluminationDepthModel(PointCloud P, double alpha, const Evaluation& eval)
    : IlluminationDepthModel(std::make_shared<RegionFamily>(std::move(P), eval.region), alpha, eval) {}

IlluminationDepthModel::IlluminationDepthModel(const PointCloud& P, double alpha)
    : IlluminationDepthModel(P, alpha, Evaluation::automatic(P.d())) {}

IlluminationDepthModel IlluminationDepthModel::robust(PointCloud P, const Evaluation& eval) {
  auto family = std::make_shared<RegionFamily>(std::move(P), eval.region);
  const double pi = static_cast<double>(family->max_level()) / family->sample().n();
  return IlluminationDepthModel(family, robust_alpha(pi), eval);
}

IlluminationDepthModel IlluminationDepthModel::robust(PointCloud P) {
  const Evaluation eval = Evaluation::automatic(P.d());
  return robust(std::move(P), eval);
}

double IlluminationDepthModel::pi_n() const {
  return static_cast<double>(family_->max_level()) / sample().n();
}

int IlluminationDepthModel::depth_count(const Vector& x) const {
  if (index_) return index_->depth_count(x);
  return illumdepth::depth_count(x, sample(), eval_.depth);
}

IlluminationDepth IlluminationDepthModel::evaluate(const Vector& x) const {
  IlluminationDepth out;
  out.depth_count = depth_count(x);
  out.hd = static_cast<double>(out.depth_count) / sample().n();
  out.alpha_used = alpha_;
  if (out.depth_count < region_->level) out.norm_illum = illumination(x, region_->region).norm_illum;
  return out;
}

std::vector<IlluminationDepth> IlluminationDepthModel::evaluate_many(const RowMatrix& Q) const {
  if (Q.cols() != sample().d()) throw DimensionMismatch("evaluate_many: query dimension");
  std::vector<IlluminationDepth> out(Q.rows());
  for (int i = 0; i < Q.rows(); ++i) out[i] = evaluate(Q.row(i).transpose());
  return out;
}

bool IlluminationDepthModel::level_set_member(const Vector& x, double delta) const {
  return level_set_membership(x, region_->region, delta);
}

RowMatrix IlluminationDepthModel::level_set_boundary(double delta, const RowMatrix& directions) const {
  return illumdepth::level_set_boundary(region_->region, delta, directions);
}

IlluminationDepth id_vector(const Vector& x, const PointCloud& P, double alpha, const Evaluation& eval) {
  return IlluminationDepthModel(P, alpha, eval).evaluate(x);
}

IlluminationDepth id_vector(const Vector& x, const PointCloud& P, double alpha) {
  return id_vector(x, P, alpha, Evaluation::automatic(P.d()));
}

bool level_set_membership(const Vector& x, const Polytope& K, double delta) {
  if (!(delta >= 1.0)) throw DomainError("level set: delta must be >= 1");
  const double excess = illumination_excess(K, x);
  return excess <= (delta - 1.0) * K.volume() * (1.0 + 1e-12) + 1e-15 * K.volume();
}

bool level_set_membership(const Vector& x, const DepthRegion& R, double delta) {
  return level_set_membership(x, R.region, delta);
}

RowMatrix level_set_boundary(const Polytope& K, double delta, const RowMatrix& directions) {
  if (!(delta >= 1.0)) throw DomainError("level set: delta must be >= 1");
  require_full(K, "level_set_boundary");
  return trace_all(K, directions, (delta - 1.0) * K.volume());
}

RowMatrix level_set_boundary(const DepthRegion& R, double delta, const RowMatrix& directions) {
  return level_set_boundary(R.region, delta, directions);
}

RowMatrix illumination_body_boundary(const Polytope& K, double excess, const RowMatrix& directions) {
  if (!(excess >= 0.0)) throw DomainError("illumination body: excess must be >= 0");
  require_full(K, "illumination_body_boundary");
  return trace_all(K, directions, excess);
}

std::vector<double> affine_surface_area_estimate(const Polytope& K, const std::vector<double>& deltas,
                                                 int directions) {
  require_full(K, "affine_surface_area_estimate");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw DomainError("affine_surface_area_estimate: deltas must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      throw DomainError("affine_surface_area_estimate: deltas must be decreasing");
  }
  const int d = K.dim();
  const RowMatrix U = d <= 3 ? sphere_points(d, directions) : direction_set(d, directions, 1);
  std::vector<double> out;
  out.reserve(deltas.size());
  if (d == 2) {
    const Vector c = K.barycenter();
    const double dtheta = 2.0 * std::numbers::pi / U.rows();
    std::vector<double> added(deltas.size(), 0.0);
    for (int i = 0; i < U.rows(); ++i) {
      const RayProfile ray(K, c, U.row(i).transpose());
      const double r0 = ray.exit();
      for (std::size_t j = 0; j < deltas.size(); ++j) {
        const double r = ray.solve(deltas[j]);
        added[j] += 0.5 * (r * r - r0 * r0) * dtheta;
      }
    }
    for (std::size_t j = 0; j < deltas.size(); ++j) out.push_back(added[j] / std::pow(deltas[j], 2.0 / (d + 1)));
    return out;
  }
  const double inner = convex_hull(trace_all(K, U, 0.0)).volume();
  for (double delta : deltas) {
    const double outer = convex_hull(trace_all(K, U, delta)).volume();
    out.push_back((outer - inner) / std::pow(delta, 2.0 / (d + 1)));
  }
  return out;
}

}  // namespace illumdepth
