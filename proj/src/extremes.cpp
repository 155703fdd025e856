#include "illumdepth/extremes.hpp"

#include "illumdepth/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace illumdepth {

namespace {

RowMatrix trace_directions(int d, int count) {
  if (d <= 3) return sphere_points(d, count);
  return direction_set(d, count, 0);
}

}  // namespace

double hill_tail_index(std::vector<double> radii, int k) {
  const int n = static_cast<int>(radii.size());
  if (k < 2 || k >= n) throw DomainError("hill_tail_index: need 2 <= k < n");
  std::nth_element(radii.begin(), radii.begin() + k, radii.end(), std::greater<>());
  const double threshold = radii[k];
  if (!(threshold > 0.0)) throw InsufficientTail("hill_tail_index: threshold radius is zero");
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += std::log(radii[i] / threshold);
  if (!(sum > 0.0)) throw InsufficientTail("hill_tail_index: the k largest radii are all tied");
  return k / sum;
}

double hill_tail_index(const PointCloud& P, const Vector& center, int k) {
  require_dim(center, P.d(), "hill_tail_index");
  std::vector<double> radii(P.n());
  for (int i = 0; i < P.n(); ++i) radii[i] = (P.matrix().row(i).transpose() - center).norm();
  return hill_tail_index(std::move(radii), k);
}

double inflation_factor(int k, int n, double delta, double tail_index) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("inflation_factor: delta must lie in (0, 1)");
  if (!(tail_index > 0.0)) throw DomainError("inflation_factor: tail index must be positive");
  const double c = std::pow(static_cast<double>(k) / (n * delta), 1.0 / tail_index);
  if (!std::isfinite(c)) throw InflationOverflow("inflation_factor: factor is not finite");
  return c;
}

bool ExtremeRegionEstimate::contains(const Vector& x) const {
  if (kind == ExtremeKind::Inflate) return region.contains(x);
  return level_set_membership(x, base.region, g(base.region.dim(), c));
}

ExtremeRegionEstimate extreme_region(const PointCloud& P, int k, double delta, ExtremeKind kind,
                                     const ExtremeOptions& opts) {
  const int n = P.n();
  if (k < 2 || k >= n) throw DomainError("extreme_region: need 2 <= k < n");
  const double base_alpha = static_cast<double>(k) / n;
  if (!(delta > 0.0) || delta > base_alpha) throw DomainError("extreme_region: need 0 < delta <= k/n");
  const IlluminationDepthModel model(P, base_alpha, opts.eval);

  ExtremeRegionEstimate out;
  out.base = model.region();
  out.center = max_depth_and_median(model.family()).median;
  out.tail_index = opts.tail_index ? *opts.tail_index : hill_tail_index(P, out.center, k);
  out.c = inflation_factor(k, n, delta, out.tail_index);
  out.kind = kind;
  const RowMatrix dirs = trace_directions(P.d(), opts.directions);
  if (kind == ExtremeKind::Inflate) {
    out.region = scale_about(out.base.region, out.c, out.center);
    out.boundary = level_set_boundary(out.region, 1.0, dirs);
  } else {
    out.boundary = level_set_boundary(out.base.region, g(P.d(), out.c), dirs);
    out.region = convex_hull(out.boundary);
  }
  return out;
}

Ellipsoid true_cauchy_region(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("true_cauchy_region: delta must lie in (0, 1/2)");
  const double r = std::tan(std::numbers::pi * (0.5 - delta));
  return Ellipsoid(Vector::Zero(2), Matrix::Identity(2, 2) * (r * r));
}

double hausdorff_to_ball(const RowMatrix& boundary, const Vector& center, double radius, int directions) {
  if (boundary.cols() != 2 || center.size() != 2) throw DimensionMismatch("hausdorff_to_ball: planar input only");
  if (boundary.rows() == 0 || directions < 3) throw DomainError("hausdorff_to_ball: empty input");
  double worst = 0.0;
  for (int i = 0; i < directions; ++i) {
    const double a = 2.0 * std::numbers::pi * i / directions;
    const Eigen::Vector2d u(std::cos(a), std::sin(a));
    const double hk = (boundary * u).maxCoeff();
    const double hb = u.dot(center) + radius;
    worst = std::max(worst, std::abs(hk - hb));
  }
  return worst;
}

double qda_score(double prior, double volume, double distance) {
  return 2.0 * std::log(prior / volume) - distance * distance;
}

QdaModel::QdaModel(IlluminationDepthModel m1, IlluminationDepthModel m2, double delta,
                   std::shared_ptr<const SymmetricCdf> F, QdaOptions opts)
    : m1_(std::move(m1)), m2_(std::move(m2)), delta_(delta), F_(std::move(F)), opts_(opts) {
  cutoff_quantile_ = F_->quantile(1.0 - delta_);
  if (!(cutoff_quantile_ > 0.0)) throw QuantileUndefined("qda: F^{-1}(1 - delta) must be positive");
}

QdaModel QdaModel::fit(const PointCloud& P1, const PointCloud& P2, double delta,
                       std::shared_ptr<const SymmetricCdf> F, const QdaOptions& opts) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("qda: delta must lie in (0, 1/2)");
  if (!(opts.prior1 > 0.0 && opts.prior1 < 1.0)) throw DomainError("qda: priors must lie in (0, 1)");
  if (P1.d() != P2.d()) throw DimensionMismatch("qda: training sets differ in dimension");
  if (!F) F = std::make_shared<NormalCdf>();
  return QdaModel(IlluminationDepthModel(P1, delta, opts.eval), IlluminationDepthModel(P2, delta, opts.eval), delta,
                  std::move(F), opts);
}

const IlluminationDepthModel& QdaModel::class_model(int j) const {
  if (j != 1 && j != 2) throw DomainError("qda: class must be 1 or 2");
  return j == 1 ? m1_ : m2_;
}

double QdaModel::volume(int j) const { return class_model(j).region().region.volume(); }

double QdaModel::prior(int j) const {
  class_model(j);
  return j == 1 ? opts_.prior1 : 1.0 - opts_.prior1;
}

double QdaModel::distance(const IlluminationDepthModel& m, const IlluminationDepth& v) const {
  if (v.depth_count >= m.level()) {
    const double p = 1.0 - v.hd;
    if (p <= 0.0) return 0.0;
    return std::max(0.0, F_->quantile(std::min(p, 1.0 - 1e-16)));
  }
  return cutoff_quantile_ * g_inverse(m.sample().d(), std::max(1.0, v.norm_illum));
}

double QdaModel::distance(int j, const Vector& x) const {
  const IlluminationDepthModel& m = class_model(j);
  return distance(m, m.evaluate(x));
}

double QdaModel::score(int j, const Vector& x) const { return qda_score(prior(j), volume(j), distance(j, x)); }

int QdaModel::classify(const Vector& x) const {
  const IlluminationDepth e1 = m1_.evaluate(x), e2 = m2_.evaluate(x);
  if (opts_.simplified_inside && (e1.depth_count >= m1_.level() || e2.depth_count >= m2_.level()))
    return e1.hd >= e2.hd ? 1 : 2;
  const double s1 = qda_score(prior(1), volume(1), distance(m1_, e1));
  const double s2 = qda_score(prior(2), volume(2), distance(m2_, e2));
  return s1 >= s2 ? 1 : 2;
}

std::vector<int> QdaModel::classify_many(const RowMatrix& Q) const {
  std::vector<int> out(Q.rows());
  for (int i = 0; i < Q.rows(); ++i) out[i] = classify(Q.row(i).transpose());
  return out;
}

ClassicalQda::Class ClassicalQda::estimate(const PointCloud& P, double prior) {
  if (P.n() < P.d() + 1) throw SingularScatter("classical qda: too few training points");
  Class c;
  c.mean = P.mean();
  const RowMatrix centered = P.matrix().rowwise() - c.mean.transpose();
  const Matrix cov = (centered.transpose() * centered) / (P.n() - 1);
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw SingularScatter("classical qda: covariance is singular");
  c.logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  c.precision = llt.solve(Matrix::Identity(P.d(), P.d()));
  c.prior = prior;
  return c;
}

ClassicalQda ClassicalQda::fit(const PointCloud& P1, const PointCloud& P2, double prior1) {
  if (!(prior1 > 0.0 && prior1 < 1.0)) throw DomainError("classical qda: priors must lie in (0, 1)");
  if (P1.d() != P2.d()) throw DimensionMismatch("classical qda: training sets differ in dimension");
  ClassicalQda q;
  q.c1_ = estimate(P1, prior1);
  q.c2_ = estimate(P2, 1.0 - prior1);
  return q;
}

double ClassicalQda::score(int j, const Vector& x) const {
  if (j != 1 && j != 2) throw DomainError("classical qda: class must be 1 or 2");
  const Class& c = j == 1 ? c1_ : c2_;
  require_dim(x, static_cast<int>(c.mean.size()), "classical qda");
  const Vector r = x - c.mean;
  return 2.0 * std::log(c.prior) - c.logdet - r.dot(c.precision * r);
}

int ClassicalQda::classify(const Vector& x) const { return score(1, x) >= score(2, x) ? 1 : 2; }

std::vector<int> ClassicalQda::classify_many(const RowMatrix& Q) const {
  std::vector<int> out(Q.rows());
  for (int i = 0; i < Q.rows(); ++i) out[i] = classify(Q.row(i).transpose());
  return out;
}

RefinedDepth::RefinedDepth(const PointCloud& P, int k, const Evaluation& eval)
    : model_(P, static_cast<double>(k) / P.n(), eval) {
  if (k < 2 || k >= P.n()) throw DomainError("refined depth: need 2 <= k < n");
  center_ = max_depth_and_median(model_.family()).median;
  tail_index_ = hill_tail_index(P, center_, k);
}

double RefinedDepth::operator()(const Vector& x) const {
  const IlluminationDepth e = model_.evaluate(x);
  if (e.depth_count >= model_.level()) return e.hd;
  const Polytope& S = model_.region().region;
  double gauge = 0.0;
  for (int f = 0; f < S.num_facets(); ++f) {
    const Vector u = S.facet_normals().row(f).transpose();
    const double room = S.facet_offsets()[f] - u.dot(center_);
    if (room > 0.0) gauge = std::max(gauge, u.dot(x - center_) / room);
  }
  const double base = static_cast<double>(model_.level()) / model_.sample().n();
  return base * std::pow(std::max(gauge, 1.0), -tail_index_);
}

RefinedDepthClassifier::RefinedDepthClassifier(const PointCloud& P1, const PointCloud& P2, int k, double prior1,
                                               const Evaluation& eval)
    : d1_(P1, k, eval), d2_(P2, k, eval), prior1_(prior1) {
  if (!(prior1 > 0.0 && prior1 < 1.0)) throw DomainError("refined depth classifier: priors must lie in (0, 1)");
}

int RefinedDepthClassifier::classify(const Vector& x) const {
  return prior1_ * d1_(x) >= (1.0 - prior1_) * d2_(x) ? 1 : 2;
}

std::vector<int> RefinedDepthClassifier::classify_many(const RowMatrix& Q) const {
  std::vector<int> out(Q.rows());
  for (int i = 0; i < Q.rows(); ++i) out[i] = classify(Q.row(i).transpose());
  return out;
}

}  // namespace illumdepth
