#include "illumdepth/elliptical.hpp"

#include "illumdepth/special.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace illumdepth {

namespace {

void check_probability(double p, const char* where) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(where) + ": probability must lie in (0, 1)");
}

Matrix inverse_sqrt(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0))
    throw SingularScatter("scatter matrix is not positive definite");
  return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

double NormalCdf::cdf(double t) const { return special::normal_cdf(t); }

double NormalCdf::quantile(double p) const {
  check_probability(p, "normal quantile");
  return special::normal_quantile(p);
}

double CallbackCdf::quantile(double p) const {
  check_probability(p, "quantile");
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 2000 && cdf_(lo) >= p; ++i) lo *= 2.0;
  for (int i = 0; i < 2000 && cdf_(hi) < p; ++i) hi *= 2.0;
  if (!(cdf_(lo) < p) || !(cdf_(hi) >= p)) throw QuantileUndefined("quantile: could not bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf_(mid) >= p) hi = mid;
    else lo = mid;
  }
  return hi;
}

StepCdf StepCdf::symmetrized(const std::vector<double>& values) {
  if (values.empty()) throw DomainError("StepCdf: no values");
  StepCdf F;
  F.support_.reserve(2 * values.size());
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("StepCdf: non-finite value");
    F.support_.push_back(v);
    F.support_.push_back(-v);
  }
  std::sort(F.support_.begin(), F.support_.end());
  return F;
}

double StepCdf::cdf(double t) const {
  const auto it = std::upper_bound(support_.begin(), support_.end(), t);
  return static_cast<double>(it - support_.begin()) / support_.size();
}

double StepCdf::left_limit(double t) const {
  const auto it = std::lower_bound(support_.begin(), support_.end(), t);
  return static_cast<double>(it - support_.begin()) / support_.size();
}

double StepCdf::quantile(double p) const {
  check_probability(p, "step quantile");
  const int M = static_cast<int>(support_.size());
  return support_[depth_level(p, M) - 1];
}

Whitening robust_whiten(const IlluminationDepthModel& model) {
  const PointCloud& P = model.sample();
  const int d = P.d();
  Whitening w;
  w.mu = max_depth_and_median(model.family()).median;
  const Polytope& R = model.region().region;
  std::vector<int> inside;
  for (int i = 0; i < P.n(); ++i)
    if (R.contains(P.point(i))) inside.push_back(i);
  if (static_cast<int>(inside.size()) < d + 1) throw SingularScatter("robust_whiten: too few points in the region");
  const PointCloud Y = P.subset(inside);
  const Vector mean = Y.mean();
  const Matrix C = Y.matrix().rowwise() - mean.transpose();
  Matrix S = C.transpose() * C / static_cast<double>(Y.n() - 1);
  S = 0.5 * (S + S.transpose());
  Eigen::LLT<Matrix> llt(S);
  if (llt.info() != Eigen::Success) throw SingularScatter("robust_whiten: trimmed covariance is singular");
  const double logdet = 2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
  if (!std::isfinite(logdet)) throw SingularScatter("robust_whiten: trimmed covariance is singular");
  w.sigma = S * std::exp(-logdet / d);
  return w;
}

Whitening robust_whiten(const PointCloud& P, double alpha, const Evaluation& eval) {
  return robust_whiten(IlluminationDepthModel(P, alpha, eval));
}

Whitening robust_whiten(const PointCloud& P, double alpha) {
  return robust_whiten(P, alpha, Evaluation::automatic(P.d()));
}

StepCdf estimate_F(const PointCloud& P, const Whitening& w) {
  require_dim(w.mu, P.d(), "estimate_F");
  const Matrix W = inverse_sqrt(w.sigma);
  std::vector<double> pooled;
  pooled.reserve(static_cast<std::size_t>(P.n()) * P.d());
  for (int i = 0; i < P.n(); ++i) {
    const Vector z = W * (P.point(i) - w.mu);
    for (int j = 0; j < P.d(); ++j) pooled.push_back(z[j]);
  }
  return StepCdf::symmetrized(pooled);
}

double m_alpha_value(double hd, bool depth_inside, double norm_illum, int d, const SymmetricCdf& F, double alpha) {
  check_probability(alpha, "m_alpha");
  const double q = F.quantile(1.0 - alpha);
  if (!(q > 0.0)) throw QuantileUndefined("m_alpha: F^{-1}(1 - alpha) must be positive");
  if (depth_inside) {
    const double p = 1.0 - hd;
    if (!(p > 0.0)) return 0.0;
    return std::max(0.0, F.quantile(std::min(p, 1.0 - 1e-16)));
  }
  return q * g_inverse(d, std::max(1.0, norm_illum));
}

double rhd_value(double hd, bool depth_inside, double norm_illum, int d, const SymmetricCdf& F, double alpha) {
  check_probability(alpha, "rhd");
  if (!(F.quantile(1.0 - alpha) > 0.0)) throw QuantileUndefined("rhd: F^{-1}(1 - alpha) must be positive");
  if (depth_inside) return hd;
  const double v = F.cdf(g_inverse(d, std::max(1.0, norm_illum)) * F.quantile(alpha));
  return std::clamp(v, 0.0, 1.0);
}

ECModel::ECModel(IlluminationDepthModel depth, Whitening w, std::shared_ptr<const SymmetricCdf> F)
    : depth_(std::move(depth)), whitening_(std::move(w)), F_(std::move(F)) {}

ECModel ECModel::fit(const PointCloud& P, double alpha, const Evaluation& eval) {
  IlluminationDepthModel depth(P, alpha, eval);
  Whitening w = robust_whiten(depth);
  auto F = std::make_shared<StepCdf>(estimate_F(P, w));
  if (!(F->quantile(1.0 - alpha) > 0.0)) throw QuantileUndefined("ECModel: F_n^{-1}(1 - alpha) must be positive");
  return ECModel(std::move(depth), std::move(w), std::move(F));
}

ECModel ECModel::fit(const PointCloud& P, double alpha) { return fit(P, alpha, Evaluation::automatic(P.d())); }

ECModel ECModel::fit(const PointCloud& P, double alpha, const Evaluation& eval, std::shared_ptr<const SymmetricCdf> F) {
  if (!F) throw DomainError("ECModel: null reference CDF");
  IlluminationDepthModel depth(P, alpha, eval);
  Whitening w = robust_whiten(depth);
  return ECModel(std::move(depth), std::move(w), std::move(F));
}

double ECModel::m_alpha(const Vector& x) const {
  const IlluminationDepth e = depth_.evaluate(x);
  return m_alpha_value(e.hd, e.depth_count >= depth_.level(), e.norm_illum, d(), *F_, alpha());
}

double ECModel::rhd(const Vector& x) const {
  const IlluminationDepth e = depth_.evaluate(x);
  return rhd_value(e.hd, e.depth_count >= depth_.level(), e.norm_illum, d(), *F_, alpha());
}

std::string ECModel::to_text() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << d() << ' ' << alpha() << '\n';
  for (int j = 0; j < d(); ++j) os << (j ? " " : "") << mu()[j];
  os << '\n';
  for (int i = 0; i < d(); ++i) {
    for (int j = 0; j < d(); ++j) os << (j ? " " : "") << sigma()(i, j);
    os << '\n';
  }
  if (const auto* step = dynamic_cast<const StepCdf*>(F_.get())) {
    const auto& s = step->support();
    os << s.size() << '\n';
    for (std::size_t i = 0; i < s.size(); ++i) os << s[i] << ' ' << static_cast<double>(i + 1) / s.size() << '\n';
  } else {
    os << "0\n";
  }
  return os.str();
}

double EllipticalPopulation::hd(const Vector& x) const { return 1.0 - F->cdf(shape.mahalanobis(x)); }

double EllipticalPopulation::region_radius(double alpha) const { return F->quantile(1.0 - alpha); }

double EllipticalPopulation::norm_illum(const Vector& x, double alpha) const {
  const double r = region_radius(alpha);
  const double t = shape.mahalanobis(x) / r;
  return t <= 1.0 ? 1.0 : g(shape.dim(), t);
}

double EllipticalPopulation::m_alpha(const Vector& x, double alpha) const {
  const bool inside = shape.mahalanobis(x) <= region_radius(alpha);
  return m_alpha_value(hd(x), inside, norm_illum(x, alpha), shape.dim(), *F, alpha);
}

double EllipticalPopulation::rhd(const Vector& x, double alpha) const {
  const bool inside = shape.mahalanobis(x) <= region_radius(alpha);
  return rhd_value(hd(x), inside, norm_illum(x, alpha), shape.dim(), *F, alpha);
}

int tiebreak_level(int depth_count, const std::vector<int>& sample_counts) {
  std::vector<int> deeper;
  for (int c : sample_counts)
    if (c >= depth_count) deeper.push_back(c);
  if (deeper.empty()) return std::max(depth_count, 1);
  std::sort(deeper.begin(), deeper.end(), std::greater<>());
  const int need = (static_cast<int>(deeper.size()) + 1) / 2;
  int level = deeper[need - 1];
  if (level <= depth_count) {
    int next = 0;
    for (int c : deeper)
      if (c > depth_count && (next == 0 || c < next)) next = c;
    if (next > 0) level = next;
  }
  return std::max(level, 1);
}

double tiebreak_cutoff(const Vector& x, const PointCloud& P, const DepthOptions& opts) {
  if (P.n() < 2) throw DomainError("tiebreak_cutoff: need n >= 2");
  const int c = depth_count(x, P, opts);
  return static_cast<double>(tiebreak_level(c, sample_depth_counts(P, opts))) / P.n();
}

double tiebreak_illumination(const Vector& x, int depth_count, const RegionFamily& family,
                             const std::vector<int>& sample_counts) {
  const int level = tiebreak_level(depth_count, sample_counts);
  if (level <= depth_count) return 1.0;
  return illumination(x, family.at_level(level).region).norm_illum;
}

CentreOutwardRanking rank_centre_outward(const RowMatrix& Q, const IlluminationDepthModel& model) {
  CentreOutwardRanking out;
  const int m = static_cast<int>(Q.rows());
  out.depth = model.evaluate_many(Q);
  out.order.resize(m);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](int a, int b) { return compare_centrality(out.depth[a], out.depth[b]) < 0; });
  out.tie_broken.assign(m, 0);
  std::vector<int> counts;
  for (int s = 0; s < m;) {
    int e = s + 1;
    while (e < m && compare_centrality(out.depth[out.order[s]], out.depth[out.order[e]]) == 0) ++e;
    if (e - s >= 2) {
      if (counts.empty()) counts = sample_depth_counts(model.sample(), model.evaluation().depth);
      std::vector<double> key(m, 1.0);
      bool resolved = true;
      for (int j = s; j < e; ++j) {
        const int q = out.order[j];
        try {
          key[q] = tiebreak_illumination(Q.row(q).transpose(), out.depth[q].depth_count, model.family(), counts);
        } catch (const GeometryError&) {
          resolved = false;
          break;
        }
      }
      if (resolved) {
        std::stable_sort(out.order.begin() + s, out.order.begin() + e, [&](int a, int b) { return key[a] < key[b]; });
        for (int j = s; j < e; ++j) {
          const int q = out.order[j];
          const bool before = j > s && key[out.order[j - 1]] != key[q];
          const bool after = j + 1 < e && key[out.order[j + 1]] != key[q];
          out.tie_broken[q] = (before || after) ? 1 : 0;
        }
      }
    }
    s = e;
  }
  out.rank.resize(m);
  for (int j = 0; j < m; ++j) out.rank[out.order[j]] = j;
  return out;
}

CentreOutwardRanking rank_centre_outward(const RowMatrix& Q, const PointCloud& P, double alpha) {
  return rank_centre_outward(Q, IlluminationDepthModel(P, alpha));
}

}  // namespace illumdepth
