#include "illumdepth/ellipsoid.hpp"

#include "illumdepth/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace illumdepth {

namespace {

// Gamma(d/2 + 1) / (sqrt(pi) Gamma((d + 1)/2))
double shape_constant(int d) {
  return special::lanczos_gamma(0.5 * d + 1.0) /
         (std::sqrt(std::numbers::pi) * special::lanczos_gamma(0.5 * (d + 1)));
}

void check_dim(int d) {
  if (d < 1) throw DomainError("g: dimension must be >= 1");
}

// J(theta) = integral_0^theta sin^d(s) / cos^2(s) ds, so that g - 1 = c_d / d * J.
double excess_integral(int d, double t) {
  const double theta = std::atan(std::sqrt((t - 1.0) * (t + 1.0)));
  if (theta <= 1.0) {
    return special::gauss_legendre(
        [d](double s) {
          const double c = std::cos(s);
          return std::pow(std::sin(s), d) / (c * c);
        },
        0.0, theta, 4);
  }
  // closed form, no cancellation once theta is bounded away from 0
  const double sin_theta = std::sqrt((t - 1.0) * (t + 1.0)) / t;
  return t * std::pow(sin_theta, d + 1) - d * special::sin_power_integral(d, theta);
}

}  // namespace

double g_slope_limit(int d) {
  check_dim(d);
  return shape_constant(d) / d;
}

double g_near_one_constant(int d) {
  check_dim(d);
  return shape_constant(d) * std::pow(2.0, 0.5 * (d + 1)) / (d * (d + 1.0));
}

double g_excess(int d, double t) {
  check_dim(d);
  if (!(t >= 1.0)) throw DomainError("g: argument must be >= 1");
  if (t == 1.0) return 0.0;
  if (d == 1) return 0.5 * (t - 1.0);
  return shape_constant(d) / d * excess_integral(d, t);
}

double g(int d, double t) { return 1.0 + g_excess(d, t); }

double g_prime(int d, double t) {
  check_dim(d);
  if (!(t > 1.0)) throw DomainError("g_prime: argument must be > 1");
  return shape_constant(d) / d * std::pow((t - 1.0) * (t + 1.0) / (t * t), 0.5 * (d - 1));
}

double g_inverse_excess(int d, double h) {
  check_dim(d);
  if (!(h >= 0.0)) throw DomainError("g_inverse: argument must be >= 1");
  if (h == 0.0) return 1.0;
  if (d == 1) return 2.0 * h + 1.0;
  const double slope = g_slope_limit(d);
  double lo = 1.0;
  double hi = std::max(2.0, (1.0 + h) / slope + 1.0);
  while (g_excess(d, hi) < h) {
    lo = hi;
    hi *= 2.0;
  }
  // start from the near-one expansion or the linear asymptote
  double t = 1.0 + std::pow(h / g_near_one_constant(d), 2.0 / (d + 1));
  if (h > 1.0) t = (1.0 + h) / slope;
  if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = g_excess(d, t) - h;
    if (f == 0.0) return t;
    if (f > 0) hi = t;
    else lo = t;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    double next = t - f / g_prime(d, t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 2.0 * std::numeric_limits<double>::epsilon() * t) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

double g_inverse(int d, double y) {
  if (!(y >= 1.0)) throw DomainError("g_inverse: argument must be >= 1");
  return g_inverse_excess(d, y - 1.0);
}

Ellipsoid::Ellipsoid(Vector center, Matrix scatter) : center_(std::move(center)), scatter_(std::move(scatter)) {
  const int d = dim();
  if (d < 1) throw DomainError("Ellipsoid: empty center");
  if (scatter_.rows() != d || scatter_.cols() != d) throw DimensionMismatch("Ellipsoid: scatter shape");
  const double mag = std::max(1.0, scatter_.cwiseAbs().maxCoeff());
  if ((scatter_ - scatter_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * mag)
    throw DomainError("Ellipsoid: scatter is not symmetric");
  Eigen::LLT<Matrix> llt(scatter_);
  if (llt.info() != Eigen::Success) throw DomainError("Ellipsoid: scatter is not positive definite");
  factor_ = llt.matrixL();
  const double logdet = 2.0 * factor_.diagonal().array().log().sum();
  det_ = std::exp(logdet);
  volume_ = std::exp(0.5 * logdet) * special::unit_ball_volume(d);
  if (!(det_ > 0)) throw DomainError("Ellipsoid: scatter is singular");
}

double Ellipsoid::mahalanobis(const Vector& x) const {
  require_dim(x, dim(), "mahalanobis");
  return factor_.triangularView<Eigen::Lower>().solve(x - center_).norm();
}

double mahalanobis(const Ellipsoid& E, const Vector& x) { return E.mahalanobis(x); }

double ellipsoid_volume(const Ellipsoid& E) { return E.volume(); }

double illumination_ellipsoid(const Ellipsoid& E, const Vector& x) {
  const double t = E.mahalanobis(x);
  if (t <= 1.0) return E.volume();
  return E.volume() * g(E.dim(), t);
}

Polytope discretize_ellipsoid(const Ellipsoid& E, int count) {
  const Polytope sphere = convex_hull(sphere_points(E.dim(), count));
  return affine_image(sphere, E.factor(), E.center());
}

}  // namespace illumdepth
