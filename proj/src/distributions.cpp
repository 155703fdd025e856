#include "illumdepth/distributions.hpp"

#include "illumdepth/special.hpp"

#include <cmath>
#include <numbers>

namespace illumdepth {

namespace {

RowMatrix sample_radial2d(int n, Rng& rng, double root) {
  if (n < 0) throw DomainError("sampler: n must be non-negative");
  RowMatrix X(n, 2);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double r = std::pow(std::pow(1.0 - u, -2.0) - 1.0, 1.0 / root);
    const double a = 2.0 * std::numbers::pi * rng.uniform();
    X(i, 0) = r * std::cos(a);
    X(i, 1) = r * std::sin(a);
  }
  return X;
}

}  // namespace

RowMatrix sample_normal(int n, int d, Rng& rng) {
  if (n < 0 || d < 1) throw DomainError("sample_normal: need n >= 0 and d >= 1");
  RowMatrix X(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) X(i, j) = rng.normal();
  return X;
}

RowMatrix sample_normal(int n, const Vector& mu, const Matrix& A, Rng& rng) {
  if (A.rows() != mu.size()) throw DimensionMismatch("sample_normal: A and mu differ in dimension");
  RowMatrix X = sample_normal(n, static_cast<int>(A.cols()), rng) * A.transpose();
  X.rowwise() += mu.transpose();
  return X;
}

RowMatrix sample_cauchy2d(int n, Rng& rng) { return sample_radial2d(n, rng, 2.0); }

RowMatrix sample_he_einmahl(int n, Rng& rng) {
  RowMatrix X = sample_radial2d(n, rng, 6.0);
  X.col(0) *= 2.0;
  return X;
}

double he_einmahl_density(double x, double y) {
  const double s = x * x / 4.0 + y * y;
  return 3.0 * s * s / (4.0 * std::numbers::pi * std::pow(1.0 + s * s * s, 1.5));
}

// P(Z_1 > t) = (1/pi) int_0^{pi/2} (1 + (t / cos a)^6)^(-1/2) da for t >= 0.
double HeEinmahlMarginalCdf::cdf(double t) const {
  if (std::isnan(t)) throw DomainError("marginal cdf: NaN argument");
  if (t == 0.0) return 0.5;
  const double s = std::abs(t);
  const double tail = special::gauss_legendre(
                          [s](double a) {
                            const double c = std::cos(a);
                            if (c <= 0.0) return 0.0;
                            const double q = s / c;
                            return 1.0 / std::sqrt(1.0 + q * q * q * q * q * q);
                          },
                          0.0, std::numbers::pi / 2, 64) /
                      std::numbers::pi;
  return t > 0.0 ? 1.0 - tail : tail;
}

double HeEinmahlMarginalCdf::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("marginal quantile: probability must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  const double target = std::max(p, 1.0 - p);
  double lo = 0.0, hi = 1.0;
  while (cdf(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw QuantileUndefined("marginal quantile: could not bracket");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) >= target ? hi : lo) = mid;
  }
  return p > 0.5 ? hi : -hi;
}

double normal_half_content_delta() { return 1.0 - special::normal_cdf(std::sqrt(2.0 * std::log(2.0))); }

double he_einmahl_half_content_delta() {
  return 1.0 - HeEinmahlMarginalCdf().cdf(std::pow(3.0, 1.0 / 6.0));
}

}  // namespace illumdepth
