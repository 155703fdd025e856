#pragma once

#include "illumdepth/core.hpp"
#include "illumdepth/elliptical.hpp"
#include "illumdepth/random.hpp"

namespace illumdepth {

// Standard normal sample in R^d.
RowMatrix sample_normal(int n, int d, Rng& rng);
// mu + A Z with Z standard normal in R^d, d = A.cols().
RowMatrix sample_normal(int n, const Vector& mu, const Matrix& A, Rng& rng);
// Spherical bivariate Cauchy: radius ((1 - U)^-2 - 1)^(1/2), uniform angle.
RowMatrix sample_cauchy2d(int n, Rng& rng);
// Elliptical law with density 3 (x^2/4 + y^2)^2 / (4 pi (1 + (x^2/4 + y^2)^3)^(3/2)):
// (2 Z_1, Z_2) with Z spherical of radius ((1 - U)^-2 - 1)^(1/6).
RowMatrix sample_he_einmahl(int n, Rng& rng);
double he_einmahl_density(double x, double y);

// Marginal CDF of the first coordinate of the spherical version Z above.
class HeEinmahlMarginalCdf final : public SymmetricCdf {
 public:
  double cdf(double t) const override;
  double quantile(double p) const override;
};

// Cutoffs whose central region has probability content 1/2.
double normal_half_content_delta();      // 1 - Phi(sqrt(2 log 2))
double he_einmahl_half_content_delta();  // 1 - F(3^(1/6))

}  // namespace illumdepth
