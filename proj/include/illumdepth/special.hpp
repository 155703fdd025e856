#pragma once

#include <cmath>
#include <functional>

namespace illumdepth::special {

// Lanczos approximation (g = 7, 9 terms) with reflection for x < 1/2.
double lanczos_gamma(double x);

// Volume of the d-dimensional unit ball.
double unit_ball_volume(int d);

double normal_cdf(double x);
double normal_pdf(double x);
// Inverse of normal_cdf on (0, 1); Acklam start refined by Halley steps.
double normal_quantile(double p);

// Integral of sin^d on [0, theta] by the reduction formula.
double sin_power_integral(int d, double theta);

// Adaptive Simpson quadrature to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth = 50);

// Composite Gauss-Legendre rule (16 nodes per panel).
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels);

}  // namespace illumdepth::special
