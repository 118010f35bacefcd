#pragma once

namespace fracext {

/// Gamma function by the Lanczos approximation (g=7, 9 terms) with reflection below 1/2.
/// Relative accuracy is about 1e-15 on the ranges used here.
double gamma_fn(double x);

/// Surface area of the unit sphere S^k in R^{k+1}; S^0 counts two points.
double sphere_area(int k);

/// Volume of the unit ball in R^k.
double ball_volume(int k);

/// Classical Legendre polynomial P_l(x) by the three-term recurrence.
double legendre(int l, double x);

/// Zonal harmonic of degree l on S^n normalized to 1 at x = 1: the Gegenbauer polynomial
/// C_l^{(n-1)/2}(x) / C_l^{(n-1)/2}(1), with the Chebyshev limit T_l for n = 1.
/// Coincides with the classical Legendre polynomial for n = 2.
double legendre_nd(int l, int n, double x);

}  // namespace fracext
