/** \file    spectral.hpp
    \brief   Weighted spherical harmonics on the upper hemisphere and zonal harmonic analysis on S^n
*/
#pragma once
#include "fracext/ball.hpp"
#include "fracext/params.hpp"
#include "fracext/quad.hpp"
#include <functional>
#include <utility>
#include <vector>

namespace fracext {

/// Point of the closed upper hemisphere of S^n with a sampled value.
struct HemisphereSample {
    std::vector<double> theta;  ///< n+1 coordinates, theta_N >= 0
    double value = 0;
};

/// Eigenfunction of -div_{S^n}(theta_N^m grad Y) = lambda theta_N^m Y with Y = 0 on the equator.
/// It is the restriction of a homogeneous weighted-harmonic function of degree ell + 2gamma.
struct WeightedHarmonic {
    int degree = 0;
    int n = 1;
    double gamma = 0.5;
    double eigenvalue = 0;  ///< (ell + 2gamma)(ell + n)
    /// homogeneous representation x_N^{2gamma} sum_k p_k(xbar) x_N^{2k} on the closed half-space
    std::function<double(const std::vector<double>&)> polynomial_form;
    /// values on a meridian grid of the hemisphere, including the equator
    std::vector<HemisphereSample> samples;

    /// Y(theta) for a point of the upper hemisphere
    double operator()(const std::vector<double>& theta) const { return polynomial_form(theta); }
};

/// Closed forms for ell = 0, 1, 2; "no closed form stored" beyond.
WeightedHarmonic weighted_eigenpair(int ell, const Params& params);

/// Points of the hemisphere where the residual is evaluated, with the difference step and the
/// order (2 or 4) of the difference formulas.
struct HemisphereStencil {
    std::vector<std::vector<double>> points;
    double h = 1e-3;
    int order = 2;
};

/// count points with theta_N from 1 down to min_height, spread in azimuth.
HemisphereStencil hemisphere_stencil(int n, double h, int order = 2, double min_height = 0.2, int count = 12);

/// max over the stencil of |-div_{S^n}(theta_N^m grad Y) - lambda theta_N^m Y| with lambda = Y.eigenvalue.
/// The spherical operator is read off from the flat weighted divergence of the homogeneous extension
/// of degree ell + 2gamma: div(x_N^m grad U) = r^{a+m-2} [a(a+n-2gamma) theta_N^m Y + div_{S^n}(theta_N^m grad Y)].
double eigen_residual(const WeightedHarmonic& Y, const Params& params, const HemisphereStencil& grid);

/// Classical Legendre polynomial.
double legendre_eval(int ell, double s);

/// mu_ell = |S^{n-1}| int_{-1}^1 K(s) (1-s^2)^{(n-2)/2} P_ell(s) ds with the zonal harmonic P_ell of S^n
/// (legendre_nd); the integral is taken in the geodesic angle with panels graded toward both poles.
double funk_hecke_apply(const std::function<double(double)>& kernel, int ell, int n,
                        const QuadSpec& spec = QuadSpec::defaults());

/// I_ell(r) = int_{-1}^1 (1-s^2)^{(n-2)/2} (1+r^2-2rs)^{-(n+2gamma)/2} (1 - P_ell(s)) ds.
double wave_integral(int ell, double r, const Params& params, const QuadSpec& spec = QuadSpec::defaults());

/// Zonal harmonic coefficients with f~ = sum c_ell P_ell(cos phi).
struct PartialWaves {
    std::vector<double> coeffs;
    double resynthesis_error = 0;  ///< max deviation at the check angles
};

/// Coefficients for ell = 0..L; "L too small" if the resynthesis deviates by more than tol.
PartialWaves partial_wave_decompose(const SphereSamples& ftilde, int L, int n, double tol = 1e-8);

/// Pairs (j, ell), 2 <= j <= n+4 and ell <= max_ell, for which -(n-j)(j-2gamma) equals the eigenvalue
/// (ell+2gamma)(ell+n), i.e. (n-j)(j-2gamma) lies in the spectrum of div_{S^n}(theta_N^m grad .).
std::vector<std::pair<int, int>> spectrum_resonances(int n, double gamma, int max_ell = 64);

}  // namespace fracext
