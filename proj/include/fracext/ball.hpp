/** \file    ball.hpp
    \brief   Ball model of the extension problem: Moebius transform, zonal data on S^n,
             the ball kernel and the fractional conformal Laplacian on the sphere
*/
#pragma once
#include "fracext/params.hpp"
#include "fracext/profile.hpp"
#include <functional>
#include <iosfwd>
#include <vector>

namespace fracext {

/// Interior point of the unit ball B^N, N = n+1.
struct BallPoint {
    std::vector<double> coords;
    double r = 0;  ///< |coords|

    static BallPoint make(std::vector<double> coords);
    /// Point at distance radius from the origin and polar angle phi from e_N.
    static BallPoint polar(int n, double radius, double phi);
    /// Polar angle from e_N.
    double angle() const;
};

/// Zonal function on S^n (axisymmetric about e_N) sampled at Gauss nodes in the polar angle.
/// Evaluation uses the exact closure when one was supplied, otherwise synthesis from the
/// zonal-harmonic coefficients (obtained by interpolation at the nodes if not given).
class SphereSamples {
public:
    SphereSamples() = default;
    SphereSamples(int n, std::vector<double> angles, std::vector<double> values,
                  std::vector<double> legendre_coeffs = {});

    /// Samples fn at the default nodes and keeps fn for evaluation.
    static SphereSamples sample(int n, std::function<double(double)> fn, int order = 48);
    static SphereSamples constant(int n, double c, int order = 8);
    /// Sum_l c_l P_l(cos phi) with the zonal harmonics of legendre_nd.
    static SphereSamples from_legendre(int n, std::vector<double> coeffs);
    /// Polar angles whose cosines are the Gauss-Jacobi nodes for the weight (1-x^2)^{(n-2)/2}.
    static std::vector<double> nodes(int n, int order);

    int dim() const { return n_; }
    const std::vector<double>& angles() const { return angles_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& legendre_coeffs() const { return coeffs_; }
    bool has_exact() const { return bool(exact_); }
    bool is_zero() const;

    double operator()(double phi) const;
    /// value at the point whose polar angle has cosine x
    double at_cosine(double x) const;

    void write_csv(std::ostream& out) const;
    static SphereSamples read_csv(std::istream& in);

private:
    int n_ = 2;
    std::vector<double> angles_, values_, coeffs_;
    std::function<double(double)> exact_;
    void fit_coefficients();
};

/// 2(x+e_N)/|x+e_N|^2 - e_N; an involution exchanging the half-space and the ball.
std::vector<double> mobius(const std::vector<double>& x);

/// rho_b(y) = (1-|y|)/(1+|y|).
double rho_b(const std::vector<double>& y);

/// u(x) = x_N / rho_b(mobius(x)), evaluated as |x+e_N|^2 (1+|y|)^2 / 4.
double conformal_factor(const std::vector<double>& x);

/// f(r) = ftilde(2 arctan r) (1+r^2)^{-(n-2gamma)/2}: the boundary datum on R^n matching ftilde.
RadialProfile sphere_to_plane(const SphereSamples& ftilde, const Params& params);
/// Inverse correspondence, sampled at the default nodes.
SphereSamples plane_to_sphere(const RadialProfile& f, const Params& params, int order = 48);

/// kappa (1+|y|)^{n-2gamma} int_{S^n} (1-|y|^2)^{2gamma} |y-zeta|^{-(n+2gamma)} ftilde dv_{h_b}.
/// Points with |y| > 0.995 are evaluated through the half-space extension.
double ball_extend(const SphereSamples& ftilde, const Params& params, const BallPoint& y);

/// (1-r^2)^{2gamma} int_{S^n} |y-zeta|^{-(n+2gamma)} dv_{S^n}, |y| = r.
double sphere_kernel_integral_I1(double r, const Params& params);
/// (1-r^2)^{2gamma} int_{S^n} (|y|^2 - y.zeta) |y-zeta|^{-(n+2gamma+2)} dv_{S^n}, |y| = r.
double sphere_kernel_integral_I2(double r, const Params& params);
/// Truncated expansions of I1 and I2 near r = 1.
double puiseux_I1(double r, const Params& params);
double puiseux_I2(double r, const Params& params);

/// 2^{2gamma} Gamma((n+2gamma)/2) / Gamma((n-2gamma)/2), the operator applied to 1 for h_b.
double p_gamma_one(const Params& params);
/// 2^{n+2gamma} 2^{2gamma} gamma Gamma((n+2gamma)/2) / (pi^{n/2} Gamma(1-gamma)).
double a_coefficient(const Params& params);

/// Default radii 1 - 0.2 * 2^{-k}, k = 0..5.
std::vector<double> default_radii();

/// Extrapolated limit of rho_b^m dV/drho_b along the radius with polar angle pole_angle.
double weighted_normal_derivative_ball(const SphereSamples& ftilde, const Params& params, double pole_angle,
                                       const std::vector<double>& radii = default_radii());

/// (P^gamma 1) ftilde(y0) + a_{n,gamma} PV int (ftilde(y0) - ftilde(zeta)) |y0-zeta|^{-(n+2gamma)} dv_{h_b}.
double fractional_laplacian_sphere(const SphereSamples& ftilde, const Params& params, double y0_angle);

/// -div_g(rho^m grad_g V) + n(n-2gamma)/4 (1+|y|)^2/|y| rho^m V at y for V = ball_extend(ftilde),
/// by second-order conservative differences with step h.
double ball_equation_residual(const SphereSamples& ftilde, const Params& params, const BallPoint& y, double h);

/// ||ball_extend(ftilde)||_{L^{2(n-2gamma+2)/(n-2gamma)}(B^N; rho_b^m, gbar_b)}.
double ball_field_norm(const SphereSamples& ftilde, const Params& params);
/// ||ftilde||_{L^{2n/(n-2gamma)}(S^n, h_b)}.
double sphere_norm(const SphereSamples& ftilde, const Params& params);

}  // namespace fracext
