#pragma once
#include "fracext/params.hpp"
#include <functional>
#include <vector>

namespace fracext {

class RadialProfile;

/// Nodes and weights of a one-dimensional rule.
struct Rule {
    std::vector<double> x, w;
    std::size_t size() const { return x.size(); }
};

/// Gauss-Legendre rule on [-1,1] (cached, thread-safe).
const Rule& gauss_legendre(int order);

/// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^alpha (1+x)^beta, alpha, beta > -1.
const Rule& gauss_jacobi(int order, double alpha, double beta);

/// Rule on [0,1] integrating t^a (1-t)^b g(t) dt as sum w_i g(t_i).
Rule jacobi_unit(int order, double a, double b);

/// Orders and tolerances for the quadrature engine.
struct QuadSpec {
    int order_radial = 64;
    int order_vertical = 64;
    int order_angle = 64;
    double map_scale = 1;
    double abs_tol = 1e-12;
    double rel_tol = 1e-8;

    /// throws unless all orders are at least 2 and the tolerances are not both zero
    void validate() const;
    /// defaults, with all orders replaced by FRACEXT_QUAD_ORDER when that variable is set
    static QuadSpec defaults();
};

struct QuadResult {
    double value = 0;
    double error = 0;
};

/// Axisymmetric integrand F(s, x_N) on the half-space, s = |x bar|.
using HalfSpaceIntegrand = std::function<double(double s, double xN)>;

/// Integral of x_N^m F over R^{n+1}_+ by a Gauss-Jacobi product rule on mapped coordinates;
/// the error estimate is the difference to the rule of half the orders.
QuadResult integrate_halfspace_weighted_est(const HalfSpaceIntegrand& F, const Params& params,
                                            const QuadSpec& spec);
double integrate_halfspace_weighted(const HalfSpaceIntegrand& F, const Params& params,
                                    const QuadSpec& spec);

/// Integral over S^n of a function of the polar angle phi.
QuadResult integrate_sphere_zonal_est(const std::function<double(double)>& F, int n,
                                      const QuadSpec& spec);
double integrate_sphere_zonal(const std::function<double(double)>& F, int n, const QuadSpec& spec);

/// Lorentz functional (int_0^inf (t^{1/p} f*(t))^q dt/t)^{1/q} of a nonincreasing radial profile
/// on R^n; q = infinity gives sup_t t^{1/p} f*(t).
double lorentz_norm(const RadialProfile& f, double p, double q, int n);

}  // namespace fracext
