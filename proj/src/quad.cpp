#include "fracext/quad.hpp"
#include "fracext/error.hpp"
#include "fracext/profile.hpp"
#include "fracext/special.hpp"
#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace fracext {

namespace {

std::mutex g_rule_lock;

Rule make_legendre(int order)
{
    Rule r;
    r.x.resize(order);
    r.w.resize(order);
    for(int i = 0; i < (order + 1) / 2; i++) {
        long double z = std::cos(M_PI * (i + 0.75) / (order + 0.5)), dp = 0;
        for(int it = 0; it < 100; it++) {
            long double p0 = 1, p1 = 0;
            for(int k = 1; k <= order; k++) {
                long double p2 = p1;
                p1 = p0;
                p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
            }
            dp = order * (z * p0 - p1) / (z * z - 1);
            long double dz = p0 / dp;
            z -= dz;
            if(std::fabs((double)dz) < 1e-19)
                break;
        }
        // recompute the derivative at the converged node
        long double p0 = 1, p1 = 0;
        for(int k = 1; k <= order; k++) {
            long double p2 = p1;
            p1 = p0;
            p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
        }
        dp = order * (z * p0 - p1) / (z * z - 1);
        double w = (double)(2 / ((1 - z * z) * dp * dp));
        r.x[i] = -(double)z;
        r.x[order - 1 - i] = (double)z;
        r.w[i] = r.w[order - 1 - i] = w;
    }
    return r;
}

Rule make_jacobi(int order, double alpha, double beta)
{
    using LD = long double;
    Eigen::Matrix<LD, Eigen::Dynamic, 1> diag(order), sub(order > 1 ? order - 1 : 1);
    LD a = alpha, b = beta;
    for(int k = 0; k < order; k++) {
        LD s = 2 * k + a + b;
        diag[k] = (k == 0) ? (b - a) / (a + b + 2) : (b * b - a * a) / (s * (s + 2));
    }
    for(int k = 1; k < order; k++) {
        LD s = 2 * k + a + b, bk;
        if(k == 1)
            bk = 4 * (1 + a) * (1 + b) / ((2 + a + b) * (2 + a + b) * (3 + a + b));
        else
            bk = 4 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1) * (s - 1));
        sub[k - 1] = std::sqrt(bk);
    }
    Rule r;
    r.x.resize(order);
    r.w.resize(order);
    LD mu0 = std::pow(2.L, a + b + 1) * std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 2);
    if(order == 1) {
        r.x[0] = (double)diag[0];
        r.w[0] = (double)mu0;
        return r;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    for(int i = 0; i < order; i++) {
        r.x[i] = (double)es.eigenvalues()[i];
        LD v = es.eigenvectors()(0, i);
        r.w[i] = (double)(mu0 * v * v);
    }
    return r;
}

}  // namespace

const Rule& gauss_legendre(int order)
{
    static std::map<int, std::unique_ptr<Rule>> cache;
    std::lock_guard<std::mutex> g(g_rule_lock);
    auto& slot = cache[order];
    if(!slot)
        slot = std::make_unique<Rule>(make_legendre(order));
    return *slot;
}

const Rule& gauss_jacobi(int order, double alpha, double beta)
{
    if(!(alpha > -1 && beta > -1) || order < 1)
        fail_validation("invalid Gauss-Jacobi parameters");
    if(alpha == 0 && beta == 0)
        return gauss_legendre(order);
    static std::map<std::tuple<int, double, double>, std::unique_ptr<Rule>> cache;
    std::lock_guard<std::mutex> g(g_rule_lock);
    auto& slot = cache[{order, alpha, beta}];
    if(!slot)
        slot = std::make_unique<Rule>(make_jacobi(order, alpha, beta));
    return *slot;
}

Rule jacobi_unit(int order, double a, double b)
{
    const Rule& base = gauss_jacobi(order, b, a);
    Rule r;
    r.x.resize(order);
    r.w.resize(order);
    double scale = std::pow(2., -a - b - 1);
    for(int i = 0; i < order; i++) {
        r.x[i] = 0.5 * (base.x[i] + 1);
        r.w[i] = base.w[i] * scale;
    }
    return r;
}

void QuadSpec::validate() const
{
    if(order_radial < 2 || order_vertical < 2 || order_angle < 2)
        fail_validation("quadrature orders must be at least 2");
    if(!(map_scale > 0))
        fail_validation("map_scale must be positive");
    if(abs_tol < 0 || rel_tol < 0 || (abs_tol == 0 && rel_tol == 0))
        fail_validation("abs_tol and rel_tol must be nonnegative and not both zero");
}

QuadSpec QuadSpec::defaults()
{
    QuadSpec q;
    if(const char* env = std::getenv("FRACEXT_QUAD_ORDER")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if(end == env || *end != 0 || v < 2 || v > 4096)
            fail_validation("FRACEXT_QUAD_ORDER must be an integer in [2,4096]");
        q.order_radial = q.order_vertical = q.order_angle = (int)v;
    }
    return q;
}

namespace {

void check_converged(const QuadResult& r, const QuadSpec& spec)
{
    if(!std::isfinite(r.value))
        fail_numerical("integrand not finite");
    if(r.error > std::max(spec.abs_tol, spec.rel_tol * std::fabs(r.value)))
        fail_numerical("quadrature not converged", r.error);
}

double halfspace_rule(const HalfSpaceIntegrand& F, const Params& P, int ns, int nx, double L)
{
    // s = L t/(1-t): s^{n-1} ds = L^n t^{n-1} (1-t)^{-n-1} dt
    // x = L t/(1-t): x^m dx = L^{m+1} t^m (1-t)^{-m-2} dt
    Rule rs = jacobi_unit(ns, P.n - 1, 0);
    Rule rx = jacobi_unit(nx, P.m, 0);
    double sum = 0;
    for(int j = 0; j < nx; j++) {
        double t = rx.x[j], xN = L * t / (1 - t);
        double wx = rx.w[j] * std::pow(L, P.m + 1) * std::pow(1 - t, -P.m - 2);
        double inner = 0;
        for(int i = 0; i < ns; i++) {
            double u = rs.x[i], s = L * u / (1 - u);
            double val = F(s, xN);
            if(!std::isfinite(val))
                fail_numerical("integrand not finite");
            inner += rs.w[i] * std::pow(L, P.n) * std::pow(1 - u, -P.n - 1) * val;
        }
        sum += wx * inner;
    }
    return sphere_area(P.n - 1) * sum;
}

double zonal_rule(const std::function<double(double)>& F, int n, int order)
{
    double a = 0.5 * (n - 2);
    const Rule& r = gauss_jacobi(order, a, a);
    double sum = 0;
    for(std::size_t i = 0; i < r.size(); i++) {
        double val = F(std::acos(r.x[i]));
        if(!std::isfinite(val))
            fail_numerical("integrand not finite");
        sum += r.w[i] * val;
    }
    return (n == 1 ? 2 : sphere_area(n - 1)) * sum;
}

}  // namespace

QuadResult integrate_halfspace_weighted_est(const HalfSpaceIntegrand& F, const Params& params,
                                            const QuadSpec& spec)
{
    spec.validate();
    QuadResult r;
    r.value = halfspace_rule(F, params, spec.order_radial, spec.order_vertical, spec.map_scale);
    double coarse = halfspace_rule(F, params, std::max(1, spec.order_radial / 2),
                                   std::max(1, spec.order_vertical / 2), spec.map_scale);
    r.error = std::fabs(r.value - coarse);
    return r;
}

double integrate_halfspace_weighted(const HalfSpaceIntegrand& F, const Params& params,
                                    const QuadSpec& spec)
{
    QuadResult r = integrate_halfspace_weighted_est(F, params, spec);
    check_converged(r, spec);
    return r.value;
}

QuadResult integrate_sphere_zonal_est(const std::function<double(double)>& F, int n,
                                      const QuadSpec& spec)
{
    spec.validate();
    if(n < 1)
        fail_validation("n must be a positive integer");
    QuadResult r;
    r.value = zonal_rule(F, n, spec.order_angle);
    r.error = std::fabs(r.value - zonal_rule(F, n, std::max(1, spec.order_angle / 2)));
    return r;
}

double integrate_sphere_zonal(const std::function<double(double)>& F, int n, const QuadSpec& spec)
{
    QuadResult r = integrate_sphere_zonal_est(F, n, spec);
    check_converged(r, spec);
    return r.value;
}

double lorentz_norm(const RadialProfile& f, double p, double q, int n)
{
    if(!(p > 1) || !(q > 0))
        fail_validation("Lorentz exponents must satisfy p > 1, q > 0");
    if(!f.is_nonincreasing() || f.min_value() < 0)
        fail_validation("profile must be rearranged first");
    if(f.is_zero())
        return 0;
    // t = |B^n| r^n is the measure of the ball where f exceeds f(r), so dt/t = n dr/r
    double omega = ball_volume(n);
    if(std::isinf(q)) {
        // sup over the nodes and eight interior points per cell
        double best = 0;
        const auto& nd = f.nodes();
        for(std::size_t i = 0; i < nd.size(); i++) {
            for(int k = 0; k < 8; k++) {
                if(k > 0 && i + 1 == nd.size())
                    break;
                double r = (k == 0) ? nd[i] : nd[i] + (nd[i + 1] - nd[i]) * k / 8.;
                if(r > 0)
                    best = std::max(best, std::pow(omega * std::pow(r, n), 1 / p) * f(r));
            }
        }
        return best;
    }
    double a = n * q / p;  // integrand omega^{q/p} r^{nq/p} f^q n dr/r
    double tail = f.tail_exponent() * q - a;
    if(!f.is_constant() && f.values().back() != 0 && !(tail > 0))
        fail_validation("profile tail too heavy");
    if(f.is_constant())
        fail_validation("profile tail too heavy");
    double sum = f.integrate_power_moment(q, a);
    return std::pow(n * std::pow(omega, q / p) * sum, 1 / q);
}

}  // namespace fracext
