#include "fracext/spectral.hpp"
#include "fracext/error.hpp"
#include "fracext/special.hpp"
#include <algorithm>
#include <cmath>

namespace fracext {

namespace {

double norm(const std::vector<double>& v)
{
    double s = 0;
    for(double c : v)
        s += c * c;
    return std::sqrt(s);
}

/// Geodesic-angle panels on [0, pi], halving toward both poles, none wider than pi/16.
std::vector<double> graded_breaks(int levels)
{
    std::vector<double> b = {0};
    for(int k = levels; k >= 1; k--)
        b.push_back(0.5 * M_PI * std::pow(2., -k));
    b.push_back(0.5 * M_PI);
    std::size_t half = b.size() - 1;
    for(std::size_t k = half; k-- > 1;)
        b.push_back(M_PI - b[k]);
    b.push_back(M_PI);
    std::vector<double> out = {0};
    for(std::size_t k = 1; k < b.size(); k++) {
        int parts = std::max(1, (int)std::ceil((b[k] - b[k - 1]) / (M_PI / 16) - 1e-9));
        for(int j = 1; j <= parts; j++)
            out.push_back(j == parts ? b[k] : b[k - 1] + (b[k] - b[k - 1]) * j / parts);
    }
    return out;
}

double angle_rule(const std::function<double(double)>& F, int order, const std::vector<double>& breaks)
{
    const Rule& gl = gauss_legendre(order);
    double s = 0;
    for(std::size_t k = 0; k + 1 < breaks.size(); k++) {
        double a = breaks[k], b = breaks[k + 1], part = 0;
        for(std::size_t i = 0; i < gl.size(); i++)
            part += gl.w[i] * F(0.5 * (a + b) + 0.5 * (b - a) * gl.x[i]);
        s += 0.5 * (b - a) * part;
    }
    return s;
}

}  // namespace

WeightedHarmonic weighted_eigenpair(int ell, const Params& P)
{
    if(ell < 0)
        fail_validation("degree must be nonnegative");
    if(ell > 2)
        fail_validation("no closed form stored");
    WeightedHarmonic Y;
    Y.degree = ell;
    Y.n = P.n;
    Y.gamma = P.gamma;
    Y.eigenvalue = (ell + 2 * P.gamma) * (ell + P.n);
    double g2 = 2 * P.gamma, c = P.n / (g2 + 2);
    int N = P.n + 1;
    switch(ell) {
    case 0:
        Y.polynomial_form = [g2](const std::vector<double>& x) { return std::pow(std::max(x.back(), 0.), g2); };
        break;
    case 1:
        Y.polynomial_form = [g2](const std::vector<double>& x) {
            return std::pow(std::max(x.back(), 0.), g2) * x[0];
        };
        break;
    default:
        Y.polynomial_form = [g2, c, N](const std::vector<double>& x) {
            double xb2 = 0;
            for(int i = 0; i + 1 < N; i++)
                xb2 += x[i] * x[i];
            double xN = std::max(x.back(), 0.);
            return std::pow(xN, g2) * (xb2 - c * xN * xN);
        };
    }
    // meridians through e_1 and, when n >= 2, a direction between e_1 and e_2
    const int steps = 16;
    for(int az = 0; az < (P.n >= 2 ? 2 : 1); az++) {
        double a = 0.6 * az;
        for(int k = 0; k <= steps; k++) {
            double psi = 0.5 * M_PI * k / steps;
            std::vector<double> th(N, 0.);
            th[0] = std::sin(psi) * std::cos(a);
            if(P.n >= 2)
                th[1] = std::sin(psi) * std::sin(a);
            th[N - 1] = k == steps ? 0. : std::cos(psi);
            Y.samples.push_back({th, Y.polynomial_form(th)});
        }
    }
    return Y;
}

HemisphereStencil hemisphere_stencil(int n, double h, int order, double min_height, int count)
{
    if(n < 1 || count < 1)
        fail_validation("invalid stencil request");
    if(!(min_height > 0 && min_height <= 1))
        fail_validation("min_height must lie in (0,1]");
    HemisphereStencil st;
    st.h = h;
    st.order = order;
    double psi_max = std::acos(min_height);
    for(int k = 0; k < count; k++) {
        double psi = count == 1 ? 0 : psi_max * k / (count - 1);
        double a = 0.9 * k;
        std::vector<double> th(n + 1, 0.);
        th[0] = std::sin(psi) * std::cos(a);
        if(n >= 2)
            th[1] = std::sin(psi) * std::sin(a);
        else
            th[0] = std::sin(psi) * (k % 2 ? -1 : 1);
        th[n] = std::cos(psi);
        st.points.push_back(th);
    }
    return st;
}

double eigen_residual(const WeightedHarmonic& Y, const Params& P, const HemisphereStencil& grid)
{
    if(Y.n != P.n || std::fabs(Y.gamma - P.gamma) > 1e-15)
        fail_validation("eigenpair does not match the parameters");
    if(!Y.polynomial_form)
        fail_validation("eigenpair carries no representation");
    if(grid.order != 2 && grid.order != 4)
        fail_validation("difference order must be 2 or 4");
    if(!(grid.h > 0))
        fail_validation("step must be positive");
    int N = P.n + 1;
    double alpha = Y.degree + 2 * P.gamma, h = grid.h;
    auto U = [&](std::vector<double> x) {
        double r = norm(x);
        for(double& c : x)
            c /= r;
        return std::pow(r, alpha) * Y.polynomial_form(x);
    };
    double worst = 0;
    for(const auto& th : grid.points) {
        if(int(th.size()) != N)
            fail_validation("stencil point dimension must be n+1");
        if(std::fabs(norm(th) - 1) > 1e-12)
            fail_validation("stencil points must lie on the unit sphere");
        double tN = th.back();
        if(tN < 1e-3)
            fail_validation("boundary layer");
        if(!(tN - 2 * h > 0))
            fail_validation("stencil leaves the half-space");
        auto at = [&](int i, double t) {
            std::vector<double> x = th;
            x[i] += t;
            return U(x);
        };
        double u0 = U(th), lap = 0, dN = 0;
        for(int i = 0; i < N; i++) {
            double p1 = at(i, h), m1 = at(i, -h);
            if(grid.order == 2) {
                lap += (p1 - 2 * u0 + m1) / (h * h);
                if(i == N - 1)
                    dN = (p1 - m1) / (2 * h);
            } else {
                double p2 = at(i, 2 * h), m2 = at(i, -2 * h);
                lap += (-p2 + 16 * p1 - 30 * u0 + 16 * m1 - m2) / (12 * h * h);
                if(i == N - 1)
                    dN = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h);
            }
        }
        // div(x_N^m grad U) = x_N^m Lap U + m x_N^{m-1} dU/dx_N
        double flat = std::pow(tN, P.m) * lap + P.m * std::pow(tN, P.m - 1) * dN;
        double w = std::pow(tN, P.m) * u0;
        double res = std::fabs(-flat + (alpha * (alpha + P.n - 2 * P.gamma) - Y.eigenvalue) * w);
        worst = std::max(worst, res);
    }
    return worst;
}

double legendre_eval(int ell, double s)
{
    if(ell < 0)
        fail_validation("degree must be nonnegative");
    return legendre(ell, s);
}

double funk_hecke_apply(const std::function<double(double)>& kernel, int ell, int n, const QuadSpec& spec)
{
    spec.validate();
    if(n < 1)
        fail_validation("n must be a positive integer");
    if(ell < 0)
        fail_validation("degree must be nonnegative");
    // s = cos(beta): (1-s^2)^{(n-2)/2} ds = sin^{n-1}(beta) dbeta
    auto F = [&](double beta) {
        double s = std::cos(beta);
        return kernel(s) * std::pow(std::sin(beta), n - 1) * legendre_nd(ell, n, s);
    };
    std::vector<double> breaks = graded_breaks(40);
    int order = std::max(4, spec.order_angle / 4);
    QuadResult r;
    r.value = sphere_area(n - 1) * angle_rule(F, order, breaks);
    r.error = std::fabs(r.value - sphere_area(n - 1) * angle_rule(F, std::max(2, order / 2), breaks));
    if(!std::isfinite(r.value))
        fail_numerical("kernel not integrable");
    if(r.error > std::max(spec.abs_tol, spec.rel_tol * std::fabs(r.value)))
        fail_numerical("quadrature not converged", r.error);
    return r.value;
}

double wave_integral(int ell, double r, const Params& P, const QuadSpec& spec)
{
    if(!(r >= 0 && r < 1))
        fail_validation("radius must lie in [0,1)");
    double nu = P.nu();
    int n = P.n;
    auto K = [&](double s) { return std::pow(1 + r * r - 2 * r * s, -nu); };
    auto diff = [&](double s) { return K(s) * (1 - legendre_nd(ell, n, s)); };
    return funk_hecke_apply(diff, 0, n, spec) / sphere_area(n - 1);
}

PartialWaves partial_wave_decompose(const SphereSamples& f, int L, int n, double tol)
{
    if(L < 0)
        fail_validation("L must be nonnegative");
    if(f.dim() != n)
        fail_validation("sphere data dimension does not match n");
    double a = 0.5 * (n - 2);
    const Rule& gj = gauss_jacobi(std::max(64, 2 * L + 2), a, a);
    std::vector<double> fx(gj.size());
    for(std::size_t i = 0; i < gj.size(); i++)
        fx[i] = f.at_cosine(gj.x[i]);
    PartialWaves out;
    for(int l = 0; l <= L; l++) {
        double num = 0, den = 0;
        for(std::size_t i = 0; i < gj.size(); i++) {
            double Pl = legendre_nd(l, n, gj.x[i]);
            num += gj.w[i] * fx[i] * Pl;
            den += gj.w[i] * Pl * Pl;
        }
        out.coeffs.push_back(num / den);
    }
    // check at the sample angles and a uniform set of angles
    std::vector<double> check = f.angles();
    for(int k = 0; k <= 64; k++)
        check.push_back(M_PI * k / 64);
    double scale = 0, err = 0;
    for(double phi : check) {
        double x = std::cos(phi), v = f.at_cosine(x), s = 0;
        for(int l = 0; l <= L; l++)
            s += out.coeffs[l] * legendre_nd(l, n, x);
        scale = std::max(scale, std::fabs(v));
        err = std::max(err, std::fabs(s - v));
    }
    out.resynthesis_error = err;
    if(err > tol * std::max(scale, 1.))
        fail_numerical("L too small", err);
    return out;
}

std::vector<std::pair<int, int>> spectrum_resonances(int n, double gamma, int max_ell)
{
    if(n < 1 || !(gamma > 0 && gamma < 1))
        fail_validation("invalid (n, gamma)");
    std::vector<std::pair<int, int>> hits;
    for(int j = 2; j <= n + 4; j++) {
        double target = -(n - j) * (j - 2 * gamma);
        for(int l = 0; l <= max_ell; l++) {
            double lam = (l + 2 * gamma) * (l + n);
            if(std::fabs(lam - target) <= 1e-12 * std::max(1., std::fabs(lam)))
                hits.emplace_back(j, l);
        }
    }
    return hits;
}

}  // namespace fracext
