#include "fracext/ball.hpp"
#include "fracext/error.hpp"
#include "fracext/halfspace.hpp"
#include "fracext/parallel.hpp"
#include "fracext/quad.hpp"
#include "fracext/special.hpp"
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace fracext {

namespace {

/// radius beyond which ball_extend switches to the half-space form
constexpr double TRANSFER_RADIUS = 0.995;
/// Gauss-Legendre order per panel of the geodesic-distance rule
constexpr int BETA_ORDER = 20;

double norm2(const std::vector<double>& v)
{
    double s = 0;
    for(double c : v)
        s += c * c;
    return s;
}

/// Nodes beta in (0, pi) and weights |S^{n-1}| sin^{n-1}(beta) dbeta for integrals over S^n
/// of functions of the geodesic distance beta from a point; panels double in width from (1-r)/4,
/// which resolves the kernel peak of width 1-r.
struct DistanceRule {
    std::vector<double> beta, w;
};

DistanceRule distance_rule(int n, double r)
{
    DistanceRule rule;
    const Rule& gl = gauss_legendre(BETA_ORDER);
    double area = sphere_area(n - 1);
    auto panel = [&](double a, double b) {
        for(std::size_t i = 0; i < gl.size(); i++) {
            double t = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[i];
            rule.beta.push_back(t);
            rule.w.push_back(0.5 * (b - a) * gl.w[i] * area * std::pow(std::sin(t), n - 1));
        }
    };
    double a = 0, b = std::max(0.25 * (1 - r), 1e-14);
    while(2 * b < M_PI) {
        panel(a, b);
        a = b;
        b *= 2;
    }
    panel(a, M_PI);
    return rule;
}

/// Rule on [-1,1] averaging over S^{n-1} a function of the first coordinate c, with density
/// proportional to (1-c^2)^{(n-3)/2}; for n = 1 the two points c = +-1.
struct MeanRule {
    std::vector<double> c, w;
};

MeanRule mean_rule(int n, int order)
{
    MeanRule m;
    if(n == 1) {
        m.c = {-1, 1};
        m.w = {0.5, 0.5};
        return m;
    }
    double a = 0.5 * (n - 3);
    const Rule& gj = gauss_jacobi(order, a, a);
    double total = 0;
    for(double w : gj.w)
        total += w;
    m.c = gj.x;
    for(double w : gj.w)
        m.w.push_back(w / total);
    return m;
}

int mean_order(const SphereSamples& f)
{
    if(f.has_exact())
        return 32;
    return std::max<int>(4, (int(f.legendre_coeffs().size()) + 2) / 2 + 1);
}

/// Mean of ftilde over the points at geodesic distance beta from the point with polar angle
/// (cos_y, sin_y).
double spherical_mean(const SphereSamples& f, const MeanRule& rule, double cos_y, double sin_y, double beta)
{
    double cb = std::cos(beta), sb = std::sin(beta), s = 0;
    for(std::size_t i = 0; i < rule.c.size(); i++)
        s += rule.w[i] * f.at_cosine(cos_y * cb + sin_y * sb * rule.c[i]);
    return s;
}

void check_samples(const SphereSamples& f, const Params& P)
{
    if(f.dim() != P.n)
        fail_validation("sphere data dimension does not match n");
}

/// Ball kernel integrals at |y| = r along polar angle (cos_y, sin_y):
/// S1 = int |y-zeta|^{-(n+2gamma)} ftilde dv, S2 = int (r^2 - y.zeta)|y-zeta|^{-(n+2gamma+2)} ftilde dv.
void kernel_sums(const SphereSamples& f, const Params& P, double r, double cos_y, double sin_y, double& S1,
                 double& S2)
{
    DistanceRule rule = distance_rule(P.n, r);
    MeanRule mean = mean_rule(P.n, mean_order(f));
    double nu = P.nu();
    S1 = S2 = 0;
    for(std::size_t k = 0; k < rule.beta.size(); k++) {
        double cb = std::cos(rule.beta[k]);
        double d2 = (1 - r) * (1 - r) + 2 * r * (1 - cb);
        double M = spherical_mean(f, mean, cos_y, sin_y, rule.beta[k]);
        double K = rule.w[k] * std::pow(d2, -nu) * M;
        S1 += K;
        S2 += K * r * (r - cb) / d2;
    }
}

void polar_of(const BallPoint& y, double& cos_y, double& sin_y)
{
    if(y.r == 0) {
        cos_y = 1;
        sin_y = 0;
        return;
    }
    cos_y = std::clamp(y.coords.back() / y.r, -1., 1.);
    sin_y = std::sqrt(std::max(0., 1 - cos_y * cos_y));
}

}  // namespace

// ------------------------------------------------------------------------------------------
BallPoint BallPoint::make(std::vector<double> coords)
{
    if(coords.size() < 2)
        fail_validation("ball point needs at least two coordinates");
    BallPoint p;
    p.r = std::sqrt(norm2(coords));
    if(!(p.r < 1))
        fail_validation("point outside the open unit ball");
    p.coords = std::move(coords);
    return p;
}

BallPoint BallPoint::polar(int n, double radius, double phi)
{
    if(n < 1)
        fail_validation("n must be a positive integer");
    std::vector<double> c(n + 1, 0.);
    c[0] = radius * std::sin(phi);
    c[n] = radius * std::cos(phi);
    return make(std::move(c));
}

double BallPoint::angle() const
{
    if(r == 0)
        return 0;
    return std::acos(std::clamp(coords.back() / r, -1., 1.));
}

// ------------------------------------------------------------------------------------------
SphereSamples::SphereSamples(int n, std::vector<double> angles, std::vector<double> values,
                             std::vector<double> legendre_coeffs)
    : n_(n), angles_(std::move(angles)), values_(std::move(values)), coeffs_(std::move(legendre_coeffs))
{
    if(n < 1)
        fail_validation("n must be a positive integer");
    if(angles_.empty() || angles_.size() != values_.size())
        fail_validation("sphere samples need matching nonempty angles and values");
    for(std::size_t i = 0; i < angles_.size(); i++) {
        if(!(angles_[i] > 0 && angles_[i] < M_PI))
            fail_validation("sample angles must lie in (0, pi)");
        if(!std::isfinite(values_[i]))
            fail_validation("sample values must be finite");
    }
    if(coeffs_.empty()) {
        fit_coefficients();
        return;
    }
    double scale = 1;
    for(double v : values_)
        scale = std::max(scale, std::fabs(v));
    for(std::size_t i = 0; i < angles_.size(); i++)
        if(std::fabs(at_cosine(std::cos(angles_[i])) - values_[i]) > 1e-8 * scale)
            fail_validation("legendre coefficients do not reproduce the sampled values");
}

std::vector<double> SphereSamples::nodes(int n, int order)
{
    if(n < 1 || order < 1)
        fail_validation("invalid sphere node request");
    double a = 0.5 * (n - 2);
    const Rule& gj = gauss_jacobi(order, a, a);
    std::vector<double> phi;
    for(double x : gj.x)
        phi.push_back(std::acos(x));
    std::sort(phi.begin(), phi.end());
    return phi;
}

void SphereSamples::fit_coefficients()
{
    // interpolation at the Gauss nodes equals the discrete projection, since products of
    // degree below 2K are integrated exactly by the K-point rule
    std::size_t K = angles_.size();
    double a = 0.5 * (n_ - 2);
    const Rule& gj = gauss_jacobi(int(K), a, a);
    std::vector<double> x(K);
    for(std::size_t i = 0; i < K; i++)
        x[i] = std::cos(angles_[i]);
    // the angles must be the Gauss nodes for the projection to interpolate
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    for(std::size_t i = 0; i < K; i++)
        if(std::fabs(sorted[i] - gj.x[i]) > 1e-10)
            fail_validation("sample angles are not the Gauss nodes; supply legendre coefficients");
    std::vector<double> w(K);
    for(std::size_t i = 0; i < K; i++)
        w[i] = gj.w[std::lower_bound(gj.x.begin(), gj.x.end(), x[i] - 1e-10) - gj.x.begin()];
    coeffs_.assign(K, 0.);
    for(std::size_t l = 0; l < K; l++) {
        double num = 0, den = 0;
        for(std::size_t i = 0; i < K; i++) {
            double P = legendre_nd(int(l), n_, x[i]);
            num += w[i] * values_[i] * P;
            den += w[i] * P * P;
        }
        coeffs_[l] = num / den;
    }
}

SphereSamples SphereSamples::sample(int n, std::function<double(double)> fn, int order)
{
    std::vector<double> phi = nodes(n, order), vals;
    for(double t : phi)
        vals.push_back(fn(t));
    SphereSamples s(n, phi, vals);
    s.exact_ = std::move(fn);
    return s;
}

SphereSamples SphereSamples::from_legendre(int n, std::vector<double> coeffs)
{
    if(coeffs.empty())
        fail_validation("at least one legendre coefficient is required");
    std::vector<double> phi = nodes(n, std::max<int>(8, int(coeffs.size()) + 1)), vals;
    for(double t : phi) {
        double s = 0, x = std::cos(t);
        for(std::size_t l = 0; l < coeffs.size(); l++)
            s += coeffs[l] * legendre_nd(int(l), n, x);
        vals.push_back(s);
    }
    return SphereSamples(n, phi, vals, coeffs);
}

SphereSamples SphereSamples::constant(int n, double c, int order)
{
    std::vector<double> phi = nodes(n, std::max(order, 1));
    return SphereSamples(n, phi, std::vector<double>(phi.size(), c), {c});
}

bool SphereSamples::is_zero() const
{
    if(exact_)
        return false;
    for(double c : coeffs_)
        if(c != 0)
            return false;
    return true;
}

double SphereSamples::at_cosine(double x) const
{
    x = std::clamp(x, -1., 1.);
    if(exact_)
        return exact_(std::acos(x));
    double s = coeffs_.empty() ? 0 : coeffs_[0];
    if(coeffs_.size() < 2)
        return s;
    // (l+n-1) P_{l+1} = (2l+n-1) x P_l - l P_{l-1}
    double prev = 1, cur = x;
    s += coeffs_[1] * cur;
    for(std::size_t k = 1; k + 1 < coeffs_.size(); k++) {
        double next = ((2. * k + n_ - 1) * x * cur - k * prev) / (k + n_ - 1.);
        prev = cur;
        cur = next;
        s += coeffs_[k + 1] * cur;
    }
    return s;
}

double SphereSamples::operator()(double phi) const
{
    if(exact_)
        return exact_(phi);
    return at_cosine(std::cos(phi));
}

void SphereSamples::write_csv(std::ostream& out) const
{
    out << "# dimension=" << n_ << "\n";
    out << "angle,value\n";
    for(std::size_t i = 0; i < angles_.size(); i++)
        out << std::setprecision(17) << angles_[i] << "," << values_[i] << "\n";
    if(!coeffs_.empty()) {
        out << "# legendre L=" << coeffs_.size() - 1 << "\n";
        for(std::size_t l = 0; l < coeffs_.size(); l++)
            out << l << "," << std::setprecision(17) << coeffs_[l] << "\n";
    }
}

SphereSamples SphereSamples::read_csv(std::istream& in)
{
    std::string line;
    int n = 0;
    long L = -1;
    std::vector<double> phi, vals, coeffs;
    while(std::getline(in, line)) {
        if(!line.empty() && line.back() == '\r')
            line.pop_back();
        if(line.empty())
            continue;
        if(line[0] == '#') {
            auto pos = line.find("dimension=");
            if(pos != std::string::npos)
                n = std::stoi(line.substr(pos + 10));
            pos = line.find("legendre L=");
            if(pos != std::string::npos)
                L = std::stol(line.substr(pos + 11));
            continue;
        }
        if(line.rfind("angle", 0) == 0)
            continue;
        std::istringstream ss(line);
        double a, v;
        char comma;
        if(!(ss >> a >> comma >> v) || comma != ',')
            fail_validation("malformed sphere sample row: " + line);
        if(L >= 0)
            coeffs.push_back(v);
        else {
            phi.push_back(a);
            vals.push_back(v);
        }
    }
    if(n < 1)
        fail_validation("sphere CSV lacks the '# dimension=' header");
    if(L >= 0 && coeffs.size() != std::size_t(L + 1))
        fail_validation("legendre block does not hold L+1 coefficients");
    return SphereSamples(n, phi, vals, coeffs);
}

// ------------------------------------------------------------------------------------------
std::vector<double> mobius(const std::vector<double>& x)
{
    if(x.size() < 2)
        fail_validation("point needs at least two coordinates");
    std::vector<double> y = x;
    y.back() += 1;
    double D = norm2(y);
    if(!(D > 1e-300))
        fail_validation("pole of the transform");
    for(double& c : y)
        c *= 2 / D;
    y.back() -= 1;
    return y;
}

double rho_b(const std::vector<double>& y)
{
    double r = std::sqrt(norm2(y));
    return (1 - r) / (1 + r);
}

double conformal_factor(const std::vector<double>& x)
{
    std::vector<double> y = mobius(x);
    std::vector<double> shifted = x;
    shifted.back() += 1;
    double ry = std::sqrt(norm2(y));
    return norm2(shifted) * (1 + ry) * (1 + ry) / 4;
}

RadialProfile sphere_to_plane(const SphereSamples& f, const Params& P)
{
    check_samples(f, P);
    double half = 0.5 * (P.n - 2 * P.gamma);
    auto fn = [f, half](double r) { return f(2 * std::atan(r)) * std::pow(1 + r * r, -half); };
    return RadialProfile::analytic(fn, RadialProfile::default_grid(), 2 * half);
}

SphereSamples plane_to_sphere(const RadialProfile& f, const Params& P, int order)
{
    double half = 0.5 * (P.n - 2 * P.gamma);
    auto fn = [f, half](double phi) {
        double r = std::tan(0.5 * phi);
        return f(r) * std::pow(1 + r * r, half);
    };
    return SphereSamples::sample(P.n, fn, order);
}

// ------------------------------------------------------------------------------------------
double ball_extend(const SphereSamples& f, const Params& P, const BallPoint& y)
{
    P.require_supercritical();
    check_samples(f, P);
    if(int(y.coords.size()) != P.n + 1)
        fail_validation("ball point dimension must be n+1");
    if(f.is_zero())
        return 0;
    double r = y.r;
    if(r > TRANSFER_RADIUS) {
        // (K f~)(y) = ((1+|y|)/|y+e_N|)^{n-2gamma} (K f)(x), x = mobius(y)
        std::vector<double> x = mobius(y.coords), shifted = y.coords;
        shifted.back() += 1;
        double s = std::sqrt(std::max(0., norm2(x) - x.back() * x.back()));
        double U = extend(sphere_to_plane(f, P), P, s, x.back());
        return std::pow((1 + r) / std::sqrt(norm2(shifted)), P.n - 2 * P.gamma) * U;
    }
    double cos_y, sin_y, S1, S2;
    polar_of(y, cos_y, sin_y);
    kernel_sums(f, P, r, cos_y, sin_y, S1, S2);
    return P.kappa * std::pow(2., -P.n) * std::pow(1 + r, P.n - 2 * P.gamma) *
           std::pow(1 - r * r, 2 * P.gamma) * S1;
}

namespace {

void check_radius(double r)
{
    if(!(r >= 0 && r < 1))
        fail_validation("radius must lie in [0,1)");
    if(1 - r < 1e-10)
        fail_numerical("boundary layer: refine angle order or use transfer identity");
}

}  // namespace

double sphere_kernel_integral_I1(double r, const Params& P)
{
    check_radius(r);
    SphereSamples one = SphereSamples::constant(P.n, 1);
    double S1, S2;
    kernel_sums(one, P, r, 1, 0, S1, S2);
    return std::pow(1 - r * r, 2 * P.gamma) * S1;
}

double sphere_kernel_integral_I2(double r, const Params& P)
{
    check_radius(r);
    SphereSamples one = SphereSamples::constant(P.n, 1);
    double S1, S2;
    kernel_sums(one, P, r, 1, 0, S1, S2);
    return std::pow(1 - r * r, 2 * P.gamma) * S2;
}

double puiseux_I1(double r, const Params& P)
{
    double n = P.n, g = P.gamma;
    return std::pow(2., n) * std::pow(M_PI, 0.5 * n) * std::pow(1 + r, -(n - 2 * g)) *
           (gamma_fn(g) / gamma_fn(P.nu()) +
            std::pow(1 - r, 2 * g) * gamma_fn(-g) / (std::pow(2., 2 * g) * gamma_fn(0.5 * n - g)));
}

double puiseux_I2(double r, const Params& P)
{
    double n = P.n, g = P.gamma;
    double G = gamma_fn(g) / gamma_fn(P.nu());
    return std::pow(2., n + 1) * std::pow(M_PI, 0.5 * n) * r * std::pow(1 + r, -(n + 1 - 2 * g)) *
           (-2 * g * G / ((n + 2 * g) * (1 - r)) + 0.5 * G +
            std::pow(1 - r, 2 * g) * gamma_fn(-g) / (std::pow(2., 1 + 2 * g) * gamma_fn(0.5 * n - g)));
}

double p_gamma_one(const Params& P)
{
    return std::pow(2., 2 * P.gamma) * gamma_fn(P.nu()) / gamma_fn(0.5 * P.n - P.gamma);
}

double a_coefficient(const Params& P)
{
    return std::pow(2., P.n + 4 * P.gamma) * P.gamma * gamma_fn(P.nu()) /
           (std::pow(M_PI, 0.5 * P.n) * gamma_fn(1 - P.gamma));
}

std::vector<double> default_radii()
{
    std::vector<double> r;
    for(int k = 0; k <= 5; k++)
        r.push_back(1 - 0.2 * std::pow(2., -k));
    return r;
}

double weighted_normal_derivative_ball(const SphereSamples& f, const Params& P, double pole_angle,
                                       const std::vector<double>& radii)
{
    P.require_supercritical();
    check_samples(f, P);
    if(radii.size() < 2)
        fail_validation("need at least two radii");
    for(std::size_t i = 0; i < radii.size(); i++)
        if(!(radii[i] > 0 && radii[i] < 1) || (i > 0 && !(radii[i] > radii[i - 1])))
            fail_validation("radii must increase within (0,1)");
    if(f.is_zero())
        return 0;
    double cos_y = std::cos(pole_angle), sin_y = std::fabs(std::sin(pole_angle));
    double n = P.n, g = P.gamma;
    std::vector<double> x(radii.size()), d(radii.size());
    parallel_for(radii.size(), [&](std::size_t k) {
        double r = radii[k], S1, S2;
        kernel_sums(f, P, r, cos_y, sin_y, S1, S2);
        double c = P.kappa * std::pow(2., -n) * std::pow(1 + r, n - 2 * g) * std::pow(1 - r * r, 2 * g);
        // rho^m dV/drho = -(1+r)^{1+2gamma} (1-r)^{1-2gamma}/2 dV/dr
        double bracket = (4 * g * r / (1 - r * r) - (n - 2 * g) / (1 + r)) * S1 + (n + 2 * g) / r * S2;
        x[k] = 1 - r;
        d[k] = 0.5 * std::pow(1 + r, 1 + 2 * g) * std::pow(1 - r, 1 - 2 * g) * c * bracket;
    });
    std::reverse(x.begin(), x.end());
    std::reverse(d.begin(), d.end());
    std::vector<double> powers;
    for(int j = 1; powers.size() + 1 < x.size(); j++) {
        for(double p : {double(j), j + 1 - 2 * g})
            if(std::find_if(powers.begin(), powers.end(), [p](double q) { return std::fabs(p - q) < 1e-12; }) ==
               powers.end())
                powers.push_back(p);
    }
    std::sort(powers.begin(), powers.end());
    return extrapolate_to_zero(x, d, powers);
}

double fractional_laplacian_sphere(const SphereSamples& f, const Params& P, double y0_angle)
{
    P.require_supercritical();
    check_samples(f, P);
    double f0 = f(y0_angle);
    double cos_y = std::cos(y0_angle), sin_y = std::fabs(std::sin(y0_angle));
    MeanRule mean = mean_rule(P.n, mean_order(f));
    double nu = P.nu();
    // the spherical mean removes the first-order term, so the integrand is O(beta^{1-2gamma})
    auto integrand = [&](double beta) {
        return std::pow(2 - 2 * std::cos(beta), -nu) * (f0 - spherical_mean(f, mean, cos_y, sin_y, beta));
    };
    const Rule& gl = gauss_legendre(BETA_ORDER);
    double area = sphere_area(P.n - 1);
    auto panel = [&](double a, double b) {
        double s = 0;
        for(std::size_t i = 0; i < gl.size(); i++) {
            double t = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[i];
            s += gl.w[i] * area * std::pow(std::sin(t), P.n - 1) * integrand(t);
        }
        return 0.5 * (b - a) * s;
    };
    const int K = 6;
    const double eps0 = 0.2;
    double outer = 0;
    for(double a = eps0; a < M_PI;) {
        double b = std::min(2 * a, M_PI);
        if(M_PI - b < 0.5 * a)
            b = M_PI;
        outer += panel(a, b);
        a = b;
    }
    std::vector<double> eps(K), trunc(K), pieces(K);
    for(int k = 0; k < K; k++)
        eps[k] = eps0 * std::pow(2., -k);
    parallel_for(K, [&](std::size_t k) { pieces[k] = k == 0 ? 0 : panel(eps[k], eps[k - 1]); });
    double acc = outer;
    for(int k = 0; k < K; k++) {
        acc += pieces[k];
        trunc[k] = acc;
    }
    std::vector<double> powers;
    for(int j = 0; j + 1 < K; j++)
        powers.push_back(2 - 2 * P.gamma + 2 * j);
    double integral;
    try {
        integral = extrapolate_to_zero(eps, trunc, powers);
    } catch(const Error& e) {
        if(e.kind() == ErrorKind::numerical)
            fail_numerical("insufficient smoothness at y0: principal value did not converge", e.estimate());
        throw;
    }
    return p_gamma_one(P) * f0 + a_coefficient(P) * std::pow(2., -P.n) * integral;
}

double ball_equation_residual(const SphereSamples& f, const Params& P, const BallPoint& y, double h)
{
    P.require_supercritical();
    check_samples(f, P);
    int N = P.n + 1;
    if(int(y.coords.size()) != N)
        fail_validation("ball point dimension must be n+1");
    if(!(h > 0))
        fail_validation("step must be positive");
    if(!(y.r > 0.1))
        fail_validation("residual requires |y| > 0.1");
    if(!(y.r + h < 1))
        fail_validation("stencil leaves ball");
    if(f.is_zero())
        return 0;
    auto shifted = [&](int i, double t) {
        std::vector<double> c = y.coords;
        c[i] += t;
        return c;
    };
    // gbar = psi^2 |dy|^2, psi = 2/(1+|y|)^2: div(rho^m grad V) = psi^{-N} d_i(psi^{N-2} rho^m d_i V)
    auto psi = [](const std::vector<double>& c) {
        double r = std::sqrt(norm2(c));
        return 2 / ((1 + r) * (1 + r));
    };
    auto flux_coeff = [&](const std::vector<double>& c) {
        return std::pow(psi(c), N - 2) * std::pow(rho_b(c), P.m);
    };
    std::vector<double> V(2 * N + 1);
    parallel_for(V.size(), [&](std::size_t k) {
        if(k == 0)
            V[k] = ball_extend(f, P, y);
        else {
            int i = int(k - 1) / 2;
            double t = (k % 2 == 1) ? h : -h;
            V[k] = ball_extend(f, P, BallPoint::make(shifted(i, t)));
        }
    });
    double div = 0;
    for(int i = 0; i < N; i++) {
        double ap = flux_coeff(shifted(i, 0.5 * h)), am = flux_coeff(shifted(i, -0.5 * h));
        div += (ap * (V[2 * i + 1] - V[0]) - am * (V[0] - V[2 * i + 2])) / (h * h);
    }
    div /= std::pow(psi(y.coords), N);
    double r = y.r;
    return -div + 0.25 * P.n * (P.n - 2 * P.gamma) * (1 + r) * (1 + r) / r * std::pow(rho_b(y.coords), P.m) * V[0];
}

double ball_field_norm(const SphereSamples& f, const Params& P)
{
    P.require_supercritical();
    check_samples(f, P);
    if(f.is_zero())
        return 0;
    int n = P.n, N = n + 1;
    double q = 2. * (n - 2 * P.gamma + 2) / (n - 2 * P.gamma);
    // radial rule: [0, 1/2] and geometric panels in 1-r, closed by a Jacobi panel for (1-r)^m
    std::vector<double> rr, rw;
    const Rule& g16 = gauss_legendre(16);
    const Rule& g8 = gauss_legendre(8);
    for(std::size_t i = 0; i < g16.size(); i++) {
        rr.push_back(0.25 + 0.25 * g16.x[i]);
        rw.push_back(0.25 * g16.w[i] * std::pow((1 - rr.back()) / (1 + rr.back()), P.m));
    }
    double xhi = 0.5;
    const double xstop = 1e-9;
    while(xhi > xstop) {
        double xlo = 0.5 * xhi;
        for(std::size_t i = 0; i < g8.size(); i++) {
            double x = 0.5 * (xlo + xhi) + 0.5 * (xhi - xlo) * g8.x[i];
            rr.push_back(1 - x);
            rw.push_back(0.5 * (xhi - xlo) * g8.w[i] * std::pow(x / (2 - x), P.m));
        }
        xhi = xlo;
    }
    Rule tail = jacobi_unit(8, P.m, 0);
    for(std::size_t i = 0; i < tail.size(); i++) {
        double x = xhi * tail.x[i];
        rr.push_back(1 - x);
        rw.push_back(std::pow(xhi, 1 + P.m) * tail.w[i] * std::pow(2 - x, -P.m));
    }
    double a = 0.5 * (n - 2);
    const Rule& gj = gauss_jacobi(32, a, a);
    double area = sphere_area(n - 1);
    std::size_t A = gj.size();
    std::vector<double> terms(rr.size() * A);
    parallel_for(terms.size(), [&](std::size_t idx) {
        std::size_t i = idx / A, j = idx % A;
        double r = rr[i], c = gj.x[j];
        BallPoint y = BallPoint::polar(n, r, std::acos(c));
        double V = ball_extend(f, P, y);
        // dv_gbar = 2^N (1+r)^{-2N} r^n dr d(S^n)
        terms[idx] = rw[i] * gj.w[j] * area * std::pow(2., N) * std::pow(1 + r, -2 * N) * std::pow(r, n) *
                     std::pow(std::fabs(V), q);
    });
    double total = 0;
    for(double t : terms)
        total += t;
    return std::pow(total, 1 / q);
}

double sphere_norm(const SphereSamples& f, const Params& P)
{
    P.require_supercritical();
    check_samples(f, P);
    double p = 2. * P.n / (P.n - 2 * P.gamma);
    double a = 0.5 * (P.n - 2);
    const Rule& gj = gauss_jacobi(64, a, a);
    double total = 0;
    for(std::size_t j = 0; j < gj.size(); j++)
        total += gj.w[j] * std::pow(std::fabs(f.at_cosine(gj.x[j])), p);
    return std::pow(std::pow(2., -P.n) * sphere_area(P.n - 1) * total, 1 / p);
}

}  // namespace fracext
