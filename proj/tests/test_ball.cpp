#include "fracext/ball.hpp"
#include "fracext/error.hpp"
#include "fracext/halfspace.hpp"
#include "fracext/special.hpp"
#include <doctest.h>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace fracext;

namespace {

double length(const std::vector<double>& v)
{
    double s = 0;
    for(double c : v)
        s += c * c;
    return std::sqrt(s);
}

std::vector<double> random_halfspace_point(std::mt19937& rng, int N)
{
    std::uniform_real_distribution<double> u(-2, 2), h(0, 3);
    std::vector<double> x(N);
    for(int i = 0; i + 1 < N; i++)
        x[i] = u(rng);
    x[N - 1] = h(rng);
    return x;
}

/// the first count distinct positive exponents first + j + 2gamma k, k in {0, 1}
std::vector<double> expansion_powers(double g, double first, int count)
{
    std::vector<double> p;
    for(int j = 0; j < 6; j++)
        for(int k = 0; k < 2; k++) {
            double e = first + j + 2 * g * k;
            bool seen = e <= 0;
            for(double q : p)
                seen = seen || std::fabs(q - e) < 1e-12;
            if(!seen)
                p.push_back(e);
        }
    std::sort(p.begin(), p.end());
    p.resize(count);
    return p;
}

}  // namespace

TEST_CASE("Moebius transform")
{
    std::vector<double> e = mobius({0, 0, 0});
    CHECK(e[0] == 0);
    CHECK(e[2] == doctest::Approx(1).epsilon(1e-15));
    std::mt19937 rng(7);
    for(int k = 0; k < 20; k++) {
        std::vector<double> x = random_halfspace_point(rng, 3), y = mobius(x), z = mobius(y);
        CHECK(length(y) < 1);
        for(int i = 0; i < 3; i++)
            CHECK(z[i] == doctest::Approx(x[i]).epsilon(1e-12));
        std::vector<double> b = x;
        b[2] = 0;
        CHECK(length(mobius(b)) == doctest::Approx(1).epsilon(1e-12));
    }
    CHECK_THROWS_WITH(mobius({0, 0, -1}), "pole of the transform");
}

TEST_CASE("conformal factor and the compactified metric")
{
    CHECK(conformal_factor({0, 0, 0}) == doctest::Approx(1).epsilon(1e-15));
    std::mt19937 rng(11);
    const int N = 3;
    for(int k = 0; k < 10; k++) {
        std::vector<double> x = random_halfspace_point(rng, N);
        double u = conformal_factor(x);
        CHECK(u > 0);
        std::vector<double> y = mobius(x);
        // gbar_b = 4 |dy|^2 / (1+|y|)^4 pulls back to u^{-2} |dx|^2; check along the radial direction of x
        double h = 1e-6, lx = length(x);
        std::vector<double> xp = x, xm = x;
        for(int i = 0; i < N; i++) {
            double d = lx > 0 ? x[i] / lx : (i == N - 1);
            xp[i] += h * d;
            xm[i] -= h * d;
        }
        std::vector<double> yp = mobius(xp), ym = mobius(xm), dy(N);
        for(int i = 0; i < N; i++)
            dy[i] = (yp[i] - ym[i]) / (2 * h);
        double g = 4 * std::pow(length(dy), 2) / std::pow(1 + length(y), 4);
        CHECK(g == doctest::Approx(1 / (u * u)).epsilon(1e-8));
        // |d rho_b|_{gbar_b} = 1: Euclidean gradient by central differences, scaled by (1+|y|)^2/2
        std::vector<double> grad(N);
        double hy = 1e-6;
        for(int i = 0; i < N; i++) {
            std::vector<double> a = y, b = y;
            a[i] += hy;
            b[i] -= hy;
            grad[i] = (rho_b(a) - rho_b(b)) / (2 * hy);
        }
        CHECK(length(grad) * std::pow(1 + length(y), 2) / 2 == doctest::Approx(1).epsilon(1e-6));
    }
}

TEST_CASE("zonal sphere data")
{
    SphereSamples c = SphereSamples::constant(3, 2.5);
    CHECK(c(1.1) == doctest::Approx(2.5));
    SphereSamples y = SphereSamples::from_legendre(2, {0, 0, 0, 1});
    CHECK(y(0.4) == doctest::Approx(legendre(3, std::cos(0.4))).epsilon(1e-14));
    std::stringstream ss;
    y.write_csv(ss);
    SphereSamples back = SphereSamples::read_csv(ss);
    CHECK(back.dim() == 2);
    REQUIRE(back.legendre_coeffs().size() == 4);
    CHECK(back(2.2) == doctest::Approx(y(2.2)).epsilon(1e-12));
    SphereSamples e = SphereSamples::sample(3, [](double phi) { return std::exp(std::cos(phi)); });
    std::stringstream se;
    e.write_csv(se);
    SphereSamples eb = SphereSamples::read_csv(se);
    CHECK(eb(0.9) == doctest::Approx(std::exp(std::cos(0.9))).epsilon(1e-10));
    CHECK_THROWS_AS(SphereSamples(2, {0.5, 4.0}, {1, 1}), Error);
    CHECK_THROWS_AS(SphereSamples(2, {0.5, 1.0}, {1, NAN}), Error);
}

TEST_CASE("boundary correspondence")
{
    Params P = Params::critical(2, 0.25);
    // ftilde = 1 corresponds to the bubble with lambda = 1
    RadialProfile f = sphere_to_plane(SphereSamples::constant(2, 1), P), w = bubble(1, P);
    for(double r : {0., 0.3, 2., 40.})
        CHECK(f(r) == doctest::Approx(w(r)).epsilon(1e-13));
    SphereSamples g = SphereSamples::from_legendre(2, {1, 0.5});
    SphereSamples h = plane_to_sphere(sphere_to_plane(g, P), P);
    for(double phi : {0.2, 1.5, 2.9})
        CHECK(h(phi) == doctest::Approx(g(phi)).epsilon(1e-8));
    CHECK(sphere_norm(SphereSamples::constant(2, 1), P) == doctest::Approx(w.lp_norm(P.p, P.n)).epsilon(1e-10));
}

TEST_CASE("ball extension")
{
    for(auto [n, g] : {std::pair{2, 0.25}, std::pair{3, 0.5}}) {
        Params P = Params::critical(n, g);
        double centre = ball_extend(SphereSamples::constant(n, 1), P, BallPoint::make(std::vector<double>(n + 1, 0.)));
        CHECK(centre == doctest::Approx(P.kappa * std::pow(2., -n) * sphere_area(n)).epsilon(1e-10));
    }
    // transfer identity against the half-space extension
    Params P = Params::critical(2, 0.25);
    SphereSamples ft = SphereSamples::from_legendre(2, {1, 0.5});
    RadialProfile f = sphere_to_plane(ft, P);
    for(auto [s, xN] : {std::pair{0.5, 0.8}, std::pair{2., 0.3}}) {
        std::vector<double> y = mobius({s, 0, xN}), ye = y;
        ye[2] += 1;
        double factor = std::pow((1 + length(y)) / length(ye), P.n - 2 * P.gamma);
        CHECK(ball_extend(ft, P, BallPoint::make(y)) == doctest::Approx(factor * extend(f, P, s, xN)).epsilon(1e-7));
    }
    // boundary attainment for ftilde = 1 after extrapolation in 1 - r
    Params Q = Params::critical(3, 0.25);
    std::vector<double> x, v;
    for(int k = 0; k < 6; k++) {
        double r = 1 - 0.1 * std::pow(2., -k);
        x.push_back(1 - r);
        v.push_back(ball_extend(SphereSamples::constant(3, 1), Q, BallPoint::polar(3, r, 0.7)));
    }
    CHECK(extrapolate_to_zero(x, v, {0.5, 1, 1.5, 2, 2.5}) == doctest::Approx(1).epsilon(1e-4));
    CHECK_THROWS_WITH(ball_extend(SphereSamples::constant(2, 1), Q, BallPoint::polar(3, 0.5, 0.1)),
                      "sphere data dimension does not match n");
}

TEST_CASE("sphere kernel integrals")
{
    for(auto [n, g] : {std::pair{2, 0.25}, std::pair{3, 0.5}, std::pair{2, 0.75}}) {
        Params P = Params::critical(n, g);
        CHECK(sphere_kernel_integral_I1(0, P) == doctest::Approx(sphere_area(n)).epsilon(1e-12));
        CHECK(std::fabs(sphere_kernel_integral_I2(0, P)) < 1e-12);
        std::vector<double> x, v1, v2;
        for(int k = 0; k < 6; k++) {
            double r = 1 - 0.02 * std::pow(2., -k);
            x.push_back(1 - r);
            v1.push_back(std::pow(1 + r, n - 2 * g) * sphere_kernel_integral_I1(r, P) /
                         (std::pow(2., n) * std::pow(M_PI, 0.5 * n)));
            v2.push_back((1 - r) * sphere_kernel_integral_I2(r, P));
        }
        double G = gamma_fn(g) / gamma_fn(P.nu());
        CHECK(extrapolate_to_zero(x, v1, expansion_powers(g, 0, 5)) == doctest::Approx(G).epsilon(1e-4));
        // prefactor of the expansion at r = 1: 2^{n+1} pi^{n/2} 2^{-(n+1-2gamma)}
        double lead = -std::pow(M_PI, 0.5 * n) * std::pow(2., 2 * g) * 2 * g * G / (n + 2 * g);
        CHECK(extrapolate_to_zero(x, v2, expansion_powers(g, 1, 5), false) == doctest::Approx(lead).epsilon(1e-4));
    }
    Params P = Params::critical(2, 0.25);
    CHECK(sphere_kernel_integral_I1(0.9, P) == doctest::Approx(puiseux_I1(0.9, P)).epsilon(1e-2));
    CHECK_THROWS_WITH(sphere_kernel_integral_I1(1 - 1e-12, P),
                      "boundary layer: refine angle order or use transfer identity");
}

TEST_CASE("fractional conformal Laplacian on the sphere")
{
    Params P = Params::critical(2, 0.5);
    CHECK(p_gamma_one(P) == doctest::Approx(1).epsilon(1e-14));
    CHECK(fractional_laplacian_sphere(SphereSamples::constant(2, 1), P, 0.8) == doctest::Approx(1).epsilon(1e-14));
    double dn = weighted_normal_derivative_ball(SphereSamples::constant(2, 1), P, 0.7, default_radii());
    CHECK(P.d_gamma / (2 * P.gamma) * dn == doctest::Approx(1).epsilon(1e-3));
    CHECK(std::fabs(weighted_normal_derivative_ball(SphereSamples::constant(2, 0), P, 0.7, default_radii())) < 1e-12);
    // zonal harmonics are eigenfunctions with multipliers 2^{2gamma} Gamma(l+n/2+gamma)/Gamma(l+n/2-gamma)
    Params Q = Params::critical(2, 0.25);
    const double mult[] = {1.0460496200531016, 1.7434160334218361, 2.2415349001137892};
    for(int l = 1; l <= 2; l++) {
        std::vector<double> c(l + 1, 0.);
        c[l] = 1;
        SphereSamples Y = SphereSamples::from_legendre(2, c);
        for(double a : {0.4, 1.2, 2.5})
            CHECK(fractional_laplacian_sphere(Y, Q, a) == doctest::Approx(mult[l] * Y(a)).epsilon(1e-6));
    }
    CHECK(p_gamma_one(Q) == doctest::Approx(mult[0]).epsilon(1e-13));
}

TEST_CASE("ball equation residual")
{
    Params P = Params::critical(2, 0.25);
    BallPoint y = BallPoint::make({0, 0, 0.5});
    CHECK(ball_equation_residual(SphereSamples::constant(2, 1), P, y, 1e-2) < 1e-3);
    CHECK(ball_equation_residual(SphereSamples::constant(2, 0), P, y, 1e-2) == 0);
    SphereSamples c = SphereSamples::from_legendre(2, {0, 1});
    BallPoint z = BallPoint::polar(2, 0.5, 0.6);
    double r1 = ball_equation_residual(c, P, z, 2e-2), r2 = ball_equation_residual(c, P, z, 1e-2);
    CHECK(r1 / r2 == doctest::Approx(4).epsilon(0.15));
    CHECK_THROWS_WITH(ball_equation_residual(c, P, BallPoint::polar(2, 0.99, 0.6), 2e-2), "stencil leaves ball");
}
