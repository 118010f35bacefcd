#include "fracext/error.hpp"
#include "fracext/halfspace.hpp"
#include "fracext/params.hpp"
#include "fracext/quad.hpp"
#include "fracext/special.hpp"
#include <doctest.h>
#include <cmath>

using namespace fracext;

TEST_CASE("parameters and derived constants")
{
    Params P = Params::critical(2, 0.5);
    CHECK(P.p == doctest::Approx(4).epsilon(1e-15));
    CHECK(P.m == doctest::Approx(0).epsilon(1e-15));
    CHECK(P.q_star == doctest::Approx(6).epsilon(1e-15));
    CHECK(Params::make(1, 0.5, 2).kappa == doctest::Approx(1 / M_PI).epsilon(1e-14));
    for(double g : {0.25, 0.5, 0.75}) {
        Params Q = Params::make(3, g, 2.5);
        CHECK(Q.kappa > 0);
        CHECK(Q.d_gamma < 0);
        CHECK(Q.q_star > Q.p);
    }
    CHECK_THROWS_WITH(Params::make(2, 1.2, 3), "gamma must lie in (0,1)");
    CHECK_THROWS_WITH(Params::critical(1, 0.75), "subcritical dimension");
}

TEST_CASE("special functions")
{
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(gamma_fn(-0.25) == doctest::Approx(-4.9016668098607106).epsilon(1e-13));
    CHECK(sphere_area(2) == doctest::Approx(4 * M_PI).epsilon(1e-14));
    CHECK(legendre(5, 0.3) == doctest::Approx(0.34538625).epsilon(1e-14));
    CHECK(legendre_nd(3, 2, 0.7) == doctest::Approx(legendre(3, 0.7)).epsilon(1e-14));
    // zonal harmonics of S^n are normalized to 1 at the pole
    for(int n : {1, 3, 4})
        for(int l = 0; l < 5; l++)
            CHECK(legendre_nd(l, n, 1.0) == doctest::Approx(1).epsilon(1e-13));
}

TEST_CASE("Gauss rules integrate polynomials exactly")
{
    const Rule& gl = gauss_legendre(10);
    double s = 0;
    for(std::size_t i = 0; i < gl.size(); i++)
        s += gl.w[i] * std::pow(gl.x[i], 18);
    CHECK(s == doctest::Approx(2. / 19).epsilon(1e-14));
    // int (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
    double a = -0.5, b = 0.3;
    const Rule& gj = gauss_jacobi(12, a, b);
    double t = 0;
    for(double w : gj.w)
        t += w;
    double exact = std::pow(2., a + b + 1) * gamma_fn(a + 1) * gamma_fn(b + 1) / gamma_fn(a + b + 2);
    CHECK(t == doctest::Approx(exact).epsilon(1e-13));
    Rule u = jacobi_unit(8, 0.5, 0.);
    double v = 0;
    for(std::size_t i = 0; i < u.size(); i++)
        v += u.w[i] * u.x[i];
    CHECK(v == doctest::Approx(0.4).epsilon(1e-13));
}

TEST_CASE("weighted half-space integrals")
{
    QuadSpec spec;
    Params P1 = Params::make(1, 0.5, 2);
    CHECK(integrate_halfspace_weighted([](double, double) { return 0.; }, P1, spec) == 0);
    double g = integrate_halfspace_weighted([](double s, double x) { return std::exp(-s * s - x * x); }, P1, spec);
    CHECK(g == doctest::Approx(M_PI / 2).epsilon(1e-10));
    Params P2 = Params::critical(2, 0.25);
    double h = integrate_halfspace_weighted(
        [](double s, double x) { return std::pow(1 + s * s + x * x, -6); }, P2, spec);
    CHECK(h == doctest::Approx(0.13289829286421694).epsilon(1e-9));
    CHECK_THROWS_WITH(integrate_halfspace_weighted([](double, double) { return NAN; }, P2, spec),
                      "integrand not finite");
}

TEST_CASE("zonal sphere integrals")
{
    QuadSpec spec;
    CHECK(integrate_sphere_zonal([](double) { return 1.; }, 2, spec) == doctest::Approx(4 * M_PI).epsilon(1e-13));
    for(int n : {1, 2, 3, 5})
        CHECK(std::fabs(integrate_sphere_zonal([](double phi) { return std::cos(phi); }, n, spec)) < 1e-13);
    double r = 0.5, nu = 1.25;
    double v = integrate_sphere_zonal([&](double phi) { return std::pow(1 + r * r - 2 * r * std::cos(phi), -nu); },
                                      2, spec);
    CHECK(v == doctest::Approx(15.022266222677104).epsilon(1e-10));
}

TEST_CASE("quadrature specification")
{
    QuadSpec bad;
    bad.order_angle = 1;
    CHECK_THROWS_AS(bad.validate(), Error);
    QuadSpec::defaults().validate();
}

TEST_CASE("Lorentz functional")
{
    Params P = Params::critical(2, 0.5);
    RadialProfile w = bubble(1, P);
    // L^{p,p} coincides with L^p
    CHECK(lorentz_norm(w, P.p, P.p, P.n) == doctest::Approx(w.lp_norm(P.p, P.n)).epsilon(1e-6));
    // q = infinity: sup_t t^{1/p} f*(t) for the bubble, t = pi r^2
    double sup = 0;
    for(double r = 0.01; r < 100; r *= 1.001)
        sup = std::max(sup, std::pow(M_PI * r * r, 1 / P.p) * w(r));
    CHECK(lorentz_norm(w, P.p, INFINITY, P.n) == doctest::Approx(sup).epsilon(1e-5));
    RadialProfile bump({0, 0.5, 1, 1.5, 2}, {0, 1, 0.5, 0.2, 0.1}, 3);
    CHECK_THROWS_WITH(lorentz_norm(bump, P.p, 2, P.n), "profile must be rearranged first");
}
