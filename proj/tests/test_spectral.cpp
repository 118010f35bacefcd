#include "fracext/error.hpp"
#include "fracext/spectral.hpp"
#include "fracext/special.hpp"
#include <doctest.h>
#include <cmath>

using namespace fracext;

TEST_CASE("stored weighted harmonics")
{
    CHECK(weighted_eigenpair(0, Params::critical(3, 0.25)).eigenvalue == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(weighted_eigenpair(1, Params::critical(2, 0.5)).eigenvalue == doctest::Approx(6).epsilon(1e-15));
    Params P = Params::critical(2, 0.75);
    for(int l = 0; l <= 2; l++) {
        WeightedHarmonic Y = weighted_eigenpair(l, P);
        // Dirichlet condition on the equator
        for(const auto& s : Y.samples)
            if(s.theta.back() == 0)
                CHECK(s.value == 0);
    }
    CHECK_THROWS_WITH(weighted_eigenpair(3, P), "no closed form stored");
}

TEST_CASE("degree-two form is weighted-harmonic in the half-space")
{
    // div(x_N^m grad U) by central differences at interior points, for U = x_N^{2gamma}(|xbar|^2 - n/(2gamma+2) x_N^2)
    for(auto [n, g] : {std::pair{2, 0.25}, std::pair{3, 0.5}}) {
        Params P = Params::critical(n, g);
        WeightedHarmonic Y = weighted_eigenpair(2, P);
        int N = n + 1;
        std::vector<double> x(N, 0.3);
        x[N - 1] = 0.9;
        double h = 1e-3, div = 0;
        auto flux = [&](int i, double t) {
            std::vector<double> a = x, b = x;
            a[i] += t + 0.5 * h;
            b[i] += t - 0.5 * h;
            double xN = 0.5 * (a[N - 1] + b[N - 1]);
            return std::pow(xN, P.m) * (Y.polynomial_form(a) - Y.polynomial_form(b)) / h;
        };
        for(int i = 0; i < N; i++)
            div += (flux(i, 0.5 * h) - flux(i, -0.5 * h)) / h;
        CHECK(std::fabs(div) < 1e-5);
    }
}

TEST_CASE("eigen residuals")
{
    Params P = Params::critical(2, 0.25);
    CHECK(eigen_residual(weighted_eigenpair(0, P), P, hemisphere_stencil(2, 2e-3, 4)) < 1e-8);
    Params Q = Params::critical(2, 0.75);
    WeightedHarmonic Y = weighted_eigenpair(1, Q);
    double r1 = eigen_residual(Y, Q, hemisphere_stencil(2, 4e-3)), r2 = eigen_residual(Y, Q, hemisphere_stencil(2, 2e-3));
    CHECK(std::log2(r1 / r2) == doctest::Approx(2).epsilon(0.1));
    WeightedHarmonic bad = Y;
    bad.eigenvalue += 0.1;
    CHECK(eigen_residual(bad, Q, hemisphere_stencil(2, 2e-3)) > 1e-2);
    CHECK_THROWS_WITH(eigen_residual(Y, Q, hemisphere_stencil(2, 1e-4, 2, 5e-4)), "boundary layer");
    CHECK_THROWS_WITH(eigen_residual(Y, Q, hemisphere_stencil(2, 0.2, 2, 0.2)), "stencil leaves the half-space");
}

TEST_CASE("Legendre polynomials")
{
    for(double s : {-0.7, 0., 0.4}) {
        CHECK(legendre_eval(0, s) == 1);
        CHECK(legendre_eval(1, s) == doctest::Approx(s));
    }
    CHECK(legendre_eval(5, 0.3) == doctest::Approx(0.34538625).epsilon(1e-14));
    CHECK(legendre_eval(7, 1) == doctest::Approx(1).epsilon(1e-15));
}

TEST_CASE("Funk-Hecke multipliers")
{
    for(int n : {1, 2, 3, 4}) {
        CHECK(funk_hecke_apply([](double) { return 1.; }, 0, n) == doctest::Approx(sphere_area(n)).epsilon(1e-12));
        for(int l = 1; l <= 3; l++)
            CHECK(std::fabs(funk_hecke_apply([](double) { return 1.; }, l, n)) < 1e-12);
    }
    // linearity in the kernel
    auto k1 = [](double s) { return std::exp(s); };
    auto k2 = [](double s) { return 1 / (2 - s); };
    double a = funk_hecke_apply(k1, 2, 3), b = funk_hecke_apply(k2, 2, 3);
    CHECK(funk_hecke_apply([&](double s) { return 2 * k1(s) - 3 * k2(s); }, 2, 3) ==
          doctest::Approx(2 * a - 3 * b).epsilon(1e-12));
    for(auto [n, g] : {std::pair{2, 0.25}, std::pair{3, 0.75}}) {
        Params P = Params::critical(n, g);
        for(double r : {0.5, 0.9})
            for(int l = 1; l <= 4; l++)
                CHECK(wave_integral(l, r, P) > 0);
    }
    CHECK(wave_integral(0, 0.5, Params::critical(2, 0.25)) == 0);
}

TEST_CASE("partial waves")
{
    PartialWaves p3 = partial_wave_decompose(SphereSamples::from_legendre(2, {0, 0, 0, 1}), 6, 2);
    for(int l = 0; l <= 6; l++)
        CHECK(p3.coeffs[l] == doctest::Approx(l == 3 ? 1 : 0).epsilon(1e-12));
    PartialWaves one = partial_wave_decompose(SphereSamples::constant(3, 1), 4, 3);
    CHECK(one.coeffs[0] == doctest::Approx(1).epsilon(1e-13));
    for(int l = 1; l <= 4; l++)
        CHECK(std::fabs(one.coeffs[l]) < 1e-13);
    // (2l+1) sqrt(pi/2) I_{l+1/2}(1)
    const double oracle[] = {1.1752011936438015, 1.1036383235143270, 0.35781435064737246,
                             0.070455633668489028, 0.0099651281488691785, 0.0010995861272075085};
    SphereSamples e = SphereSamples::sample(2, [](double phi) { return std::exp(std::cos(phi)); });
    PartialWaves pe = partial_wave_decompose(e, 16, 2);
    for(int l = 0; l < 6; l++)
        CHECK(pe.coeffs[l] == doctest::Approx(oracle[l]).epsilon(1e-12));
    CHECK(pe.resynthesis_error < 1e-12);
    CHECK_THROWS_WITH(partial_wave_decompose(e, 4, 2), "L too small");
    // orthogonality of distinct zonal harmonics on S^3
    double ip = funk_hecke_apply([](double s) { return legendre_nd(2, 3, s); }, 4, 3);
    CHECK(std::fabs(ip) < 1e-12);
}

TEST_CASE("non-resonance of the weighted spectrum")
{
    for(int n : {1, 2, 3, 4})
        for(double g : {0.1, 0.25, 0.75, 0.9})
            CHECK(spectrum_resonances(n, g).empty());
    auto hits = spectrum_resonances(2, 0.5);
    CHECK(!hits.empty());
    for(auto [j, l] : hits)
        CHECK(-(2. - j) * (j - 1.) == doctest::Approx((l + 1.) * (l + 2.)));
}
