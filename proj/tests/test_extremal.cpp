#include "fracext/error.hpp"
#include "fracext/extremal.hpp"
#include "fracext/halfspace.hpp"
#include <doctest.h>
#include <cmath>

using namespace fracext;

namespace {

RadialProfile smooth_bump()
{
    return RadialProfile::analytic([](double r) { return std::exp(-(r - 0.8) * (r - 0.8)) + 0.3 * std::exp(-r * r); },
                                   RadialProfile::default_grid(), 1e3);
}

}  // namespace

TEST_CASE("ratio functional")
{
    Params P = Params::critical(2, 0.5);
    double closed = std::pow(3., -0.25) * std::pow(4 * M_PI / 3, -1. / 12);
    CHECK(ratio_functional(bubble(1, P), P) == doctest::Approx(closed).epsilon(1e-4));
    CHECK(best_constant(P) == doctest::Approx(closed).epsilon(1e-8));
    RadialProfile f = smooth_bump();
    double R = ratio_functional(f, P);
    CHECK(ratio_functional(f.multiplied(3.7), P) == doctest::Approx(R).epsilon(1e-10));
    CHECK(ratio_functional(f.scaled(2.5, P.p, P.n), P) == doctest::Approx(R).epsilon(1e-6));
    CHECK(ratio_functional(kelvin(f, P), P) == doctest::Approx(R).epsilon(1e-6));
    CHECK(ratio_functional(rearrange(f, P.n), P) >= R - 1e-8);
    CHECK(best_constant(P) >= R);
    CHECK_THROWS_WITH(ratio_functional(RadialProfile::constant(0), P), "ratio undefined at 0");
}

TEST_CASE("sharp constants")
{
    CHECK(best_constant(Params::critical(1, 0.25)) == doctest::Approx(0.5787380322).epsilon(1e-8));
    Params Q = Params::critical(3, 0.25);
    double C = best_constant(Q);
    CHECK(C == doctest::Approx(0.2530170676).epsilon(1e-8));
    double e = 2 * (Q.n - 2 * Q.gamma + 2) / (Q.n - 2 * Q.gamma);
    CHECK(best_constant_theta(Q) == doctest::Approx(std::pow(C, e)).epsilon(1e-12));
    CHECK(theta_from_constant(C, Q) == doctest::Approx(std::pow(C, e)).epsilon(1e-12));
}

TEST_CASE("Euler-Lagrange map")
{
    Params P = Params::critical(3, 0.25);
    RadialProfile w = bubble(1, P);
    RadialProfile g = euler_lagrange_step(w, P);
    BubbleFit fit = bubble_fit(g, P);
    CHECK(fit.residual < 1e-3);
    CHECK(g.is_nonincreasing());
    RadialProfile pert = RadialProfile::analytic(
        [&](double r) { return w(r) * (1 + 0.02 * std::exp(-r * r)); }, RadialProfile::default_grid(), P.n - 2 * P.gamma);
    CHECK(ratio_functional(euler_lagrange_step(pert, P), P) >= ratio_functional(pert, P) - 1e-8);
}

TEST_CASE("bubble fit")
{
    Params P = Params::critical(2, 0.25);
    BubbleFit fit = bubble_fit(bubble(2, P).multiplied(3), P);
    CHECK(fit.lambda == doctest::Approx(2).epsilon(1e-8));
    CHECK(fit.residual < 1e-10);
    RadialProfile w = bubble(1, P);
    RadialProfile pert = RadialProfile::analytic([&](double r) { return w(r) * (1 + 0.01 * std::sin(r)); },
                                                 RadialProfile::default_grid(), P.n - 2 * P.gamma);
    double res = bubble_fit(pert, P).residual;
    CHECK(res > 1e-4);
    CHECK(res < 2e-2);
    CHECK(bubble_fit(gaussian_profile(), P).residual > 0.05);
}

TEST_CASE("solver started at the bubble")
{
    Params P = Params::critical(2, 0.5);
    SolverReport rep = solve_maximizer(P, bubble(1, P), 1e-6, 50);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 2);
    CHECK(rep.best_constant == doctest::Approx(best_constant(P)).epsilon(1e-4));
    for(std::size_t k = 1; k < rep.ratio_history.size(); k++)
        CHECK(rep.ratio_history[k] >= rep.ratio_history[k - 1] - 1e-9);
    CHECK_THROWS_AS(solve_maximizer(P, RadialProfile::constant(0), 1e-6, 10), Error);
}

TEST_CASE("Sobolev counterexample")
{
    Params P = Params::make(2, 0.75, 2);
    double s = std::log2(sobolev_counterexample_ratio(64, P) / sobolev_counterexample_ratio(32, P));
    CHECK(s == doctest::Approx(0.2).epsilon(0.05));
    // each norm grows like R^{m/exponent}: compare the local slopes with the exponents
    double q = 2. * (P.n - 2 * P.gamma + 2) / (P.n - 2 * P.gamma);
    BumpNorms a = sobolev_counterexample_norms(32, P), b = sobolev_counterexample_norms(64, P);
    CHECK(std::log2(b.lq / a.lq) == doctest::Approx(P.m / q).epsilon(0.1));
    CHECK(std::log2(b.gradient / a.gradient) == doctest::Approx(P.m / 2).epsilon(0.1));
    CHECK_THROWS_WITH(sobolev_counterexample_ratio(10, Params::make(2, 0.5, 2)), "counterexample requires gamma > 1/2");
    CHECK_THROWS_WITH(sobolev_counterexample_ratio(1.5, P), "shift R must exceed 2");
}
