#include "fracext/error.hpp"
#include "fracext/halfspace.hpp"
#include "fracext/special.hpp"
#include <doctest.h>
#include <cmath>
#include <sstream>

using namespace fracext;

TEST_CASE("Poisson kernel")
{
    Params P = Params::make(1, 0.5, 2);
    CHECK(poisson_kernel({0, 1}, {0}, P) == doctest::Approx(0.3183098861837907).epsilon(1e-14));
    Params Q = Params::critical(3, 0.25);
    CHECK(poisson_kernel({0.3, -1, 2, 0.4}, {1, 0, 0.5}, Q) > 0);
    CHECK_THROWS_WITH(poisson_kernel({0, 0}, {0}, P), "kernel evaluated on boundary");
    CHECK_THROWS_WITH(poisson_kernel({0, -1}, {0}, P), "kernel evaluated on boundary");
}

TEST_CASE("kernel has unit mass")
{
    for(int n : {1, 2, 3})
        for(double g : {0.25, 0.5, 0.75})
            for(double x : {0.1, 1., 10.})
                CHECK(kernel_mass(Params::make(n, g, 2), 0.7, x) == doctest::Approx(1).epsilon(1e-8));
    CHECK(kernel_mass(Params::critical(2, 0.25), 0, 2) == doctest::Approx(1).epsilon(1e-8));
}

TEST_CASE("tabulated angular integral agrees with direct quadrature")
{
    RadialKernel K(3, 0.25);
    double s = 0.8, rho = 1.1, nu = 1.75;
    for(double x : {1e-3, 0.05, 0.4, 3.}) {
        // A = |S^{n-2}| int_0^pi (s^2 + rho^2 + x^2 - 2 s rho cos t)^{-nu} sin^{n-2} t dt by composite Simpson
        const int m = 20000;
        double sum = 0;
        for(int i = 0; i <= m; i++) {
            double t = M_PI * i / m, w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
            sum += w * std::pow(s * s + rho * rho + x * x - 2 * s * rho * std::cos(t), -nu) * std::sin(t);
        }
        double direct = sphere_area(1) * sum * M_PI / (3 * m);
        CHECK(K.angular(s, rho, x) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("extension of constants, bubbles and a Gaussian")
{
    Params P = Params::critical(2, 0.5);
    RadialProfile one = RadialProfile::constant(1);
    CHECK(extend(one, P, 0.3, 0.7) == doctest::Approx(1).epsilon(1e-14));
    RadialProfile w = bubble(1, P);
    for(double s : {0., 0.5, 3.})
        for(double x : {0.01, 1., 20.})
            CHECK(extend(w, P, s, x) == doctest::Approx(1 / std::sqrt(s * s + (x + 1) * (x + 1))).epsilon(1e-6));
    Params Q = Params::critical(2, 0.25);
    double g = extend(RadialProfile::analytic([](double r) { return std::exp(-r * r); },
                                              RadialProfile::default_grid(), 1e3),
                      Q, 1, 0.5);
    CHECK(g == doctest::Approx(0.15670307853854253).epsilon(1e-8));
    CHECK_THROWS_WITH(extend(w, P, 1, 0), "kernel evaluated on boundary");
    RadialProfile heavy(RadialProfile::log_grid(0.1, 10, 20), std::vector<double>(20, 1.), -1);
    CHECK_THROWS_WITH(extend(heavy, Q, 1, 1), "profile tail too heavy");
}

TEST_CASE("maximum principle and scaling covariance")
{
    Params P = Params::critical(3, 0.25);
    RadialProfile f = RadialProfile::analytic([](double r) { return 1 / (1 + r * r * r * r); },
                                              RadialProfile::default_grid(), 4);
    for(double s : {0., 1., 4.})
        for(double x : {0.05, 1., 8.}) {
            double u = extend(f, P, s, x);
            CHECK(u > 0);
            CHECK(u <= 1);
        }
    // g = r^{n/p} f(r .) extends to r^{n/p} (K f)(r x)
    double r = 2.5, c = std::pow(r, P.n / P.p);
    RadialProfile g = RadialProfile::analytic([&](double t) { return c / (1 + std::pow(r * t, 4)); },
                                              RadialProfile::default_grid(), 4);
    CHECK(extend(g, P, 0.4, 0.3) == doctest::Approx(c * extend(f, P, r * 0.4, r * 0.3)).epsilon(1e-7));
}

TEST_CASE("field on a product grid")
{
    Params P = Params::critical(2, 0.5);
    HalfSpaceField F = extend_field(bubble(1, P), P, {0, 1, 2}, {0.5, 1});
    CHECK(F.values.size() == 6);
    CHECK(F.at(2, 1) == doctest::Approx(1 / std::sqrt(8.)).epsilon(1e-6));
}

TEST_CASE("bubble, Kelvin transform and rearrangement")
{
    Params P = Params::critical(3, 0.5);
    CHECK(bubble(1, P)(0) == doctest::Approx(1).epsilon(1e-14));
    CHECK(bubble(2, P)(2) == doctest::Approx(0.25).epsilon(1e-14));
    // bubble(lambda) = lambda^{-n/p} bubble(1)(r/lambda)
    RadialProfile b1 = bubble(1, P), b3 = bubble(3, P);
    for(double r : {0.1, 1., 7.})
        CHECK(b3(r) == doctest::Approx(std::pow(3., -P.n / P.p) * b1(r / 3)).epsilon(1e-13));
    CHECK_THROWS_WITH(bubble(1, Params::make(1, 0.75, 2)), "subcritical dimension");

    Params Q = Params::critical(3, 0.25);
    RadialProfile w = bubble(1, Q), kw = kelvin(w, Q);
    for(double r : {0.01, 0.5, 2., 50.})
        CHECK(kw(r) == doctest::Approx(w(r)).epsilon(1e-8));
    RadialProfile bump = RadialProfile::analytic([](double r) { return std::exp(-(r - 1) * (r - 1) * 4); },
                                                 RadialProfile::default_grid(), 1e3);
    RadialProfile kb = kelvin(bump, Q), kkb = kelvin(kb, Q);
    for(double r : {0.3, 1., 1.7})
        CHECK(kkb(r) == doctest::Approx(bump(r)).epsilon(1e-6));
    CHECK(kb.lp_norm(Q.p, Q.n) == doctest::Approx(bump.lp_norm(Q.p, Q.n)).epsilon(1e-6));
    RadialProfile narrow(RadialProfile::log_grid(1, 100, 40), std::vector<double>(40, 1.), 3);
    CHECK_THROWS_WITH(kelvin(narrow, Q), "grid range insufficient");

    RadialProfile rb = rearrange(bump, 3);
    CHECK(rb.is_nonincreasing());
    CHECK(rb.lp_norm(2.4, 3) == doctest::Approx(bump.lp_norm(2.4, 3)).epsilon(1e-8));
    RadialProfile rrb = rearrange(rb, 3);
    for(double r : {0.1, 1., 2.})
        CHECK(rrb(r) == doctest::Approx(rb(r)).epsilon(1e-8));
    CHECK(rearrange(w, 3)(1.3) == doctest::Approx(w(1.3)).epsilon(1e-8));
    RadialProfile neg({0, 1, 2}, {1, -1, 0.5}, 3);
    CHECK_THROWS_WITH(rearrange(neg, 3), "rearrange requires nonnegative input");
}

TEST_CASE("annular bump in one dimension rearranges to the sorted pile")
{
    // Gaussian shell centred at r = 1.5; f and f* must share the distribution function
    std::vector<double> nodes, vals;
    for(int i = 0; i <= 400; i++) {
        double r = 0.01 * i;
        nodes.push_back(r);
        vals.push_back(std::exp(-20 * (r - 1.5) * (r - 1.5)));
    }
    RadialProfile f(nodes, vals, 1e3);
    RadialProfile g = rearrange(f, 1);
    // |{x in R : f(|x|) > t}| = 2 |{r > 0 : f(r) > t}|, counted on a fine lattice
    for(double t : {0.2, 0.5, 0.9}) {
        double m = 0;
        for(double r = 0; r < 4; r += 1e-4)
            m += f(r) > t ? 2e-4 : 0;
        double mg = 0;
        for(double r = 0; r < 4; r += 1e-4)
            mg += g(r) > t ? 2e-4 : 0;
        CHECK(mg == doctest::Approx(m).epsilon(2e-3));
    }
}

TEST_CASE("weighted normal derivative")
{
    Params P = Params::critical(2, 0.5);
    CHECK(std::fabs(weighted_normal_derivative(RadialProfile::constant(1), P, 1, default_heights())) < 1e-12);
    RadialProfile w = bubble(1, P);
    for(double s : {0., 1.})
        CHECK(weighted_normal_derivative(w, P, s, default_heights()) ==
              doctest::Approx(-std::pow(s * s + 1, -1.5)).epsilon(1e-5));
    // n = 3, gamma = 1/4: the limit is proportional to w^{(n+2gamma)/(n-2gamma)}
    Params Q = Params::critical(3, 0.25);
    RadialProfile v = bubble(1, Q);
    double expo = (Q.n + 2 * Q.gamma) / (Q.n - 2 * Q.gamma);
    for(double s : {0., 0.5, 1., 2.})
        CHECK(weighted_normal_derivative(v, Q, s, default_heights()) / std::pow(v(s), expo) ==
              doctest::Approx(-0.68541987156669544).epsilon(1e-6));
    CHECK_THROWS_WITH(weighted_normal_derivative(w, P, 1, {0.1}), "need at least two heights");
}

TEST_CASE("extrapolation to zero")
{
    std::vector<double> x = {0.4, 0.2, 0.1, 0.05}, v;
    for(double t : x)
        v.push_back(3 + 2 * t + 0.5 * t * t);
    CHECK(extrapolate_to_zero(x, v, {1, 2, 3}) == doctest::Approx(3).epsilon(1e-12));
}

TEST_CASE("profile CSV round trip and errors")
{
    Params P = Params::critical(2, 0.25);
    RadialProfile w = bubble(1.5, P).grid_only();
    std::stringstream ss;
    w.write_csv(ss);
    RadialProfile back = RadialProfile::read_csv(ss);
    CHECK(back.tail_exponent() == doctest::Approx(w.tail_exponent()));
    for(double r : {0.01, 0.77, 30.})
        CHECK(back(r) == doctest::Approx(w(r)).epsilon(1e-14));
    std::stringstream bad("1,2\n");
    CHECK_THROWS_AS(RadialProfile::read_csv(bad), Error);
    CHECK_THROWS_WITH(RadialProfile({0, 1}, {1, NAN}, 2), "profile values must be finite");
}
