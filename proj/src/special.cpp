#include "fracext/special.hpp"
#include <cmath>

namespace fracext {

namespace {
const double LANCZOS_G = 7;
const double LANCZOS_COEF[9] = {
    0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
}

double gamma_fn(double x)
{
    if(x < 0.5)
        return M_PI / (std::sin(M_PI * x) * gamma_fn(1 - x));
    x -= 1;
    double a = LANCZOS_COEF[0];
    for(int i = 1; i < 9; i++)
        a += LANCZOS_COEF[i] / (x + i);
    double t = x + LANCZOS_G + 0.5;
    return std::sqrt(2 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double sphere_area(int k)
{
    return 2 * std::pow(M_PI, 0.5 * (k + 1)) / gamma_fn(0.5 * (k + 1));
}

double ball_volume(int k)
{
    return std::pow(M_PI, 0.5 * k) / gamma_fn(0.5 * k + 1);
}

double legendre(int l, double x) { return legendre_nd(l, 2, x); }

double legendre_nd(int l, int n, double x)
{
    if(l <= 0)
        return 1;
    // (l+n-1) P_{l+1} = (2l+n-1) x P_l - l P_{l-1}
    double prev = 1, cur = x;
    for(int k = 1; k < l; k++) {
        double next = ((2 * k + n - 1) * x * cur - k * prev) / (k + n - 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace fracext
