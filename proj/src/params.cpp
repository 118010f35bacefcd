#include "fracext/params.hpp"
#include "fracext/error.hpp"
#include "fracext/special.hpp"
#include <cmath>

namespace fracext {

Params Params::make(int n, double gamma, double p)
{
    if(n < 1)
        fail_validation("n must be a positive integer");
    if(!(gamma > 0 && gamma < 1))
        fail_validation("gamma must lie in (0,1)");
    if(!(p > 1) || !std::isfinite(p))
        fail_validation("p must lie in (1,inf)");
    Params P;
    P.n = n;
    P.gamma = gamma;
    P.p = p;
    P.m = 1 - 2 * gamma;
    P.q_star = (n - 2 * gamma + 2) * p / n;
    P.kappa = std::pow(M_PI, -0.5 * n) * gamma_fn(0.5 * (n + 2 * gamma)) / gamma_fn(gamma);
    P.d_gamma = std::pow(2., 2 * gamma) * gamma_fn(gamma) / gamma_fn(-gamma);
    return P;
}

Params Params::critical(int n, double gamma)
{
    if(!(n > 2 * gamma))
        fail_validation("subcritical dimension");
    return make(n, gamma, 2. * n / (n - 2 * gamma));
}

double Params::critical_p() const
{
    require_supercritical();
    return 2. * n / (n - 2 * gamma);
}

bool Params::is_critical(double tol) const
{
    return n > 2 * gamma && std::fabs(p - critical_p()) <= tol * p;
}

void Params::require_supercritical() const
{
    if(!(n > 2 * gamma))
        fail_validation("subcritical dimension");
}

}  // namespace fracext
