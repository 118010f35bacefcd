#include "fracext/halfspace.hpp"
#include "fracext/error.hpp"
#include "fracext/parallel.hpp"
#include "fracext/quad.hpp"
#include "fracext/special.hpp"
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace fracext {

namespace {
const double TABLE_LMIN = -60, TABLE_LMAX = 45, TABLE_STEP = 0.025;
const double LOG_PANEL = 0.5;
const int EXTEND_ORDER = 10;
}

double poisson_kernel(const std::vector<double>& x, const std::vector<double>& w, const Params& P)
{
    if((int)x.size() != P.n + 1 || (int)w.size() != P.n)
        fail_validation("point dimensions do not match n");
    double xN = x[P.n];
    if(!(xN > 0))
        fail_validation("kernel evaluated on boundary");
    double d2 = xN * xN;
    for(int i = 0; i < P.n; i++)
        d2 += (x[i] - w[i]) * (x[i] - w[i]);
    return P.kappa * std::pow(xN, 2 * P.gamma) * std::pow(d2, -P.nu());
}

// ---------------------------------------------------------------- angular kernel

RadialKernel::RadialKernel(int n, double gamma) : n_(n), gamma_(gamma)
{
    nu_ = 0.5 * (n + 2 * gamma);
    alpha_ = 0.5 * (n - 3);
    prefactor_ = n >= 2 ? sphere_area(n - 2) * std::pow(2., n - 2) : 0;
    lmin_ = TABLE_LMIN;
    lstep_ = TABLE_STEP;
    if(n < 2)
        return;
    int count = (int)std::lround((TABLE_LMAX - TABLE_LMIN) / TABLE_STEP) + 1;
    table_.resize(count);
    parallel_for(count, [&](std::size_t i) {
        double l = lmin_ + lstep_ * i, eps = std::exp(l);
        table_[i] = reference_integral(eps) * std::exp((0.5 + gamma_) * l) *
                    std::exp(0.5 * (n_ - 1) * std::log1p(eps));
    });
    // natural cubic spline on the uniform grid
    second_.assign(count, 0);
    std::vector<double> c(count, 0), d(count, 0);
    for(int i = 1; i + 1 < count; i++) {
        double rhs = 6 * (table_[i + 1] - 2 * table_[i] + table_[i - 1]) / (lstep_ * lstep_);
        double denom = 4 - (i > 1 ? c[i - 1] : 0);
        c[i] = 1 / denom;
        d[i] = (rhs - (i > 1 ? d[i - 1] : 0)) / denom;
    }
    for(int i = count - 2; i >= 1; i--)
        second_[i] = d[i] - c[i] * second_[i + 1];
}

std::shared_ptr<const RadialKernel> RadialKernel::get(int n, double gamma)
{
    static std::mutex lock;
    static std::map<std::pair<int, double>, std::shared_ptr<const RadialKernel>> cache;
    std::lock_guard<std::mutex> g(lock);
    auto& slot = cache[{n, gamma}];
    if(!slot)
        slot = std::make_shared<RadialKernel>(n, gamma);
    return slot;
}

double RadialKernel::reference_integral(double eps) const
{
    const int order = 16;
    const Rule& gl = gauss_legendre(order);
    Rule head = jacobi_unit(order, alpha_, 0);  // weight u^alpha near 0
    double sum = 0;
    auto integrand = [&](double u) {
        return std::pow(u * (1 - u), alpha_) * std::pow(eps + u, -nu_);
    };
    double first = std::min(eps, 0.5);
    // [0, first] with the u^alpha weight
    for(int k = 0; k < order; k++) {
        double u = first * head.x[k];
        sum += head.w[k] * std::pow(1 - u, alpha_) * std::pow(eps + u, -nu_);
    }
    sum *= std::pow(first, alpha_ + 1);
    // geometric panels up to 1/2
    double a = first;
    while(a < 0.5) {
        double b = std::min(2 * a, 0.5);
        if(b > 0.5 * (1 - 1e-12))
            b = 0.5;
        double c = 0.5 * (a + b), hw = 0.5 * (b - a), part = 0;
        for(int k = 0; k < order; k++)
            part += gl.w[k] * integrand(c + hw * gl.x[k]);
        sum += part * hw;
        a = b;
    }
    // [1/2, 1] with the (1-u)^alpha weight, v = 2(1-u)
    Rule tail = jacobi_unit(order, alpha_, 0);
    double part = 0;
    for(int k = 0; k < order; k++) {
        double u = 1 - 0.5 * tail.x[k];
        part += tail.w[k] * std::pow(u, alpha_) * std::pow(eps + u, -nu_);
    }
    sum += part * std::pow(0.5, alpha_ + 1);
    return sum;
}

double RadialKernel::scaled(double l) const
{
    if(l <= lmin_)
        return table_.front();
    double pos = (l - lmin_) / lstep_;
    std::size_t i = (std::size_t)pos;
    if(i + 1 >= table_.size())
        return table_.back();
    double t = pos - i, s = 1 - t, h2 = lstep_ * lstep_ / 6;
    return s * table_[i] + t * table_[i + 1] +
           ((s * s * s - s) * second_[i] + (t * t * t - t) * second_[i + 1]) * h2;
}

double RadialKernel::angular(double s, double rho, double xN) const
{
    double d2 = (s - rho) * (s - rho) + xN * xN;
    double e2 = (s + rho) * (s + rho) + xN * xN;
    if(n_ == 1)
        return std::pow(d2, -nu_) + std::pow(e2, -nu_);
    double b4 = 4 * s * rho;
    if(b4 == 0)
        return sphere_area(n_ - 1) * std::pow(d2, -nu_);
    return prefactor_ * std::pow(d2, -0.5 - gamma_) * std::pow(e2, 0.5 * (1 - n_)) *
           scaled(std::log(d2 / b4));
}

// ---------------------------------------------------------------- radial quadrature

void radial_nodes(const RadialKernel& K, const Params& P, double s, double xN, double a, double b,
                  const std::vector<double>& extra, int order, std::vector<RadialNode>& out)
{
    if(!(b > a))
        return;
    const Rule& gl = gauss_legendre(order);
    double pref = P.kappa * std::pow(xN, 2 * P.gamma);
    std::vector<double> pts;
    double lo = a;
    if(a == 0) {
        double scale = xN;
        if(s > 0)
            scale = std::min(scale, s);
        for(double e : extra)
            if(e > 0)
                scale = std::min(scale, e);
        lo = std::min(b, 1e-6 * scale);
        // linear panel on [0, lo]
        for(int k = 0; k < order; k++) {
            double rho = 0.5 * lo * (1 + gl.x[k]);
            out.push_back({rho, pref * 0.5 * lo * gl.w[k] * std::pow(rho, P.n - 1) * K.angular(s, rho, xN)});
        }
    }
    pts.push_back(lo);
    pts.push_back(b);
    for(double k = std::ceil(std::log(lo) / LOG_PANEL); k * LOG_PANEL < std::log(b); k++)
        pts.push_back(std::exp(k * LOG_PANEL));
    if(xN < 0.5 * s) {
        pts.push_back(s);
        for(double d = xN; d <= 0.5 * s; d *= 2) {
            pts.push_back(s - d);
            pts.push_back(s + d);
        }
        pts.push_back(0.5 * s);
        pts.push_back(1.5 * s);
    }
    for(double e : extra)
        pts.push_back(e);
    std::vector<double> br;
    for(double p : pts)
        if(p >= lo && p <= b)
            br.push_back(p);
    std::sort(br.begin(), br.end());
    std::vector<double> uniq;
    for(double p : br)
        if(uniq.empty() || p > uniq.back() * (1 + 1e-13))
            uniq.push_back(p);
    for(std::size_t i = 0; i + 1 < uniq.size(); i++) {
        double u0 = std::log(uniq[i]), u1 = std::log(uniq[i + 1]);
        double c = 0.5 * (u0 + u1), hw = 0.5 * (u1 - u0);
        for(int k = 0; k < order; k++) {
            double rho = std::exp(c + hw * gl.x[k]);
            out.push_back({rho, pref * hw * gl.w[k] * std::pow(rho, P.n) * K.angular(s, rho, xN)});
        }
    }
}

double radial_tail_weight(const Params& P, double s, double xN, double b, double tau)
{
    double g2 = 2 * P.gamma, nu = P.nu();
    if(!(tau + g2 > 0))
        fail_validation("profile tail too heavy");
    double c2 = -nu * (s * s + xN * xN) + 2 * nu * (nu + 1) * s * s / P.n;
    return P.kappa * std::pow(xN, g2) * sphere_area(P.n - 1) * std::pow(b, -g2) *
           (1 / (tau + g2) + c2 / (b * b * (tau + g2 + 2)));
}

double extend(const RadialProfile& f, const Params& P, double s, double xN)
{
    if(!(xN > 0))
        fail_validation("kernel evaluated on boundary");
    if(s < 0)
        fail_validation("radius must be nonnegative");
    if(f.is_constant())
        return f.values()[0];
    double tau = f.tail_exponent();
    bool has_tail = f.values().back() != 0 || f.has_exact();
    if(has_tail && !(tau + 2 * P.gamma > 0))
        fail_validation("profile tail too heavy");
    const auto& nd = f.nodes();
    double b = std::max(nd.back(), 1e3 * std::max(s, xN));
    std::vector<double> extra;
    for(double r : nd)
        if(r > 0) {
            extra.push_back(r);
            break;
        }
    extra.push_back(nd.back());
    auto K = RadialKernel::get(P.n, P.gamma);
    std::vector<RadialNode> rule;
    rule.reserve(1024);
    radial_nodes(*K, P, s, xN, 0, b, extra, EXTEND_ORDER, rule);
    double sum = 0;
    for(const auto& q : rule)
        sum += q.weight * f(q.rho);
    double fb = f(b);
    if(fb != 0)
        sum += radial_tail_weight(P, s, xN, b, tau) * fb;
    if(!std::isfinite(sum))
        fail_numerical("integrand not finite");
    return sum;
}

double kernel_mass(const Params& P, double s, double xN)
{
    if(!(xN > 0))
        fail_validation("kernel evaluated on boundary");
    auto K = RadialKernel::get(P.n, P.gamma);
    std::vector<RadialNode> rule;
    double b = 1e3 * std::max(s, xN);
    radial_nodes(*K, P, s, xN, 0, b, {}, EXTEND_ORDER, rule);
    double sum = 0;
    for(const auto& q : rule)
        sum += q.weight;
    return sum + radial_tail_weight(P, s, xN, b, 0);
}

HalfSpaceField extend_field(const RadialProfile& f, const Params& P, const std::vector<double>& s_nodes,
                            const std::vector<double>& xN_nodes)
{
    HalfSpaceField F;
    F.s_nodes = s_nodes;
    F.xN_nodes = xN_nodes;
    F.params = P;
    F.values.resize(s_nodes.size() * xN_nodes.size());
    parallel_for(F.values.size(), [&](std::size_t k) {
        std::size_t i = k / xN_nodes.size(), j = k % xN_nodes.size();
        F.values[k] = extend(f, P, s_nodes[i], xN_nodes[j]);
    });
    return F;
}

RadialProfile bubble(double lambda, const Params& P, std::vector<double> nodes)
{
    P.require_supercritical();
    if(!(lambda > 0))
        fail_validation("bubble scale must be positive");
    double k = 0.5 * (P.n - 2 * P.gamma);
    auto fn = [lambda, k](double r) { return std::pow(lambda / (lambda * lambda + r * r), k); };
    return RadialProfile::analytic(fn, std::move(nodes), 2 * k);
}

RadialProfile kelvin(const RadialProfile& f, const Params& P)
{
    P.require_supercritical();
    double k = P.n - 2 * P.gamma;
    if(f.is_constant()) {
        double c = f.values()[0];
        std::vector<double> nd = RadialProfile::default_grid();
        return RadialProfile::analytic([c, k](double r) { return c * std::pow(r, -k); }, nd, k);
    }
    const auto& nd = f.nodes();
    double r0 = nd.front(), rJ = nd.back();
    if(!(r0 > 0) || r0 * rJ < 0.1 || r0 * rJ > 10)
        fail_validation("grid range insufficient");
    if(f.has_exact()) {
        RadialProfile src = f;
        return RadialProfile::analytic([src, k](double r) { return std::pow(r, -k) * src(1 / r); }, nd, k);
    }
    std::vector<double> vals(nd.size());
    for(std::size_t i = 0; i < nd.size(); i++)
        vals[i] = std::pow(nd[i], -k) * f(1 / nd[i]);
    return RadialProfile(nd, std::move(vals), k);
}

RadialProfile rearrange(const RadialProfile& f, int n)
{
    if(n < 1)
        fail_validation("n must be a positive integer");
    if(f.min_value() < 0)
        fail_validation("rearrange requires nonnegative input");
    if(f.is_constant() || f.is_nonincreasing())
        return f;
    const auto& nd = f.nodes();
    std::size_t first = nd[0] > 0 ? 0 : 1;
    double rlo = nd[first], rhi = nd.back();
    double omega = ball_volume(n);
    const double du = 1e-4;
    // each cell spreads its volume uniformly over the range of values it takes, so the
    // distribution function is piecewise linear in the level
    struct Piece {
        double lo, hi, volume;
    };
    std::vector<Piece> pieces;
    auto add = [&](double va, double vb, double volume) {
        if(va < 0 || vb < 0)
            fail_validation("rearrange requires nonnegative input");
        pieces.push_back({std::min(va, vb), std::max(va, vb), volume});
    };
    // head
    if(first == 0) {
        double v = f(0.5 * rlo);
        add(v, v, omega * std::pow(rlo, n));
    } else {
        const int sub = 256;
        double prev = f(0);
        for(int k = 0; k < sub; k++) {
            double a = rlo * k / sub, b = rlo * (k + 1) / sub, next = f(b);
            add(prev, next, omega * (std::pow(b, n) - std::pow(a, n)));
            prev = next;
        }
    }
    double ulo = std::log(rlo), uhi = std::log(rhi);
    std::size_t cells = (std::size_t)std::ceil((uhi - ulo) / du);
    double h = (uhi - ulo) / cells, prev = f(rlo);
    for(std::size_t k = 0; k < cells; k++) {
        double a = ulo + h * k, b = a + h, next = f(std::exp(b));
        add(prev, next, omega * (std::exp(n * b) - std::exp(n * a)));
        prev = next;
    }
    // the power-law tail, sampled far enough that its remaining values are negligible
    double vJ = f(rhi), tau = f.tail_exponent();
    if(vJ > 0) {
        if(!(tau > 0))
            fail_validation("profile tail too heavy");
        double span = std::min(12.0, 40.0 / tau);
        std::size_t tc = (std::size_t)std::ceil(span / du);
        for(std::size_t k = 0; k < tc; k++) {
            double a = uhi + du * k, b = a + du;
            add(vJ * std::exp(-tau * (a - uhi)), vJ * std::exp(-tau * (b - uhi)),
                omega * (std::exp(n * b) - std::exp(n * a)));
        }
    }
    // sweep the levels downward: mu(t) = |{f > t}| grows at the summed density of the open pieces
    struct Event {
        double t;
        long double rate;  // change of d mu / d(-t) below t
        double jump;       // volume of nearly constant pieces at level t
    };
    std::vector<Event> events;
    events.reserve(2 * pieces.size());
    for(const auto& pc : pieces) {
        if(pc.hi - pc.lo > 1e-9 * pc.hi) {
            long double d = pc.volume / ((long double)pc.hi - pc.lo);
            events.push_back({pc.hi, d, 0});
            events.push_back({pc.lo, -d, 0});
        } else
            events.push_back({0.5 * (pc.lo + pc.hi), 0, pc.volume});
    }
    std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) { return x.t > y.t; });
    // (cumulative volume, level) with volume nondecreasing and level nonincreasing
    std::vector<double> mid, val;
    long double mu = 0, rate = 0;
    for(std::size_t k = 0; k < events.size();) {
        double t = events[k].t;
        if(!mid.empty())
            mu += rate * ((long double)val.back() - t);
        mid.push_back(mu);
        val.push_back(t);
        for(; k < events.size() && events[k].t == t; k++) {
            rate += events[k].rate;
            mu += events[k].jump;
        }
        if(mu > mid.back()) {
            mid.push_back(mu);
            val.push_back(t);
        }
    }
    auto at_volume = [&](double V) {
        if(V <= mid.front())
            return val.front();
        if(V >= mid.back())
            return val.back();
        std::size_t i = std::upper_bound(mid.begin(), mid.end(), V) - mid.begin();
        if(mid[i] == mid[i - 1])
            return val[i];
        double t = (V - mid[i - 1]) / (mid[i] - mid[i - 1]);
        return val[i - 1] + t * (val[i] - val[i - 1]);
    };
    double rout = vJ > 0 ? rhi * std::exp(std::min(2.0, 0.5 * std::min(12.0, 40.0 / tau))) : rhi;
    int count = (int)std::ceil(std::log(rout / rlo) / 0.01) + 1;
    std::vector<double> grid = RadialProfile::log_grid(rlo, rout, std::max(count, 2));
    std::vector<double> vals(grid.size());
    for(std::size_t i = 0; i < grid.size(); i++)
        vals[i] = at_volume(omega * std::pow(grid[i], n));
    for(std::size_t i = 1; i < vals.size(); i++)
        vals[i] = std::min(vals[i], vals[i - 1]);
    return RadialProfile(std::move(grid), std::move(vals), vJ > 0 ? tau : f.tail_exponent());
}

// ---------------------------------------------------------------- boundary derivative

std::vector<double> default_heights(double h0)
{
    std::vector<double> h(6);
    for(int k = 0; k < 6; k++)
        h[k] = h0 * std::pow(2., -k);
    return h;
}

double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& values,
                           const std::vector<double>& powers, bool check)
{
    std::size_t K = x.size();
    if(K < 1 || values.size() != K || powers.size() + 1 < K)
        fail_validation("extrapolation needs matching samples and enough powers");
    std::vector<double> limits;
    for(std::size_t m = 1; m <= K; m++) {
        Eigen::MatrixXd A(m, m);
        Eigen::VectorXd b(m);
        for(std::size_t i = 0; i < m; i++) {
            A(i, 0) = 1;
            for(std::size_t j = 1; j < m; j++)
                A(i, j) = std::pow(x[i], powers[j - 1]);
            b[i] = values[i];
        }
        limits.push_back(A.fullPivLu().solve(b)[0]);
    }
    if(check && K >= 3) {
        double scale = 0;
        for(double v : values)
            scale = std::max(scale, std::fabs(v));
        double floor = 1e-9 * std::max(scale, 1e-300);
        for(std::size_t m = 2; m + 1 < limits.size(); m++) {
            double prev = std::fabs(limits[m] - limits[m - 1]);
            double next = std::fabs(limits[m + 1] - limits[m]);
            if(next > prev && next > floor)
                fail_numerical("limit did not stabilize", next);
        }
    }
    return limits.back();
}

double weighted_normal_derivative(const RadialProfile& f, const Params& P, double s,
                                  const std::vector<double>& heights)
{
    if(heights.size() < 2)
        fail_validation("need at least two heights");
    for(std::size_t i = 0; i < heights.size(); i++)
        if(!(heights[i] > 0) || (i > 0 && !(heights[i] < heights[i - 1])))
            fail_validation("heights must be positive and decreasing");
    if(f.is_constant())
        return 0;
    std::vector<double> d(heights.size());
    parallel_for(heights.size(), [&](std::size_t k) {
        double h = heights[k], delta = h / 8;  // keep in sync with the bias factor below
        double der = (-extend(f, P, s, h + 2 * delta) + 8 * extend(f, P, s, h + delta) -
                      8 * extend(f, P, s, h - delta) + extend(f, P, s, h - 2 * delta)) /
                     (12 * delta);
        d[k] = std::pow(h, P.m) * der;
    });
    // x^m dU/dx = 2 gamma G + c1 x^{2-2gamma} + c2 x^2 + ... from U = F + G x^{2gamma} + ...
    double g2 = 2 * P.gamma;
    std::vector<double> powers = {2 - g2, 2, 4 - g2, 4, 6 - g2, 6, 8 - g2, 8};
    std::sort(powers.begin(), powers.end());
    // the difference quotient of x^{2gamma} carries an h-independent relative bias; remove it
    auto power = [g2](double x) { return std::pow(x, g2); };
    double c = 1.0 / 8, bias = (-power(1 + 2 * c) + 8 * power(1 + c) - 8 * power(1 - c) + power(1 - 2 * c)) /
                               (12 * c * g2);
    return extrapolate_to_zero(heights, d, powers) / bias;
}

}  // namespace fracext
