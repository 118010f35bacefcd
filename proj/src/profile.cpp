#include "fracext/profile.hpp"
#include "fracext/error.hpp"
#include "fracext/quad.hpp"
#include "fracext/special.hpp"
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace fracext {

namespace {
const int CELL_ORDER = 8;

/// derivative at x[c] of the Lagrange polynomial through the points idx
double lagrange_derivative(const std::vector<double>& x, const std::vector<double>& y,
                           std::size_t lo, std::size_t hi, std::size_t c)
{
    double d = 0;
    for(std::size_t j = lo; j <= hi; j++) {
        // derivative of basis polynomial l_j at x_c
        double val = 0;
        if(j == c) {
            for(std::size_t k = lo; k <= hi; k++)
                if(k != j)
                    val += 1 / (x[j] - x[k]);
        } else {
            double num = 1, den = x[j] - x[c];
            for(std::size_t k = lo; k <= hi; k++) {
                if(k == j)
                    continue;
                if(k != c)
                    num *= (x[c] - x[k]);
                den *= (k == c) ? 1 : (x[j] - x[k]);
            }
            // l_j(x) = prod (x - x_k)/(x_j - x_k); derivative at x_c where l_j has factor (x - x_c)
            val = num / den;
        }
        d += val * y[j];
    }
    return d;
}
}  // namespace

RadialProfile::RadialProfile(std::vector<double> nodes, std::vector<double> values, double tail)
    : nodes_(std::move(nodes)), values_(std::move(values)), tail_(tail)
{
    prepare();
}

void RadialProfile::prepare()
{
    if(nodes_.empty() || nodes_.size() != values_.size())
        fail_validation("profile nodes and values must be nonempty and of equal length");
    if(!(nodes_[0] >= 0))
        fail_validation("profile nodes must be nonnegative");
    for(std::size_t i = 1; i < nodes_.size(); i++)
        if(!(nodes_[i] > nodes_[i - 1]))
            fail_validation("profile nodes must be strictly increasing");
    for(double v : values_)
        if(!std::isfinite(v))
            fail_validation("profile values must be finite");
    if(!std::isfinite(tail_))
        fail_validation("tail exponent must be finite");
    first_ = nodes_[0] > 0 ? 0 : 1;
    std::size_t J = nodes_.size();
    lognodes_.assign(J, -std::numeric_limits<double>::infinity());
    slopes_.assign(J, 0);
    for(std::size_t i = first_; i < J; i++)
        lognodes_[i] = std::log(nodes_[i]);
    std::size_t cnt = J - first_;
    if(cnt < 2)
        return;
    for(std::size_t i = first_; i < J; i++) {
        std::size_t lo = (i >= first_ + 2) ? i - 2 : first_;
        std::size_t hi = std::min(J - 1, lo + 4);
        if(hi - lo < 4 && hi == J - 1)
            lo = (hi >= first_ + 4) ? hi - 4 : first_;
        double d = lagrange_derivative(lognodes_, values_, lo, hi, i);
        // Hyman filter keeps the interpolant monotone wherever the data are
        double dl = i > first_ ? (values_[i] - values_[i - 1]) / (lognodes_[i] - lognodes_[i - 1]) : NAN;
        double dr = i + 1 < J ? (values_[i + 1] - values_[i]) / (lognodes_[i + 1] - lognodes_[i]) : NAN;
        if(std::isnan(dl))
            dl = dr;
        if(std::isnan(dr))
            dr = dl;
        if(dl * dr <= 0)
            d = 0;
        else {
            double lim = 3 * std::min(std::fabs(dl), std::fabs(dr));
            if(d * dl <= 0)
                d = 0;
            else if(std::fabs(d) > lim)
                d = std::copysign(lim, d);
        }
        slopes_[i] = d;
    }
}

RadialProfile RadialProfile::constant(double c)
{
    RadialProfile f({0.}, {c}, 0);
    f.constant_ = true;
    return f;
}

RadialProfile RadialProfile::analytic(std::function<double(double)> fn, std::vector<double> nodes,
                                      double tail)
{
    std::vector<double> vals(nodes.size());
    for(std::size_t i = 0; i < nodes.size(); i++)
        vals[i] = fn(nodes[i]);
    RadialProfile f(std::move(nodes), std::move(vals), tail);
    f.exact_ = std::move(fn);
    return f;
}

std::vector<double> RadialProfile::log_grid(double lo, double hi, int count)
{
    if(!(lo > 0 && hi > lo) || count < 2)
        fail_validation("log grid needs 0 < lo < hi and at least two nodes");
    std::vector<double> g(count);
    double a = std::log(lo), b = std::log(hi);
    for(int i = 0; i < count; i++)
        g[i] = std::exp(a + (b - a) * i / (count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> RadialProfile::default_grid() { return log_grid(1e-4, 1e4, 200); }

RadialProfile RadialProfile::grid_only() const
{
    RadialProfile f = *this;
    f.exact_ = nullptr;
    return f;
}

double RadialProfile::interpolate(double r) const
{
    std::size_t J = nodes_.size();
    if(J == 1)
        return values_[0];
    if(r <= nodes_[first_]) {
        if(first_ == 1)
            return values_[0] + (values_[1] - values_[0]) * std::max(r, 0.) / nodes_[1];
        return values_[0];
    }
    if(r >= nodes_.back()) {
        if(values_.back() == 0 || tail_ == 0)
            return values_.back();
        return values_.back() * std::pow(r / nodes_.back(), -tail_);
    }
    double u = std::log(r);
    std::size_t i = std::upper_bound(lognodes_.begin() + first_, lognodes_.end(), u) - lognodes_.begin() - 1;
    i = std::min(std::max(i, first_), J - 2);
    double h = lognodes_[i + 1] - lognodes_[i], t = (u - lognodes_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * values_[i] + (t3 - 2 * t2 + t) * h * slopes_[i] +
           (-2 * t3 + 3 * t2) * values_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
}

double RadialProfile::operator()(double r) const
{
    if(constant_)
        return values_[0];
    if(exact_)
        return exact_(r);
    return interpolate(r);
}

bool RadialProfile::is_nonincreasing() const
{
    for(std::size_t i = 1; i < values_.size(); i++)
        if(values_[i] > values_[i - 1])
            return false;
    return constant_ || tail_ >= 0 || values_.back() == 0;
}

bool RadialProfile::is_zero() const
{
    for(double v : values_)
        if(v != 0)
            return false;
    return true;
}

double RadialProfile::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double RadialProfile::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double RadialProfile::cell_integral(double u0, double u1, double q, double a) const
{
    const Rule& g = gauss_legendre(CELL_ORDER);
    double c = 0.5 * (u0 + u1), hw = 0.5 * (u1 - u0), sum = 0;
    for(int k = 0; k < CELL_ORDER; k++) {
        double u = c + hw * g.x[k];
        sum += g.w[k] * std::pow(std::fabs((*this)(std::exp(u))), q) * std::exp(a * u);
    }
    return sum * hw;
}

double RadialProfile::head_integral(double q, double a) const
{
    if(!(a > 0))
        fail_validation("moment exponent must be positive");
    if(first_ == 0)
        return std::pow(std::fabs((*this)(0.5 * nodes_[0])), q) * std::pow(nodes_[0], a) / a;
    // linear segment on [0, nodes[1]] with weight r^{a-1}
    Rule r = jacobi_unit(CELL_ORDER, a - 1, 0);
    double sum = 0;
    for(int k = 0; k < CELL_ORDER; k++)
        sum += r.w[k] * std::pow(std::fabs((*this)(nodes_[1] * r.x[k])), q);
    return sum * std::pow(nodes_[1], a);
}

double RadialProfile::tail_integral(double q, double a) const
{
    double vJ = std::fabs((*this)(nodes_.back()));
    if(vJ == 0)
        return 0;
    double rate = q * tail_ - a;
    if(!(rate > 0))
        fail_validation("profile tail too heavy");
    return std::pow(vJ, q) * std::pow(nodes_.back(), a) / rate;
}

double RadialProfile::integrate_power_moment(double q, double a) const
{
    if(constant_) {
        if(values_[0] == 0)
            return 0;
        fail_validation("profile tail too heavy");
    }
    double sum = head_integral(q, a);
    for(std::size_t i = first_; i + 1 < nodes_.size(); i++)
        sum += cell_integral(lognodes_[i], lognodes_[i + 1], q, a);
    return sum + tail_integral(q, a);
}

double RadialProfile::lp_norm(double p, int n) const
{
    return std::pow(sphere_area(n - 1) * integrate_power_moment(p, n), 1 / p);
}

double RadialProfile::half_mass_radius(double p, int n) const
{
    double total = integrate_power_moment(p, n);
    if(!(total > 0))
        fail_validation("ratio undefined at 0");
    double target = 0.5 * total, acc = head_integral(p, n);
    if(acc >= target) {
        // inside the head: bisect on the partial head integral using the same rule
        double lo = 0, hi = nodes_[first_];
        for(int it = 0; it < 200; it++) {
            double mid = 0.5 * (lo + hi);
            Rule r = jacobi_unit(CELL_ORDER, n - 1, 0);
            double part = 0;
            for(int k = 0; k < CELL_ORDER; k++)
                part += r.w[k] * std::pow(std::fabs((*this)(mid * r.x[k])), p);
            part *= std::pow(mid, n);
            (part < target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    for(std::size_t i = first_; i + 1 < nodes_.size(); i++) {
        double c = cell_integral(lognodes_[i], lognodes_[i + 1], p, n);
        if(acc + c >= target) {
            double lo = lognodes_[i], hi = lognodes_[i + 1];
            for(int it = 0; it < 100; it++) {
                double mid = 0.5 * (lo + hi);
                (acc + cell_integral(lognodes_[i], mid, p, n) < target ? lo : hi) = mid;
            }
            return std::exp(0.5 * (lo + hi));
        }
        acc += c;
    }
    // in the power-law tail: vJ^p rJ^n ((r/rJ)^{-rate} ... ) solved in closed form
    double vJ = std::fabs((*this)(nodes_.back())), rJ = nodes_.back();
    double rate = p * tail_ - n, rest = target - acc;
    double full = std::pow(vJ, p) * std::pow(rJ, n) / rate;
    return rJ * std::pow(1 - rest / full, -1 / rate);
}

RadialProfile RadialProfile::scaled(double eps, double p, int n) const
{
    if(!(eps > 0))
        fail_validation("scale must be positive");
    double amp = std::pow(eps, -n / p);
    if(constant_)
        return constant(amp * values_[0]);
    std::vector<double> nd(nodes_), vl(values_);
    for(auto& x : nd)
        x *= eps;
    for(auto& v : vl)
        v *= amp;
    RadialProfile g(std::move(nd), std::move(vl), tail_);
    if(exact_) {
        auto fn = exact_;
        g.exact_ = [fn, eps, amp](double r) { return amp * fn(r / eps); };
    }
    return g;
}

RadialProfile RadialProfile::multiplied(double c) const
{
    if(constant_)
        return constant(c * values_[0]);
    std::vector<double> vl(values_);
    for(auto& v : vl)
        v *= c;
    RadialProfile g(nodes_, std::move(vl), tail_);
    if(exact_) {
        auto fn = exact_;
        g.exact_ = [fn, c](double r) { return c * fn(r); };
    }
    return g;
}

void RadialProfile::write_csv(std::ostream& out) const
{
    out << "# tail_exponent=" << std::setprecision(17) << tail_ << "\n";
    if(constant_)
        out << "# constant=1\n";
    out << "radius,value\n";
    for(std::size_t i = 0; i < nodes_.size(); i++)
        out << std::setprecision(17) << nodes_[i] << "," << values_[i] << "\n";
}

RadialProfile RadialProfile::read_csv(std::istream& in)
{
    std::string line;
    double tail = NAN;
    bool is_const = false;
    std::vector<double> nd, vl;
    while(std::getline(in, line)) {
        if(!line.empty() && line.back() == '\r')
            line.pop_back();
        if(line.empty())
            continue;
        if(line[0] == '#') {
            auto pos = line.find("tail_exponent=");
            if(pos != std::string::npos)
                tail = std::stod(line.substr(pos + 14));
            if(line.find("constant=1") != std::string::npos)
                is_const = true;
            continue;
        }
        if(line.rfind("radius", 0) == 0)
            continue;
        std::istringstream ss(line);
        double r, v;
        char comma;
        if(!(ss >> r >> comma >> v) || comma != ',')
            fail_validation("malformed profile row: " + line);
        nd.push_back(r);
        vl.push_back(v);
    }
    if(std::isnan(tail))
        fail_validation("profile CSV lacks the '# tail_exponent=' header");
    if(is_const) {
        if(vl.empty())
            fail_validation("constant profile needs a value");
        return constant(vl[0]);
    }
    return RadialProfile(std::move(nd), std::move(vl), tail);
}

}  // namespace fracext
