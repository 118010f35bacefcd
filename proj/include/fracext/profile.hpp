#pragma once
#include <functional>
#include <iosfwd>
#include <vector>

namespace fracext {

/// Radially symmetric function on R^n: grid nodes, values and a power-law tail exponent.
/// Interpolation is a monotonicity-preserving cubic Hermite in log r (fourth-order node
/// derivatives limited by the Hyman filter). Below the first positive node the profile is
/// linear in r when the grid starts at 0 and constant otherwise; beyond the last node it
/// decays like r^{-tail_exponent}. A profile may carry an exact evaluator, which then
/// replaces the interpolant everywhere.
class RadialProfile {
public:
    RadialProfile() = default;
    RadialProfile(std::vector<double> nodes, std::vector<double> values, double tail_exponent);

    /// Profile identically equal to c; extensions treat it analytically.
    static RadialProfile constant(double c);
    /// Samples fn on the nodes and keeps fn as the exact evaluator.
    static RadialProfile analytic(std::function<double(double)> fn, std::vector<double> nodes,
                                  double tail_exponent);
    /// count log-spaced nodes on [lo, hi]
    static std::vector<double> log_grid(double lo, double hi, int count);
    /// 200 log-spaced nodes on [1e-4, 1e4]
    static std::vector<double> default_grid();

    double operator()(double r) const;

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    double tail_exponent() const { return tail_; }
    bool is_constant() const { return constant_; }
    bool has_exact() const { return bool(exact_); }
    /// drops the exact evaluator, keeping only the grid representation
    RadialProfile grid_only() const;

    bool is_nonincreasing() const;
    bool is_zero() const;
    double min_value() const;
    double max_value() const;

    /// int_0^inf |f(r)|^q r^{a-1} dr
    double integrate_power_moment(double q, double a) const;
    /// L^p(R^n) norm
    double lp_norm(double p, int n) const;
    /// radius L with int_{|x|<L} |f|^p = half of the total
    double half_mass_radius(double p, int n) const;

    /// r -> eps^{-n/p} f(r/eps)
    RadialProfile scaled(double eps, double p, int n) const;
    /// r -> c f(r)
    RadialProfile multiplied(double c) const;

    /// CSV with header line "# tail_exponent=<real>" and rows "radius,value"
    void write_csv(std::ostream& out) const;
    static RadialProfile read_csv(std::istream& in);

private:
    std::vector<double> nodes_, values_;
    std::vector<double> lognodes_, slopes_;  // slopes are d f / d log r at nodes
    double tail_ = 0;
    bool constant_ = false;
    std::function<double(double)> exact_;
    std::size_t first_ = 0;  // index of the first positive node

    void prepare();
    double interpolate(double r) const;
    /// int over [u0,u1] in log radius of |f|^q e^{a u}
    double cell_integral(double u0, double u1, double q, double a) const;
    double head_integral(double q, double a) const;
    double tail_integral(double q, double a) const;
};

}  // namespace fracext
