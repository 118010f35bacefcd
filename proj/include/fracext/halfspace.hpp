#pragma once
#include "fracext/params.hpp"
#include "fracext/profile.hpp"
#include <memory>
#include <vector>

namespace fracext {

/// Kernel value kappa x_N^{2gamma} / (|xbar - wbar|^2 + x_N^2)^{(n+2gamma)/2};
/// x has n+1 coordinates, w has n.
double poisson_kernel(const std::vector<double>& x, const std::vector<double>& w, const Params& params);

/// Angular part of the kernel for radial data:
/// A(s, rho, x_N) = int_{S^{n-1}} (s^2 + rho^2 + x_N^2 - 2 s rho omega_1)^{-(n+2gamma)/2} d omega.
/// For n >= 2 the one-dimensional integral is tabulated once per (n, gamma) in the
/// variable log of d^2/(4 s rho), d^2 = (s-rho)^2 + x_N^2, after factoring out its
/// exact behavior at both ends of that range.
class RadialKernel {
public:
    RadialKernel(int n, double gamma);
    /// shared instance per (n, gamma)
    static std::shared_ptr<const RadialKernel> get(int n, double gamma);

    double angular(double s, double rho, double xN) const;
    /// the tabulated integral int_0^1 u^a (1-u)^a (eps+u)^{-nu} du, a = (n-3)/2, by direct quadrature
    double reference_integral(double eps) const;

    int n() const { return n_; }
    double gamma() const { return gamma_; }

private:
    int n_;
    double gamma_, nu_, alpha_, prefactor_;
    double lmin_, lstep_;
    std::vector<double> table_, second_;  // natural cubic spline in log eps
    double scaled(double l) const;
};

/// Quadrature node of a radial convolution: sum_k weight_k f(rho_k) approximates
/// kappa x_N^{2gamma} int_a^b f(rho) rho^{n-1} A(s, rho, x_N) d rho.
struct RadialNode {
    double rho, weight;
};

/// Appends the nodes for the interval [a, b] (a may be 0). Breakpoints: a log-uniform lattice
/// of spacing 1/2, geometric refinement toward rho = s when x_N < s/2, and the extra points.
void radial_nodes(const RadialKernel& kernel, const Params& params, double s, double xN, double a,
                  double b, const std::vector<double>& extra, int order, std::vector<RadialNode>& out);

/// Coefficient c with kappa x_N^{2gamma} int_b^inf f rho^{n-1} A d rho = c f(b) for f ~ rho^{-tau}
/// beyond b, valid for b much larger than s and x_N.
double radial_tail_weight(const Params& params, double s, double xN, double b, double tau);

/// (K f)(s, x_N) for radial f.
double extend(const RadialProfile& f, const Params& params, double s, double xN);

/// int K(x, w) dw at x = (s, 0, ..., x_N) evaluated with the same radial machinery as extend.
double kernel_mass(const Params& params, double s, double xN);

/// Axisymmetric field on an (s, x_N) product grid; values(i, j) at (s_nodes[i], xN_nodes[j]).
struct HalfSpaceField {
    std::vector<double> s_nodes, xN_nodes;
    std::vector<double> values;  // row-major, s index slowest
    Params params;
    double at(std::size_t i, std::size_t j) const { return values[i * xN_nodes.size() + j]; }
};

HalfSpaceField extend_field(const RadialProfile& f, const Params& params, const std::vector<double>& s_nodes,
                            const std::vector<double>& xN_nodes);

/// (lambda / (lambda^2 + r^2))^{(n-2gamma)/2} with its exact evaluator attached.
RadialProfile bubble(double lambda, const Params& params, std::vector<double> nodes = RadialProfile::default_grid());

/// r -> r^{-(n-2gamma)} f(1/r) on the grid of f.
RadialProfile kelvin(const RadialProfile& f, const Params& params);

/// Symmetric decreasing rearrangement with respect to the measure of R^n.
RadialProfile rearrange(const RadialProfile& f, int n);

/// Limit of x_N^m dU/dx_N at (s, x_N -> 0), U = K f.
double weighted_normal_derivative(const RadialProfile& f, const Params& params, double s,
                                  const std::vector<double>& heights);
/// heights h0 2^{-k}, k = 0..5
std::vector<double> default_heights(double h0 = 0.25);

/// Richardson extrapolation to x = 0: fits values_k = L + sum_j c_j x_k^{powers_j} using the
/// first x.size()-1 powers and returns L. When check is set, the limits obtained with an
/// increasing number of terms must settle; otherwise "limit did not stabilize" is thrown.
double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& values,
                           const std::vector<double>& powers, bool check = true);

}  // namespace fracext
