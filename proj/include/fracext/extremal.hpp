/** \file    extremal.hpp
    \brief   Variational problem for the sharp extension inequality
*/
#pragma once
#include "fracext/params.hpp"
#include "fracext/profile.hpp"
#include <Eigen/Dense>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace fracext {

/// Least-squares fit of a profile by the bubble family c (lambda/(lambda^2+r^2))^{(n-2gamma)/2}.
struct BubbleFit {
    double c = 0;
    double lambda = 0;
    double residual = 0;  ///< relative L^2 deviation on the fitted nodes
};

enum class Termination { tolerance_met, max_iterations, stagnation };
std::string to_string(Termination t);

struct SolverReport {
    int iterations = 0;
    std::vector<double> ratio_history;
    RadialProfile final_profile;
    double best_constant = 0;
    std::optional<BubbleFit> bubble_fit;
    bool converged = false;
    Termination termination_reason = Termination::max_iterations;
};

/** Discretization of the extension operator for radial data, shared by the ratio functional
    and the Euler-Lagrange map.

    Profiles are sampled on a fixed logarithmic grid after rescaling their half-mass radius to 1.
    Between nodes the data are cubic Hermite in log-radius with fourth-order difference slopes;
    below the first node they are constant, beyond the last node a power law. The extension at a
    polar product rule on the half-space is a linear map of the samples, assembled once per
    (n, gamma). The Euler-Lagrange integral at each node is a second linear map acting on
    U^{q*-1} at the same targets: along every angular ray the field is interpolated within the
    radial panels and integrated against the kernel with grading at its peak.
*/
class ExtremalEngine {
public:
    ExtremalEngine(int n, double gamma);
    static std::shared_ptr<const ExtremalEngine> get(int n, double gamma);

    const std::vector<double>& nodes() const { return rho_; }

    /// f resampled on the grid after scaling its half-mass radius to 1 and its L^p norm to 1.
    RadialProfile canonical(const RadialProfile& f, const Params& P) const;
    /// ||K f||_{L^{q*}(x_N^m)} / ||f||_{L^p}.
    double ratio(const RadialProfile& f, const Params& P) const;
    /// One Euler-Lagrange update, returned in canonical form.
    RadialProfile euler_lagrange(const RadialProfile& f, const Params& P) const;

private:
    int n_;
    double gamma_;
    double h_;
    std::vector<double> u_, rho_;
    std::vector<double> s_, x_, w_;            ///< targets and their measure weights
    std::vector<std::size_t> row_start_;       ///< first target of each radial row
    std::vector<double> row_radius_, row_vweight_;
    Eigen::MatrixXd C_;                        ///< targets x nodes
    Eigen::MatrixXd B_;                        ///< Euler-Lagrange nodes x targets
    int el_lo_ = 0, el_hi_ = 0;                ///< nodes where B_ is assembled
    std::vector<double> ray_t_, ray_weight_;   ///< angular rule: t = x_N / R and its weight
    mutable std::mutex tail_lock_;
    mutable std::map<double, std::shared_ptr<Eigen::VectorXd>> tails_;

    std::shared_ptr<Eigen::VectorXd> tail_column(double tau) const;
    Eigen::VectorXd samples(const RadialProfile& f, const Params& P, double& scale, double& norm) const;
    Eigen::VectorXd field(const Eigen::VectorXd& g, double tau) const;
    double field_norm(const Eigen::VectorXd& U, const Params& P, double tau) const;
};

/// ||K f||_{L^{q*}(x_N^m)} / ||f||_{L^p}; "ratio undefined at 0" for the zero profile.
double ratio_functional(const RadialProfile& f, const Params& params);

/// g^{p-1}(w) = int x_N (|xbar-w|^2+x_N^2)^{-(n+2gamma)/2} (K f)^{q*-1} dx, then L^p normalization
/// and half-mass radius rescaled to 1.
RadialProfile euler_lagrange_step(const RadialProfile& f, const Params& params);

/// Unit Gaussian on the default grid.
RadialProfile gaussian_profile();

/// Fixed-point iteration rearrange, normalize, rescale, Euler-Lagrange with damping on ascent failure.
SolverReport solve_maximizer(const Params& params, const RadialProfile& init, double tol = 1e-8,
                             int max_iter = 200);

/// Sharp constant ||K w_{1,0}|| / ||w_{1,0}|| at the critical exponent, by direct quadrature.
double best_constant(const Params& params);
/// The same constant raised to 2(n-2gamma+2)/(n-2gamma).
double best_constant_theta(const Params& params);
double theta_from_constant(double constant, const Params& params);

BubbleFit bubble_fit(const RadialProfile& f, const Params& params);

/// Norms of the shifted bump chi_{2R} = eta(|(xbar, x_N - R)|), eta = 1 on [0,1] and 0 beyond 2.
struct BumpNorms {
    double lq = 0;        ///< ||chi||_{L^{2(n-2gamma+2)/(n-2gamma)}(x_N^m)}
    double gradient = 0;  ///< (int |grad chi|^2 x_N^m)^{1/2}
};
BumpNorms sobolev_counterexample_norms(double R, const Params& params);
double sobolev_counterexample_ratio(double R, const Params& params);

}  // namespace fracext
