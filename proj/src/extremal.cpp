#include "fracext/extremal.hpp"
#include "fracext/error.hpp"
#include "fracext/halfspace.hpp"
#include "fracext/parallel.hpp"
#include "fracext/quad.hpp"
#include "fracext/special.hpp"
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace fracext {

namespace {

// canonical grid in u = log(rho)
const double GRID_LO = -14, GRID_STEP = 0.05;
const int GRID_COUNT = 601;
// target rule: log-radius panels of unit width, angular rule in w = sqrt(x_N / R)
const double TARGET_LO = -12, TARGET_HI = 14;
const int TARGET_RADIAL = 8, TARGET_ANGULAR = 48;
const int CELL_ORDER = 5;
// nodes where the Euler-Lagrange integral is evaluated; flat below, power law above
const double EL_LO = -10, EL_HI = 10;
const double ASCENT_SLACK = 1e-10;

/// Sparse coefficient row: value = sum coef * g[index].
using Stencil = std::vector<std::pair<int, double>>;

/// h times the fourth-order slope at node j, with a flat continuation below the grid and
/// one-sided formulas at the top.
Stencil slope_stencil(int j, int J)
{
    Stencil s;
    auto add = [&](int k, double c) { s.push_back({std::max(k, 0), c / 12}); };
    if(j >= J - 2) {
        static const double last[5] = {25, -48, 36, -16, 3}, second[5] = {3, 10, -18, 6, -1};
        const double* c = j == J - 1 ? last : second;
        for(int k = 0; k < 5; k++)
            add(J - 1 - k, c[k]);
    } else {
        add(j - 2, 1);
        add(j - 1, -8);
        add(j + 1, 8);
        add(j + 2, -1);
    }
    return s;
}

inline void hermite(double t, double H[4])
{
    double t2 = t * t, t3 = t2 * t;
    H[0] = 2 * t3 - 3 * t2 + 1;
    H[1] = -2 * t3 + 3 * t2;
    H[2] = t3 - 2 * t2 + t;
    H[3] = t3 - t2;
}

/// Polar product rule on the half-space for functions depending on (|xbar|, x_N).
struct PolarRule {
    std::vector<double> s, x, w, row_radius, row_vweight;
    std::vector<std::size_t> row_start;
};

PolarRule polar_rule(int n, double gamma, double lo, double hi, double panel, int radial, int angular)
{
    PolarRule pr;
    double m = 1 - 2 * gamma, half = 0.5 * (n - 2);
    const Rule& gl = gauss_legendre(radial);
    Rule ang = jacobi_unit(angular, 2 * m + 1, half);
    double area = sphere_area(n - 1);
    int panels = (int)std::lround((hi - lo) / panel);
    for(int p = 0; p < panels; p++) {
        double c = lo + panel * (p + 0.5), hw = 0.5 * panel;
        for(int a = 0; a < radial; a++) {
            double v = c + hw * gl.x[a], R = std::exp(v);
            pr.row_start.push_back(pr.s.size());
            pr.row_radius.push_back(R);
            pr.row_vweight.push_back(hw * gl.w[a]);
            for(int b = 0; b < angular; b++) {
                double w = ang.x[b], t = w * w;
                pr.x.push_back(R * t);
                pr.s.push_back(R * std::sqrt((1 - t) * (1 + t)));
                pr.w.push_back(area * std::pow(R, n + m + 1) * hw * gl.w[a] * 2 * ang.w[b] *
                               std::pow((1 + w) * (1 + t), half));
            }
        }
    }
    pr.row_start.push_back(pr.s.size());
    return pr;
}

/// L^q(x_N^m) norm of a field sampled on a polar rule, with power-law continuation at both ends.
double polar_norm(const PolarRule& pr, const double* U, double q, int n, double gamma, double decay)
{
    double m = 1 - 2 * gamma, dim = n + m + 1;
    std::size_t rows = pr.row_radius.size();
    std::vector<double> phi(rows, 0);
    double sum = 0;
    for(std::size_t r = 0; r < rows; r++) {
        for(std::size_t i = pr.row_start[r]; i < pr.row_start[r + 1]; i++)
            phi[r] += pr.w[i] * std::pow(std::fabs(U[i]), q);
        sum += phi[r];
        phi[r] /= pr.row_vweight[r];
    }
    double delta = q * std::min(decay, (double)n) - dim;
    if(!(delta > 0))
        fail_validation("profile tail too heavy");
    sum += phi.front() / dim + phi.back() / delta;
    if(!std::isfinite(sum))
        fail_numerical("integrand not finite");
    return std::pow(sum, 1 / q);
}

void check_engine_params(const Params& P, int n, double gamma)
{
    if(P.n != n || P.gamma != gamma)
        fail_validation("engine parameters do not match");
}

}  // namespace

std::string to_string(Termination t)
{
    switch(t) {
        case Termination::tolerance_met: return "tolerance_met";
        case Termination::max_iterations: return "max_iterations";
        default: return "stagnation";
    }
}

// ---------------------------------------------------------------- engine

ExtremalEngine::ExtremalEngine(int n, double gamma) : n_(n), gamma_(gamma), h_(GRID_STEP)
{
    Params P = Params::make(n, gamma, 2.0);
    const int J = GRID_COUNT;
    for(int j = 0; j < J; j++) {
        u_.push_back(GRID_LO + h_ * j);
        rho_.push_back(std::exp(u_.back()));
    }
    PolarRule pr = polar_rule(n, gamma, TARGET_LO, TARGET_HI, 1.0, TARGET_RADIAL, TARGET_ANGULAR);
    s_ = pr.s;
    x_ = pr.x;
    w_ = pr.w;
    row_start_ = pr.row_start;
    row_radius_ = pr.row_radius;
    row_vweight_ = pr.row_vweight;

    // local Hermite data of each cell as stencils on the samples
    std::vector<Stencil> slope(J);
    for(int j = 0; j < J; j++)
        slope[j] = slope_stencil(j, J);
    auto cell_rows = [&](int c) {
        std::array<Stencil, 4> L;
        L[0] = {{c, 1.0}};
        L[1] = {{c + 1, 1.0}};
        L[2] = slope[c];
        L[3] = slope[c + 1];
        return L;
    };

    auto kernel = RadialKernel::get(n, gamma);
    const std::size_t T = s_.size();
    C_ = Eigen::MatrixXd::Zero(T, J);
    parallel_for(T, [&](std::size_t i) {
        std::vector<RadialNode> nodes;
        nodes.reserve(8 * J);
        radial_nodes(*kernel, P, s_[i], x_[i], 0, rho_.back(), rho_, CELL_ORDER, nodes);
        std::vector<double> local(4 * (J - 1), 0);
        double head = 0;
        for(const auto& q : nodes) {
            if(q.rho <= rho_.front()) {
                head += q.weight;
                continue;
            }
            double pos = (std::log(q.rho) - GRID_LO) / h_;
            int c = std::min((int)pos, J - 2);
            double H[4];
            hermite(pos - c, H);
            for(int a = 0; a < 4; a++)
                local[4 * c + a] += q.weight * H[a];
        }
        C_(i, 0) += head;
        for(int c = 0; c < J - 1; c++) {
            auto L = cell_rows(c);
            for(int a = 0; a < 4; a++)
                if(local[4 * c + a] != 0)
                    for(const auto& [k, coef] : L[a])
                        C_(i, k) += coef * local[4 * c + a];
        }
    });

    // Euler-Lagrange map: G(rho) = int t^m (1-t^2)^{(n-2)/2} dt int R^{n+m+1+2gamma} t^{2gamma}
    // A(R sqrt(1-t^2), rho, R t) U^{q*-1}(R, t) dlog R, with U^{q*-1} interpolated along each ray
    Rule ang = jacobi_unit(TARGET_ANGULAR, 2 * P.m + 1, 0.5 * (n - 2));
    for(int b = 0; b < TARGET_ANGULAR; b++) {
        double w = ang.x[b], t = w * w;
        ray_t_.push_back(t);
        ray_weight_.push_back(2 * ang.w[b] * std::pow((1 + w) * (1 + t), 0.5 * (n - 2)));
    }
    el_lo_ = (int)std::ceil((EL_LO - GRID_LO) / h_);
    el_hi_ = (int)std::floor((EL_HI - GRID_LO) / h_);
    const Rule& gr = gauss_legendre(TARGET_RADIAL);
    std::vector<double> bary(TARGET_RADIAL);
    for(int a = 0; a < TARGET_RADIAL; a++) {
        bary[a] = 1;
        for(int c = 0; c < TARGET_RADIAL; c++)
            if(c != a)
                bary[a] /= gr.x[a] - gr.x[c];
    }
    B_ = Eigen::MatrixXd::Zero(el_hi_ - el_lo_ + 1, T);
    const int panels = (int)std::lround(TARGET_HI - TARGET_LO);
    const Rule& gq = gauss_legendre(6);
    const Rule& ghead = gauss_legendre(8);
    double expo = n + P.m + 1 + 2 * gamma;
    parallel_for(B_.rows(), [&](std::size_t row) {
        double rho = rho_[el_lo_ + row];
        std::vector<double> br;
        for(int b = 0; b < TARGET_ANGULAR; b++) {
            double t = ray_t_[b], c = std::sqrt((1 - t) * (1 + t)), tg = std::pow(t, 2 * gamma);
            double scale = ray_weight_[b] * tg;
            auto integrand = [&](double u) {
                double R = std::exp(u);
                return scale * std::exp(expo * u) * kernel->angular(R * c, rho, R * t);
            };
            // breakpoints: panel edges, a half-unit lattice and grading at the kernel peak
            br.clear();
            for(int k = 0; k <= 2 * panels; k++)
                br.push_back(TARGET_LO + 0.5 * k);
            double peak = rho * c, width = rho * t;
            if(std::log(peak) > TARGET_LO && std::log(peak) < TARGET_HI) {
                br.push_back(std::log(peak));
                for(double d = width; d <= 0.5 * peak; d *= 2) {
                    br.push_back(std::log(peak - d));
                    br.push_back(std::log(peak + d));
                }
            }
            std::sort(br.begin(), br.end());
            for(std::size_t k = 0; k + 1 < br.size(); k++) {
                double u0 = br[k], u1 = br[k + 1];
                if(!(u1 > u0 + 1e-14) || u0 < TARGET_LO || u1 > TARGET_HI)
                    continue;
                int p = std::min((int)std::floor(0.5 * (u0 + u1) - TARGET_LO), panels - 1);
                double pc = TARGET_LO + p + 0.5;
                for(std::size_t q = 0; q < gq.size(); q++) {
                    double u = 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * gq.x[q];
                    double val = 0.5 * (u1 - u0) * gq.w[q] * integrand(u);
                    // barycentric Lagrange weights on the panel's Gauss nodes
                    double z = 2 * (u - pc), denom = 0, lw[TARGET_RADIAL];
                    int hit = -1;
                    for(int a = 0; a < TARGET_RADIAL; a++) {
                        if(z == gr.x[a])
                            hit = a;
                        lw[a] = bary[a] / (z - gr.x[a]);
                        denom += lw[a];
                    }
                    for(int a = 0; a < TARGET_RADIAL; a++) {
                        double l = hit >= 0 ? (a == hit) : lw[a] / denom;
                        B_(row, row_start_[p * TARGET_RADIAL + a] + b) += val * l;
                    }
                }
            }
            // below the target range the field is taken constant along the ray
            for(int q = 0; q < 8; q++) {
                double u = TARGET_LO - 4 + 4 * ghead.x[q];
                B_(row, row_start_[0] + b) += 4 * ghead.w[q] * integrand(u);
            }
        }
    });
}

std::shared_ptr<const ExtremalEngine> ExtremalEngine::get(int n, double gamma)
{
    static std::mutex lock;
    static std::map<std::pair<int, double>, std::shared_ptr<const ExtremalEngine>> cache;
    std::lock_guard<std::mutex> g(lock);
    auto& slot = cache[{n, gamma}];
    if(!slot)
        slot = std::make_shared<ExtremalEngine>(n, gamma);
    return slot;
}

std::shared_ptr<Eigen::VectorXd> ExtremalEngine::tail_column(double tau) const
{
    {
        std::lock_guard<std::mutex> g(tail_lock_);
        auto it = tails_.find(tau);
        if(it != tails_.end())
            return it->second;
    }
    Params P = Params::make(n_, gamma_, 2.0);
    if(!(tau + 2 * gamma_ > 0))
        fail_validation("profile tail too heavy");
    auto kernel = RadialKernel::get(n_, gamma_);
    double a = rho_.back();
    auto col = std::make_shared<Eigen::VectorXd>(s_.size());
    parallel_for(s_.size(), [&](std::size_t i) {
        std::vector<RadialNode> nodes;
        double b = std::max(a * std::exp(2.0), 1e3 * std::max(s_[i], x_[i]));
        radial_nodes(*kernel, P, s_[i], x_[i], a, b, {}, 10, nodes);
        double sum = 0;
        for(const auto& q : nodes)
            sum += q.weight * std::pow(q.rho / a, -tau);
        sum += radial_tail_weight(P, s_[i], x_[i], b, tau) * std::pow(b / a, -tau);
        (*col)[i] = sum;
    });
    std::lock_guard<std::mutex> g(tail_lock_);
    if(tails_.size() > 32)
        tails_.clear();
    tails_[tau] = col;
    return col;
}

Eigen::VectorXd ExtremalEngine::samples(const RadialProfile& f, const Params& P, double& scale,
                                        double& norm) const
{
    check_engine_params(P, n_, gamma_);
    if(f.is_constant() && !f.is_zero())
        fail_validation("profile tail too heavy");
    if(f.is_zero())
        fail_validation("ratio undefined at 0");
    scale = f.half_mass_radius(P.p, P.n);
    norm = f.lp_norm(P.p, P.n);
    Eigen::VectorXd g(rho_.size());
    for(std::size_t j = 0; j < rho_.size(); j++)
        g[j] = f(scale * rho_[j]);
    return g;
}

Eigen::VectorXd ExtremalEngine::field(const Eigen::VectorXd& g, double tau) const
{
    Eigen::VectorXd U = C_ * g;
    double last = g[g.size() - 1];
    if(last != 0)
        U += last * *tail_column(tau);
    return U;
}

double ExtremalEngine::field_norm(const Eigen::VectorXd& U, const Params& P, double tau) const
{
    PolarRule pr;  // only weights and rows are used
    pr.w = w_;
    pr.row_start = row_start_;
    pr.row_radius = row_radius_;
    pr.row_vweight = row_vweight_;
    return polar_norm(pr, U.data(), P.q_star, n_, gamma_, tau);
}

RadialProfile ExtremalEngine::canonical(const RadialProfile& f, const Params& P) const
{
    double L, norm;
    Eigen::VectorXd g = samples(f, P, L, norm);
    double factor = std::pow(L, P.n / P.p) / norm;
    std::vector<double> vals(g.data(), g.data() + g.size());
    for(double& v : vals)
        v *= factor;
    return RadialProfile(rho_, std::move(vals), f.tail_exponent());
}

double ExtremalEngine::ratio(const RadialProfile& f, const Params& P) const
{
    double L, norm;
    Eigen::VectorXd g = samples(f, P, L, norm);
    double tau = f.tail_exponent();
    if(!(tau > P.n / P.p))
        fail_validation("profile tail too heavy");
    double num = field_norm(field(g, tau), P, tau);
    return num / (norm * std::pow(L, -P.n / P.p));
}

RadialProfile ExtremalEngine::euler_lagrange(const RadialProfile& f, const Params& P) const
{
    double L, norm;
    Eigen::VectorXd g = samples(f, P, L, norm);
    double tau = f.tail_exponent();
    if(!(tau > P.n / P.p))
        fail_validation("profile tail too heavy");
    g *= std::pow(L, P.n / P.p) / norm;
    if(g.minCoeff() < 0)
        fail_validation("profile must be nonnegative");
    Eigen::VectorXd U = field(g, tau);
    const int J = (int)rho_.size();
    Eigen::VectorXd y(U.size());
    for(Eigen::Index i = 0; i < U.size(); i++)
        y[i] = std::pow(std::max(U[i], 0.0), P.q_star - 1);
    Eigen::VectorXd core = B_ * y;
    // contribution of the field beyond the last target row, where U decays like R^{-min(tau,n)}
    double decay_u = std::min(tau, (double)P.n), far = 0;
    double rate = decay_u * (P.q_star - 1) - (P.m + 1);
    if(!(rate > 0))
        fail_validation("profile tail too heavy");
    double RL = row_radius_.back();
    std::size_t last = row_start_[row_radius_.size() - 1];
    for(std::size_t b = 0; b < ray_t_.size(); b++)
        far += ray_weight_[b] * std::pow(ray_t_[b], 2 * P.gamma) * sphere_area(P.n - 1) * y[last + b] *
               std::pow(RL, P.m + 1) / rate;
    Eigen::VectorXd G(J);
    for(int j = el_lo_; j <= el_hi_; j++)
        G[j] = core[j - el_lo_] + far;
    for(int j = 0; j < el_lo_; j++)
        G[j] = G[el_lo_];
    double decay = P.n + 2 * P.gamma;
    for(int j = el_hi_ + 1; j < J; j++)
        G[j] = G[el_hi_] * std::pow(rho_[j] / rho_[el_hi_], -decay);
    std::vector<double> vals(J);
    for(int j = 0; j < J; j++) {
        if(!(G[j] > 0) || !std::isfinite(G[j]))
            fail_numerical("Euler-Lagrange integral not positive", G[j]);
        vals[j] = std::pow(G[j], 1 / (P.p - 1));
    }
    RadialProfile out(rho_, std::move(vals), decay / (P.p - 1));
    return canonical(out, P);
}

// ---------------------------------------------------------------- public operations

double ratio_functional(const RadialProfile& f, const Params& params)
{
    if(f.is_zero())
        fail_validation("ratio undefined at 0");
    return ExtremalEngine::get(params.n, params.gamma)->ratio(f, params);
}

RadialProfile euler_lagrange_step(const RadialProfile& f, const Params& params)
{
    if(f.is_zero())
        fail_validation("ratio undefined at 0");
    return ExtremalEngine::get(params.n, params.gamma)->euler_lagrange(f, params);
}

RadialProfile gaussian_profile()
{
    return RadialProfile::analytic([](double r) { return std::exp(-r * r); }, RadialProfile::default_grid(),
                                   1e3);
}

namespace {

double lp_distance(const RadialProfile& a, const RadialProfile& b, const Params& P)
{
    const auto& nd = a.nodes();
    std::vector<double> d(nd.size());
    for(std::size_t j = 0; j < nd.size(); j++)
        d[j] = std::fabs(a.values()[j] - b(nd[j]));
    double tau = std::min(a.tail_exponent(), b.tail_exponent());
    return RadialProfile(nd, std::move(d), tau).lp_norm(P.p, P.n);
}

RadialProfile geometric_mix(const RadialProfile& a, const RadialProfile& b, double theta)
{
    const auto& nd = a.nodes();
    std::vector<double> v(nd.size());
    for(std::size_t j = 0; j < nd.size(); j++)
        v[j] = std::pow(a.values()[j], theta) * std::pow(b(nd[j]), 1 - theta);
    return RadialProfile(nd, std::move(v), theta * a.tail_exponent() + (1 - theta) * b.tail_exponent());
}

}  // namespace

SolverReport solve_maximizer(const Params& params, const RadialProfile& init, double tol, int max_iter)
{
    if(!(tol > 0) || max_iter < 1)
        fail_validation("tolerance and iteration count must be positive");
    if(init.min_value() < 0 || init.is_zero())
        fail_validation("init must be nonnegative and nonzero");
    auto engine = ExtremalEngine::get(params.n, params.gamma);
    SolverReport rep;
    RadialProfile f = engine->canonical(rearrange(init, params.n), params);
    double R = engine->ratio(f, params);
    rep.ratio_history.push_back(R);
    double best_diff = INFINITY;
    int since_best = 0;
    rep.termination_reason = Termination::max_iterations;
    for(int it = 1; it <= max_iter; it++) {
        RadialProfile g = engine->euler_lagrange(f, params);
        if(!g.is_nonincreasing())
            g = engine->canonical(rearrange(g, params.n), params);
        double Rg = engine->ratio(g, params);
        double theta = 1;
        for(int tries = 0; Rg < R - ASCENT_SLACK && tries < 8; tries++) {
            theta *= 0.5;
            g = engine->canonical(geometric_mix(g, f, theta), params);
            Rg = engine->ratio(g, params);
        }
        rep.iterations = it;
        if(Rg < R - ASCENT_SLACK) {
            rep.termination_reason = Termination::stagnation;
            break;
        }
        double diff = lp_distance(g, f, params);
        f = g;
        R = Rg;
        rep.ratio_history.push_back(R);
        if(diff < tol) {
            rep.termination_reason = Termination::tolerance_met;
            rep.converged = true;
            break;
        }
        if(diff < best_diff) {
            best_diff = diff;
            since_best = 0;
        } else if(++since_best >= 20) {
            rep.termination_reason = Termination::stagnation;
            break;
        }
    }
    rep.final_profile = f;
    rep.best_constant = *std::max_element(rep.ratio_history.begin(), rep.ratio_history.end());
    if(params.is_critical())
        rep.bubble_fit = bubble_fit(f, params);
    return rep;
}

double best_constant(const Params& params)
{
    params.require_supercritical();
    Params P = Params::critical(params.n, params.gamma);
    RadialProfile w = bubble(1, P);
    PolarRule pr = polar_rule(P.n, P.gamma, -10, 12, 0.5, 10, 40);
    std::vector<double> U(pr.s.size());
    parallel_for(U.size(), [&](std::size_t i) { U[i] = extend(w, P, pr.s[i], pr.x[i]); });
    double num = polar_norm(pr, U.data(), P.q_star, P.n, P.gamma, P.n - 2 * P.gamma);
    return num / w.lp_norm(P.p, P.n);
}

double theta_from_constant(double constant, const Params& params)
{
    double k = params.n - 2 * params.gamma;
    return std::pow(constant, 2 * (k + 2) / k);
}

double best_constant_theta(const Params& params) { return theta_from_constant(best_constant(params), params); }

BubbleFit bubble_fit(const RadialProfile& f, const Params& params)
{
    params.require_supercritical();
    if(f.is_constant())
        fail_validation("bubble fit requires a decaying profile");
    double k = 0.5 * (params.n - 2 * params.gamma);
    const auto& nd = f.nodes();
    std::vector<double> r, y, val;
    double vmax = 0;
    for(std::size_t j = 0; j < nd.size(); j++) {
        double v = f(nd[j]);
        if(!(v >= 0))
            fail_validation("bubble fit requires positive values");
        vmax = std::max(vmax, v);
    }
    if(!(vmax > 0))
        fail_validation("bubble fit requires positive values");
    // nodes below 1e-8 of the maximum (including underflowed tails) are left out of the fit
    for(std::size_t j = 0; j < nd.size(); j++) {
        double v = f(nd[j]);
        if(v >= 1e-8 * vmax) {
            r.push_back(nd[j]);
            val.push_back(v);
            y.push_back(std::log(v));
        }
    }
    auto logc_and_sse = [&](double ll, double& logc) {
        double lam = std::exp(ll), mean = 0;
        std::vector<double> b(r.size());
        for(std::size_t j = 0; j < r.size(); j++) {
            b[j] = k * (ll - std::log(lam * lam + r[j] * r[j]));
            mean += y[j] - b[j];
        }
        logc = mean / r.size();
        double sse = 0;
        for(std::size_t j = 0; j < r.size(); j++)
            sse += std::pow(y[j] - logc - b[j], 2);
        return sse;
    };
    double lo = std::log(std::max(r.front(), 1e-12 * r.back())), hi = std::log(r.back()), logc;
    int scan = 400, best = 0;
    double bestv = INFINITY;
    for(int i = 0; i <= scan; i++) {
        double v = logc_and_sse(lo + (hi - lo) * i / scan, logc);
        if(v < bestv) {
            bestv = v;
            best = i;
        }
    }
    double a = lo + (hi - lo) * std::max(best - 1, 0) / scan, b = lo + (hi - lo) * std::min(best + 1, scan) / scan;
    const double phi = 0.5 * (std::sqrt(5.) - 1);
    double c1 = b - phi * (b - a), c2 = a + phi * (b - a);
    double f1 = logc_and_sse(c1, logc), f2 = logc_and_sse(c2, logc);
    for(int it = 0; it < 200 && b - a > 1e-13; it++) {
        if(f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - phi * (b - a);
            f1 = logc_and_sse(c1, logc);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + phi * (b - a);
            f2 = logc_and_sse(c2, logc);
        }
    }
    double ll = 0.5 * (a + b);
    logc_and_sse(ll, logc);
    BubbleFit fit;
    fit.lambda = std::exp(ll);
    fit.c = std::exp(logc);
    double num = 0, den = 0;
    for(std::size_t j = 0; j < r.size(); j++) {
        double model = fit.c * std::pow(fit.lambda / (fit.lambda * fit.lambda + r[j] * r[j]), k);
        num += std::pow(val[j] - model, 2);
        den += val[j] * val[j];
    }
    fit.residual = std::sqrt(num / den);
    return fit;
}

// ---------------------------------------------------------------- Sobolev counterexample

namespace {

double bump_psi(double x) { return x > 0 ? std::exp(-1 / x) : 0; }
double bump_dpsi(double x) { return x > 0 ? std::exp(-1 / x) / (x * x) : 0; }

}  // namespace

BumpNorms sobolev_counterexample_norms(double R, const Params& P)
{
    if(!(P.gamma > 0.5))
        fail_validation("counterexample requires gamma > 1/2");
    if(!(R > 2))
        fail_validation("shift R must exceed 2");
    double q = 2 * (P.n - 2 * P.gamma + 2) / (P.n - 2 * P.gamma);
    const Rule& ga = gauss_legendre(64);
    auto angular = [&](double rho) {
        double sum = 0;
        for(int k = 0; k < 64; k++) {
            double th = 0.5 * M_PI * (1 + ga.x[k]);
            sum += ga.w[k] * std::pow(R + rho * std::cos(th), P.m) * std::pow(std::sin(th), P.n - 1);
        }
        return 0.5 * M_PI * sum;
    };
    double area = sphere_area(P.n - 1), lq = 0, grad = 0;
    const Rule& inner = gauss_legendre(32);
    for(int k = 0; k < 32; k++) {
        double rho = 0.5 * (1 + inner.x[k]);
        lq += 0.5 * inner.w[k] * std::pow(rho, P.n) * angular(rho);
    }
    const Rule& shell = gauss_legendre(96);
    for(int k = 0; k < 96; k++) {
        double rho = 1.5 + 0.5 * shell.x[k];
        double a = bump_psi(2 - rho), b = bump_psi(rho - 1);
        double eta = a / (a + b);
        double deta = (-bump_dpsi(2 - rho) * b - a * bump_dpsi(rho - 1)) / ((a + b) * (a + b));
        double ang = angular(rho) * std::pow(rho, P.n) * 0.5 * shell.w[k];
        lq += std::pow(eta, q) * ang;
        grad += deta * deta * ang;
    }
    return {std::pow(area * lq, 1 / q), std::sqrt(area * grad)};
}

double sobolev_counterexample_ratio(double R, const Params& P)
{
    BumpNorms b = sobolev_counterexample_norms(R, P);
    return b.lq / b.gradient;
}

}  // namespace fracext
