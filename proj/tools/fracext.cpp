/** \file    fracext.cpp
    \brief   Command-line front end: one command per process, JSON result on stdout or --out
*/
#include "fracext/ball.hpp"
#include "fracext/error.hpp"
#include "fracext/extremal.hpp"
#include "fracext/halfspace.hpp"
#include "fracext/parallel.hpp"
#include "fracext/quad.hpp"
#include "fracext/spectral.hpp"
#include "fracext/special.hpp"
#include "fracext/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace fracext;

namespace {

/// Flags shared by all commands.
struct Common {
    int n = 2;
    double gamma = 0.5;
    std::optional<double> p;
    unsigned threads = 0;
    std::string out;
    QuadSpec quad;
};

/// Radial boundary datum on R^n.
struct ProfileArgs {
    std::string kind = "bubble";
    double lambda = 1;
    double value = 1;
    std::string file;
};

/// Zonal datum on S^n.
struct SphereArgs {
    std::string kind = "constant";
    std::vector<double> coeffs;
    std::string file;
    double value = 1;
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--n", c.n, "boundary dimension")->capture_default_str();
    app->add_option("--gamma", c.gamma, "order in (0,1)")->capture_default_str();
    app->add_option("--p", c.p, "boundary exponent; default 2n/(n-2gamma)");
    app->add_option("--threads", c.threads, "worker threads, 0 = all cores")->capture_default_str();
    app->add_option("--out", c.out, "write the JSON document here instead of stdout");
    app->add_option("--order-radial", c.quad.order_radial)->capture_default_str();
    app->add_option("--order-vertical", c.quad.order_vertical)->capture_default_str();
    app->add_option("--order-angle", c.quad.order_angle)->capture_default_str();
    app->add_option("--map-scale", c.quad.map_scale)->capture_default_str();
    app->add_option("--abs-tol", c.quad.abs_tol)->capture_default_str();
    app->add_option("--rel-tol", c.quad.rel_tol)->capture_default_str();
}

void add_profile(CLI::App* app, ProfileArgs& a)
{
    app->add_option("--profile", a.kind, "bubble | gaussian | constant | file")
        ->check(CLI::IsMember({"bubble", "gaussian", "constant", "file"}))
        ->capture_default_str();
    app->add_option("--lambda", a.lambda, "bubble scale")->capture_default_str();
    app->add_option("--value", a.value, "value of the constant profile")->capture_default_str();
    app->add_option("--file", a.file, "profile CSV (radius,value with '# tail_exponent=')");
}

void add_sphere(CLI::App* app, SphereArgs& a)
{
    app->add_option("--sphere", a.kind, "constant | cos | exp-cos | legendre | file")
        ->check(CLI::IsMember({"constant", "cos", "exp-cos", "legendre", "file"}))
        ->capture_default_str();
    app->add_option("--coeffs", a.coeffs, "zonal harmonic coefficients for --sphere legendre")->delimiter(',');
    app->add_option("--sphere-file", a.file, "sphere CSV (angle,value with '# dimension=')");
    app->add_option("--sphere-value", a.value, "value of the constant datum")->capture_default_str();
}

Params make_params(const Common& c)
{
    if(c.p)
        return Params::make(c.n, c.gamma, *c.p);
    return Params::critical(c.n, c.gamma);
}

RadialProfile make_profile(const ProfileArgs& a, const Params& P)
{
    if(a.kind == "bubble")
        return bubble(a.lambda, P);
    if(a.kind == "gaussian")
        return gaussian_profile();
    if(a.kind == "constant")
        return RadialProfile::constant(a.value);
    if(a.file.empty())
        fail_validation("--profile file needs --file");
    std::ifstream in(a.file);
    if(!in)
        fail_validation("cannot open " + a.file);
    return RadialProfile::read_csv(in);
}

SphereSamples make_sphere(const SphereArgs& a, int n)
{
    if(a.kind == "constant")
        return SphereSamples::constant(n, a.value);
    if(a.kind == "cos")
        return SphereSamples::from_legendre(n, {0, 1});
    if(a.kind == "exp-cos")
        return SphereSamples::sample(n, [](double phi) { return std::exp(std::cos(phi)); });
    if(a.kind == "legendre") {
        if(a.coeffs.empty())
            fail_validation("--sphere legendre needs --coeffs");
        return SphereSamples::from_legendre(n, a.coeffs);
    }
    if(a.file.empty())
        fail_validation("--sphere file needs --sphere-file");
    std::ifstream in(a.file);
    if(!in)
        fail_validation("cannot open " + a.file);
    SphereSamples s = SphereSamples::read_csv(in);
    if(s.dim() != n)
        fail_validation("sphere file dimension does not match --n");
    return s;
}

std::vector<double> parse_point(const std::string& text)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while(std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if(used != item.size())
                throw std::invalid_argument(item);
        } catch(const std::exception&) {
            fail_validation("malformed coordinate list: " + text);
        }
    }
    return v;
}

json params_json(const Params& P)
{
    return json{{"n", P.n}, {"gamma", P.gamma}, {"p", P.p}, {"m", P.m}, {"q_star", P.q_star},
                {"kappa", P.kappa}, {"d_gamma", P.d_gamma}};
}

json document(const std::string& command, const Params* P)
{
    json d;
    d["schema"] = "fracext/1";
    d["command"] = command;
    if(P)
        d["params"] = params_json(*P);
    return d;
}

void emit(const json& doc, const Common& c)
{
    std::string text = doc.dump(2) + "\n";
    if(c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if(!f)
        fail_validation("cannot write " + c.out);
    f << text;
}

void write_profile(const RadialProfile& f, const std::string& path)
{
    std::ofstream out(path);
    if(!out)
        fail_validation("cannot write " + path);
    f.write_csv(out);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Weighted Poisson extensions, the sharp extension inequality and the ball model"};
    app.require_subcommand(1, 1);
    Common common;
    ProfileArgs prof;
    SphereArgs sph;

    // extend
    auto* c_extend = app.add_subcommand("extend", "evaluate K f at half-space points or on a grid");
    add_common(c_extend, common);
    add_profile(c_extend, prof);
    std::vector<std::string> at;
    std::vector<double> grid_s, grid_x, dn_at;
    std::string field_out;
    c_extend->add_option("--at", at, "point s,x_N (repeatable)");
    c_extend->add_option("--grid-s", grid_s, "radial grid for a field CSV")->delimiter(',');
    c_extend->add_option("--grid-x", grid_x, "vertical grid for a field CSV")->delimiter(',');
    c_extend->add_option("--field-out", field_out, "CSV path for the grid field");
    c_extend->add_option("--normal-derivative", dn_at, "radii s for lim x_N^m dU/dx_N")->delimiter(',');

    // norm
    auto* c_norm = app.add_subcommand("norm", "L^p norm, extension norm and their ratio");
    add_common(c_norm, common);
    add_profile(c_norm, prof);
    std::optional<double> lorentz_q;
    c_norm->add_option("--lorentz-q", lorentz_q, "also report the L^{p,q} functional of the profile");

    // maximize
    auto* c_max = app.add_subcommand("maximize", "fixed-point search for the maximizer of the ratio");
    add_common(c_max, common);
    std::string init = "gaussian", init_file, profile_out;
    double tol = 1e-8;
    int max_iter = 200;
    c_max->add_option("--init", init, "gaussian | bubble | file")
        ->check(CLI::IsMember({"gaussian", "bubble", "file"}))
        ->capture_default_str();
    c_max->add_option("--init-file", init_file, "initial profile CSV");
    c_max->add_option("--tol", tol)->capture_default_str();
    c_max->add_option("--max-iter", max_iter)->capture_default_str();
    c_max->add_option("--profile-out", profile_out, "CSV path for the final profile");

    // constant
    auto* c_const = app.add_subcommand("constant", "sharp constant and its Theta form");
    add_common(c_const, common);

    // transfer
    auto* c_transfer = app.add_subcommand("transfer", "half-space and ball norms of corresponding data");
    add_common(c_transfer, common);
    add_sphere(c_transfer, sph);
    std::vector<std::string> ball_at;
    std::string plane_out;
    bool no_norms = false;
    c_transfer->add_option("--at-ball", ball_at, "ball point y_1,...,y_N (repeatable)");
    c_transfer->add_option("--plane-out", plane_out, "CSV path for the boundary datum on R^n");
    c_transfer->add_flag("--no-norms", no_norms, "skip the norm comparison");

    // sphere-integrals
    auto* c_si = app.add_subcommand("sphere-integrals", "I1, I2 and their expansions near r = 1");
    add_common(c_si, common);
    std::vector<double> radii = {0.9, 0.95, 0.99};
    c_si->add_option("--r", radii, "radii in [0,1)")->delimiter(',')->capture_default_str();

    // plaplacian
    auto* c_pl = app.add_subcommand("plaplacian", "fractional conformal Laplacian on S^n");
    add_common(c_pl, common);
    add_sphere(c_pl, sph);
    std::vector<double> angles = {0.5};
    bool with_limit = false;
    c_pl->add_option("--angle", angles, "polar angles of the evaluation points")->delimiter(',')->capture_default_str();
    c_pl->add_flag("--with-limit", with_limit, "also report (d_gamma/2gamma) rho^m dV/drho at the boundary");

    // spectrum
    auto* c_spec = app.add_subcommand("spectrum", "weighted harmonics, residuals and Funk-Hecke integrals");
    c_spec->set_help_flag("--help", "Print this help message and exit");
    add_common(c_spec, common);
    std::vector<int> ells = {0, 1, 2};
    double h = 2e-4;
    int order = 2, max_ell = 6;
    std::vector<double> wave_r;
    c_spec->add_option("--ell", ells, "degrees with stored closed forms")->delimiter(',')->capture_default_str();
    c_spec->add_option("--h", h, "difference step")->capture_default_str();
    c_spec->add_option("--order", order, "difference order, 2 or 4")->capture_default_str();
    c_spec->add_option("--max-ell", max_ell, "list eigenvalues up to this degree")->capture_default_str();
    c_spec->add_option("--wave-r", wave_r, "radii for I_ell(r)")->delimiter(',');

    // sobolev-counterexample
    auto* c_sob = app.add_subcommand("sobolev-counterexample", "shifted bump ratio for gamma > 1/2");
    add_common(c_sob, common);
    std::vector<double> shifts = {8, 16, 32, 64};
    c_sob->add_option("--R", shifts, "shifts")->delimiter(',')->capture_default_str();

    // verify
    auto* c_verify = app.add_subcommand("verify", "run self-check suites");
    std::string suite = "all";
    c_verify->add_option("--suite", suite, "suite name or all")->capture_default_str();
    c_verify->add_option("--threads", common.threads)->capture_default_str();
    c_verify->add_option("--out", common.out);

    try {
        app.parse(argc, argv);
    } catch(const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        QuadSpec env = QuadSpec::defaults();
        // explicit flags win over the environment; unchanged flags take the environment value
        QuadSpec base;
        if(common.quad.order_radial == base.order_radial)
            common.quad.order_radial = env.order_radial;
        if(common.quad.order_vertical == base.order_vertical)
            common.quad.order_vertical = env.order_vertical;
        if(common.quad.order_angle == base.order_angle)
            common.quad.order_angle = env.order_angle;
        common.quad.validate();
        set_thread_count(common.threads);

        if(c_verify->parsed()) {
            std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
            json doc = document("verify", nullptr);
            bool ok = true;
            json suites = json::array();
            for(const auto& name : names) {
                SuiteResult r = run_suite(name);
                json checks = json::array();
                for(const auto& c : r.checks)
                    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance},
                                      {"pass", c.pass}, {"detail", c.detail}});
                suites.push_back({{"suite", name}, {"pass", r.pass()}, {"checks", checks}});
                std::cerr << name << ": " << (r.pass() ? "pass" : "FAIL") << " (" << r.seconds << " s)\n";
                ok = ok && r.pass();
            }
            doc["suites"] = suites;
            doc["pass"] = ok;
            emit(doc, common);
            return ok ? 0 : 3;
        }

        Params P = make_params(common);
        json doc;

        if(c_extend->parsed()) {
            doc = document("extend", &P);
            RadialProfile f = make_profile(prof, P);
            json pts = json::array();
            for(const auto& text : at) {
                std::vector<double> x = parse_point(text);
                if(x.size() != 2)
                    fail_validation("--at expects s,x_N");
                pts.push_back({{"s", x[0]}, {"xN", x[1]}, {"value", extend(f, P, x[0], x[1])}});
            }
            doc["points"] = pts;
            if(!grid_s.empty() || !grid_x.empty()) {
                if(grid_s.empty() || grid_x.empty() || field_out.empty())
                    fail_validation("a field needs --grid-s, --grid-x and --field-out");
                HalfSpaceField F = extend_field(f, P, grid_s, grid_x);
                std::ofstream out(field_out);
                if(!out)
                    fail_validation("cannot write " + field_out);
                out << "s,xN,value\n" << std::setprecision(17);
                for(std::size_t i = 0; i < grid_s.size(); i++)
                    for(std::size_t j = 0; j < grid_x.size(); j++)
                        out << grid_s[i] << "," << grid_x[j] << "," << F.at(i, j) << "\n";
                doc["field_csv"] = field_out;
            }
            json dn = json::array();
            for(double s : dn_at)
                dn.push_back({{"s", s}, {"value", weighted_normal_derivative(f, P, s, default_heights())}});
            if(!dn_at.empty())
                doc["normal_derivative"] = dn;
        } else if(c_norm->parsed()) {
            doc = document("norm", &P);
            RadialProfile f = make_profile(prof, P);
            double lp = f.lp_norm(P.p, P.n), ratio = ratio_functional(f, P);
            doc["lp_norm"] = lp;
            doc["extension_norm"] = ratio * lp;
            doc["ratio"] = ratio;
            if(lorentz_q) {
                RadialProfile g = f.is_nonincreasing() && f.min_value() >= 0 ? f : rearrange(f, P.n);
                doc["lorentz"] = {{"q", *lorentz_q}, {"value", lorentz_norm(g, P.p, *lorentz_q, P.n)}};
            }
        } else if(c_max->parsed()) {
            doc = document("maximize", &P);
            RadialProfile f0;
            if(init == "gaussian")
                f0 = gaussian_profile();
            else if(init == "bubble")
                f0 = bubble(1, P);
            else {
                ProfileArgs a;
                a.kind = "file";
                a.file = init_file;
                f0 = make_profile(a, P);
            }
            SolverReport rep = solve_maximizer(P, f0, tol, max_iter);
            doc["best_constant"] = rep.best_constant;
            doc["iterations"] = rep.iterations;
            doc["converged"] = rep.converged;
            doc["termination_reason"] = to_string(rep.termination_reason);
            doc["ratio_history"] = rep.ratio_history;
            if(rep.bubble_fit)
                doc["bubble_fit"] = {{"c", rep.bubble_fit->c},
                                     {"lambda", rep.bubble_fit->lambda},
                                     {"residual", rep.bubble_fit->residual}};
            if(!profile_out.empty()) {
                write_profile(rep.final_profile, profile_out);
                doc["profile_csv"] = profile_out;
            }
        } else if(c_const->parsed()) {
            doc = document("constant", &P);
            if(!P.is_critical())
                fail_validation("the sharp constant is defined at the critical exponent");
            double C = best_constant(P);
            doc["best_constant"] = C;
            doc["theta"] = theta_from_constant(C, P);
        } else if(c_transfer->parsed()) {
            doc = document("transfer", &P);
            SphereSamples ft = make_sphere(sph, P.n);
            RadialProfile f = sphere_to_plane(ft, P);
            json pts = json::array();
            for(const auto& text : ball_at) {
                BallPoint y = BallPoint::make(parse_point(text));
                pts.push_back({{"y", y.coords}, {"value", ball_extend(ft, P, y)}});
            }
            doc["points"] = pts;
            if(!no_norms) {
                double lp = f.lp_norm(P.p, P.n);
                doc["sphere_norm"] = sphere_norm(ft, P);
                doc["plane_norm"] = lp;
                doc["ball_extension_norm"] = ball_field_norm(ft, P);
                doc["halfspace_extension_norm"] = ratio_functional(f, P) * lp;
            }
            if(!plane_out.empty()) {
                write_profile(f, plane_out);
                doc["plane_csv"] = plane_out;
            }
        } else if(c_si->parsed()) {
            doc = document("sphere-integrals", &P);
            json rows = json::array();
            for(double r : radii)
                rows.push_back({{"r", r},
                                {"I1", sphere_kernel_integral_I1(r, P)},
                                {"I1_expansion", puiseux_I1(r, P)},
                                {"I2", sphere_kernel_integral_I2(r, P)},
                                {"I2_expansion", puiseux_I2(r, P)}});
            doc["rows"] = rows;
        } else if(c_pl->parsed()) {
            doc = document("plaplacian", &P);
            SphereSamples ft = make_sphere(sph, P.n);
            json rows = json::array();
            for(double a : angles) {
                json row = {{"angle", a}, {"datum", ft(a)}, {"value", fractional_laplacian_sphere(ft, P, a)}};
                if(with_limit)
                    row["boundary_limit"] = P.d_gamma / (2 * P.gamma) * weighted_normal_derivative_ball(ft, P, a);
                rows.push_back(row);
            }
            doc["rows"] = rows;
            doc["p_gamma_one"] = p_gamma_one(P);
        } else if(c_spec->parsed()) {
            doc = document("spectrum", &P);
            json eig = json::array();
            for(int l = 0; l <= max_ell; l++)
                eig.push_back({{"ell", l}, {"eigenvalue", (l + 2 * P.gamma) * (l + P.n)}});
            doc["eigenvalues"] = eig;
            json res = json::array();
            for(int l : ells) {
                WeightedHarmonic Y = weighted_eigenpair(l, P);
                res.push_back({{"ell", l},
                               {"eigenvalue", Y.eigenvalue},
                               {"residual", eigen_residual(Y, P, hemisphere_stencil(P.n, h, order))}});
            }
            doc["residuals"] = res;
            json reso = json::array();
            for(auto [j, l] : spectrum_resonances(P.n, P.gamma))
                reso.push_back({{"j", j}, {"ell", l}});
            doc["resonances"] = reso;
            json waves = json::array();
            for(double r : wave_r)
                for(int l = 1; l <= max_ell; l++)
                    waves.push_back({{"r", r}, {"ell", l}, {"I", wave_integral(l, r, P, common.quad)}});
            if(!wave_r.empty())
                doc["wave_integrals"] = waves;
        } else if(c_sob->parsed()) {
            doc = document("sobolev-counterexample", &P);
            json rows = json::array();
            for(double R : shifts) {
                BumpNorms b = sobolev_counterexample_norms(R, P);
                rows.push_back({{"R", R}, {"lq", b.lq}, {"gradient", b.gradient}, {"ratio", b.lq / b.gradient}});
            }
            doc["rows"] = rows;
            doc["expected_slope"] = (2 * P.gamma - 1) / (P.n - 2 * P.gamma + 2);
        }
        emit(doc, common);
        return 0;
    } catch(const Error& e) {
        json err = {{"schema", "fracext/1"},
                    {"error", e.what()},
                    {"kind", e.kind() == ErrorKind::validation ? "validation" : "numerical"}};
        if(e.kind() == ErrorKind::numerical)
            err["estimate"] = e.estimate();
        std::cerr << err.dump() << "\n";
        return e.kind() == ErrorKind::validation ? 2 : 3;
    } catch(const std::exception& e) {
        std::cerr << json{{"schema", "fracext/1"}, {"error", e.what()}, {"kind", "numerical"}}.dump() << "\n";
        return 3;
    }
}
