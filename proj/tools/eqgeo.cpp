// eqgeo: batch front end for the equilibrium-manifold geometry library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "eqgeo/errors.hpp"
#include "eqgeo/fgp.hpp"
#include "eqgeo/geodesic.hpp"
#include "eqgeo/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolation = 2;
constexpr int kExitUsage = 64;

struct Globals {
    std::uint64_t seed{20240601};
    std::optional<double> tol;
    std::string out;
};

// Writes to --out when given, stdout otherwise.
void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw eqgeo::InvalidInput("cannot write '" + g.out + "'");
    f << text;
}

eqgeo::Vec to_vec(const std::vector<double>& v) {
    return Eigen::Map<const eqgeo::Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

eqgeo::FgpOptions fgp_options(const Globals& g) {
    eqgeo::FgpOptions o;
    if (g.tol) {
        o.tolerances.geodesic = *g.tol;
        o.tolerances.constancy = *g.tol;
    }
    return o;
}

std::string fixed_width(double x) {
    std::ostringstream os;
    os.setf(std::ios::scientific);
    os.precision(17);
    os << x + 0.0;  // no "-0"
    return os.str();
}

int run_christoffel(const Globals& g, const std::string& path, const std::vector<double>& at) {
    const eqgeo::Subject s = eqgeo::load_subject(path);
    const eqgeo::ImmersionMap& f = s.immersion();
    const eqgeo::Vec x = to_vec(at);
    if (x.size() != f.dim_param()) {
        throw eqgeo::InvalidInput("--at needs " + std::to_string(f.dim_param()) + " coordinates");
    }
    // On the domain edge the difference stencil does not fit; exact metric
    // derivatives still give an independent check there.
    const auto engine = f.domain().clearance(x) > 1e-4 * (1.0 + x.cwiseAbs().maxCoeff())
                            ? eqgeo::DerivativeEngine::CentralDifference
                            : eqgeo::DerivativeEngine::Dual;
    const eqgeo::ChristoffelSymbols numeric = eqgeo::christoffel_from_metric(f, x, {engine, 0.0});
    std::optional<eqgeo::ChristoffelSymbols> closed;
    if (s.manifold) closed = eqgeo::closed_form_christoffel(*s.manifold, x);

    std::ostringstream os;
    os << "k i j closed_form numeric\n";
    const int m = f.dim_param();
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                os << k << ' ' << i << ' ' << j << ' ' << (closed ? fixed_width((*closed)(k, i, j)) : "N/A") << ' '
                   << fixed_width(numeric(k, i, j)) << '\n';
            }
        }
    }
    emit(g, os.str());
    return kExitOk;
}

int run_shoot(const Globals& g, const std::string& path, const std::vector<double>& from,
              const std::vector<double>& velocity, double horizon, double step) {
    const eqgeo::Subject s = eqgeo::load_subject(path);
    eqgeo::IvpOptions opt;
    opt.step = step;
    const eqgeo::Trajectory tr = eqgeo::geodesic_ivp(s.immersion(), to_vec(from), to_vec(velocity), horizon, opt);
    std::ostringstream os;
    eqgeo::write_trajectory_csv(os, s.immersion(), tr);
    emit(g, os.str());
    if (tr.left_domain) std::cerr << "note: trajectory left the parameter domain at t = " << tr.back().time << '\n';
    return kExitOk;
}

int run_residual(const Globals& g, const std::string& path, const std::vector<double>& base, int axis,
                 int points, bool arc_length) {
    const eqgeo::Subject s = eqgeo::load_subject(path);
    const eqgeo::ImmersionMap& f = s.immersion();
    if (axis < 0 || axis >= f.dim_param()) throw eqgeo::InvalidInput("--axis out of range");
    eqgeo::Vec start = to_vec(base);
    if (start.size() != f.dim_param()) {
        throw eqgeo::InvalidInput("--base needs " + std::to_string(f.dim_param()) + " coordinates");
    }
    const eqgeo::Interval dom = f.domain()[axis];
    start[axis] = 0.0;
    eqgeo::ParamCurve curve = eqgeo::ParamCurve::coordinate(start, axis, dom);
    if (arc_length) curve = eqgeo::arc_length_reparametrize(f, curve).curve;
    const auto grid = eqgeo::linspace(curve.domain().lo, curve.domain().hi, points);
    const eqgeo::ResidualReport r = eqgeo::geodesic_residual(f, curve, grid);
    std::ostringstream os;
    eqgeo::write_residual_csv(os, r);
    emit(g, os.str());
    if (g.tol) return r.is_pregeodesic(*g.tol) ? kExitOk : kExitViolation;
    return kExitOk;
}

int run_connect(const Globals& g, const std::string& path, const std::vector<double>& from,
                const std::vector<double>& to, double step) {
    const eqgeo::Subject s = eqgeo::load_subject(path);
    eqgeo::BvpOptions opt;
    opt.step = step;
    const eqgeo::BvpResult r = eqgeo::geodesic_bvp(s.immersion(), to_vec(from), to_vec(to), opt);
    std::ostringstream os;
    eqgeo::write_trajectory_csv(os, s.immersion(), r.trajectory);
    emit(g, os.str());
    std::cerr << "length " << fixed_width(r.length) << " endpoint_error " << fixed_width(r.endpoint_error)
              << " iterations " << r.iterations << '\n';
    return kExitOk;
}

int run_fgp(const Globals& g, const std::string& path) {
    const eqgeo::Subject s = eqgeo::load_subject(path);
    eqgeo::FgpReport report;
    if (s.manifold) {
        report = eqgeo::check_fgp(*s.manifold, fgp_options(g));
    } else if (s.counterexample) {
        report = eqgeo::check_fgp(*s.counterexample, fgp_options(g));
    } else {
        throw eqgeo::InvalidInput("fgp check needs an equilibrium manifold, economy or counterexample");
    }
    eqgeo::json j = eqgeo::to_json(report);
    j["seed"] = g.seed;
    emit(g, eqgeo::render(j));
    for (const auto& note : report.notes) std::cerr << "note: " << note << '\n';
    return report.theorem_violation ? kExitViolation : kExitOk;
}

int run_corollary(const Globals& g, const std::string& path) {
    const eqgeo::Subject s = eqgeo::load_subject(path);
    eqgeo::DashboardOptions opt;
    opt.seed = g.seed;
    opt.fgp = fgp_options(g);
    eqgeo::CorollaryDashboard d;
    if (s.manifold) {
        d = eqgeo::corollary_dashboard(*s.manifold, s.economy ? &*s.economy : nullptr, opt);
    } else if (s.counterexample) {
        d = eqgeo::corollary_dashboard(*s.counterexample, opt);
    } else {
        throw eqgeo::InvalidInput("corollary needs an equilibrium manifold, economy or counterexample");
    }
    emit(g, eqgeo::render(eqgeo::to_json(d)));
    return d.exit_code();
}

eqgeo::Economy economy_of(const std::string& path) {
    return eqgeo::parse_economy(eqgeo::load_json(path));
}

int run_economy_solve(const Globals& g, const std::string& path, std::optional<double> share) {
    const eqgeo::Economy e = economy_of(path);
    eqgeo::PriceIncomePoint p;
    if (share) {
        p = eqgeo::solve_price_income(e, *share);
    } else if (e.endowment1) {
        p = eqgeo::solve_endowment(e, *e.endowment1);
    } else {
        throw eqgeo::InvalidInput("economy solve needs --share or an endowment1 entry");
    }
    emit(g, eqgeo::render(eqgeo::to_json(p)));
    return kExitOk;
}

int run_economy_curve(const Globals& g, const std::string& path, double lo, double hi, int n) {
    const eqgeo::Economy e = economy_of(path);
    const eqgeo::SampledBCurve c = eqgeo::sample_B_curve(e, eqgeo::linspace(lo, hi, n));
    emit(g, eqgeo::render(eqgeo::to_json(c)));
    return kExitOk;
}

int run_economy_count(const Globals& g, const std::string& path, const std::vector<double>& endowment,
                      int resolution) {
    const eqgeo::Economy e = economy_of(path);
    eqgeo::CountOptions opt;
    opt.resolution = resolution;
    const eqgeo::EquilibriumSet set = endowment.empty() ? eqgeo::count_equilibria(e, opt)
                                                        : eqgeo::count_equilibria(e, to_vec(endowment), opt);
    emit(g, eqgeo::render(eqgeo::to_json(set)));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometry of equilibrium manifolds: connections, geodesics and coordinate-curve checks"};
    app.require_subcommand(1);
    Globals g;
    double tol = 0.0;
    app.add_option("--seed", g.seed, "Sampling seed")->capture_default_str();
    auto* tol_opt = app.add_option("--tol", tol, "Geodesic and constancy tolerance");
    app.add_option("--out", g.out, "Write output to this file instead of stdout");

    std::function<int()> action;
    std::string path;

    auto* chr = app.add_subcommand("christoffel", "Closed-form and numeric connection at a point");
    std::vector<double> at;
    chr->add_option("manifold", path, "Manifold or economy JSON")->required();
    chr->add_option("--at", at, "Point t,a1,...")->delimiter(',')->required();
    chr->callback([&] { action = [&] { return run_christoffel(g, path, at); }; });

    auto* geo = app.add_subcommand("geodesic", "Geodesic integration and diagnostics");
    geo->require_subcommand(1);
    std::vector<double> from, velocity, to, base;
    double horizon = 1.0, step = 1e-3;
    int axis = 0, points = 201;
    bool arc = false;

    auto* shoot = geo->add_subcommand("shoot", "Integrate from a point and velocity; trajectory CSV");
    shoot->add_option("manifold", path)->required();
    shoot->add_option("--from", from)->delimiter(',')->required();
    shoot->add_option("--velocity", velocity)->delimiter(',')->required();
    shoot->add_option("--horizon", horizon)->capture_default_str();
    shoot->add_option("--step", step)->capture_default_str();
    shoot->callback([&] { action = [&] { return run_shoot(g, path, from, velocity, horizon, step); }; });

    auto* resid = geo->add_subcommand("residual", "Residual of a coordinate curve; residual CSV");
    resid->add_option("manifold", path)->required();
    resid->add_option("--base", base, "Point the curve passes through")->delimiter(',')->required();
    resid->add_option("--axis", axis, "Coordinate that varies")->capture_default_str();
    resid->add_option("--points", points)->capture_default_str();
    resid->add_flag("--arc-length", arc, "Reparametrize by arc length first");
    resid->callback([&] { action = [&] { return run_residual(g, path, base, axis, points, arc); }; });

    auto* conn = geo->add_subcommand("connect", "Shooting BVP between two points; trajectory CSV");
    conn->add_option("manifold", path)->required();
    conn->add_option("--from", from)->delimiter(',')->required();
    conn->add_option("--to", to)->delimiter(',')->required();
    conn->add_option("--step", step)->capture_default_str();
    conn->callback([&] { action = [&] { return run_connect(g, path, from, to, step); }; });

    auto* fgp = app.add_subcommand("fgp", "Coordinate-curve geodesic checks");
    fgp->require_subcommand(1);
    auto* check = fgp->add_subcommand("check", "Report JSON for a manifold or economy");
    check->add_option("file", path)->required();
    check->callback([&] { action = [&] { return run_fgp(g, path); }; });

    auto* cor = app.add_subcommand("corollary", "Dashboard JSON: constancy, curvature, geodesics, counts");
    cor->add_option("file", path)->required();
    cor->callback([&] { action = [&] { return run_corollary(g, path); }; });

    auto* eco = app.add_subcommand("economy", "Exchange-economy equilibria");
    eco->require_subcommand(1);
    double share = 0.0, lo = 0.05, hi = 0.95;
    int grid = 19, resolution = 4001;
    std::vector<double> endowment;

    auto* solve = eco->add_subcommand("solve", "Equilibrium at an income share or at the endowment");
    solve->add_option("economy", path)->required();
    auto* share_opt = solve->add_option("--share", share, "Consumer 1 income share in (0, 1)");
    solve->callback([&] {
        action = [&] {
            return run_economy_solve(g, path, share_opt->count() ? std::optional<double>(share) : std::nullopt);
        };
    });

    auto* curve = eco->add_subcommand("curve", "Price-income curve samples with derivatives");
    curve->add_option("economy", path)->required();
    curve->add_option("--from", lo)->capture_default_str();
    curve->add_option("--to", hi)->capture_default_str();
    curve->add_option("--grid", grid)->capture_default_str();
    curve->callback([&] { action = [&] { return run_economy_curve(g, path, lo, hi, grid); }; });

    auto* count = eco->add_subcommand("count", "Equilibria of a two-good economy by price scan");
    count->add_option("economy", path)->required();
    count->add_option("--endowment", endowment)->delimiter(',');
    count->add_option("--resolution", resolution)->capture_default_str();
    count->callback([&] { action = [&] { return run_economy_count(g, path, endowment, resolution); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }
    if (tol_opt->count()) g.tol = tol;

    try {
        return action();
    } catch (const eqgeo::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
