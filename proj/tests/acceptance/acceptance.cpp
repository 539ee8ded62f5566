// Acceptance run: one line per criterion, nonzero exit if any fails.
// usage: eqgeo_acceptance <path to eqgeo cli> <fixture dir>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eqgeo/economy.hpp"
#include "eqgeo/fgp.hpp"
#include "eqgeo/geodesic.hpp"
#include "eqgeo/io.hpp"
#include "test_support.hpp"

using namespace eqgeo;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kChristoffelTol = 1e-6;
constexpr double kSpotTol = 1e-10;
constexpr double kGeodesicTol = 1e-8;
constexpr double kClearFailure = 1e-3;
constexpr double kConstancyTol = 1e-6;
constexpr double kMovingPrice = 1e-2;
constexpr double kRemark1VariationTol = 1e-10;
constexpr double kFlatTol = 1e-5;
constexpr double kSpreadMin = 0.1;
constexpr double kDriftRatio = 4.0;
constexpr double kDriftRatioSlack = 0.2;
constexpr double kGreatCircleTol = 1e-6;
constexpr double kPriceTol = 1e-10;
constexpr double kWalrasTol = 1e-10;
constexpr double kMiddleRootTol = 1e-12;
constexpr double kOracleResolution = 1e-4;
constexpr double kFlatBvpTol = 1e-8;
constexpr double kConstantBvpTol = 1e-6;

std::string g_cli;
std::string g_fixtures;

std::string fx(const std::string& name) { return g_fixtures + "/" + name; }

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

struct Outcome {
    bool pass{false};
    std::string measured;
    std::string tolerance;
    std::vector<std::string> notes;
};

struct CliRun {
    int exit_code{-1};
    std::string out;
};

CliRun run_cli(const std::string& args) {
    CliRun r;
    const std::string cmd = "'" + g_cli + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

const std::vector<std::string> kEquilibriumFixtures = {
    "identical_cd.json",   "hetero_cd.json",   "ces_mirror.json", "affine_price_l2.json",
    "affine_price_flat_income.json", "analytic_l4.json", "constant_price.json"};

std::vector<Vec> interior_points(const Box& box, std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.02, 0.98);
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) {
        Vec frac(box.dim());
        for (int k = 0; k < box.dim(); ++k) frac[k] = u(rng);
        pts.push_back(box.lerp(frac));
    }
    return pts;
}

Outcome christoffel_oracle() {
    Outcome o;
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (const char* name : {"affine_price_l2.json", "identical_cd.json", "analytic_l4.json"}) {
        const auto m = *load_subject(fx(name)).manifold;
        double local = 0.0;
        for (const Vec& x : interior_points(m.immersion().domain(), rng, 100)) {
            const auto closed = closed_form_christoffel(m, x);
            const auto numeric =
                christoffel_from_metric(m.immersion(), x, {DerivativeEngine::CentralDifference, 0.0});
            local = std::max(local, test_support::mixed_discrepancy(closed, numeric));
        }
        o.notes.push_back(std::string(name) + ": " + sci(local));
        worst = std::max(worst, local);
    }
    const auto affine = *load_subject(fx("affine_price_l2.json")).manifold;
    const double spot = closed_form_christoffel(affine, Vec{{0.0, 0.0}})(1, 0, 1);
    o.pass = worst <= kChristoffelTol && std::abs(spot - 0.4) <= kSpotTol;
    o.measured = "max discrepancy " + sci(worst) + ", Gamma^1_01(0,0) = " + test_support::num(spot);
    o.tolerance = sci(kChristoffelTol) + ", spot " + sci(kSpotTol);
    return o;
}

Outcome coordinate_curves_l2() {
    Outcome o;
    double alpha_worst = 0.0;
    for (const auto& name : kEquilibriumFixtures) {
        const auto m = *load_subject(fx(name)).manifold;
        const Interval td = m.t_domain();
        const Interval ad = m.alpha_range();
        for (double t : linspace(td.lo + 0.05 * td.width(), td.hi - 0.05 * td.width(), 5)) {
            for (const auto& line : alpha_lines(m.goods(), t, ad)) {
                const auto r = geodesic_residual(m.immersion(), line, linspace(ad.lo, ad.hi, 41));
                alpha_worst = std::max(alpha_worst, r.max_normal);
            }
        }
    }
    const auto affine = *load_subject(fx("affine_price_l2.json")).manifold;
    const auto tcurve = coordinate_curves(2, affine.t_domain()).front();
    const auto grid = linspace(affine.t_domain().lo, affine.t_domain().hi, 101);
    const double ambient = ambient_normal_test(affine.immersion(), tcurve, grid).max_deviation;
    const double normal = geodesic_residual(affine.immersion(), tcurve, grid).max_normal;

    const auto flat = check_fgp(*load_subject(fx("affine_price_flat_income.json")).manifold);
    o.notes.push_back("observation: p = t + 2 with w = 1 gives t-curve residual " + sci(flat.max_residual()) +
                      " (straight lines)");

    o.pass = alpha_worst <= kGeodesicTol && ambient >= kClearFailure && normal >= kClearFailure;
    o.measured = "alpha-line residual " + sci(alpha_worst) + ", t-curve ambient " + sci(ambient) +
                 ", t-curve normal " + sci(normal);
    o.tolerance = "<= " + sci(kGeodesicTol) + ", >= " + sci(kClearFailure);
    return o;
}

Outcome theorem_direction() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    struct Case {
        std::string label;
        FgpReport report;
    };
    std::vector<Case> cases;
    for (int i = 0; i < 20; ++i) {
        const int goods = 2 + i % 3;
        const auto m = EquilibriumManifoldM2::assemble(test_support::random_analytic_curve(rng, goods, i % 4 == 0));
        cases.push_back({"random#" + std::to_string(i) + " (L=" + std::to_string(goods) + ")", check_fgp(m)});
    }
    for (const char* name : {"identical_cd.json", "hetero_cd.json"}) {
        cases.push_back({name, check_fgp(*load_subject(fx(name)).manifold)});
    }
    int exceptions = 0;
    for (const auto& c : cases) {
        const double var = *c.report.price_variation;
        const double res = c.report.max_residual();
        bool bad = false;
        if (res <= kGeodesicTol && var > kConstancyTol) bad = true;
        if (var >= kMovingPrice && res < kClearFailure) bad = true;
        if (bad) {
            ++exceptions;
            o.notes.push_back("exception " + c.label + ": max residual " + sci(res) + ", price variation " +
                              sci(var));
        }
    }
    o.pass = exceptions == 0;
    o.measured = std::to_string(exceptions) + " exceptions in " + std::to_string(cases.size()) + " manifolds";
    o.tolerance = "0 exceptions";
    return o;
}

Outcome remark1() {
    Outcome o;
    const auto r = check_fgp(*load_subject(fx("remark1.json")).counterexample);
    const CliRun cli = run_cli("fgp check '" + fx("remark1.json") + "'");
    const bool flagged = cli.out.find("\"theorem_violation\": true") != std::string::npos;
    o.pass = r.max_residual() <= kGeodesicTol && std::abs(*r.price_variation - 1.0) <= kRemark1VariationTol &&
             !*r.positivity_ok && r.theorem_violation && cli.exit_code == 2 && flagged;
    o.measured = "max residual " + sci(r.max_residual()) + ", variation " + test_support::num(*r.price_variation) +
                 ", positivity " + (*r.positivity_ok ? "ok" : "failed") + ", cli exit " +
                 std::to_string(cli.exit_code);
    o.tolerance = sci(kGeodesicTol) + ", 1 +- " + sci(kRemark1VariationTol) + ", exit 2";
    return o;
}

Outcome remark2() {
    Outcome o;
    const ImmersionMap f = load_subject(fx("remark2.json")).counterexample->immersion;
    std::mt19937_64 rng(20240601);
    std::normal_distribution<double> gauss;
    int samples = 0;
    double worst = 0.0;
    for (const Vec& x : interior_points(f.domain(), rng, 64)) {
        const Vec u{{gauss(rng), gauss(rng)}};
        const Vec v{{gauss(rng), gauss(rng)}};
        if (std::abs(u.normalized().dot(v.normalized())) > 0.99) continue;
        worst = std::max(worst, std::abs(sectional_curvature(f, x, u, v).sectional));
        ++samples;
    }
    std::vector<Vec> grid;
    for (double t : linspace(f.domain()[0].lo, f.domain()[0].hi, 11)) {
        for (double a : linspace(f.domain()[1].lo, f.domain()[1].hi, 5)) grid.push_back(Vec{{t, a}});
    }
    const double spread = normal_direction_spread(f, grid);
    o.pass = samples >= 50 && worst <= kFlatTol && spread > kSpreadMin;
    o.measured = "max |K| " + sci(worst) + " over " + std::to_string(samples) + " samples, normal spread " +
                 sci(spread) + " rad";
    o.tolerance = sci(kFlatTol) + ", >= 50 samples, spread > " + sci(kSpreadMin);
    return o;
}

Outcome integrator_order() {
    Outcome o;
    const ImmersionMap f = load_subject(fx("sphere.json")).immersion();
    const Vec x0{{1.0, 0.0}}, v0{{0.6, 1.1}};
    auto drift = [&](double h) { return energy_drift(f, geodesic_ivp(f, x0, v0, kPi, {h, {}})); };
    std::vector<double> steps{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> drifts;
    for (double h : steps) drifts.push_back(drift(h));
    std::string ratios;
    for (size_t i = 1; i < steps.size(); ++i) {
        ratios += (i > 1 ? ", " : "") + sci(drifts[i - 1] / drifts[i]);
    }
    o.notes.push_back("drift ratios for steps 0.1 -> 0.0125: " + ratios);
    const double ratio = drifts[1] / drifts[2];

    const double beta = 0.5;
    const auto tr = geodesic_ivp(f, Vec{{kPi / 2, 0.0}}, Vec{{-std::sin(beta), std::cos(beta)}}, kPi, {1e-3, {}});
    double dev = 0.0;
    for (const auto& st : tr.states) {
        const double s = st.time;
        const Vec exact{{std::cos(s), std::sin(s) * std::cos(beta), std::sin(s) * std::sin(beta)}};
        dev = std::max(dev, (f.eval(st.x) - exact).norm());
    }
    o.pass = std::abs(ratio - kDriftRatio) <= kDriftRatioSlack * kDriftRatio && dev <= kGreatCircleTol &&
             !tr.left_domain;
    o.measured = "drift ratio (0.05 -> 0.025) " + sci(ratio) + ", great-circle deviation " + sci(dev);
    o.tolerance = "4 +- 20%, " + sci(kGreatCircleTol);
    return o;
}

Outcome economy_solver() {
    Outcome o;
    const Economy hetero = *load_subject(fx("hetero_cd.json")).economy;
    const Economy ces = *load_subject(fx("ces_mirror.json")).economy;
    // Good-1 clearing with incomes p_1 and 1: 0.3 + 0.6 / p_1 = 1.
    const double oracle = 0.6 / (1.0 - 0.3);
    const double p1 = solve_endowment(hetero, *hetero.endowment1).prices[0];
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> price(0.1, 5.0), share(0.01, 0.99), scale(0.1, 10.0);
    double walras = 0.0, homog = 0.0;
    for (const Economy* e : {&hetero, &ces}) {
        for (int i = 0; i < 100; ++i) {
            const Vec p{{price(rng), price(rng)}};
            const double w1 = share(rng) * p.dot(e->resources);
            const double lambda = scale(rng);
            const Vec z = excess_demand(*e, p, w1);
            walras = std::max(walras, std::abs(p.dot(z)));
            homog = std::max(homog, (excess_demand(*e, lambda * p, lambda * w1) - z).norm());
        }
    }
    const double err = std::abs(p1 - oracle);
    o.pass = err <= kPriceTol && walras <= kWalrasTol && homog <= kWalrasTol;
    o.measured = "|p1 - 6/7| " + sci(err) + ", Walras " + sci(walras) + ", homogeneity " + sci(homog);
    o.tolerance = sci(kPriceTol) + ", " + sci(kWalrasTol);
    return o;
}

// Good-1 excess demand of the two-good CES economy with p_2 = 1, written out
// from the first-order conditions.
double ces_excess1(const Economy& e, const Vec& endowment1, double p1) {
    double z = -e.resources[0];
    const Vec r2 = e.resources - endowment1;
    const std::array<Vec, 2> holdings{endowment1, r2};
    for (size_t i = 0; i < 2; ++i) {
        const Preference& pref = e.preferences[i];
        const double w = p1 * holdings[i][0] + holdings[i][1];
        const double ratio = std::pow((pref.alpha[0] / p1) / pref.alpha[1], 1.0 / (1.0 - pref.rho));
        z += w / (p1 + 1.0 / ratio);
    }
    return z;
}

Outcome multiplicity() {
    Outcome o;
    const Economy ces = *load_subject(fx("ces_mirror.json")).economy;
    const EquilibriumSet set = count_equilibria(ces);
    std::vector<double> oracle_roots;
    const double lo = std::log(1e-3), hi = std::log(1e3);
    const auto n = static_cast<long>(std::ceil((hi - lo) / kOracleResolution));
    double prev = ces_excess1(ces, *ces.endowment1, std::exp(lo));
    for (long i = 1; i <= n; ++i) {
        const double s = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
        const double z = ces_excess1(ces, *ces.endowment1, std::exp(s));
        if (z == 0.0 || (prev < 0) != (z < 0)) oracle_roots.push_back(std::exp(s));
        prev = z;
    }
    bool match = oracle_roots.size() == set.roots.size();
    double worst_gap = 0.0;
    for (size_t i = 0; match && i < oracle_roots.size(); ++i) {
        worst_gap = std::max(worst_gap, std::abs(std::log(oracle_roots[i] / set.roots[i].prices[0])));
    }
    match = match && worst_gap <= 2 * kOracleResolution;
    const double middle = set.roots.size() == 3 ? std::abs(set.roots[1].prices[0] - 1.0) : INFINITY;
    o.pass = set.count == 3 && middle <= kMiddleRootTol && match;
    o.measured = "count " + std::to_string(set.count) + ", |middle - 1| " + sci(middle) + ", oracle count " +
                 std::to_string(oracle_roots.size()) + ", max log gap " + sci(worst_gap);
    o.tolerance = "3, " + sci(kMiddleRootTol) + ", grid " + sci(kOracleResolution);
    return o;
}

Outcome bvp_sanity() {
    Outcome o;
    const ImmersionMap plane = load_subject(fx("flat_plane.json")).immersion();
    const Vec a{{-3.0, 1.5}}, b{{2.5, -4.0}};
    const double flat_err = std::abs(geodesic_bvp(plane, a, b).length - (b - a).norm());

    const auto m = *load_subject(fx("constant_price.json")).manifold;
    const Vec c{{0.3, 0.2, 0.4}}, d{{0.8, 0.9, -0.1}};
    const double chord = (m.immersion().eval(c) - m.immersion().eval(d)).norm();
    const double e_err = std::abs(geodesic_bvp(m.immersion(), c, d).length - chord);
    o.pass = flat_err <= kFlatBvpTol && e_err <= kConstantBvpTol;
    o.measured = "flat length error " + sci(flat_err) + ", constant-price length error " + sci(e_err);
    o.tolerance = sci(kFlatBvpTol) + ", " + sci(kConstantBvpTol);
    return o;
}

Outcome determinism() {
    Outcome o;
    const std::string args = "--seed 314159 corollary '" + fx("ces_mirror.json") + "'";
    const CliRun first = run_cli(args);
    const CliRun second = run_cli(args);
    const CliRun other = run_cli("--seed 271828 corollary '" + fx("ces_mirror.json") + "'");
    o.notes.push_back(std::string("different seed changes output: ") + (other.out != first.out ? "yes" : "no"));
    o.pass = !first.out.empty() && first.out == second.out && first.exit_code == second.exit_code &&
             first.exit_code >= 0;
    o.measured = std::to_string(first.out.size()) + " bytes, identical " + (first.out == second.out ? "yes" : "no") +
                 ", exit " + std::to_string(first.exit_code);
    o.tolerance = "byte-identical";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: eqgeo_acceptance <eqgeo cli> <fixture dir>\n";
        return 64;
    }
    g_cli = argv[1];
    g_fixtures = argv[2];

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"christoffel-oracle", christoffel_oracle},
        {"coordinate-curves-l2", coordinate_curves_l2},
        {"theorem-direction", theorem_direction},
        {"positivity-counterexample", remark1},
        {"flat-non-hyperplane", remark2},
        {"integrator-order", integrator_order},
        {"economy-solver", economy_solver},
        {"multiplicity", multiplicity},
        {"bvp-sanity", bvp_sanity},
        {"determinism", determinism},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.measured = std::string("error: ") + e.what();
            o.tolerance = "-";
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << (i + 1) << " " << criteria[i].first << ": " << o.measured
                  << " (tol " << o.tolerance << ")\n";
        for (const auto& n : o.notes) std::cout << "       " << n << "\n";
    }
    std::cout << (criteria.size() - static_cast<size_t>(failures)) << "/" << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
