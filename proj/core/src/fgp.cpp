#include "eqgeo/fgp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "eqgeo/errors.hpp"

namespace eqgeo {

std::string to_string(FgpVerdict verdict) {
    return verdict == FgpVerdict::Holds ? "FGP_HOLDS" : "FGP_FAILS";
}

std::string to_string(Consistency consistency) {
    switch (consistency) {
        case Consistency::Consistent: return "CONSISTENT";
        case Consistency::Inconsistent: return "INCONSISTENT";
        case Consistency::NotAsserted: return "NOT_ASSERTED";
    }
    return "NOT_ASSERTED";
}

double price_constancy(const PriceIncomeCurve& curve, const std::vector<double>& t_grid) {
    double worst = 0.0;
    for (double t : t_grid) {
        for (int j = 0; j < curve.price_count(); ++j) worst = std::max(worst, std::abs(curve.price(j, t).d1));
    }
    return worst;
}

double FgpReport::max_residual() const {
    double m = 0.0;
    for (const auto& c : per_curve) m = std::max(m, c.max_normal);
    return m;
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// Arc-length residual of every t-curve through 0, e_1, …, e_{L−1}.
FgpReport coordinate_curve_residuals(const ImmersionMap& f, int goods, Interval t_domain,
                                     const FgpOptions& options) {
    FgpReport report;
    report.manifold = f.name();
    const auto bases = coordinate_base_points(goods);
    const auto curves = coordinate_curves(goods, t_domain);
    for (size_t i = 0; i < curves.size(); ++i) {
        const ArcLengthCurve unit = arc_length_reparametrize(f, curves[i]);
        const auto grid = linspace(0.0, unit.length, options.residual_points);
        const ResidualReport r = geodesic_residual(f, unit.curve, grid);
        report.per_curve.push_back({bases[i], r.max_normal, unit.length});
    }
    const bool all = std::all_of(report.per_curve.begin(), report.per_curve.end(), [&](const auto& c) {
        return c.max_normal <= options.tolerances.geodesic;
    });
    report.verdict = all ? FgpVerdict::Holds : FgpVerdict::Fails;
    return report;
}

void judge_prices(FgpReport& report, const PriceIncomeCurve& curve, const FgpOptions& options) {
    const auto grid = linspace(curve.domain().lo, curve.domain().hi, options.constancy_points);
    report.price_variation = price_constancy(curve, grid);
    const PositivityAudit audit = audit_positivity(curve, options.constancy_points);
    report.positivity_ok = audit.ok;

    const auto& tol = options.tolerances;
    if (report.verdict == FgpVerdict::Holds && *report.price_variation > tol.constancy) {
        report.theorem_violation = true;
        if (!audit.ok) {
            report.notes.push_back("coordinate curves are geodesics but prices vary; price positivity fails at t = " +
                                   fmt(*audit.first_violation) +
                                   ", and constancy is only implied for positive prices");
        } else {
            report.notes.push_back("coordinate curves are geodesics, prices are positive, yet price variation is " +
                                   fmt(*report.price_variation));
        }
    }
    if (report.verdict == FgpVerdict::Fails && report.max_residual() < tol.failure) {
        report.notes.push_back("largest residual " + fmt(report.max_residual()) +
                               " lies between the geodesic and failure thresholds");
    }
}

}  // namespace

FgpReport check_fgp(const EquilibriumManifoldM2& manifold, const FgpOptions& options) {
    FgpReport report =
        coordinate_curve_residuals(manifold.immersion(), manifold.goods(), manifold.t_domain(), options);
    judge_prices(report, manifold.curve(), options);
    return report;
}

FgpReport check_fgp(const CounterexampleManifold& manifold, const FgpOptions& options) {
    const int goods = manifold.immersion.dim_param();
    FgpReport report = coordinate_curve_residuals(manifold.immersion, goods, manifold.t_domain, options);
    if (manifold.parametrized) {
        judge_prices(report, manifold.parametrized->curve(), options);
    } else {
        report.notes.push_back("not an equilibrium manifold: price fields do not apply");
    }
    return report;
}

EquilibriumManifoldM2 manifold_from_economy(const Economy& economy, Interval shares, int grid_points) {
    SampledBCurve b = sample_B_curve(economy, linspace(shares.lo, shares.hi, grid_points));
    return EquilibriumManifoldM2::assemble(std::move(b.curve));
}

int CorollaryDashboard::exit_code() const {
    return fgp.theorem_violation || consistency == Consistency::Inconsistent ? 2 : 0;
}

namespace {

std::vector<CurvatureSample> sample_curvature(const ImmersionMap& f, std::mt19937_64& rng, int samples) {
    std::uniform_real_distribution<double> unit(0.02, 0.98);
    std::normal_distribution<double> gauss;
    const int m = f.dim_param();
    std::vector<CurvatureSample> out;
    out.reserve(static_cast<size_t>(samples));
    while (static_cast<int>(out.size()) < samples) {
        Vec frac(m), u(m), v(m);
        for (int i = 0; i < m; ++i) frac[i] = unit(rng);
        for (int i = 0; i < m; ++i) u[i] = gauss(rng);
        for (int i = 0; i < m; ++i) v[i] = gauss(rng);
        const Vec x = f.domain().lerp(frac);
        // Nearly parallel draws are discarded rather than evaluated.
        const double c = u.dot(v) / (u.norm() * v.norm());
        if (!(std::abs(c) < 0.99)) continue;
        const CurvatureReport k = sectional_curvature(f, x, u, v);
        out.push_back({x, u, v, k.sectional});
    }
    return out;
}

void fill_curvature(CorollaryDashboard& d, const ImmersionMap& f, std::mt19937_64& rng,
                    const DashboardOptions& options) {
    d.curvature = sample_curvature(f, rng, std::max(50, options.curvature_samples));
    for (const auto& s : d.curvature) d.curvature_max_abs = std::max(d.curvature_max_abs, std::abs(s.sectional));
}

}  // namespace

CorollaryDashboard corollary_dashboard(const EquilibriumManifoldM2& manifold, const Economy* economy,
                                       const DashboardOptions& options) {
    CorollaryDashboard d;
    d.subject = manifold.immersion().name();
    d.seed = options.seed;
    std::mt19937_64 rng(options.seed);
    const auto& tol = options.fgp.tolerances;

    const Interval td = manifold.t_domain();
    d.price_constancy = price_constancy(manifold.curve(), linspace(td.lo, td.hi, options.fgp.constancy_points));
    fill_curvature(d, manifold.immersion(), rng, options);
    d.fgp = check_fgp(manifold, options.fgp);

    if (economy && economy->goods == 2) {
        std::uniform_real_distribution<double> frac(0.05, 0.95);
        std::vector<FiberCount> counts;
        for (int i = 0; i < std::max(5, options.fiber_samples); ++i) {
            Vec omega(economy->goods);
            for (int l = 0; l < economy->goods; ++l) omega[l] = frac(rng) * economy->resources[l];
            const EquilibriumSet set = count_equilibria(*economy, omega, options.counts);
            counts.push_back({omega, set.count, set.possibly_censored, set.scan_failure});
        }
        d.equilibrium_counts = std::move(counts);
    } else if (economy) {
        d.observations.push_back("equilibrium counts need a two-good economy");
    } else {
        d.observations.push_back("analytic manifold: equilibrium counts not applicable");
    }

    const bool flat = d.curvature_max_abs <= tol.flatness;
    const bool fgp = d.fgp.verdict == FgpVerdict::Holds;
    bool unique = true;
    if (d.equilibrium_counts) {
        for (const auto& c : *d.equilibrium_counts) unique = unique && c.count == 1;
    }

    if (*d.price_constancy <= tol.constancy) {
        // Constant prices imply flatness, the coordinate-geodesic property and
        // uniqueness; these are the only directions checked.
        d.consistency = flat && fgp && unique ? Consistency::Consistent : Consistency::Inconsistent;
        if (!flat) d.observations.push_back("constant price but |K| reaches " + fmt(d.curvature_max_abs));
        if (!fgp) d.observations.push_back("constant price but a coordinate curve is not geodesic");
        if (!unique) d.observations.push_back("constant price but some fiber has several equilibria");
    } else {
        d.consistency = Consistency::NotAsserted;
        d.observations.push_back("price varies (" + fmt(*d.price_constancy) +
                                 "); remaining items are reported without assertion");
        if (fgp) d.observations.push_back("coordinate curves are geodesic although price varies");
        if (flat) d.observations.push_back("sampled curvature vanishes although price varies");
        if (d.equilibrium_counts && unique) {
            d.observations.push_back("every sampled fiber has a unique equilibrium although price varies");
        }
    }
    return d;
}

CorollaryDashboard corollary_dashboard(const CounterexampleManifold& manifold, const DashboardOptions& options) {
    if (manifold.parametrized) {
        return corollary_dashboard(*manifold.parametrized, nullptr, options);
    }
    CorollaryDashboard d;
    d.subject = manifold.immersion.name();
    d.seed = options.seed;
    std::mt19937_64 rng(options.seed);
    fill_curvature(d, manifold.immersion, rng, options);
    d.fgp = check_fgp(manifold, options.fgp);
    d.observations.push_back("not an equilibrium manifold: price constancy and counts not applicable");
    return d;
}

}  // namespace eqgeo
