#include "eqgeo/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "eqgeo/errors.hpp"
#include "eqgeo/reference_manifolds.hpp"

namespace eqgeo {

namespace {

Vec vec_from(const json& j, const char* what) {
    if (!j.is_array()) throw InvalidInput(std::string(what) + ": expected an array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

Interval interval_from(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) throw InvalidInput(std::string(what) + ": expected [lo, hi]");
    const Interval r{j[0].get<double>(), j[1].get<double>()};
    if (!(r.lo < r.hi)) throw InvalidInput(std::string(what) + ": empty interval");
    return r;
}

CurveExpression expression_from(const json& j) {
    if (j.is_number()) return CurveExpression::constant(j.get<double>());
    if (j.is_string()) return CurveExpression::parse(j.get<std::string>());
    throw InvalidInput("expected an expression string or a number");
}

PriceIncomeCurve::Source source_from(const json& j) {
    const CurveExpression e = expression_from(j);
    const CurveExpression d1 = e.derivative();
    const CurveExpression d2 = d1.derivative();
    return [e, d1, d2](double t) { return CurveJet{e(t), d1(t), d2(t)}; };
}

Interval t_domain_of(const json& j, Interval fallback) {
    if (j.contains("domain") && j["domain"].contains("t")) return interval_from(j["domain"]["t"], "domain.t");
    return fallback;
}

Interval alpha_domain_of(const json& j) {
    if (j.contains("domain") && j["domain"].contains("alpha")) {
        return interval_from(j["domain"]["alpha"], "domain.alpha");
    }
    return {-0.5, 1.5};
}

Preference preference_from(const json& j) {
    const std::string kind = j.at("preference").get<std::string>();
    const Vec alpha = vec_from(j.at("alpha"), "alpha");
    if (kind == "cobb_douglas") return Preference::cobb_douglas(alpha);
    if (kind == "ces") return Preference::ces(alpha, j.at("rho").get<double>());
    throw InvalidInput("unknown preference '" + kind + "'");
}

bool is_economy(const json& j) {
    return j.value("kind", std::string()) == "economy" || j.contains("consumers");
}

}  // namespace

const ImmersionMap& Subject::immersion() const {
    if (manifold) return manifold->immersion();
    if (counterexample) return counterexample->immersion;
    if (reference) return *reference;
    throw InvalidInput("subject '" + name + "' carries no manifold");
}

Economy parse_economy(const json& j) {
    try {
        Economy e;
        e.goods = j.at("goods").get<int>();
        const json& consumers = j.at("consumers");
        if (!consumers.is_array() || consumers.size() != 2) {
            throw InvalidInput("economy: expected exactly two consumers");
        }
        e.preferences = {preference_from(consumers[0]), preference_from(consumers[1])};
        e.resources = vec_from(j.at("resources"), "resources");
        if (j.contains("endowment1")) e.endowment1 = vec_from(j["endowment1"], "endowment1");
        e.validate();
        return e;
    } catch (const json::exception& ex) {
        throw InvalidInput(std::string("economy: ") + ex.what());
    }
}

Subject parse_subject(const json& j) {
    try {
        Subject s;
        s.name = j.value("name", std::string("unnamed"));
        if (is_economy(j)) {
            s.economy = parse_economy(j);
            Interval shares{0.05, 0.95};
            if (j.contains("shares")) shares = interval_from(j["shares"], "shares");
            s.manifold = manifold_from_economy(*s.economy, shares, j.value("grid", 91));
            return s;
        }
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "analytic") {
            std::vector<CurveExpression> prices;
            for (const auto& p : j.at("prices")) prices.push_back(expression_from(p));
            const int goods = j.value("goods", static_cast<int>(prices.size()) + 1);
            if (goods != static_cast<int>(prices.size()) + 1) {
                throw InvalidInput("analytic manifold: goods does not match the number of prices");
            }
            auto curve = PriceIncomeCurve::from_expressions(s.name, prices, expression_from(j.at("income")),
                                                            t_domain_of(j, {0.0, 1.0}));
            s.manifold = EquilibriumManifoldM2::assemble(std::move(curve), alpha_domain_of(j));
        } else if (kind == "remark1") {
            const int goods = j.at("goods").get<int>();
            std::vector<double> constants;
            if (j.contains("constants")) constants = j["constants"].get<std::vector<double>>();
            s.counterexample = remark1_manifold(goods, constants, source_from(j.at("income")),
                                                t_domain_of(j, {-1.0, 1.0}), alpha_domain_of(j));
        } else if (kind == "remark2") {
            const int goods = j.at("goods").get<int>();
            const json& g = j.at("gamma");
            if (!g.is_array() || g.size() != 2) throw InvalidInput("remark2: gamma needs two expressions");
            s.counterexample = remark2_hypersurface(goods, source_from(g[0]), source_from(g[1]),
                                                    t_domain_of(j, {0.0, 1.0}), alpha_domain_of(j));
        } else if (kind == "reference") {
            const std::string which = j.at("manifold").get<std::string>();
            if (which == "unit_sphere") {
                s.reference = unit_sphere_chart();
            } else if (which == "polar") {
                s.reference = polar_chart();
            } else if (which == "flat_plane") {
                s.reference = flat_plane(j.value("dim", 2));
            } else {
                throw InvalidInput("unknown reference manifold '" + which + "'");
            }
        } else {
            throw InvalidInput("unknown manifold kind '" + kind + "'");
        }
        return s;
    } catch (const json::exception& ex) {
        throw InvalidInput(std::string("manifold: ") + ex.what());
    }
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& ex) {
        throw InvalidInput("'" + path.string() + "': " + ex.what());
    }
}

Subject load_subject(const std::filesystem::path& path) {
    Subject s = parse_subject(load_json(path));
    return s;
}

json to_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json to_json(const FgpReport& r) {
    json curves = json::array();
    for (const auto& c : r.per_curve) {
        curves.push_back({{"base", to_json(c.base)}, {"max_normal", c.max_normal}, {"length", c.length}});
    }
    json out{{"manifold", r.manifold},
             {"per_curve", curves},
             {"verdict", to_string(r.verdict)},
             {"theorem_violation", r.theorem_violation},
             {"notes", r.notes}};
    out["price_variation"] = r.price_variation ? json(*r.price_variation) : json("N/A");
    out["positivity_ok"] = r.positivity_ok ? json(*r.positivity_ok) : json("N/A");
    return out;
}

json to_json(const CorollaryDashboard& d) {
    json counts;
    if (d.equilibrium_counts) {
        counts = json::array();
        for (const auto& c : *d.equilibrium_counts) {
            counts.push_back({{"endowment", to_json(c.endowment)},
                              {"count", c.count},
                              {"possibly_censored", c.possibly_censored},
                              {"scan_failure", c.scan_failure}});
        }
    } else {
        counts = "N/A";
    }
    return {{"subject", d.subject},
            {"seed", d.seed},
            {"price_constancy", d.price_constancy ? json(*d.price_constancy) : json("N/A")},
            {"curvature_max_abs", d.curvature_max_abs},
            {"curvature_samples", d.curvature.size()},
            {"fgp", to_json(d.fgp)},
            {"equilibrium_counts", counts},
            {"entropy", d.entropy},
            {"consistency", to_string(d.consistency)},
            {"observations", d.observations}};
}

json to_json(const PriceIncomePoint& p) {
    return {{"prices", to_json(p.prices)},
            {"income", p.income},
            {"share", p.share},
            {"residual", p.residual},
            {"iterations", p.iterations}};
}

json to_json(const EquilibriumSet& s) {
    json roots = json::array();
    for (const auto& r : s.roots) roots.push_back({{"prices", to_json(r.prices)}, {"residual", r.residual}});
    return {{"endowment", to_json(s.endowment)},
            {"count", s.count},
            {"roots", roots},
            {"possibly_censored", s.possibly_censored},
            {"scan_failure", s.scan_failure}};
}

json to_json(const SampledBCurve& c) {
    json points = json::array();
    const size_t prices = c.points.empty() ? 0 : static_cast<size_t>(c.points.front().prices.size());
    for (size_t i = 0; i < c.points.size(); ++i) {
        json dp = json::array(), ddp = json::array();
        for (size_t j = 0; j < prices; ++j) {
            dp.push_back(c.price_jets[i * prices + j].d1);
            ddp.push_back(c.price_jets[i * prices + j].d2);
        }
        json p = to_json(c.points[i]);
        p["price_d1"] = dp;
        p["price_d2"] = ddp;
        p["income_d1"] = c.income_jets[i].d1;
        p["income_d2"] = c.income_jets[i].d2;
        points.push_back(std::move(p));
    }
    return {{"points", points}, {"max_second_difference", c.max_second_difference}};
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

void write_trajectory_csv(std::ostream& os, const ImmersionMap& f, const Trajectory& trajectory) {
    const int m = f.dim_param();
    os << "time";
    for (int i = 0; i < m; ++i) os << ",x" << i;
    for (int i = 0; i < m; ++i) os << ",v" << i;
    os << ",energy\n";
    os << std::setprecision(17);
    for (const auto& s : trajectory.states) {
        os << s.time;
        for (int i = 0; i < m; ++i) os << ',' << s.x[i];
        for (int i = 0; i < m; ++i) os << ',' << s.v[i];
        os << ',' << metric_energy(f, s.x, s.v) << '\n';
    }
}

void write_residual_csv(std::ostream& os, const ResidualReport& report) {
    os << "s,total,normal,tangential\n" << std::setprecision(17);
    for (size_t i = 0; i < report.grid.size(); ++i) {
        os << report.grid[i] << ',' << report.total[i] << ',' << report.normal[i] << ','
           << report.tangential[i] << '\n';
    }
}

}  // namespace eqgeo
