#include "eqgeo/equilibrium_manifold.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "eqgeo/errors.hpp"

namespace eqgeo {

namespace {

ImmersionMap make_phi(const PriceIncomeCurve& curve, Interval alpha_range) {
    const int goods = curve.goods();
    std::vector<Interval> box{curve.domain()};
    for (int j = 0; j + 1 < goods; ++j) box.push_back(alpha_range);

    auto phi = [curve](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        const int prices = curve.price_count();
        std::vector<T> out(static_cast<size_t>(2 * prices + 1));
        T last = curve.income_at(x[0]);
        for (int j = 0; j < prices; ++j) {
            const T pj = curve.price_at(j, x[0]);
            const T& aj = x[static_cast<size_t>(j + 1)];
            out[static_cast<size_t>(j)] = pj;
            out[static_cast<size_t>(prices + j)] = aj;
            last = last - pj * aj;
        }
        out[static_cast<size_t>(2 * prices)] = last;
        return out;
    };
    return ImmersionMap("E(r):" + curve.name(), goods, 2 * goods - 1, Box(std::move(box)), phi);
}

}  // namespace

EquilibriumManifoldM2 EquilibriumManifoldM2::assemble(PriceIncomeCurve curve, Interval alpha_range) {
    const PositivityAudit audit = audit_positivity(curve);
    if (!audit.ok) {
        throw InvalidInput("price-income curve '" + curve.name() +
                           "' has a non-positive price at t = " +
                           std::to_string(*audit.first_violation));
    }
    return assemble_unchecked(std::move(curve), alpha_range);
}

EquilibriumManifoldM2 EquilibriumManifoldM2::assemble_unchecked(PriceIncomeCurve curve,
                                                                Interval alpha_range) {
    ImmersionMap phi = make_phi(curve, alpha_range);
    return EquilibriumManifoldM2(std::move(curve), alpha_range, std::move(phi));
}

BoxedSymbols EquilibriumManifoldM2::boxed(const Vec& point) const {
    const double t = point[0];
    const CurveJet w = curve_.income(t);
    BoxedSymbols s;
    s.A = w.d1;
    s.A_prime = w.d2;
    s.norm_p_sq = 1.0;
    for (int j = 0; j < curve_.price_count(); ++j) {
        const CurveJet p = curve_.price(j, t);
        const double xj = point[j + 1];
        s.A -= p.d1 * xj;
        s.A_prime -= p.d2 * xj;
        s.B += p.d1 * p.d1;
        s.C += p.d1 * p.d2;
        s.norm_p_sq += p.value * p.value;
    }
    return s;
}

ChristoffelSymbols closed_form_christoffel(const EquilibriumManifoldM2& manifold, const Vec& point) {
    const int dim = manifold.goods();
    if (point.size() != dim) throw InvalidInput("closed_form_christoffel: point has wrong dimension");
    const BoxedSymbols s = manifold.boxed(point);
    const double den = s.denominator();
    if (!(den > 0.0) || !std::isfinite(den)) {
        throw SingularPointError("closed_form_christoffel: ‖p‖²B + A² vanishes at " +
                                 format_point(point));
    }
    const auto& curve = manifold.curve();
    const double t = point[0];

    ChristoffelSymbols gamma(point, dim);
    gamma.set(0, 0, 0, (s.norm_p_sq * s.C + s.A * s.A_prime) / den);
    for (int k = 1; k < dim; ++k) {
        const double pk = curve.price(k - 1, t).value;
        gamma.set(k, 0, 0, pk * (s.A * s.C - s.A_prime * s.B) / den);
    }
    for (int j = 1; j < dim; ++j) {
        const double dpj = curve.price(j - 1, t).d1;
        gamma.set(0, 0, j, -dpj * s.A / den);
        for (int k = 1; k < dim; ++k) {
            const double pk = curve.price(k - 1, t).value;
            gamma.set(k, 0, j, dpj * pk * s.B / den);
        }
    }
    return gamma;
}

Eigen::Vector3d normal_vector_l2(const EquilibriumManifoldM2& manifold, double t, double alpha) {
    if (manifold.goods() != 2) {
        throw UnsupportedError("normal_vector_l2: manifold has " + std::to_string(manifold.goods()) +
                               " goods, expected 2");
    }
    const CurveJet p = manifold.curve().price(0, t);
    const CurveJet w = manifold.curve().income(t);
    return {p.d1 * alpha - w.d1, p.value * p.d1, p.d1};
}

RuledCheck ruled_decomposition_check(const ImmersionMap& f, const std::vector<Vec>& samples) {
    RuledCheck check;
    const int m = f.dim_param();
    for (const Vec& x : samples) {
        Vec base = x;
        base.tail(m - 1).setZero();
        const Vec f0 = f.eval(base);
        Vec predicted = f0;
        for (int j = 1; j < m; ++j) {
            Vec ej = base;
            ej[j] = 1.0;
            predicted += x[j] * (f.eval(ej) - f0);
        }
        check.max_defect = std::max(check.max_defect, (f.eval(x) - predicted).norm());
    }
    check.ruled = check.max_defect <= 1e-10;
    return check;
}

std::vector<Vec> coordinate_base_points(int goods) {
    std::vector<Vec> bases;
    bases.push_back(Vec::Zero(goods - 1));
    for (int j = 0; j + 1 < goods; ++j) {
        Vec e = Vec::Zero(goods - 1);
        e[j] = 1.0;
        bases.push_back(std::move(e));
    }
    return bases;
}

std::vector<ParamCurve> coordinate_curves(int goods, Interval t_domain) {
    std::vector<ParamCurve> curves;
    for (const Vec& b : coordinate_base_points(goods)) {
        Vec start(goods);
        start[0] = 0.0;
        start.tail(goods - 1) = b;
        curves.push_back(ParamCurve::coordinate(std::move(start), 0, t_domain));
    }
    return curves;
}

std::vector<ParamCurve> alpha_lines(int goods, double t, Interval alpha_domain) {
    std::vector<ParamCurve> lines;
    for (int j = 1; j < goods; ++j) {
        Vec start = Vec::Zero(goods);
        start[0] = t;
        lines.push_back(ParamCurve::coordinate(std::move(start), j, alpha_domain));
    }
    return lines;
}

CounterexampleManifold remark1_manifold(int goods, const std::vector<double>& constants,
                                        PriceIncomeCurve::Source income, Interval t_domain,
                                        Interval alpha_range) {
    if (goods < 2) throw InvalidInput("remark1_manifold: need at least two goods");
    if (static_cast<int>(constants.size()) != goods - 2) {
        throw InvalidInput("remark1_manifold: expected " + std::to_string(goods - 2) +
                           " constant prices");
    }
    std::vector<PriceIncomeCurve::Source> prices;
    for (double c : constants) {
        if (!(c > 0.0)) throw InvalidInput("remark1_manifold: constant prices must be positive");
        prices.push_back([c](double) { return CurveJet{c, 0.0, 0.0}; });
    }
    prices.push_back([](double t) { return CurveJet{t, 1.0, 0.0}; });
    PriceIncomeCurve curve("remark1", goods, std::move(prices), std::move(income), t_domain);
    auto manifold = EquilibriumManifoldM2::assemble_unchecked(std::move(curve), alpha_range);
    ImmersionMap immersion = manifold.immersion();
    return {CounterexampleKind::Remark1, std::move(immersion), std::move(manifold), t_domain};
}

CounterexampleManifold remark2_hypersurface(int goods, PriceIncomeCurve::Source gamma1,
                                            PriceIncomeCurve::Source gamma2, Interval t_domain,
                                            Interval alpha_range) {
    if (goods < 2) throw InvalidInput("remark2_hypersurface: need at least two goods");
    for (double t : linspace(t_domain.lo, t_domain.hi, 1001)) {
        const double s = std::hypot(gamma1(t).d1, gamma2(t).d1);
        if (!(s > 1e-12)) {
            throw InvalidInput("remark2_hypersurface: degenerate profile at t = " + std::to_string(t));
        }
    }
    std::vector<Interval> box{t_domain};
    for (int j = 0; j + 1 < goods; ++j) box.push_back(alpha_range);
    auto f = [gamma1, gamma2, goods](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        std::vector<T> out(static_cast<size_t>(goods + 1));
        for (int j = 0; j + 1 < goods; ++j) out[static_cast<size_t>(j)] = x[static_cast<size_t>(j + 1)];
        out[static_cast<size_t>(goods - 1)] = lift(gamma1(value_of(x[0])), x[0]);
        out[static_cast<size_t>(goods)] = lift(gamma2(value_of(x[0])), x[0]);
        return out;
    };
    ImmersionMap immersion("remark2", goods, goods + 1, Box(std::move(box)), f);
    return {CounterexampleKind::Remark2, std::move(immersion), std::nullopt, t_domain};
}

double normal_direction_spread(const ImmersionMap& hypersurface, const std::vector<Vec>& samples) {
    std::vector<Vec> normals;
    normals.reserve(samples.size());
    for (const Vec& x : samples) normals.push_back(unit_normal(hypersurface, x));
    double spread = 0.0;
    for (size_t i = 0; i < normals.size(); ++i) {
        for (size_t j = i + 1; j < normals.size(); ++j) {
            const double c = std::min(1.0, std::abs(normals[i].dot(normals[j])));
            spread = std::max(spread, std::acos(c));
        }
    }
    return spread;
}

}  // namespace eqgeo
