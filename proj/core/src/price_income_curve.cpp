#include "eqgeo/price_income_curve.hpp"

#include "eqgeo/curve.hpp"
#include "eqgeo/errors.hpp"

namespace eqgeo {

namespace {

PriceIncomeCurve::Source analytic_source(const CurveExpression& e) {
    const CurveExpression d1 = e.derivative();
    const CurveExpression d2 = d1.derivative();
    return [e, d1, d2](double t) { return CurveJet{e(t), d1(t), d2(t)}; };
}

}  // namespace

PriceIncomeCurve::PriceIncomeCurve(std::string name, int goods, std::vector<Source> prices,
                                   Source income, Interval domain)
    : name_(std::move(name)),
      goods_(goods),
      prices_(std::move(prices)),
      income_(std::move(income)),
      domain_(domain) {
    if (goods_ < 2) throw InvalidInput("price-income curve: need at least two goods");
    if (static_cast<int>(prices_.size()) != goods_ - 1) {
        throw InvalidInput("price-income curve: expected " + std::to_string(goods_ - 1) +
                           " price components, got " + std::to_string(prices_.size()));
    }
    if (!(domain_.lo < domain_.hi)) throw InvalidInput("price-income curve: empty t-domain");
}

PriceIncomeCurve PriceIncomeCurve::from_expressions(std::string name,
                                                    const std::vector<CurveExpression>& prices,
                                                    const CurveExpression& income, Interval domain) {
    std::vector<Source> sources;
    sources.reserve(prices.size());
    for (const auto& p : prices) sources.push_back(analytic_source(p));
    return PriceIncomeCurve(std::move(name), static_cast<int>(prices.size()) + 1, std::move(sources),
                            analytic_source(income), domain);
}

PriceIncomeCurve PriceIncomeCurve::with_domain(Interval domain) const {
    PriceIncomeCurve copy = *this;
    copy.domain_ = domain;
    return copy;
}

PositivityAudit audit_positivity(const PriceIncomeCurve& curve, int samples) {
    PositivityAudit audit;
    audit.samples = samples;
    for (double t : linspace(curve.domain().lo, curve.domain().hi, samples)) {
        for (int j = 0; j < curve.price_count(); ++j) {
            if (!(curve.price(j, t).value > 0.0)) {
                audit.ok = false;
                audit.first_violation = t;
                return audit;
            }
        }
    }
    return audit;
}

}  // namespace eqgeo
