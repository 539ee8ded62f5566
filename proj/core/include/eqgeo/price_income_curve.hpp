#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eqgeo/expression.hpp"
#include "eqgeo/immersion.hpp"

namespace eqgeo {

/// Value with first and second t-derivatives of one curve component.
struct CurveJet {
    double value{0.0};
    double d1{0.0};
    double d2{0.0};
};

inline double lift(const CurveJet& c, double) { return c.value; }
inline Dual lift(const CurveJet& c, const Dual& t) { return compose(t, c.value, c.d1); }
inline Jet2 lift(const CurveJet& c, const Jet2& t) { return compose(t, c.value, c.d1, c.d2); }

/// t ↦ (p_1(t), …, p_{L−1}(t), w(t)): normalized prices (p_L = 1) and the
/// first consumer's income along the price-income equilibria.
class PriceIncomeCurve {
public:
    using Source = std::function<CurveJet(double)>;

    PriceIncomeCurve(std::string name, int goods, std::vector<Source> prices, Source income,
                     Interval domain);

    /// Analytic curve; derivatives come from symbolic differentiation.
    static PriceIncomeCurve from_expressions(std::string name,
                                             const std::vector<CurveExpression>& prices,
                                             const CurveExpression& income, Interval domain);

    const std::string& name() const { return name_; }
    int goods() const { return goods_; }
    int price_count() const { return goods_ - 1; }
    const Interval& domain() const { return domain_; }

    CurveJet price(int j, double t) const { return prices_[static_cast<size_t>(j)](t); }
    CurveJet income(double t) const { return income_(t); }

    template <class T>
    T price_at(int j, const T& t) const {
        return lift(price(j, value_of(t)), t);
    }
    template <class T>
    T income_at(const T& t) const {
        return lift(income(value_of(t)), t);
    }

    PriceIncomeCurve with_domain(Interval domain) const;

private:
    std::string name_;
    int goods_;
    std::vector<Source> prices_;
    Source income_;
    Interval domain_;
};

struct PositivityAudit {
    bool ok{true};
    std::optional<double> first_violation;  ///< first sampled t with some p_j(t) ≤ 0
    int samples{0};
};

/// Samples every price on a uniform grid of the curve's domain (endpoints included).
PositivityAudit audit_positivity(const PriceIncomeCurve& curve, int samples = 1001);

}  // namespace eqgeo
