#include <gtest/gtest.h>

#include <random>

#include "eqgeo/fgp.hpp"
#include "eqgeo/io.hpp"
#include "test_support.hpp"

using namespace eqgeo;
using eqgeo::test_support::fixture;
using eqgeo::test_support::random_analytic_curve;

namespace {

const Subject& cached(const std::string& name) {
    static std::map<std::string, Subject> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, load_subject(fixture(name))).first;
    return it->second;
}

}  // namespace

TEST(PriceConstancy, ConstantPriceIsZero) {
    const auto c = PriceIncomeCurve::from_expressions("c", {CurveExpression::constant(1.5)},
                                                      CurveExpression::parse("t"), {0, 1});
    EXPECT_LE(price_constancy(c, linspace(0, 1, 101)), 1e-10);
}

TEST(PriceConstancy, AffinePriceIsOne) {
    const auto c = PriceIncomeCurve::from_expressions("a", {CurveExpression::parse("t + 2")},
                                                      CurveExpression::constant(1.0), {0, 1});
    EXPECT_DOUBLE_EQ(price_constancy(c, linspace(0, 1, 101)), 1.0);
}

TEST(PriceConstancy, HeterogeneousEconomyVaries) {
    const Subject& s = cached("hetero_cd.json");
    EXPECT_GT(price_constancy(s.manifold->curve(), linspace(0.1, 0.9, 81)), 1e-2);
}

TEST(CheckFgp, IdenticalCobbDouglasHolds) {
    const FgpReport r = check_fgp(*cached("identical_cd.json").manifold);
    EXPECT_EQ(r.verdict, FgpVerdict::Holds);
    ASSERT_EQ(r.per_curve.size(), 2u);
    for (const auto& c : r.per_curve) EXPECT_LE(c.max_normal, 1e-8);
    EXPECT_LE(*r.price_variation, 1e-8);
    EXPECT_FALSE(r.theorem_violation);
}

TEST(CheckFgp, HeterogeneousCobbDouglasCurvesAreStraightLines) {
    // Both consumers spend fixed shares, so w_1 is affine in p_1 along the
    // curve and every t-curve is a straight segment: the residual vanishes
    // even though the price moves.  The report must say so.
    const FgpReport r = check_fgp(*cached("hetero_cd.json").manifold);
    EXPECT_EQ(r.verdict, FgpVerdict::Holds);
    EXPECT_LT(r.max_residual(), 1e-8);
    EXPECT_GT(*r.price_variation, 1e-2);
    EXPECT_TRUE(*r.positivity_ok);
    EXPECT_TRUE(r.theorem_violation);
}

TEST(CheckFgp, Remark1FlagsViolationWithPositivityNote) {
    const FgpReport r = check_fgp(*cached("remark1.json").counterexample);
    EXPECT_EQ(r.verdict, FgpVerdict::Holds);
    for (const auto& c : r.per_curve) EXPECT_LE(c.max_normal, 1e-8);
    EXPECT_NEAR(*r.price_variation, 1.0, 1e-10);
    EXPECT_FALSE(*r.positivity_ok);
    EXPECT_TRUE(r.theorem_violation);
    ASSERT_FALSE(r.notes.empty());
    EXPECT_NE(r.notes.front().find("positivity"), std::string::npos);
}

TEST(CheckFgp, Remark2HasNoPriceFields) {
    const FgpReport r = check_fgp(*cached("remark2.json").counterexample);
    EXPECT_EQ(r.verdict, FgpVerdict::Holds);
    EXPECT_FALSE(r.price_variation.has_value());
    EXPECT_FALSE(r.positivity_ok.has_value());
    EXPECT_FALSE(r.theorem_violation);
}

TEST(CheckFgp, AffinePriceFails) {
    const FgpReport r = check_fgp(*cached("affine_price_l2.json").manifold);
    EXPECT_EQ(r.verdict, FgpVerdict::Fails);
    EXPECT_GT(r.max_residual(), 1e-3);
}

TEST(CheckFgp, ConstantPriceAnalyticHolds) {
    const FgpReport r = check_fgp(*cached("constant_price.json").manifold);
    EXPECT_EQ(r.verdict, FgpVerdict::Holds);
    EXPECT_EQ(r.per_curve.size(), 3u);
    EXPECT_FALSE(r.theorem_violation);
}

TEST(CheckFgp, ToleranceOverrideChangesVerdict) {
    FgpOptions o;
    o.tolerances.geodesic = 10.0;
    const FgpReport r = check_fgp(*cached("affine_price_l2.json").manifold, o);
    EXPECT_EQ(r.verdict, FgpVerdict::Holds);
    EXPECT_TRUE(r.theorem_violation);
}

// Geodesic coordinate curves force constant prices, and clearly moving prices
// leave a clearly non-geodesic coordinate curve.
TEST(TheoremDirection, RandomPositiveAnalyticManifolds) {
    std::mt19937_64 rng(777);
    const FgpTolerances tol;
    for (int i = 0; i < 20; ++i) {
        const int goods = 2 + i % 3;
        const bool constant = i % 4 == 0;
        const auto m = EquilibriumManifoldM2::assemble(random_analytic_curve(rng, goods, constant));
        const FgpReport r = check_fgp(m);
        ASSERT_TRUE(*r.positivity_ok);
        if (r.verdict == FgpVerdict::Holds) EXPECT_LE(*r.price_variation, tol.constancy) << "sample " << i;
        if (*r.price_variation >= 1e-2) EXPECT_GE(r.max_residual(), tol.failure) << "sample " << i;
        EXPECT_EQ(constant, r.verdict == FgpVerdict::Holds) << "sample " << i;
    }
}

TEST(Dashboard, IdenticalCobbDouglasIsConsistent) {
    const Subject& s = cached("identical_cd.json");
    const CorollaryDashboard d = corollary_dashboard(*s.manifold, &*s.economy);
    EXPECT_LE(*d.price_constancy, 1e-8);
    EXPECT_LE(d.curvature_max_abs, 1e-6);
    EXPECT_GE(d.curvature.size(), 50u);
    EXPECT_EQ(d.fgp.verdict, FgpVerdict::Holds);
    ASSERT_TRUE(d.equilibrium_counts.has_value());
    EXPECT_GE(d.equilibrium_counts->size(), 5u);
    for (const auto& c : *d.equilibrium_counts) EXPECT_EQ(c.count, 1);
    EXPECT_EQ(d.consistency, Consistency::Consistent);
    EXPECT_EQ(d.entropy, "UNAVAILABLE");
    EXPECT_EQ(d.exit_code(), 0);
}

TEST(Dashboard, HeterogeneousReportsObservationsOnly) {
    const Subject& s = cached("hetero_cd.json");
    const CorollaryDashboard d = corollary_dashboard(*s.manifold, &*s.economy);
    EXPECT_GT(*d.price_constancy, 1e-2);
    EXPECT_GT(d.curvature_max_abs, 1e-3);
    for (const auto& c : *d.equilibrium_counts) EXPECT_EQ(c.count, 1);
    EXPECT_EQ(d.consistency, Consistency::NotAsserted);
    EXPECT_FALSE(d.observations.empty());
}

TEST(Dashboard, Remark2IsFlatWithoutEconomyFields) {
    const CorollaryDashboard d = corollary_dashboard(*cached("remark2.json").counterexample);
    EXPECT_LE(d.curvature_max_abs, 1e-5);
    EXPECT_FALSE(d.price_constancy.has_value());
    EXPECT_FALSE(d.equilibrium_counts.has_value());
    EXPECT_EQ(d.fgp.verdict, FgpVerdict::Holds);
}

TEST(Dashboard, FlatnessFollowsConstantPrice) {
    std::mt19937_64 rng(99);
    for (int goods : {2, 3}) {
        const auto m = EquilibriumManifoldM2::assemble(random_analytic_curve(rng, goods, true));
        const CorollaryDashboard d = corollary_dashboard(m, nullptr);
        EXPECT_LE(*d.price_constancy, 1e-8);
        EXPECT_LE(d.curvature_max_abs, 1e-6);
    }
}

TEST(Dashboard, SameSeedSameJson) {
    const Subject& s = cached("ces_mirror.json");
    DashboardOptions o;
    o.seed = 4242;
    const std::string a = render(to_json(corollary_dashboard(*s.manifold, &*s.economy, o)));
    const std::string b = render(to_json(corollary_dashboard(*s.manifold, &*s.economy, o)));
    EXPECT_EQ(a, b);
    o.seed = 4243;
    EXPECT_NE(a, render(to_json(corollary_dashboard(*s.manifold, &*s.economy, o))));
}
