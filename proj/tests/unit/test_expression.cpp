#include <gtest/gtest.h>

#include <numbers>

#include <cmath>
#include <random>
#include <string>

#include "eqgeo/expression.hpp"

using eqgeo::CurveExpression;
using eqgeo::ParseError;

namespace {

// Random well-defined expression text: log and sqrt only see positive arguments.
std::string random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    std::uniform_real_distribution<double> c(0.1, 3.0);
    switch (pick(rng)) {
        case 0: return "t";
        case 1: return std::to_string(c(rng)).substr(0, 5);
        case 2: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
        case 3: return random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1);
        case 4: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
        case 5: return random_expr(rng, depth - 1) + "/(1.5 + sin(" + random_expr(rng, depth - 1) + "))";
        case 6: return "(" + random_expr(rng, depth - 1) + ")^2";
        case 7: return "exp(0.3*" + random_expr(rng, depth - 1) + ")";
        case 8: return "log(2 + (" + random_expr(rng, depth - 1) + ")^2)";
        default: return "-sqrt(1 + cos(" + random_expr(rng, depth - 1) + ")^2)";
    }
}

size_t error_offset(const std::string& text) {
    try {
        CurveExpression::parse(text);
    } catch (const ParseError& e) {
        return e.offset();
    }
    ADD_FAILURE() << "no parse error for '" << text << "'";
    return std::string::npos;
}

}  // namespace

TEST(CurveExpression, EvaluatesSimpleCurve) {
    const CurveExpression e = CurveExpression::parse("2 + 0.5*sin(t)");
    EXPECT_DOUBLE_EQ(e(0.0), 2.0);
    EXPECT_DOUBLE_EQ(e(std::numbers::pi / 2), 2.5);
}

TEST(CurveExpression, PowerRuleDerivative) {
    EXPECT_DOUBLE_EQ(CurveExpression::parse("t^2 + 1").derivative()(3.0), 6.0);
}

TEST(CurveExpression, Precedence) {
    EXPECT_DOUBLE_EQ(CurveExpression::parse("-2^2")(0.0), -4.0);
    EXPECT_DOUBLE_EQ(CurveExpression::parse("2^3^2")(0.0), 512.0);
    EXPECT_DOUBLE_EQ(CurveExpression::parse("8/4/2")(0.0), 1.0);
    EXPECT_DOUBLE_EQ(CurveExpression::parse("1 - 2 - 3")(0.0), -4.0);
    EXPECT_DOUBLE_EQ(CurveExpression::parse("2*-t")(3.0), -6.0);
    EXPECT_DOUBLE_EQ(CurveExpression::parse("2^-1")(0.0), 0.5);
    EXPECT_DOUBLE_EQ(CurveExpression::parse("1.5e1 + t")(1.0), 16.0);
}

TEST(CurveExpression, SyntaxErrorOffsets) {
    EXPECT_EQ(error_offset("2 +* t"), 3u);
    EXPECT_EQ(error_offset("(t + 1"), 6u);
    EXPECT_EQ(error_offset("t t"), 2u);
    EXPECT_EQ(error_offset(""), 0u);
}

TEST(CurveExpression, UnknownIdentifierOffset) {
    EXPECT_EQ(error_offset("1 + tan(t)"), 4u);
    EXPECT_EQ(error_offset("x"), 0u);
}

TEST(CurveExpression, ParseErrorIsInvalidInput) {
    EXPECT_THROW(CurveExpression::parse("sin("), eqgeo::InvalidInput);
}

TEST(CurveExpression, RoundTripsThroughPrinter) {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 200; ++i) {
        const std::string text = random_expr(rng, 4);
        const CurveExpression e = CurveExpression::parse(text);
        const CurveExpression again = CurveExpression::parse(e.to_string());
        EXPECT_TRUE(e.same_tree(again)) << text << "  ->  " << e.to_string();
    }
}

TEST(CurveExpression, SymbolicDerivativesMatchCentralDifferences) {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> at(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const CurveExpression e = CurveExpression::parse(random_expr(rng, 3));
        const CurveExpression d1 = e.derivative();
        const CurveExpression d2 = d1.derivative();
        const double t = at(rng);
        const double h = 1e-4;
        const double c1 = (e(t + h) - e(t - h)) / (2 * h);
        const double c2 = (e(t + h) - 2 * e(t) + e(t - h)) / (h * h);
        const double scale = 1.0 + std::abs(d1(t)) + std::abs(d2(t));
        EXPECT_NEAR(d1(t), c1, 1e-6 * scale) << e.to_string() << " at " << t;
        EXPECT_NEAR(d2(t), c2, 1e-4 * scale) << e.to_string() << " at " << t;
    }
}

TEST(CurveExpression, JetEvaluationMatchesSymbolicDerivatives) {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> at(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const CurveExpression e = CurveExpression::parse(random_expr(rng, 3));
        const double t = at(rng);
        const eqgeo::Jet2 j = e.eval(eqgeo::Jet2::variable(t));
        const double d1 = e.derivative()(t);
        const double d2 = e.derivative().derivative()(t);
        EXPECT_NEAR(j.d, d1, 1e-10 * (1.0 + std::abs(d1)));
        EXPECT_NEAR(j.dd, d2, 1e-9 * (1.0 + std::abs(d2)));
    }
}

TEST(CurveExpression, ConstantHasNoTDependence) {
    EXPECT_FALSE(CurveExpression::parse("2 + 3*4").depends_on_t());
    EXPECT_TRUE(CurveExpression::parse("2 + 0*t").depends_on_t());
    EXPECT_DOUBLE_EQ(CurveExpression::parse("sin(1) + 2").derivative()(0.3), 0.0);
    EXPECT_DOUBLE_EQ(CurveExpression::constant(2.5)(7.0), 2.5);
}
