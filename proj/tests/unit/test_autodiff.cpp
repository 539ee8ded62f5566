#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eqgeo/autodiff.hpp"

using eqgeo::Dual;
using eqgeo::Jet2;

namespace {

template <class T>
T sample_fn(const T& x) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    return sin(x) * exp(0.5 * x) + log(2.0 + x * x) / sqrt(1.0 + x * x) - pow(x, 3.0) / (3.0 - cos(x));
}

// Hand-differentiated oracle pieces, checked through central differences.
double fd1(double x, double h = 1e-5) { return (sample_fn(x + h) - sample_fn(x - h)) / (2 * h); }
double fd2(double x, double h = 1e-4) {
    return (sample_fn(x + h) - 2 * sample_fn(x) + sample_fn(x - h)) / (h * h);
}

}  // namespace

TEST(Dual, ArithmeticMatchesProductAndQuotientRules) {
    const Dual x = Dual::variable(1.5);
    const Dual y = x * x / (1.0 + x);
    // d/dx x²/(1+x) = (2x + x²)/(1+x)²
    EXPECT_NEAR(y.d, (2 * 1.5 + 1.5 * 1.5) / (2.5 * 2.5), 1e-15);
    EXPECT_DOUBLE_EQ(y.v, 1.5 * 1.5 / 2.5);
}

TEST(Dual, AgreesWithCentralDifferencesAtRandomPoints) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng);
        const Dual y = sample_fn(Dual::variable(x));
        EXPECT_NEAR(y.v, sample_fn(x), 1e-14);
        EXPECT_NEAR(y.d, fd1(x), 1e-8) << "x = " << x;
    }
}

TEST(Jet2, SecondDerivativeAgreesWithCentralDifferences) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng);
        const Jet2 y = sample_fn(Jet2::variable(x));
        EXPECT_NEAR(y.d, fd1(x), 1e-8);
        EXPECT_NEAR(y.dd, fd2(x), 1e-5) << "x = " << x;
    }
}

TEST(Jet2, ChainRuleThroughReparametrization) {
    // x(s) = s² so f(x(s))'' = f''(x)·(2s)² + f'(x)·2.
    const double s = 0.7;
    const Jet2 xs{s * s, 2 * s, 2.0};
    const Jet2 y = sample_fn(xs);
    const Jet2 direct = sample_fn(Jet2::variable(s * s));
    EXPECT_NEAR(y.d, direct.d * 2 * s, 1e-13);
    EXPECT_NEAR(y.dd, direct.dd * 4 * s * s + direct.d * 2.0, 1e-12);
}

TEST(Jet2, PowWithJetExponent) {
    const Jet2 x = Jet2::variable(1.3);
    const Jet2 y = pow(x, x);  // x^x
    const double v = std::pow(1.3, 1.3);
    const double d = v * (std::log(1.3) + 1.0);
    const double dd = d * (std::log(1.3) + 1.0) + v / 1.3;
    EXPECT_NEAR(y.v, v, 1e-15);
    EXPECT_NEAR(y.d, d, 1e-14);
    EXPECT_NEAR(y.dd, dd, 1e-13);
}

TEST(Dual, ConstantsCarryNoDerivative) {
    const Dual c = 3.0;
    EXPECT_EQ(c.d, 0.0);
    const Jet2 j = 3.0;
    EXPECT_EQ(j.d, 0.0);
    EXPECT_EQ(j.dd, 0.0);
}
