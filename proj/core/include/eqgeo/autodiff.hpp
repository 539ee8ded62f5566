#pragma once

// Forward-mode derivative numbers.
//
// Dual carries a value and one directional first derivative (a + b·ε, ε² = 0).
// Jet2 carries a value with first and second derivatives along one
// parameter, i.e. the truncated Taylor expansion f(s0) + f'(s0)·δ +
// f''(s0)·δ²/2 stored as (f, f', f'').  Evaluating a generic function on
// a Jet2 seeded with (s0, 1, 0) yields its value, velocity and acceleration.

#include <cmath>

namespace eqgeo {

struct Dual {
    double v{0.0};
    double d{0.0};

    constexpr Dual() = default;
    constexpr Dual(double value) : v{value} {}  // NOLINT: implicit lift of constants
    constexpr Dual(double value, double deriv) : v{value}, d{deriv} {}

    static constexpr Dual variable(double value) { return {value, 1.0}; }
};

constexpr Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
constexpr Dual operator-(Dual a) { return {-a.v, -a.d}; }
constexpr Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
constexpr Dual operator/(Dual a, Dual b) {
    const double q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
}
constexpr Dual& operator+=(Dual& a, Dual b) { return a = a + b; }
constexpr Dual& operator-=(Dual& a, Dual b) { return a = a - b; }
constexpr Dual& operator*=(Dual& a, Dual b) { return a = a * b; }

inline Dual sin(Dual a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Dual cos(Dual a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
inline Dual exp(Dual a) {
    const double e = std::exp(a.v);
    return {e, e * a.d};
}
inline Dual log(Dual a) { return {std::log(a.v), a.d / a.v}; }
inline Dual sqrt(Dual a) {
    const double r = std::sqrt(a.v);
    return {r, a.d / (2.0 * r)};
}
inline Dual pow(Dual a, double n) {
    if (n == 0.0) return {1.0, 0.0};
    const double p = std::pow(a.v, n - 1.0);
    return {p * a.v, n * p * a.d};
}
inline Dual pow(Dual a, Dual b) {
    // Constant exponent keeps negative bases legal (integer powers).
    if (b.d == 0.0) return pow(a, b.v);
    return exp(b * log(a));
}

struct Jet2 {
    double v{0.0};
    double d{0.0};
    double dd{0.0};

    constexpr Jet2() = default;
    constexpr Jet2(double value) : v{value} {}  // NOLINT: implicit lift of constants
    constexpr Jet2(double value, double deriv, double second) : v{value}, d{deriv}, dd{second} {}

    static constexpr Jet2 variable(double value) { return {value, 1.0, 0.0}; }
};

constexpr Jet2 operator+(Jet2 a, Jet2 b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
constexpr Jet2 operator-(Jet2 a, Jet2 b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
constexpr Jet2 operator-(Jet2 a) { return {-a.v, -a.d, -a.dd}; }
constexpr Jet2 operator*(Jet2 a, Jet2 b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}
constexpr Jet2& operator+=(Jet2& a, Jet2 b) { return a = a + b; }
constexpr Jet2& operator-=(Jet2& a, Jet2 b) { return a = a - b; }
constexpr Jet2& operator*=(Jet2& a, Jet2 b) { return a = a * b; }

// Chain rule for a scalar function with known f, f', f'' at a.v.
constexpr Jet2 compose(Jet2 a, double f, double f1, double f2) {
    return {f, f1 * a.d, f1 * a.dd + f2 * a.d * a.d};
}
constexpr Dual compose(Dual a, double f, double f1) { return {f, f1 * a.d}; }

constexpr Jet2 operator/(Jet2 a, Jet2 b) {
    const double inv = 1.0 / b.v;
    const Jet2 recip = compose(b, inv, -inv * inv, 2.0 * inv * inv * inv);
    return a * recip;
}

inline Jet2 sin(Jet2 a) {
    const double s = std::sin(a.v);
    return compose(a, s, std::cos(a.v), -s);
}
inline Jet2 cos(Jet2 a) {
    const double c = std::cos(a.v);
    return compose(a, c, -std::sin(a.v), -c);
}
inline Jet2 exp(Jet2 a) {
    const double e = std::exp(a.v);
    return compose(a, e, e, e);
}
inline Jet2 log(Jet2 a) { return compose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet2 sqrt(Jet2 a) {
    const double r = std::sqrt(a.v);
    return compose(a, r, 0.5 / r, -0.25 / (r * a.v));
}
inline Jet2 pow(Jet2 a, double n) {
    if (n == 0.0) return {1.0, 0.0, 0.0};
    if (n == 1.0) return a;
    const double pm2 = std::pow(a.v, n - 2.0);
    return compose(a, pm2 * a.v * a.v, n * pm2 * a.v, n * (n - 1.0) * pm2);
}
inline Jet2 pow(Jet2 a, Jet2 b) {
    if (b.d == 0.0 && b.dd == 0.0) return pow(a, b.v);
    return exp(b * log(a));
}

// Uniform access for code templated over double / Dual / Jet2.
constexpr double value_of(double x) { return x; }
constexpr double value_of(Dual x) { return x.v; }
constexpr double value_of(Jet2 x) { return x.v; }

}  // namespace eqgeo
