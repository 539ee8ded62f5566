#pragma once

#include <functional>
#include <string>
#include <vector>

#include "eqgeo/immersion.hpp"

namespace eqgeo {

/// Position, velocity and acceleration of a parameter-space curve.
struct CurvePoint {
    Vec x;
    Vec dx;
    Vec ddx;
};

/// A twice-differentiable parameter-space curve s ↦ x(s) on [lo, hi].
///
/// The curve is evaluated on a Jet2 parameter so it composes with
/// reparametrizations: passing (s0, s', s'') applies the chain rule.
class ParamCurve {
public:
    using Fn = std::function<std::vector<Jet2>(const Jet2&)>;

    ParamCurve(int dim, Interval domain, Fn fn) : dim_(dim), domain_(domain), fn_(std::move(fn)) {}

    int dim() const { return dim_; }
    const Interval& domain() const { return domain_; }

    std::vector<Jet2> at(const Jet2& s) const { return fn_(s); }
    CurvePoint sample(double s) const;

    /// s ↦ base + (s − lo)·direction.
    static ParamCurve line(Vec base, Vec direction, Interval domain);
    /// s ↦ base + s·e_axis, i.e. the coordinate curve of one parameter.
    static ParamCurve coordinate(Vec base, int axis, Interval domain);

private:
    int dim_;
    Interval domain_;
    Fn fn_;
};

/// A curve known only at uniformly spaced samples.
///
/// Derivatives use 5-point centered stencils in the interior and 4-point
/// one-sided stencils at the two samples nearest each end.
class SampledCurve {
public:
    SampledCurve(std::vector<double> times, std::vector<Vec> points);

    size_t size() const { return times_.size(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<Vec>& points() const { return points_; }

    CurvePoint sample(size_t i) const;

private:
    std::vector<double> times_;
    std::vector<Vec> points_;
    double spacing_;
};

/// n equally spaced values on [lo, hi] (n ≥ 2).
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace eqgeo
