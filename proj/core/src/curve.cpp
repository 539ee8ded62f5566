#include "eqgeo/curve.hpp"

#include <cmath>

#include "eqgeo/errors.hpp"

namespace eqgeo {

CurvePoint ParamCurve::sample(double s) const {
    const auto jets = fn_(Jet2::variable(s));
    CurvePoint p{Vec(dim_), Vec(dim_), Vec(dim_)};
    for (int i = 0; i < dim_; ++i) {
        const auto& j = jets[static_cast<size_t>(i)];
        p.x[i] = j.v;
        p.dx[i] = j.d;
        p.ddx[i] = j.dd;
    }
    return p;
}

ParamCurve ParamCurve::line(Vec base, Vec direction, Interval domain) {
    const int dim = static_cast<int>(base.size());
    const double lo = domain.lo;
    return ParamCurve(dim, domain, [base = std::move(base), direction = std::move(direction),
                                    lo](const Jet2& s) {
        std::vector<Jet2> out(static_cast<size_t>(base.size()));
        for (Eigen::Index i = 0; i < base.size(); ++i) {
            out[static_cast<size_t>(i)] = Jet2(base[i]) + Jet2(direction[i]) * (s - Jet2(lo));
        }
        return out;
    });
}

ParamCurve ParamCurve::coordinate(Vec base, int axis, Interval domain) {
    const int dim = static_cast<int>(base.size());
    if (axis < 0 || axis >= dim) throw InvalidInput("coordinate curve: axis out of range");
    return ParamCurve(dim, domain, [base = std::move(base), axis](const Jet2& s) {
        std::vector<Jet2> out(static_cast<size_t>(base.size()));
        for (Eigen::Index i = 0; i < base.size(); ++i) out[static_cast<size_t>(i)] = Jet2(base[i]);
        out[static_cast<size_t>(axis)] = Jet2(base[axis]) + s;
        return out;
    });
}

SampledCurve::SampledCurve(std::vector<double> times, std::vector<Vec> points)
    : times_(std::move(times)), points_(std::move(points)), spacing_(0.0) {
    if (times_.size() != points_.size()) throw InvalidInput("sampled curve: size mismatch");
    if (times_.size() < 5) throw InvalidInput("sampled curve: need at least 5 samples");
    spacing_ = (times_.back() - times_.front()) / static_cast<double>(times_.size() - 1);
    if (!(spacing_ > 0.0)) throw InvalidInput("sampled curve: times must increase");
    for (size_t i = 1; i < times_.size(); ++i) {
        const double dt = times_[i] - times_[i - 1];
        if (std::abs(dt - spacing_) > 1e-9 * std::max(1.0, std::abs(spacing_))) {
            throw InvalidInput("sampled curve: times must be uniformly spaced");
        }
    }
}

CurvePoint SampledCurve::sample(size_t i) const {
    const size_t n = times_.size();
    const double h = spacing_;
    auto f = [&](size_t k) -> const Vec& { return points_[k]; };
    CurvePoint p{points_[i], Vec(), Vec()};
    if (i >= 2 && i + 2 < n) {
        p.dx = (f(i - 2) - 8.0 * f(i - 1) + 8.0 * f(i + 1) - f(i + 2)) / (12.0 * h);
        p.ddx = (-f(i - 2) + 16.0 * f(i - 1) - 30.0 * f(i) + 16.0 * f(i + 1) - f(i + 2)) /
                (12.0 * h * h);
    } else if (i < 2) {
        p.dx = (-11.0 * f(i) + 18.0 * f(i + 1) - 9.0 * f(i + 2) + 2.0 * f(i + 3)) / (6.0 * h);
        p.ddx = (2.0 * f(i) - 5.0 * f(i + 1) + 4.0 * f(i + 2) - f(i + 3)) / (h * h);
    } else {
        p.dx = (11.0 * f(i) - 18.0 * f(i - 1) + 9.0 * f(i - 2) - 2.0 * f(i - 3)) / (6.0 * h);
        p.ddx = (2.0 * f(i) - 5.0 * f(i - 1) + 4.0 * f(i - 2) - f(i - 3)) / (h * h);
    }
    return p;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw InvalidInput("linspace: need at least two points");
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    }
    out.back() = hi;
    return out;
}

}  // namespace eqgeo
