#include "eqgeo/geodesic.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

#include "eqgeo/errors.hpp"

namespace eqgeo {

namespace {

// 8-point Gauss–Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> kGaussNodes{
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights{
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss_legendre(F&& fn, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (size_t i = 0; i < kGaussNodes.size(); ++i) acc += kGaussWeights[i] * fn(mid + half * kGaussNodes[i]);
    return acc * half;
}

struct OutOfDomain {};

Vec geodesic_acceleration(const ImmersionMap& f, const Vec& x, const Vec& v,
                          const ChristoffelOptions& options) {
    if (!f.domain().contains(x)) throw OutOfDomain{};
    return -christoffel_from_metric(f, x, options).contract(v, v);
}

AmbientJet ambient_along(const ImmersionMap& f, const ParamCurve& curve, double s) {
    return curve_jet(f, curve.at(Jet2::variable(s)));
}

}  // namespace

double metric_energy(const ImmersionMap& f, const Vec& x, const Vec& v) {
    if (!f.domain().contains(x)) {
        throw DomainError("metric_energy: point " + format_point(x) + " outside the domain");
    }
    return (jacobian_unchecked(f, x) * v).squaredNorm();
}

Trajectory geodesic_ivp(const ImmersionMap& f, const Vec& x0, const Vec& v0, double horizon,
                        const IvpOptions& options) {
    if (!(options.step > 0.0)) throw InvalidInput("geodesic_ivp: step must be positive");
    if (!(horizon > 0.0)) throw InvalidInput("geodesic_ivp: horizon must be positive");
    if (x0.size() != f.dim_param() || v0.size() != f.dim_param()) {
        throw InvalidInput("geodesic_ivp: state has wrong dimension");
    }
    if (!f.domain().contains(x0)) {
        throw DomainError("geodesic_ivp: start " + format_point(x0) + " outside the domain");
    }
    if (v0.norm() == 0.0) throw InvalidInput("geodesic_ivp: initial velocity is zero");

    const auto steps = static_cast<long>(std::max(1.0, std::round(horizon / options.step)));
    const double h = horizon / static_cast<double>(steps);

    Trajectory traj;
    traj.step = h;
    traj.manifold = f.name();
    traj.states.reserve(static_cast<size_t>(steps + 1));
    traj.states.push_back({x0, v0, 0.0});

    Vec x = x0, v = v0;
    const auto& opt = options.christoffel;
    for (long n = 0; n < steps; ++n) {
        try {
            const Vec k1x = v;
            const Vec k1v = geodesic_acceleration(f, x, v, opt);
            const Vec k2x = v + 0.5 * h * k1v;
            const Vec k2v = geodesic_acceleration(f, x + 0.5 * h * k1x, k2x, opt);
            const Vec k3x = v + 0.5 * h * k2v;
            const Vec k3v = geodesic_acceleration(f, x + 0.5 * h * k2x, k3x, opt);
            const Vec k4x = v + h * k3v;
            const Vec k4v = geodesic_acceleration(f, x + h * k3x, k4x, opt);
            const Vec xn = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            const Vec vn = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            if (!f.domain().contains(xn)) throw OutOfDomain{};
            x = xn;
            v = vn;
        } catch (const OutOfDomain&) {
            traj.left_domain = true;
            break;
        }
        traj.states.push_back({x, v, static_cast<double>(n + 1) * h});
    }
    return traj;
}

double energy_drift(const ImmersionMap& f, const Trajectory& trajectory) {
    const auto& s0 = trajectory.states.front();
    const double e0 = metric_energy(f, s0.x, s0.v);
    double drift = 0.0;
    for (const auto& s : trajectory.states) {
        drift = std::max(drift, std::abs(metric_energy(f, s.x, s.v) - e0) / e0);
    }
    return drift;
}

double trajectory_length(const ImmersionMap& f, const Trajectory& trajectory) {
    const auto& st = trajectory.states;
    double len = 0.0;
    for (size_t i = 1; i < st.size(); ++i) {
        const double a = std::sqrt(metric_energy(f, st[i - 1].x, st[i - 1].v));
        const double b = std::sqrt(metric_energy(f, st[i].x, st[i].v));
        len += 0.5 * (a + b) * (st[i].time - st[i - 1].time);
    }
    return len;
}

namespace {

void add_residual_sample(const ImmersionMap& f, double time, const CurvePoint& p,
                         const ResidualOptions& options, ResidualReport& report) {
    if (!f.domain().contains(p.x)) {
        throw DomainError("geodesic_residual: curve point " + format_point(p.x) + " at time " +
                          std::to_string(time) + " lies outside the domain of '" + f.name() + "'");
    }
    const auto gamma = christoffel_from_metric(f, p.x, options.christoffel);
    const MetricTensor metric = induced_metric(f, p.x);
    const Vec r = p.ddx + gamma.contract(p.dx, p.dx);
    const double vv = p.dx.dot(metric.g * p.dx);
    if (!(vv > 0.0)) {
        throw InvalidInput("geodesic_residual: vanishing velocity at time " + std::to_string(time));
    }
    const double coef = r.dot(metric.g * p.dx) / vv;
    const Vec rn = r - coef * p.dx;
    const double total = std::sqrt(std::max(0.0, r.dot(metric.g * r)));
    const double normal = std::sqrt(std::max(0.0, rn.dot(metric.g * rn)));
    report.grid.push_back(time);
    report.total.push_back(total);
    report.normal.push_back(normal);
    report.tangential.push_back(std::abs(coef) * std::sqrt(vv));
    report.max_normal = std::max(report.max_normal, normal);
    report.max_total = std::max(report.max_total, total);
}

}  // namespace

ResidualReport geodesic_residual(const ImmersionMap& f, const ParamCurve& curve,
                                 const std::vector<double>& grid, const ResidualOptions& options) {
    ResidualReport report;
    const auto& dom = curve.domain();
    const double slack = 1e-12 * std::max(1.0, dom.width());
    for (double s : grid) {
        if (s < dom.lo - slack || s > dom.hi + slack) {
            throw DomainError("geodesic_residual: time " + std::to_string(s) +
                              " outside the curve domain");
        }
        add_residual_sample(f, s, curve.sample(s), options, report);
    }
    return report;
}

ResidualReport geodesic_residual(const ImmersionMap& f, const SampledCurve& curve,
                                 const ResidualOptions& options) {
    ResidualReport report;
    for (size_t i = 0; i < curve.size(); ++i) {
        add_residual_sample(f, curve.times()[i], curve.sample(i), options, report);
    }
    return report;
}

namespace {

struct LengthTable {
    ImmersionMap f;
    ParamCurve curve;
    std::vector<double> knots;       // original-parameter panel edges
    std::vector<double> cumulative;  // arc length at each knot

    double speed(double t) const { return ambient_along(f, curve, t).velocity.norm(); }

    double inverse(double s) const {
        const double total = cumulative.back();
        if (s <= 0.0) return knots.front();
        if (s >= total) return knots.back();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
        const size_t k = static_cast<size_t>(std::distance(cumulative.begin(), it)) - 1;
        double a = knots[k], b = knots[k + 1];
        const double target = s - cumulative[k];
        auto partial = [&](double t) {
            return gauss_legendre([&](double u) { return speed(u); }, knots[k], t) - target;
        };
        // Newton with a bisection safeguard inside the panel.
        double t = a + (b - a) * target / (cumulative[k + 1] - cumulative[k]);
        for (int it_count = 0; it_count < 60; ++it_count) {
            const double r = partial(t);
            if (std::abs(r) <= 1e-15 * std::max(1.0, total)) break;
            if (r > 0.0) b = t; else a = t;
            double next = t - r / speed(t);
            if (!(next > a && next < b)) next = 0.5 * (a + b);
            if (next == t) break;
            t = next;
        }
        return t;
    }
};

}  // namespace

ArcLengthCurve arc_length_reparametrize(const ImmersionMap& f, const ParamCurve& curve,
                                        const ArcLengthOptions& options) {
    const int panels = std::max(1, options.panels);
    auto table = std::make_shared<LengthTable>(LengthTable{f, curve, {}, {}});
    table->knots = linspace(curve.domain().lo, curve.domain().hi, panels + 1);
    table->cumulative.assign(table->knots.size(), 0.0);

    double max_speed = 0.0;
    std::vector<std::pair<double, double>> speeds;
    for (int k = 0; k < panels; ++k) {
        const double a = table->knots[static_cast<size_t>(k)];
        const double b = table->knots[static_cast<size_t>(k + 1)];
        const double seg = gauss_legendre(
            [&](double u) {
                const double sp = table->speed(u);
                speeds.emplace_back(u, sp);
                return sp;
            },
            a, b);
        table->cumulative[static_cast<size_t>(k + 1)] = table->cumulative[static_cast<size_t>(k)] + seg;
    }
    for (const auto& [u, sp] : speeds) max_speed = std::max(max_speed, sp);
    for (const auto& [u, sp] : speeds) {
        if (!(sp > 1e-10 * std::max(1.0, max_speed))) {
            throw InvalidInput("arc_length_reparametrize: vanishing speed near parameter " +
                               std::to_string(u));
        }
    }
    for (double knot : table->knots) {
        if (!(table->speed(knot) > 1e-10 * std::max(1.0, max_speed))) {
            throw InvalidInput("arc_length_reparametrize: vanishing speed at parameter " +
                               std::to_string(knot));
        }
    }

    const double length = table->cumulative.back();
    ParamCurve reparam(curve.dim(), Interval{0.0, length}, [table](const Jet2& s) {
        const double t0 = table->inverse(s.v);
        const AmbientJet amb = ambient_along(table->f, table->curve, t0);
        const double sigma = amb.velocity.norm();
        const double dsigma = amb.velocity.dot(amb.acceleration) / sigma;
        const double dt = 1.0 / sigma;
        const double ddt = -dsigma / (sigma * sigma * sigma);
        return table->curve.at(Jet2{t0, dt * s.d, dt * s.dd + ddt * s.d * s.d});
    });
    return {std::move(reparam), length, [table](double s) { return table->inverse(s); }};
}

AmbientNormalReport ambient_normal_test(const ImmersionMap& hypersurface, const ParamCurve& curve,
                                        const std::vector<double>& grid) {
    if (hypersurface.dim_ambient() != hypersurface.dim_param() + 1) {
        throw UnsupportedError("ambient_normal_test: '" + hypersurface.name() +
                               "' is not a hypersurface");
    }
    AmbientNormalReport report;
    for (double s : grid) {
        const auto jets = curve.at(Jet2::variable(s));
        Vec x(curve.dim());
        for (int i = 0; i < curve.dim(); ++i) x[i] = jets[static_cast<size_t>(i)].v;
        const Vec acc = curve_jet(hypersurface, jets).acceleration;
        const Vec normal = unit_normal(hypersurface, x);
        const double dev = (acc - acc.dot(normal) * normal).norm();
        report.grid.push_back(s);
        report.deviation.push_back(dev);
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    return report;
}

BvpResult geodesic_bvp(const ImmersionMap& f, const Vec& x_start, const Vec& x_end,
                       const BvpOptions& options) {
    const int m = f.dim_param();
    if (!f.domain().interior(x_start) || !f.domain().interior(x_end)) {
        throw DomainError("geodesic_bvp: endpoints must be interior points");
    }
    const IvpOptions ivp{options.step, options.christoffel};
    const double horizon = options.horizon;

    auto shoot = [&](const Vec& v) -> std::optional<Trajectory> {
        if (v.norm() == 0.0) return std::nullopt;
        Trajectory t = geodesic_ivp(f, x_start, v, horizon, ivp);
        if (t.left_domain) return std::nullopt;
        return t;
    };

    Vec v = options.initial_velocity.value_or((x_end - x_start) / horizon);
    std::optional<Trajectory> traj = shoot(v);
    for (int retry = 0; !traj && retry < 20; ++retry) {
        v *= options.damping;
        traj = shoot(v);
    }
    if (!traj) throw ConvergenceError("geodesic_bvp: every initial shot left the domain",
                                      std::numeric_limits<double>::infinity());

    Vec residual = traj->back().x - x_end;
    double best = residual.norm();
    int iter = 0;
    for (; iter < options.max_iterations && best > options.tolerance; ++iter) {
        Mat jac(m, m);
        for (int j = 0; j < m; ++j) {
            const double dv = 1e-6 * std::max(1.0, v.norm());
            Vec vp = v, vm = v;
            vp[j] += dv;
            vm[j] -= dv;
            const auto tp = shoot(vp);
            const auto tm = shoot(vm);
            if (!tp || !tm) {
                throw ConvergenceError("geodesic_bvp: Jacobian stencil left the domain", best);
            }
            jac.col(j) = (tp->back().x - tm->back().x) / (2.0 * dv);
        }
        Eigen::FullPivLU<Mat> lu(jac);
        if (!lu.isInvertible()) throw ConvergenceError("geodesic_bvp: singular shooting Jacobian", best);
        const Vec delta = -lu.solve(residual);

        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k, lambda *= options.damping) {
            const Vec trial = v + lambda * delta;
            auto t = shoot(trial);
            if (!t) continue;
            const Vec r = t->back().x - x_end;
            if (r.norm() < best || r.norm() <= options.tolerance) {
                v = trial;
                traj = std::move(t);
                residual = r;
                best = r.norm();
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    if (best > std::max(options.tolerance, options.accept)) {
        throw ConvergenceError("geodesic_bvp: no convergence after " + std::to_string(iter) +
                                   " iterations",
                               best);
    }
    BvpResult result;
    result.length = trajectory_length(f, *traj);
    result.trajectory = std::move(*traj);
    result.initial_velocity = v;
    result.endpoint_error = best;
    result.iterations = iter;
    return result;
}

}  // namespace eqgeo
