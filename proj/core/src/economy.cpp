#include "eqgeo/economy.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <list>
#include <memory>
#include <mutex>

#include "eqgeo/curve.hpp"
#include "eqgeo/errors.hpp"

namespace eqgeo {

Preference Preference::cobb_douglas(Vec alpha) {
    Preference p{Kind::CobbDouglas, std::move(alpha), 0.0};
    p.validate();
    return p;
}

Preference Preference::ces(Vec alpha, double rho) {
    Preference p{Kind::Ces, std::move(alpha), rho};
    p.validate();
    return p;
}

void Preference::validate() const {
    if (alpha.size() < 2) throw InvalidInput("preference: need at least two shares");
    if ((alpha.array() <= 0.0).any()) throw InvalidInput("preference: shares must be positive");
    if (std::abs(alpha.sum() - 1.0) > 1e-12) throw InvalidInput("preference: shares must sum to 1");
    if (kind == Kind::Ces && (!(rho < 1.0) || rho == 0.0)) {
        throw InvalidInput("preference: CES needs rho < 1 and rho != 0");
    }
}

void check_endowment(const Economy& economy, const Vec& endowment1) {
    if (endowment1.size() != economy.resources.size()) throw InvalidInput("economy: endowment length != L");
    const Eigen::ArrayXd other = (economy.resources - endowment1).array();
    if ((endowment1.array() < 0.0).any() || (other < 0.0).any() || endowment1.isZero() ||
        (other == 0.0).all()) {
        throw InvalidInput("economy: endowment must satisfy 0 <= omega1 <= r with both agents endowed");
    }
}

void Economy::validate() const {
    if (goods < 2) throw InvalidInput("economy: need at least two goods");
    for (const auto& p : preferences) {
        p.validate();
        if (p.alpha.size() != goods) throw InvalidInput("economy: share vector length != L");
    }
    if (resources.size() != goods) throw InvalidInput("economy: resources length != L");
    if ((resources.array() <= 0.0).any()) throw InvalidInput("economy: resources must be positive");
    if (endowment1) {
        check_endowment(*this, *endowment1);
    }
}

Vec demand(const Preference& pref, const Vec& prices, double income) {
    if ((prices.array() <= 0.0).any()) throw InvalidInput("demand: prices must be positive");
    if (!(income > 0.0)) throw InvalidInput("demand: income must be positive");
    if (prices.size() != pref.alpha.size()) throw InvalidInput("demand: dimension mismatch");
    if (pref.kind == Preference::Kind::CobbDouglas) {
        return (pref.alpha.array() * income / prices.array()).matrix();
    }
    const double sigma = 1.0 / (1.0 - pref.rho);
    const Eigen::ArrayXd q = (pref.alpha.array() / prices.array()).pow(sigma);
    return (q * income / (prices.array() * q).sum()).matrix();
}

Vec excess_demand(const Economy& economy, const Vec& prices, double income1) {
    const double wealth = prices.dot(economy.resources);
    if (!(income1 > 0.0) || !(income1 < wealth)) {
        throw InvalidInput("excess_demand: consumer 1 income must lie in (0, p·r)");
    }
    return demand(economy.preferences[0], prices, income1) +
           demand(economy.preferences[1], prices, wealth - income1) - economy.resources;
}

namespace {

constexpr double kFullResidualLimit = 1e-8;

Vec full_prices(const Vec& head) {
    Vec p(head.size() + 1);
    p.head(head.size()) = head;
    p[head.size()] = 1.0;
    return p;
}

// Newton on log-prices with a central-difference Jacobian and backtracking.
// Returns the log-prices and the final residual norm.
template <class Residual>
std::pair<Vec, int> newton_log_prices(int n, Residual&& residual, const SolveOptions& options,
                                      const std::string& context) {
    Vec y = options.initial_prices ? Vec(options.initial_prices->array().log().matrix()) : Vec(Vec::Zero(n));
    Vec r = residual(y);
    double norm = r.norm();
    int iter = 0;
    int polish = 0;
    for (; iter < options.max_iterations; ++iter) {
        if (norm <= options.tolerance) {
            // A few extra steps drive the residual to rounding level so that
            // finite differences of the solution stay clean.
            if (++polish > 3 || norm == 0.0) break;
        }
        Mat jac(n, n);
        for (int j = 0; j < n; ++j) {
            const double h = 1e-6;
            Vec yp = y, ym = y;
            yp[j] += h;
            ym[j] -= h;
            jac.col(j) = (residual(yp) - residual(ym)) / (2 * h);
        }
        Eigen::FullPivLU<Mat> lu(jac);
        if (!lu.isInvertible()) break;
        const Vec step = -lu.solve(r);
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 40; ++k, lambda *= 0.5) {
            const Vec trial = y + lambda * step;
            Vec rt;
            try {
                rt = residual(trial);
            } catch (const InvalidInput&) {
                continue;
            }
            if (rt.allFinite() && rt.norm() < norm) {
                y = trial;
                r = rt;
                norm = rt.norm();
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    if (!(norm <= options.tolerance)) {
        throw ConvergenceError(context + ": Newton failed, last prices " +
                                   format_point(y.array().exp().matrix()),
                               norm);
    }
    return {y, iter};
}

}  // namespace

PriceIncomePoint solve_price_income(const Economy& economy, double share, const SolveOptions& options) {
    if (!(share > 0.0 && share < 1.0)) {
        throw InvalidInput("solve_price_income: income share must lie in (0, 1), got " +
                           std::to_string(share));
    }
    auto residual = [&](const Vec& y) -> Vec {
        const Vec p = full_prices(y.array().exp().matrix());
        return excess_demand(economy, p, share * p.dot(economy.resources)).head(economy.goods - 1);
    };
    const auto [y, iter] = newton_log_prices(economy.goods - 1, residual, options,
                                             "solve_price_income at share " + std::to_string(share));
    PriceIncomePoint out;
    out.prices = y.array().exp().matrix();
    const Vec p = full_prices(out.prices);
    out.share = share;
    out.income = share * p.dot(economy.resources);
    out.residual = excess_demand(economy, p, out.income).norm();
    // The last market clears by Walras' law only at a genuine solution; this
    // rejects runaway iterates where the first L−1 residuals fade asymptotically.
    if (!(out.residual <= kFullResidualLimit)) {
        throw ConvergenceError(std::string("solve_price_income") + ": spurious solution, full excess demand " +
                                   std::to_string(out.residual),
                               out.residual);
    }
    out.iterations = iter;
    return out;
}

PriceIncomePoint solve_endowment(const Economy& economy, const Vec& endowment1, const SolveOptions& options) {
    check_endowment(economy, endowment1);
    auto residual = [&](const Vec& y) -> Vec {
        const Vec p = full_prices(y.array().exp().matrix());
        return excess_demand(economy, p, p.dot(endowment1)).head(economy.goods - 1);
    };
    const auto [y, iter] = newton_log_prices(economy.goods - 1, residual, options, "solve_endowment");
    PriceIncomePoint out;
    out.prices = y.array().exp().matrix();
    const Vec p = full_prices(out.prices);
    out.income = p.dot(endowment1);
    out.share = out.income / p.dot(economy.resources);
    out.residual = excess_demand(economy, p, out.income).norm();
    // The last market clears by Walras' law only at a genuine solution; this
    // rejects runaway iterates where the first L−1 residuals fade asymptotically.
    if (!(out.residual <= kFullResidualLimit)) {
        throw ConvergenceError(std::string("solve_endowment") + ": spurious solution, full excess demand " +
                                   std::to_string(out.residual),
                               out.residual);
    }
    out.iterations = iter;
    return out;
}

double share_to_logit(double share) { return std::log(share / (1.0 - share)); }
double logit_to_share(double s) { return 1.0 / (1.0 + std::exp(-s)); }

namespace {

// Re-solves the economy at arbitrary t and differentiates by Richardson
// extrapolation.  A small cache keeps the L component lookups made at one t
// from repeating the solves.
class BCurveEvaluator {
public:
    BCurveEvaluator(Economy economy, std::vector<double> grid, std::vector<Vec> grid_prices,
                    BCurveOptions options)
        : economy_(std::move(economy)),
          grid_(std::move(grid)),
          grid_prices_(std::move(grid_prices)),
          options_(options) {}

    // Components 0..L−2 are prices, L−1 is income.
    std::vector<CurveJet> jets(double t) const {
        {
            std::lock_guard lock(mutex_);
            for (auto it = cache_.begin(); it != cache_.end(); ++it) {
                if (it->first == t) {
                    cache_.splice(cache_.begin(), cache_, it);
                    return it->second;
                }
            }
        }
        auto result = compute(t);
        std::lock_guard lock(mutex_);
        cache_.emplace_front(t, result);
        if (cache_.size() > 16) cache_.pop_back();
        return result;
    }

    std::vector<CurveJet> compute(double t) const {
        const Vec guess = nearest_guess(t);
        const Vec center = solve(t, guess);
        const Vec::Index dim = center.size();

        double h = options_.derivative_step;
        h = std::min(h, 0.5 * std::min(t, 1.0 - t));
        const int levels = std::max(1, options_.richardson_levels);
        std::vector<std::vector<Vec>> d1(static_cast<size_t>(levels)), d2(static_cast<size_t>(levels));
        for (int k = 0; k < levels; ++k) {
            const double hk = h / std::pow(2.0, k);
            const Vec plus = solve(t + hk, center.head(dim - 1));
            const Vec minus = solve(t - hk, center.head(dim - 1));
            d1[static_cast<size_t>(k)].push_back((plus - minus) / (2.0 * hk));
            d2[static_cast<size_t>(k)].push_back((plus - 2.0 * center + minus) / (hk * hk));
        }
        const Vec first = extrapolate(d1);
        const Vec second = extrapolate(d2);
        std::vector<CurveJet> out(static_cast<size_t>(dim));
        for (Vec::Index i = 0; i < dim; ++i) out[static_cast<size_t>(i)] = {center[i], first[i], second[i]};
        return out;
    }

private:
    // Richardson table for an O(h²) central difference.
    static Vec extrapolate(std::vector<std::vector<Vec>>& table) {
        const size_t n = table.size();
        for (size_t k = 1; k < n; ++k) {
            for (size_t i = 1; i <= k; ++i) {
                const double f = std::pow(4.0, static_cast<double>(i));
                const Vec& fine = table[k][i - 1];
                const Vec& coarse = table[k - 1][i - 1];
                table[k].push_back(fine + (fine - coarse) / (f - 1.0));
            }
        }
        return table[n - 1][n - 1];
    }

    Vec nearest_guess(double t) const {
        const auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
        size_t idx = static_cast<size_t>(std::distance(grid_.begin(), it));
        if (idx == grid_.size()) idx = grid_.size() - 1;
        if (idx > 0 && std::abs(grid_[idx - 1] - t) < std::abs(grid_[idx] - t)) --idx;
        return grid_prices_[idx];
    }

    // (p_1..p_{L−1}, w_1) at share t.
    Vec solve(double t, const Vec& guess) const {
        SolveOptions opt;
        opt.initial_prices = guess;
        PriceIncomePoint pt;
        try {
            pt = solve_price_income(economy_, t, opt);
        } catch (const ConvergenceError&) {
            pt = solve_price_income(economy_, t);
        }
        Vec out(pt.prices.size() + 1);
        out.head(pt.prices.size()) = pt.prices;
        out[pt.prices.size()] = pt.income;
        return out;
    }

    Economy economy_;
    std::vector<double> grid_;
    std::vector<Vec> grid_prices_;
    BCurveOptions options_;
    mutable std::mutex mutex_;
    mutable std::list<std::pair<double, std::vector<CurveJet>>> cache_;
};

}  // namespace

SampledBCurve sample_B_curve(const Economy& economy, const std::vector<double>& grid,
                             const BCurveOptions& options) {
    economy.validate();
    if (grid.size() < 2) throw InvalidInput("sample_B_curve: need at least two grid points");
    if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidInput("sample_B_curve: grid must increase");
    if (!(grid.front() > 0.0 && grid.back() < 1.0)) {
        throw InvalidInput("sample_B_curve: grid must lie inside (0, 1)");
    }

    // Continuation outward from the grid point nearest an even split, where a
    // uniform starting guess is safest.
    const size_t n = grid.size();
    size_t centre = 0;
    for (size_t i = 1; i < n; ++i) {
        if (std::abs(grid[i] - 0.5) < std::abs(grid[centre] - 0.5)) centre = i;
    }
    std::vector<PriceIncomePoint> points(n);
    auto solve_at = [&](size_t i, std::optional<Vec> guess) {
        SolveOptions opt;
        opt.initial_prices = std::move(guess);
        try {
            points[i] = solve_price_income(economy, grid[i], opt);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("sample_B_curve: grid point t = " + std::to_string(grid[i]) +
                                       " failed: " + e.what(),
                                   e.best_residual());
        }
    };
    solve_at(centre, std::nullopt);
    for (size_t i = centre + 1; i < n; ++i) solve_at(i, points[i - 1].prices);
    for (size_t i = centre; i-- > 0;) solve_at(i, points[i + 1].prices);
    std::vector<Vec> grid_prices;
    for (const auto& pt : points) grid_prices.push_back(pt.prices);

    auto evaluator = std::make_shared<BCurveEvaluator>(economy, grid, grid_prices, options);
    const int nprices = economy.goods - 1;
    std::vector<PriceIncomeCurve::Source> price_sources;
    for (int j = 0; j < nprices; ++j) {
        price_sources.push_back([evaluator, j](double t) { return evaluator->jets(t)[static_cast<size_t>(j)]; });
    }
    PriceIncomeCurve::Source income_source = [evaluator, nprices](double t) {
        return evaluator->jets(t)[static_cast<size_t>(nprices)];
    };

    SampledBCurve out{grid, std::move(points), {}, {}, 0.0,
                      PriceIncomeCurve("economy", economy.goods, std::move(price_sources),
                                       std::move(income_source), Interval{grid.front(), grid.back()})};
    for (double t : grid) {
        const auto jets = evaluator->jets(t);
        for (int j = 0; j < nprices; ++j) out.price_jets.push_back(jets[static_cast<size_t>(j)]);
        out.income_jets.push_back(jets[static_cast<size_t>(nprices)]);
    }
    for (size_t i = 1; i + 1 < grid.size(); ++i) {
        const Vec d = out.points[i + 1].prices - 2.0 * out.points[i].prices + out.points[i - 1].prices;
        out.max_second_difference = std::max(out.max_second_difference, d.cwiseAbs().maxCoeff());
    }
    if (!std::isfinite(out.max_second_difference)) {
        throw ConvergenceError("sample_B_curve: non-finite second differences", out.max_second_difference);
    }
    return out;
}

EquilibriumSet count_equilibria(const Economy& economy, const CountOptions& options) {
    if (!economy.endowment1) throw InvalidInput("count_equilibria: economy has no endowment");
    return count_equilibria(economy, *economy.endowment1, options);
}

EquilibriumSet count_equilibria(const Economy& economy, const Vec& endowment1,
                                const CountOptions& options) {
    if (economy.goods != 2) {
        throw UnsupportedError("count_equilibria: the price scan needs exactly two goods");
    }
    check_endowment(economy, endowment1);
    const Vec endowment2 = economy.resources - endowment1;
    auto excess = [&](double p1) -> Vec {
        const Vec p{{p1, 1.0}};
        return demand(economy.preferences[0], p, p.dot(endowment1)) +
               demand(economy.preferences[1], p, p.dot(endowment2)) - economy.resources;
    };
    auto z1 = [&](double p1) { return excess(p1)[0]; };

    const int n = std::max(3, options.resolution);
    const double llo = std::log(options.lo), lhi = std::log(options.hi);
    std::vector<double> ps(static_cast<size_t>(n)), zs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        ps[static_cast<size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
        zs[static_cast<size_t>(i)] = z1(ps[static_cast<size_t>(i)]);
    }

    EquilibriumSet set;
    set.endowment = endowment1;
    std::vector<double> roots;
    auto polish = [&](double a, double b) {
        double za = z1(a);
        double x = 0.5 * (a + b);
        for (int it = 0; it < 200; ++it) {
            const double zx = z1(x);
            if (zx == 0.0) break;
            if ((zx > 0.0) == (za > 0.0)) {
                a = x;
                za = zx;
            } else {
                b = x;
            }
            const double h = 1e-7 * x;
            const double dz = (z1(x + h) - z1(x - h)) / (2.0 * h);
            double next = x - zx / dz;
            if (!(next > a && next < b)) next = 0.5 * (a + b);
            if (std::abs(next - x) <= 1e-16 * x || b - a <= 4e-16 * x) {
                x = next;
                break;
            }
            x = next;
        }
        return x;
    };
    for (int i = 0; i < n; ++i) {
        const double z = zs[static_cast<size_t>(i)];
        if (z == 0.0) {
            roots.push_back(ps[static_cast<size_t>(i)]);
            if (i == 0 || i == n - 1) set.possibly_censored = true;
            continue;
        }
        if (i + 1 < n) {
            const double zn = zs[static_cast<size_t>(i + 1)];
            if (zn != 0.0 && (z > 0.0) != (zn > 0.0)) {
                roots.push_back(polish(ps[static_cast<size_t>(i)], ps[static_cast<size_t>(i + 1)]));
                if (i == 0 || i + 1 == n - 1) set.possibly_censored = true;
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    for (double r : roots) {
        if (!set.roots.empty() && std::abs(r - set.roots.back().prices[0]) <= 1e-6) continue;
        const Vec p{{r, 1.0}};
        set.roots.push_back({p, excess(r).norm()});
    }
    set.count = static_cast<int>(set.roots.size());
    set.scan_failure = set.count % 2 == 0;
    return set;
}

}  // namespace eqgeo
