#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eqgeo/immersion.hpp"
#include "eqgeo/price_income_curve.hpp"

namespace eqgeo {

struct Preference {
    enum class Kind { CobbDouglas, Ces };

    Kind kind{Kind::CobbDouglas};
    Vec alpha;       ///< positive shares summing to one
    double rho{0.0};  ///< CES exponent, rho < 1 and rho != 0

    static Preference cobb_douglas(Vec alpha);
    static Preference ces(Vec alpha, double rho);

    void validate() const;
};

/// Two-consumer pure exchange economy with total resources r.
struct Economy {
    int goods{2};
    std::array<Preference, 2> preferences;
    Vec resources;
    std::optional<Vec> endowment1;  ///< consumer 2 holds r − ω_1

    void validate() const;
};

/// 0 ≤ ω_1 ≤ r componentwise, and neither consumer holds nothing.
void check_endowment(const Economy& economy, const Vec& endowment1);

Vec demand(const Preference& pref, const Vec& prices, double income);

/// Z(p, w_1) = x_1(p, w_1) + x_2(p, p·r − w_1) − r.
Vec excess_demand(const Economy& economy, const Vec& prices, double income1);

/// A point of the price-income equilibria: p_1..p_{L−1} (p_L = 1) and w_1.
struct PriceIncomePoint {
    Vec prices;
    double income{0.0};
    double share{0.0};
    double residual{0.0};  ///< ‖Z‖ at the returned point
    int iterations{0};
};

struct SolveOptions {
    std::optional<Vec> initial_prices;  ///< p_1..p_{L−1}; uniform prices when absent
    int max_iterations{100};
    double tolerance{1e-10};
};

/// Solves the first L−1 market-clearing equations with w_1 = share·(p·r),
/// Newton in log-prices.  share ∈ (0, 1) is consumer 1's income share.
PriceIncomePoint solve_price_income(const Economy& economy, double share,
                                    const SolveOptions& options = {});

/// Equilibrium for the endowment ω_1 (incomes p·ω_1 and p·(r − ω_1)).
/// Newton from `initial_prices`, so it returns one equilibrium when several exist.
PriceIncomePoint solve_endowment(const Economy& economy, const Vec& endowment1,
                                 const SolveOptions& options = {});

/// Maps the income share to the real line and back.
double share_to_logit(double share);
double logit_to_share(double s);

struct BCurveOptions {
    /// Base step for Richardson-extrapolated central differences.
    double derivative_step{1e-2};
    /// Extrapolation levels (h, h/2, …); 3 cancels the h² and h⁴ terms.
    int richardson_levels{3};
};

/// Price-income curve sampled over a share grid, with a continuous
/// evaluator that re-solves at any t (continuation from the nearest grid point).
struct SampledBCurve {
    std::vector<double> grid;
    std::vector<PriceIncomePoint> points;
    std::vector<CurveJet> price_jets;   ///< [grid index * (L−1) + j]
    std::vector<CurveJet> income_jets;  ///< per grid point
    double max_second_difference{0.0};  ///< smoothness diagnostic over the grid
    PriceIncomeCurve curve;
};

SampledBCurve sample_B_curve(const Economy& economy, const std::vector<double>& grid,
                             const BCurveOptions& options = {});

struct EquilibriumRoot {
    Vec prices;  ///< full normalized vector, p_L = 1
    double residual{0.0};
};

struct EquilibriumSet {
    Vec endowment;
    std::vector<EquilibriumRoot> roots;
    int count{0};
    bool possibly_censored{false};  ///< sign change in an edge cell of the scan
    bool scan_failure{false};       ///< an even count, impossible for a regular economy
};

struct CountOptions {
    int resolution{4001};  ///< log-spaced samples of p_1 over [lo, hi]
    double lo{1e-3};
    double hi{1e3};
};

/// Counts equilibria of a two-good economy with the given consumer-1 endowment
/// by bracketing sign changes of Z_1(p_1, 1) and polishing each root.
EquilibriumSet count_equilibria(const Economy& economy, const Vec& endowment1,
                                const CountOptions& options = {});
EquilibriumSet count_equilibria(const Economy& economy, const CountOptions& options = {});

}  // namespace eqgeo
