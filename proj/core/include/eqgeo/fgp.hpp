#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqgeo/economy.hpp"
#include "eqgeo/equilibrium_manifold.hpp"
#include "eqgeo/geodesic.hpp"

namespace eqgeo {

struct FgpTolerances {
    double geodesic{1e-8};   ///< normal residual below which a curve counts as geodesic
    double failure{1e-3};    ///< residual that counts as a clear failure
    double constancy{1e-6};  ///< price variation treated as constant
    double flatness{1e-6};   ///< |K| treated as zero
};

enum class FgpVerdict { Holds, Fails };
std::string to_string(FgpVerdict verdict);

/// max_j max_t |ṗ_j(t)| over the grid.
double price_constancy(const PriceIncomeCurve& curve, const std::vector<double>& t_grid);

struct CurveResidual {
    Vec base;  ///< α-coordinates of the t-curve
    double max_normal{0.0};
    double length{0.0};
};

struct FgpReport {
    std::string manifold;
    std::vector<CurveResidual> per_curve;
    std::optional<double> price_variation;  ///< absent when the manifold has no price curve
    FgpVerdict verdict{FgpVerdict::Fails};
    std::optional<bool> positivity_ok;
    /// All t-curves geodesic while prices vary.
    bool theorem_violation{false};
    std::vector<std::string> notes;

    double max_residual() const;
};

struct FgpOptions {
    FgpTolerances tolerances;
    int residual_points{201};  ///< arc-length grid per curve
    int constancy_points{1001};
};

FgpReport check_fgp(const EquilibriumManifoldM2& manifold, const FgpOptions& options = {});
FgpReport check_fgp(const CounterexampleManifold& manifold, const FgpOptions& options = {});

/// E(r) of an economy over consumer-1 income shares in `shares`.
EquilibriumManifoldM2 manifold_from_economy(const Economy& economy, Interval shares = {0.05, 0.95},
                                            int grid_points = 91);

struct CurvatureSample {
    Vec point;
    Vec u;
    Vec v;
    double sectional{0.0};
};

struct FiberCount {
    Vec endowment;
    int count{0};
    bool possibly_censored{false};
    bool scan_failure{false};
};

enum class Consistency { Consistent, Inconsistent, NotAsserted };
std::string to_string(Consistency consistency);

struct CorollaryDashboard {
    std::string subject;
    std::uint64_t seed{0};
    std::optional<double> price_constancy;
    double curvature_max_abs{0.0};
    std::vector<CurvatureSample> curvature;
    FgpReport fgp;
    std::optional<std::vector<FiberCount>> equilibrium_counts;
    std::string entropy{"UNAVAILABLE"};
    Consistency consistency{Consistency::NotAsserted};
    std::vector<std::string> observations;

    /// 0 consistent, 2 when a theorem violation or inconsistency is flagged.
    int exit_code() const;
};

struct DashboardOptions {
    std::uint64_t seed{20240601};
    int curvature_samples{64};
    int fiber_samples{8};
    FgpOptions fgp;
    CountOptions counts;
};

CorollaryDashboard corollary_dashboard(const EquilibriumManifoldM2& manifold,
                                       const Economy* economy, const DashboardOptions& options = {});
CorollaryDashboard corollary_dashboard(const CounterexampleManifold& manifold,
                                       const DashboardOptions& options = {});

}  // namespace eqgeo
