#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqgeo/curve.hpp"
#include "eqgeo/diffgeo.hpp"

namespace eqgeo {

struct GeodesicState {
    Vec x;
    Vec v;
    double time{0.0};
};

struct Trajectory {
    std::vector<GeodesicState> states;
    double step{0.0};
    std::string manifold;
    std::string integrator{"rk4"};
    std::string step_policy{"fixed"};
    /// Integration stopped early because the next state left the domain.
    bool left_domain{false};

    const GeodesicState& back() const { return states.back(); }
};

struct IvpOptions {
    double step{1e-3};
    ChristoffelOptions christoffel{DerivativeEngine::Dual, 0.0};
};

/// ⟨v, v⟩_g at x.
double metric_energy(const ImmersionMap& f, const Vec& x, const Vec& v);

/// Classic RK4 on ẋ = v, v̇^k = −Γ^k_ij v^i v^j.
Trajectory geodesic_ivp(const ImmersionMap& f, const Vec& x0, const Vec& v0, double horizon,
                        const IvpOptions& options = {});

/// max_t |E(t) − E(0)| / E(0) with E = ⟨v, v⟩_g.
double energy_drift(const ImmersionMap& f, const Trajectory& trajectory);

struct ResidualReport {
    std::vector<double> grid;
    std::vector<double> total;       ///< g-norm of ẍ^k + Γ^k_ij ẋ^i ẋ^j
    std::vector<double> normal;      ///< part g-orthogonal to ẋ
    std::vector<double> tangential;  ///< part along ẋ
    double max_normal{0.0};
    double max_total{0.0};

    /// Pregeodesic acceptance: only the normal part counts.
    bool is_pregeodesic(double tolerance) const { return max_normal <= tolerance; }
};

struct ResidualOptions {
    ChristoffelOptions christoffel{DerivativeEngine::Dual, 0.0};
};

ResidualReport geodesic_residual(const ImmersionMap& f, const ParamCurve& curve,
                                 const std::vector<double>& grid,
                                 const ResidualOptions& options = {});
ResidualReport geodesic_residual(const ImmersionMap& f, const SampledCurve& curve,
                                 const ResidualOptions& options = {});

/// Unit-speed reparametrization of a regular curve.
struct ArcLengthCurve {
    ParamCurve curve;  ///< defined on [0, length]
    double length{0.0};
    /// Original parameter for a given arc length.
    std::function<double(double)> original_parameter;
};

struct ArcLengthOptions {
    int panels{256};  ///< Gauss–Legendre panels for the length table
};

ArcLengthCurve arc_length_reparametrize(const ImmersionMap& f, const ParamCurve& curve,
                                        const ArcLengthOptions& options = {});

struct AmbientNormalReport {
    std::vector<double> grid;
    std::vector<double> deviation;  ///< |acc − ⟨acc, N⟩ N| per sample
    double max_deviation{0.0};
};

/// Tests whether the ambient acceleration of the immersed curve is parallel
/// to the unit normal of a hypersurface.
AmbientNormalReport ambient_normal_test(const ImmersionMap& hypersurface, const ParamCurve& curve,
                                        const std::vector<double>& grid);

struct BvpOptions {
    std::optional<Vec> initial_velocity;
    double horizon{1.0};
    double step{1e-3};
    int max_iterations{50};
    double tolerance{1e-10};  ///< Newton stops once the endpoint error is below this
    double accept{1e-7};      ///< largest endpoint error returned without throwing
    double damping{0.5};
    ChristoffelOptions christoffel{DerivativeEngine::Dual, 0.0};
};

struct BvpResult {
    Trajectory trajectory;
    Vec initial_velocity;
    double length{0.0};
    double endpoint_error{0.0};
    int iterations{0};
};

/// Newton shooting for the geodesic joining two parameter points.
BvpResult geodesic_bvp(const ImmersionMap& f, const Vec& x_start, const Vec& x_end,
                       const BvpOptions& options = {});

/// ∫ sqrt(⟨v, v⟩_g) dt by the trapezoid rule over the stored states.
double trajectory_length(const ImmersionMap& f, const Trajectory& trajectory);

}  // namespace eqgeo
