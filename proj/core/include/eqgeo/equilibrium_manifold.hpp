#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "eqgeo/curve.hpp"
#include "eqgeo/diffgeo.hpp"
#include "eqgeo/price_income_curve.hpp"

namespace eqgeo {

/// Scalars shared by the closed-form connection of E(r) at (t, x_1..x_{L−1}).
struct BoxedSymbols {
    double A{0.0};          ///< ẇ − Σ ṗ_j x_j
    double B{0.0};          ///< Σ ṗ_j²
    double C{0.0};          ///< Σ ṗ_j p̈_j
    double norm_p_sq{0.0};  ///< 1 + Σ p_j²
    double A_prime{0.0};    ///< ẅ − Σ p̈_j x_j

    double denominator() const { return norm_p_sq * B + A * A; }
};

/// Equilibrium manifold E(r) of a two-consumer economy, parametrized by
/// (t, α_1..α_{L−1}) ↦ (p(t), α, w(t) − p(t)·α) ⊂ R^{2L−1}.
class EquilibriumManifoldM2 {
public:
    /// Rejects curves with a non-positive price anywhere on the t-domain.
    static EquilibriumManifoldM2 assemble(PriceIncomeCurve curve, Interval alpha_range = {-0.5, 1.5});
    /// Skips the positivity audit; used for the price-positivity counterexample.
    static EquilibriumManifoldM2 assemble_unchecked(PriceIncomeCurve curve,
                                                    Interval alpha_range = {-0.5, 1.5});

    int goods() const { return curve_.goods(); }
    const PriceIncomeCurve& curve() const { return curve_; }
    const ImmersionMap& immersion() const { return immersion_; }
    Interval t_domain() const { return curve_.domain(); }
    Interval alpha_range() const { return alpha_range_; }

    BoxedSymbols boxed(const Vec& point) const;

private:
    EquilibriumManifoldM2(PriceIncomeCurve curve, Interval alpha_range, ImmersionMap immersion)
        : curve_(std::move(curve)), alpha_range_(alpha_range), immersion_(std::move(immersion)) {}

    PriceIncomeCurve curve_;
    Interval alpha_range_;
    ImmersionMap immersion_;
};

/// Closed-form Christoffel symbols of E(r). Throws SingularPointError where
/// ‖p‖²B + A² vanishes.
ChristoffelSymbols closed_form_christoffel(const EquilibriumManifoldM2& manifold, const Vec& point);

/// Surface normal (ṗα − ẇ, pṗ, ṗ) of the two-good manifold (not normalized).
Eigen::Vector3d normal_vector_l2(const EquilibriumManifoldM2& manifold, double t, double alpha);

struct RuledCheck {
    bool ruled{false};
    double max_defect{0.0};
};

/// Measures |f(t,α) − f(t,0) − Σ α_j (f(t,e_j) − f(t,0))| over the samples;
/// ruled means the defect stays within 1e-10.
RuledCheck ruled_decomposition_check(const ImmersionMap& f, const std::vector<Vec>& samples);

/// Base points 0, e_1, …, e_{L−1} in α-space.
std::vector<Vec> coordinate_base_points(int goods);

/// t-curves t ↦ (t, b) through every base point b.
std::vector<ParamCurve> coordinate_curves(int goods, Interval t_domain);

/// Lines α_j ↦ (t, α_j e_j) at fixed t, one per α-direction.
std::vector<ParamCurve> alpha_lines(int goods, double t, Interval alpha_domain);

enum class CounterexampleKind { Remark1, Remark2 };

struct CounterexampleManifold {
    CounterexampleKind kind;
    ImmersionMap immersion;
    /// Present for the positivity counterexample, which keeps the E(r) structure.
    std::optional<EquilibriumManifoldM2> parametrized;
    Interval t_domain;
};

/// Prices p_1..p_{L−2} fixed at the given constants and p_{L−1}(t) = t.
CounterexampleManifold remark1_manifold(int goods, const std::vector<double>& constants,
                                        PriceIncomeCurve::Source income,
                                        Interval t_domain = {-1.0, 1.0},
                                        Interval alpha_range = {-0.5, 1.5});

/// Ruled hypersurface F(t, α) = (α_1, …, α_{L−1}, γ_1(t), γ_2(t)) ⊂ R^{L+1}.
CounterexampleManifold remark2_hypersurface(int goods, PriceIncomeCurve::Source gamma1,
                                            PriceIncomeCurve::Source gamma2,
                                            Interval t_domain = {0.0, 1.0},
                                            Interval alpha_range = {-0.5, 1.5});

/// Largest angle (radians, sign-insensitive) between unit normals sampled on
/// a hypersurface; zero for a hyperplane.
double normal_direction_spread(const ImmersionMap& hypersurface, const std::vector<Vec>& samples);

}  // namespace eqgeo
