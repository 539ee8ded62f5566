#pragma once

#include <vector>

#include "eqgeo/immersion.hpp"

namespace eqgeo {

struct MetricTensor {
    Vec point;
    Mat g;
    Mat g_inv;
};

/// Γ^k_ij at a point, stored with the lower pair symmetric by construction.
class ChristoffelSymbols {
public:
    ChristoffelSymbols() = default;
    ChristoffelSymbols(Vec point, int dim);

    int dim() const { return dim_; }
    const Vec& point() const { return point_; }

    double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }
    /// Writes both Γ^k_ij and Γ^k_ji.
    void set(int k, int i, int j, double value);

    /// Γ^k_ij u^i w^j for every k.
    Vec contract(const Vec& u, const Vec& w) const;
    double max_abs() const;

private:
    size_t index(int k, int i, int j) const {
        return static_cast<size_t>((k * dim_ + i) * dim_ + j);
    }
    Vec point_;
    int dim_{0};
    std::vector<double> data_;
};

enum class DerivativeEngine {
    CentralDifference,  ///< second-order central differences of the metric
    Dual,               ///< exact metric derivatives from second-order jets
};

struct ChristoffelOptions {
    DerivativeEngine engine{DerivativeEngine::CentralDifference};
    /// Central-difference step. Non-positive means 1e-5·(1 + |x_h|) per axis.
    double step{0.0};
};

struct CurvatureReport {
    Vec point;
    Vec u;
    Vec v;
    double sectional{0.0};
    double riemann_max_abs{0.0};
};

struct CurvatureOptions {
    ChristoffelOptions christoffel{DerivativeEngine::Dual, 0.0};
    /// Step for differentiating Γ. Non-positive means 1e-4·(1 + |x_h|).
    double step{0.0};
};

/// Columns are ∂f/∂x_j, computed with duals. Throws DomainError outside the
/// box interior and ImmersionError when the rank drops below m.
Mat jacobian(const ImmersionMap& f, const Vec& x);

/// Same without the rank check; used by diagnostics that report degeneracy.
Mat jacobian_unchecked(const ImmersionMap& f, const Vec& x);

/// Second partials ∂²f/∂x_i∂x_j, indexed [i * m + j].
std::vector<Vec> second_partials(const ImmersionMap& f, const Vec& x);

MetricTensor induced_metric(const ImmersionMap& f, const Vec& x);

ChristoffelSymbols christoffel_from_metric(const ImmersionMap& f, const Vec& x,
                                           const ChristoffelOptions& options = {});

/// R^l_ijk = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik, indexed
/// [((l * m + i) * m + j) * m + k].
std::vector<double> riemann_tensor(const ImmersionMap& f, const Vec& x,
                                   const CurvatureOptions& options = {});

CurvatureReport sectional_curvature(const ImmersionMap& f, const Vec& x, const Vec& u,
                                    const Vec& v, const CurvatureOptions& options = {});

/// Unit normal of a hypersurface (n = m + 1) from the generalized cross
/// product of the Jacobian columns.
Vec unit_normal(const ImmersionMap& f, const Vec& x);

}  // namespace eqgeo
