#pragma once

#include "eqgeo/immersion.hpp"

namespace eqgeo {

/// x ↦ (x, 0) ⊂ R^{m+1} on [−half_width, half_width]^m.
ImmersionMap flat_plane(int dim = 2, double half_width = 10.0);

/// (r, θ) ↦ (r cos θ, r sin θ, 0) with r ∈ [0.5, 5].
ImmersionMap polar_chart();

/// (θ, φ) ↦ (sin θ cos φ, sin θ sin φ, cos θ), θ kept away from the poles.
ImmersionMap unit_sphere_chart(double pole_margin = 0.05);

}  // namespace eqgeo
