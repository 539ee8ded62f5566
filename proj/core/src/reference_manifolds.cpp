#include "eqgeo/reference_manifolds.hpp"

#include <numbers>
#include <type_traits>

namespace eqgeo {

ImmersionMap flat_plane(int dim, double half_width) {
    std::vector<Interval> box(static_cast<size_t>(dim), Interval{-half_width, half_width});
    auto f = [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        std::vector<T> out(x.begin(), x.end());
        out.push_back(T(0.0));
        return out;
    };
    return ImmersionMap("flat_plane", dim, dim + 1, Box(std::move(box)), f);
}

ImmersionMap polar_chart() {
    auto f = [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        using std::cos;
        using std::sin;
        return std::vector<T>{x[0] * cos(x[1]), x[0] * sin(x[1]), T(0.0)};
    };
    return ImmersionMap("polar_chart", 2, 3, Box({{0.5, 5.0}, {-4.0, 4.0}}), f);
}

ImmersionMap unit_sphere_chart(double pole_margin) {
    constexpr double pi = std::numbers::pi;
    auto f = [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        using std::cos;
        using std::sin;
        const T s = sin(x[0]);
        return std::vector<T>{s * cos(x[1]), s * sin(x[1]), cos(x[0])};
    };
    return ImmersionMap("unit_sphere", 2, 3,
                        Box({{pole_margin, pi - pole_margin}, {-2.0 * pi, 2.0 * pi}}), f);
}

}  // namespace eqgeo
