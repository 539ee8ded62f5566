#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "eqgeo/economy.hpp"
#include "eqgeo/equilibrium_manifold.hpp"
#include "eqgeo/fgp.hpp"
#include "eqgeo/geodesic.hpp"

namespace eqgeo {

using nlohmann::json;

/// A manifold or economy loaded from a JSON description.
///
/// Exactly one of `manifold`, `counterexample` or `reference` is set; an
/// economy file also fills `economy`.
struct Subject {
    std::string name;
    std::optional<Economy> economy;
    std::optional<EquilibriumManifoldM2> manifold;
    std::optional<CounterexampleManifold> counterexample;
    std::optional<ImmersionMap> reference;

    const ImmersionMap& immersion() const;
};

Economy parse_economy(const json& j);
Subject parse_subject(const json& j);
Subject load_subject(const std::filesystem::path& path);
json load_json(const std::filesystem::path& path);

json to_json(const Vec& v);
json to_json(const FgpReport& report);
json to_json(const CorollaryDashboard& dashboard);
json to_json(const PriceIncomePoint& point);
json to_json(const EquilibriumSet& set);
json to_json(const SampledBCurve& curve);

/// Dumps with two-space indent and a trailing newline.
std::string render(const json& j);

/// Columns: time, x_0.., v_0.., energy.
void write_trajectory_csv(std::ostream& os, const ImmersionMap& f, const Trajectory& trajectory);
/// Columns: s, total, normal, tangential.
void write_residual_csv(std::ostream& os, const ResidualReport& report);

}  // namespace eqgeo
