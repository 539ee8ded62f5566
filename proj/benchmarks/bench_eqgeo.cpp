#include <benchmark/benchmark.h>

#include <map>
#include <numbers>
#include <string>

#include "eqgeo/economy.hpp"
#include "eqgeo/fgp.hpp"
#include "eqgeo/geodesic.hpp"
#include "eqgeo/io.hpp"
#include "eqgeo/reference_manifolds.hpp"

using namespace eqgeo;

namespace {

const Subject& subject(const std::string& name) {
    static std::map<std::string, Subject> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, load_subject(std::string(EQGEO_FIXTURE_DIR) + "/" + name)).first;
    return it->second;
}

}  // namespace

static void BM_ClosedFormChristoffel(benchmark::State& state) {
    const auto& m = *subject("analytic_l4.json").manifold;
    const Vec x{{0.4, 0.1, 0.2, 0.3}};
    for (auto _ : state) benchmark::DoNotOptimize(closed_form_christoffel(m, x));
}
BENCHMARK(BM_ClosedFormChristoffel);

static void BM_MetricChristoffel(benchmark::State& state) {
    const auto& m = *subject("analytic_l4.json").manifold;
    const Vec x{{0.4, 0.1, 0.2, 0.3}};
    const auto engine = state.range(0) == 0 ? DerivativeEngine::Dual : DerivativeEngine::CentralDifference;
    for (auto _ : state) benchmark::DoNotOptimize(christoffel_from_metric(m.immersion(), x, {engine, 0.0}));
}
BENCHMARK(BM_MetricChristoffel)->Arg(0)->Arg(1);

// Great circle over π on the sphere chart at varying step.
static void BM_GeodesicIvp(benchmark::State& state) {
    const ImmersionMap f = unit_sphere_chart();
    const double h = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(geodesic_ivp(f, Vec{{1.2, 0.0}}, Vec{{0.3, 1.0}}, std::numbers::pi, {h, {}}));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GeodesicIvp)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN);

static void BM_GeodesicBvp(benchmark::State& state) {
    const auto& m = *subject("constant_price.json").manifold;
    const Vec a{{0.3, 0.2, 0.4}}, b{{0.8, 0.9, -0.1}};
    for (auto _ : state) benchmark::DoNotOptimize(geodesic_bvp(m.immersion(), a, b));
}
BENCHMARK(BM_GeodesicBvp)->Unit(benchmark::kMillisecond);

static void BM_SampleBCurve(benchmark::State& state) {
    const Economy& e = *subject("ces_mirror.json").economy;
    const auto grid = linspace(0.05, 0.95, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sample_B_curve(e, grid));
}
BENCHMARK(BM_SampleBCurve)->Arg(31)->Arg(91)->Unit(benchmark::kMillisecond);

static void BM_CountEquilibria(benchmark::State& state) {
    const Economy& e = *subject("ces_mirror.json").economy;
    CountOptions opt;
    opt.resolution = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(count_equilibria(e, *e.endowment1, opt));
}
BENCHMARK(BM_CountEquilibria)->Arg(1001)->Arg(4001)->Arg(16001)->Unit(benchmark::kMicrosecond);

static void BM_CheckFgp(benchmark::State& state) {
    const auto& m = *subject("analytic_l4.json").manifold;
    for (auto _ : state) benchmark::DoNotOptimize(check_fgp(m));
}
BENCHMARK(BM_CheckFgp)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
