#include <benchmark/benchmark.h>

#include <vector>

#include "xfdiag/balance.hpp"
#include "xfdiag/catalog.hpp"
#include "xfdiag/features.hpp"
#include "xfdiag/forest.hpp"
#include "xfdiag/gboost.hpp"
#include "xfdiag/kde.hpp"
#include "xfdiag/matrix.hpp"
#include "xfdiag/rng.hpp"
#include "xfdiag/simgen.hpp"
#include "xfdiag/tree.hpp"

using namespace xfdiag;

namespace {

std::vector<double> noise_window(std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<double> w(n);
    for (auto& v : w) v = rng.next_normal();
    return w;
}

WaveformRecord fault_record() {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::fault;
    spec.fault = FaultParams{FaultType::ABG, 45.0, 5.0, 50.0, WindingSide::primary};
    spec.seed = 7;
    return synth_fault(spec);
}

void training_set(std::size_t n, std::size_t d, int classes, Matrix& X, std::vector<int>& y) {
    CounterRng rng(17);
    X = Matrix(0, d);
    std::vector<double> row(d);
    for (std::size_t i = 0; i < n; ++i) {
        const int cls = static_cast<int>(i % static_cast<std::size_t>(classes));
        for (auto& v : row) v = rng.next_normal() + 2.0 * cls;
        X.push_row(row);
        y.push_back(cls);
    }
}

}  // namespace

static void bm_synthesize_fault(benchmark::State& state) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::fault;
    spec.fault = FaultParams{FaultType::BCG, 90.0, 1.0, 80.0, WindingSide::secondary};
    spec.seed = 5;
    for (auto _ : state) benchmark::DoNotOptimize(synth_fault(spec));
}
BENCHMARK(bm_synthesize_fault);

static void bm_extract_default_catalog(benchmark::State& state) {
    const auto rec = fault_record();
    const auto catalog = FeatureCatalog::get("default");
    for (auto _ : state) benchmark::DoNotOptimize(extract_vector(rec, catalog));
}
BENCHMARK(bm_extract_default_catalog);

static void bm_sample_entropy(benchmark::State& state) {
    const auto w = noise_window(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(sample_entropy(w, 2, 0.2));
}
BENCHMARK(bm_sample_entropy)->Arg(167)->Arg(1200);

static void bm_change_quantile(benchmark::State& state) {
    const auto w = noise_window(1200, 4);
    for (auto _ : state) benchmark::DoNotOptimize(change_quantile(w, 0.25, 0.75));
}
BENCHMARK(bm_change_quantile);

static void bm_dt_fit(benchmark::State& state) {
    Matrix X;
    std::vector<int> y;
    training_set(static_cast<std::size_t>(state.range(0)), 3, 7, X, y);
    for (auto _ : state) benchmark::DoNotOptimize(dt_fit(X, y));
}
BENCHMARK(bm_dt_fit)->Arg(792);

static void bm_rf_fit(benchmark::State& state) {
    Matrix X;
    std::vector<int> y;
    training_set(static_cast<std::size_t>(state.range(0)), 3, 7, X, y);
    ForestParams params;
    params.n_estimators = 50;
    for (auto _ : state) benchmark::DoNotOptimize(rf_fit(X, y, params));
}
BENCHMARK(bm_rf_fit)->Arg(792)->Unit(benchmark::kMillisecond);

static void bm_gb_fit(benchmark::State& state) {
    Matrix X;
    std::vector<int> y;
    training_set(static_cast<std::size_t>(state.range(0)), 3, 7, X, y);
    BoostParams params;
    params.n_estimators = 20;
    params.max_depth = 4;
    for (auto _ : state) benchmark::DoNotOptimize(gb_fit(X, y, params));
}
BENCHMARK(bm_gb_fit)->Arg(792)->Unit(benchmark::kMillisecond);

static void bm_smote(benchmark::State& state) {
    Matrix minority(0, 3);
    CounterRng rng(9);
    std::vector<double> row(3);
    for (int i = 0; i < 576; ++i) {
        for (auto& v : row) v = rng.next_normal();
        minority.push_row(row);
    }
    for (auto _ : state) benchmark::DoNotOptimize(smote(minority, 5, 29, 1));
}
BENCHMARK(bm_smote);

static void bm_kde_curve(benchmark::State& state) {
    const auto samples = noise_window(static_cast<std::size_t>(state.range(0)), 8);
    for (auto _ : state) benchmark::DoNotOptimize(kde_curve_auto(samples, 0.1, 512));
}
BENCHMARK(bm_kde_curve)->Arg(113)->Arg(1008);

BENCHMARK_MAIN();
