#include "verity/calibration.hpp"
#include "verity/metrics.hpp"
#include "verity/rng.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace verity;

struct ScoreSet {
    std::vector<double> scores;
    std::vector<int> labels;
};

ScoreSet make_scores(std::size_t n) {
    Rng rng(23);
    ScoreSet set;
    set.scores.resize(n);
    set.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        set.scores[i] = rng.uniform();
        set.labels[i] = rng.below(2) == 0 ? 0 : 1;
    }
    set.labels[0] = 1;
    set.labels[n - 1] = 0;
    return set;
}

void bench_auroc(benchmark::State& state) {
    ScoreSet set = make_scores(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(auroc(set.scores, set.labels));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_auroc)->Arg(256)->Arg(4096);

void bench_average_precision(benchmark::State& state) {
    ScoreSet set = make_scores(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(average_precision(set.scores, set.labels));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_average_precision)->Arg(256)->Arg(4096);

void bench_ece_equal_width(benchmark::State& state) {
    ScoreSet set = make_scores(static_cast<std::size_t>(state.range(0)));
    CalibrationConfig config{15, Binning::equal_width};
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_ece(set.scores, set.labels, config));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_ece_equal_width)->Arg(256)->Arg(4096);

void bench_ece_equal_mass(benchmark::State& state) {
    ScoreSet set = make_scores(static_cast<std::size_t>(state.range(0)));
    CalibrationConfig config{15, Binning::equal_mass};
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_ece(set.scores, set.labels, config));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_ece_equal_mass)->Arg(256)->Arg(4096);

void bench_fit_temperature(benchmark::State& state) {
    std::size_t n = static_cast<std::size_t>(state.range(0));
    Rng rng(29);
    std::vector<double> logits(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        logits[i] = 3.0 * rng.normal();
        labels[i] = rng.below(2) == 0 ? 0 : 1;
    }
    CalibrationConfig config{15, Binning::equal_mass};
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_temperature(logits, labels, config, "bench"));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_fit_temperature)->Arg(256)->Arg(2048);

} // namespace
