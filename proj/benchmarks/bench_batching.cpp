#include "verity/batching.hpp"
#include "verity/rng.hpp"
#include "verity/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace verity;

DatasetPartition make_corpus(std::size_t n_groups) {
    SyntheticSpec spec;
    spec.name = "bench";
    spec.style = SyntheticStyle::qa;
    spec.n_groups = n_groups;
    spec.boolean_fraction = 0.3;
    spec.min_choices = 2;
    spec.max_choices = 6;
    return generate_synthetic_corpus(spec, 41);
}

void bench_build_batches(benchmark::State& state) {
    DatasetPartition corpus = make_corpus(static_cast<std::size_t>(state.range(0)));
    BatchConfig config;
    config.groups_per_batch = 64;
    config.cap_per_group = 4;
    config.max_tokens = 32;
    config.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_batches(corpus.groups, config));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_build_batches)->Arg(256)->Arg(2048);

void bench_cap_group(benchmark::State& state) {
    StatementGroup wide;
    wide.group_id = "wide";
    wide.kind = GroupKind::multiple_choice;
    std::size_t width = static_cast<std::size_t>(state.range(0));
    for (std::size_t i = 0; i < width; ++i) {
        Statement s;
        s.text = "choice " + std::to_string(i);
        s.label = i == 0;
        s.origin = Origin::question_choice;
        wide.statements.push_back(s);
    }
    Rng rng(13);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cap_group(wide, 4, rng));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_cap_group)->Arg(8)->Arg(64);

void bench_truncate_statement(benchmark::State& state) {
    Statement long_statement;
    long_statement.label = true;
    for (int i = 0; i < 96; ++i) {
        if (i > 0) long_statement.text += ' ';
        long_statement.text += "word" + std::to_string(i);
    }
    std::size_t budget = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(truncate_statement(long_statement, budget));
    }
}
BENCHMARK(bench_truncate_statement)->Arg(16)->Arg(128);

} // namespace
