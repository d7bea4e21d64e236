#include "verity/batching.hpp"
#include "verity/numeric.hpp"
#include "verity/objectives.hpp"
#include "verity/rng.hpp"
#include "verity/statement.hpp"

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

namespace {

using namespace verity;

struct LossFixture {
    Batch batch;
    std::vector<double> scores;
    std::vector<double> logits;
    std::vector<std::vector<double>> reprs;
};

LossFixture make_fixture(std::size_t n_groups, std::size_t dim) {
    Rng rng(17);
    std::vector<StatementGroup> groups;
    for (std::size_t g = 0; g < n_groups; ++g) {
        StatementGroup group;
        group.group_id = "g" + std::to_string(g);
        if (g % 3 == 0) {
            group.kind = GroupKind::boolean;
            Statement s;
            s.text = "statement " + std::to_string(g);
            s.label = rng.below(2) == 1;
            s.origin = Origin::boolean;
            group.statements.push_back(s);
        } else {
            group.kind = GroupKind::multiple_choice;
            std::size_t correct = rng.below(4);
            for (std::size_t i = 0; i < 4; ++i) {
                Statement s;
                s.text = "choice " + std::to_string(g) + " " + std::to_string(i);
                s.label = i == correct;
                s.origin = Origin::question_choice;
                group.statements.push_back(s);
            }
        }
        groups.push_back(std::move(group));
    }

    LossFixture fx;
    fx.batch.groups = std::move(groups);
    fx.batch.offsets.push_back(0);
    for (const StatementGroup& group : fx.batch.groups) {
        for (const Statement& s : group.statements) fx.batch.labels.push_back(s.label ? 1 : 0);
        fx.batch.offsets.push_back(fx.batch.labels.size());
    }
    for (std::size_t i = 0; i < fx.batch.size(); ++i) {
        fx.logits.push_back(rng.normal());
        fx.scores.push_back(sigmoid(fx.logits.back()));
        std::vector<double> repr(dim);
        for (double& v : repr) v = rng.normal();
        fx.reprs.push_back(std::move(repr));
    }
    return fx;
}

void bench_binary_loss(benchmark::State& state) {
    LossFixture fx = make_fixture(static_cast<std::size_t>(state.range(0)), 64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(binary_loss(fx.batch, fx.scores));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fx.batch.size()));
}
BENCHMARK(bench_binary_loss)->Arg(8)->Arg(64);

void bench_multiclass_loss(benchmark::State& state) {
    LossFixture fx = make_fixture(static_cast<std::size_t>(state.range(0)), 64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(multiclass_loss(fx.batch, fx.logits));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fx.batch.size()));
}
BENCHMARK(bench_multiclass_loss)->Arg(8)->Arg(64);

void bench_contrastive_loss(benchmark::State& state) {
    LossFixture fx = make_fixture(static_cast<std::size_t>(state.range(0)), 64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(contrastive_loss(fx.batch, fx.reprs, 0.05));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fx.batch.size()));
}
BENCHMARK(bench_contrastive_loss)->Arg(8)->Arg(64);

void bench_combined_loss(benchmark::State& state) {
    LossFixture fx = make_fixture(static_cast<std::size_t>(state.range(0)), 64);
    LossWeights weights;
    for (auto _ : state) {
        benchmark::DoNotOptimize(combined_loss(fx.batch, fx.logits, fx.reprs, weights));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fx.batch.size()));
}
BENCHMARK(bench_combined_loss)->Arg(8)->Arg(64);

} // namespace

BENCHMARK_MAIN();
