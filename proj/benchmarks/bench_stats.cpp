#include "banditplan/bandit.hpp"
#include "banditplan/running_stats.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace banditplan;

namespace {

std::vector<RunningStats> random_stats(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> x(10.0, 3.0);
    std::vector<RunningStats> out(n);
    for (auto& s : out)
        for (int i = 0; i < 4; ++i) s.push(x(rng));
    return out;
}

void BM_Push(benchmark::State& state) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> x(0.0, 1.0);
    RunningStats s;
    for (auto _ : state) {
        s.push(x(rng));
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_Push);

void BM_MergeSiblings(benchmark::State& state) {
    const auto children = random_stats(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        RunningStats total;
        for (const auto& c : children) total = merge(total, c);
        benchmark::DoNotOptimize(total);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MergeSiblings)->Arg(4)->Arg(32)->Arg(256);

void BM_RetractMerge(benchmark::State& state) {
    const auto children = random_stats(64);
    RunningStats total;
    for (const auto& c : children) total = merge(total, c);
    std::size_t i = 0;
    for (auto _ : state) {
        const RunningStats& c = children[i++ % children.size()];
        total = merge(retract(total, c), c);
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_RetractMerge);

void BM_Select(benchmark::State& state) {
    const auto stats = random_stats(static_cast<std::size_t>(state.range(0)));
    std::vector<ArmView> arms;
    std::int64_t total = 0;
    for (const auto& s : stats) {
        arms.push_back({s, std::nullopt});
        total += s.count();
    }
    const auto policy = BoundPolicy::ucb1_normal2(OptimizationMode::minimize);
    for (auto _ : state) benchmark::DoNotOptimize(select(policy, arms, total));
}
BENCHMARK(BM_Select)->Arg(4)->Arg(32);

}  // namespace
