#include "banditplan/bench.hpp"
#include "banditplan/heuristics.hpp"
#include "banditplan/strips.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>

using namespace banditplan;

namespace {

const LoadedTask& blocks() {
    static const LoadedTask task = load_task(std::filesystem::path(BANDITPLAN_FIXTURE_DIR) / "suite/blocksworld/domain.pddl",
                                             std::filesystem::path(BANDITPLAN_FIXTURE_DIR) / "suite/blocksworld/p03.pddl");
    return task;
}

void BM_Heuristic(benchmark::State& state) {
    const GroundTask& task = blocks().task;
    const auto kind = static_cast<HeuristicKind>(state.range(0));
    const Evaluator h = make_heuristic(kind, task);
    const State init = initial_state(task);
    for (auto _ : state) benchmark::DoNotOptimize(h(init));
    state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Heuristic)
    ->Arg(static_cast<int>(HeuristicKind::hmax))
    ->Arg(static_cast<int>(HeuristicKind::add))
    ->Arg(static_cast<int>(HeuristicKind::ff))
    ->Arg(static_cast<int>(HeuristicKind::goal_count));

void BM_Successors(benchmark::State& state) {
    const GroundTask& task = blocks().task;
    const State init = initial_state(task);
    for (auto _ : state) benchmark::DoNotOptimize(successors(task, init));
}
BENCHMARK(BM_Successors);

void BM_Ground(benchmark::State& state) {
    const LoadedTask& t = blocks();
    for (auto _ : state) benchmark::DoNotOptimize(ground(t.domain, t.problem));
}
BENCHMARK(BM_Ground);

}  // namespace
