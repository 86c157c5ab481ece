#include "banditplan/bench.hpp"
#include "banditplan/search.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>

using namespace banditplan;

namespace {

const GroundTask& gripper() {
    static const LoadedTask task = load_task(std::filesystem::path(BANDITPLAN_FIXTURE_DIR) / "suite/gripper/domain.pddl",
                                             std::filesystem::path(BANDITPLAN_FIXTURE_DIR) / "suite/gripper/p03.pddl");
    return task.task;
}

// Blind search under a fixed budget; items are node expansions.
void BM_Search(benchmark::State& state) {
    const GroundTask& task = gripper();
    const auto algo = static_cast<Algorithm>(state.range(0));
    const Evaluator h = make_heuristic(HeuristicKind::blind, task);
    SearchOptions options;
    options.budget = 500;
    std::int64_t expansions = 0;
    for (auto _ : state) {
        const SearchResult r = run_algorithm(algo, 1.0, task, h, options);
        expansions += r.expansions;
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(expansions);
    state.SetLabel(std::string(to_string(algo)));
}
BENCHMARK(BM_Search)
    ->Arg(static_cast<int>(Algorithm::gbfs))
    ->Arg(static_cast<int>(Algorithm::gbfs_tree))
    ->Arg(static_cast<int>(Algorithm::guct))
    ->Arg(static_cast<int>(Algorithm::guct_normal2));

void BM_SolveWithFF(benchmark::State& state) {
    const GroundTask& task = gripper();
    const auto algo = static_cast<Algorithm>(state.range(0));
    const Evaluator h = make_heuristic(HeuristicKind::ff, task);
    for (auto _ : state) benchmark::DoNotOptimize(run_algorithm(algo, 1.0, task, h, SearchOptions{}));
    state.SetLabel(std::string(to_string(algo)));
}
BENCHMARK(BM_SolveWithFF)
    ->Arg(static_cast<int>(Algorithm::gbfs))
    ->Arg(static_cast<int>(Algorithm::guct))
    ->Arg(static_cast<int>(Algorithm::guct_normal2));

}  // namespace
