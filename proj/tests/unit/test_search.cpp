#include "doctest.h"
#include "support.hpp"

#include "banditplan/contract.hpp"
#include "banditplan/search.hpp"
#include "banditplan/tree_search.hpp"

#include <cmath>
#include <map>
#include <random>
#include <tuple>

using namespace banditplan;
using support::add_op;
using support::make_task;

namespace {

struct Edge {
    int from;
    int to;
    std::int64_t cost = 1;
};

// One fact per vertex; an operator per edge moves the single token.
GroundTask graph_task(std::size_t vertices, const std::vector<Edge>& edges, int init, int goal) {
    GroundTask t = make_task(vertices);
    for (const auto& e : edges)
        add_op(t, "e" + std::to_string(e.from) + "-" + std::to_string(e.to), {static_cast<FactId>(e.from)},
               {static_cast<FactId>(e.to)}, {static_cast<FactId>(e.from)}, e.cost);
    t.init = {static_cast<FactId>(init)};
    t.goal = {static_cast<FactId>(goal)};
    normalize_task(t);
    return t;
}

Evaluator table(std::map<int, double> h) {
    return [h = std::move(h)](const State& s) {
        const auto facts = s.facts();
        return facts.empty() ? 0.0 : h.at(static_cast<int>(facts.front()));
    };
}

SearchOptions deterministic(std::int64_t budget = 10000) {
    SearchOptions o;
    o.budget = budget;
    o.record_trace = true;
    return o;
}

std::vector<NodeId> ids(const SearchResult& r) {
    std::vector<NodeId> out;
    for (const auto& e : r.trace) out.push_back(e.node);
    return out;
}

void check_tree_against_oracle(const TreeSearch& tree, const GroundTask& task, bool keep_locked) {
    for (const SearchNode& n : tree.nodes()) {
        CAPTURE(n.id);
        if (n.parent != kNoNode && n.lock != LockReason::duplicate) {
            CHECK(n.g == tree.node(n.parent).g + task.operators[*n.op_in].cost);
            CHECK(n.depth == tree.node(n.parent).depth + 1);
        }
        if (n.locked()) {
            CHECK(n.min_h == kDeadEnd);
            if (!keep_locked) CHECK(n.leaf_stats_h.empty());
            continue;
        }
        const auto want = support::oracle(tree, task, n.id);
        if (keep_locked) {
            CHECK(n.leaf_stats_h.count() >= want.h.count());
        } else {
            CHECK(n.leaf_stats_h.count() == want.h.count());
            CHECK(std::abs(n.leaf_stats_h.mean() - want.h.mean()) <= 1e-9);
            CHECK(std::abs(n.leaf_stats_h.m2() - want.h.m2()) <= 1e-9 * std::max(1.0, want.h.m2()));
            CHECK(std::abs(n.leaf_stats_gh.mean() - want.gh.mean()) <= 1e-9);
            CHECK(std::abs(n.leaf_stats_gh.m2() - want.gh.m2()) <= 1e-9 * std::max(1.0, want.gh.m2()));
        }
        CHECK(n.min_h == want.min_h);
        CHECK(n.min_h_leaf == want.min_leaf);
    }
}

}  // namespace

TEST_SUITE("search") {

TEST_CASE("algorithm ids") {
    for (const char* id : {"gbfs", "gbfs-tree", "guct", "guct01", "guct-normal", "guct-normal2", "guct-star",
                           "guct01-star", "guct-normal-star", "guct-normal2-star"})
        CHECK(to_string(parse_algorithm(id)) == id);
    CHECK_THROWS_AS((void)parse_algorithm("astar"), std::invalid_argument);
    CHECK_THROWS_AS((void)nec_config(Algorithm::gbfs, 1.0), std::invalid_argument);
    CHECK(uses_coefficient(Algorithm::guct01_star));
    CHECK_FALSE(uses_coefficient(Algorithm::guct_normal2));
}

TEST_CASE("nec arithmetic") {
    RunningStats leaves;
    leaves.push(4);
    leaves.push(6);
    const NodeSummary node{leaves, 4.0};
    const double e = std::sqrt(2.0 * std::log(4.0) / 2.0);
    CHECK(nec_value(nec_config(Algorithm::guct, 1.0), node, 4) == doctest::Approx(5.0 - e).epsilon(1e-12));
    CHECK(nec_value(nec_config(Algorithm::guct, 1.0), node, 4) == doctest::Approx(3.82259).epsilon(1e-5));
    CHECK(nec_value(nec_config(Algorithm::guct_star, 1.0), node, 4) == doctest::Approx(4.0 - e).epsilon(1e-12));
    CHECK(nec_value(nec_config(Algorithm::gbfs_tree, 1.0), node, 4) == 4.0);

    const NodeSummary single{RunningStats::singleton(7.0), 7.0};
    CHECK(nec_value(nec_config(Algorithm::guct_normal2, 1.0), single, 1) == 7.0);
    CHECK(nec_value(nec_config(Algorithm::guct_normal2, 1.0), single, 50) == 7.0);
    CHECK(nec_value(nec_config(Algorithm::guct_normal, 1.0), single, 50) == 7.0);
}

TEST_CASE("goal at the initial state") {
    GroundTask t = make_task(1);
    t.init = {0};
    t.goal = {0};
    normalize_task(t);
    const auto h = make_heuristic(HeuristicKind::ff, t);
    for (auto algo : {Algorithm::gbfs, Algorithm::gbfs_tree, Algorithm::guct, Algorithm::guct_normal2}) {
        const auto r = run_algorithm(algo, 1.0, t, h, deterministic());
        CHECK(r.outcome == Outcome::plan);
        CHECK(r.plan.empty());
        CHECK(r.expansions == 0);
    }
}

TEST_CASE("chain task") {
    const GroundTask t = support::chain_task();
    const auto gc = make_heuristic(HeuristicKind::goal_count, t);
    for (auto algo : {Algorithm::gbfs, Algorithm::gbfs_tree, Algorithm::guct_normal2, Algorithm::guct01}) {
        CAPTURE(to_string(algo));
        const auto r = run_algorithm(algo, 1.0, t, gc, deterministic());
        CHECK(r.outcome == Outcome::plan);
        CHECK(r.plan == Plan{0, 1});
        CHECK(r.expansions == 2);
    }
}

TEST_CASE("unsolvable and dead-end tasks exhaust") {
    const auto flagged = support::load("misc/deadend-domain.pddl", "misc/unreachable-problem.pddl").task;
    const auto dry = support::load("misc/deadend-domain.pddl", "misc/exhaust-problem.pddl").task;
    for (const GroundTask* t : {&flagged, &dry}) {
        const auto h = make_heuristic(HeuristicKind::ff, *t);
        for (auto algo : {Algorithm::gbfs, Algorithm::gbfs_tree, Algorithm::guct, Algorithm::guct_normal2_star}) {
            const auto r = run_algorithm(algo, 1.0, *t, h, deterministic());
            CHECK(r.outcome == Outcome::exhausted);
        }
    }
    // With blind search the dry task is explored until the reachable space runs out.
    const auto blind = make_heuristic(HeuristicKind::blind, dry);
    const auto q = gbfs_queue(dry, blind, deterministic());
    const auto tr = gbfs_tree(dry, blind, deterministic());
    CHECK(q.outcome == Outcome::exhausted);
    CHECK(tr.outcome == Outcome::exhausted);
    CHECK(q.trace == tr.trace);
    CHECK(q.expansions > 1);
}

TEST_CASE("dead-end fixture with a way out") {
    const auto t = support::load("misc/deadend-domain.pddl", "misc/deadend-problem.pddl").task;
    const auto h = make_heuristic(HeuristicKind::ff, t);
    for (auto algo : {Algorithm::gbfs, Algorithm::guct, Algorithm::guct_normal}) {
        const auto r = run_algorithm(algo, 1.0, t, h, deterministic());
        CHECK(r.outcome == Outcome::plan);
        CHECK(validate_plan(t, r.plan));
    }
}

TEST_CASE("cycle back to the root is discarded") {
    const GroundTask t = graph_task(3, {{0, 1}, {1, 0}}, 0, 2);
    TreeSearch tree(t, table({{0, 1}, {1, 1}, {2, 0}}), nec_config(Algorithm::guct, 1.0), deterministic());
    CHECK(tree.step() == TreeSearch::Status::running);
    CHECK(tree.nodes().size() == 2);
    CHECK(tree.step() == TreeSearch::Status::exhausted);
    CHECK(tree.nodes().size() == 2);
    CHECK(tree.node(1).lock == LockReason::dead_end);
    CHECK(tree.node(0).lock == LockReason::exhausted);
}

TEST_CASE("only dead-end successors lock the root") {
    const GroundTask t = graph_task(3, {{0, 1}}, 0, 2);
    const auto r = mcts(t, table({{0, 1}, {1, kDeadEnd}, {2, 0}}), nec_config(Algorithm::guct_normal2, 1.0),
                        deterministic());
    CHECK(r.outcome == Outcome::exhausted);
    CHECK(r.expansions == 1);
}

TEST_CASE("diamond: cheaper path takes over the subtree") {
    const GroundTask t = graph_task(7, {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {4, 3}, {3, 5}, {5, 6}}, 0, 6);
    const auto h = table({{0, 3}, {1, 1}, {2, 1}, {3, 1}, {4, 5}, {5, 9}, {6, 0}});
    TreeSearch tree(t, h, nec_config(Algorithm::gbfs_tree, 1.0), deterministic());
    for (int i = 0; i < 5; ++i) REQUIRE(tree.step() == TreeSearch::Status::running);

    // Node 4 reached state 3 at g=3; node 6 reaches it through state 4 at g=2.
    CHECK(tree.node(4).lock == LockReason::duplicate);
    CHECK(tree.node(4).children.empty());
    CHECK(tree.node(6).parent == 2);
    CHECK(tree.node(6).g == 2);
    CHECK(tree.node(6).children == std::vector<NodeId>{5});
    CHECK(tree.node(5).parent == 6);
    CHECK(tree.node(5).g == 3);
    CHECK(tree.node(3).lock == LockReason::exhausted);
    CHECK(tree.node(1).lock == LockReason::exhausted);
    check_tree_against_oracle(tree, t, false);

    const auto r = tree.run();
    CHECK(r.outcome == Outcome::plan);
    CHECK(r.plan == Plan{3, 4, 5, 6});
    CHECK(ids(r) == std::vector<NodeId>{0, 1, 3, 4, 2, 5});

    const auto q = gbfs_queue(t, h, deterministic());
    CHECK(q.trace == r.trace);
    CHECK(q.plan == r.plan);
}

TEST_CASE("one expansion supersedes a node and then its ancestor") {
    // L = state 1 reaches c = 4 and then a = 2 at cost 0; a -> b -> c was found first.
    const GroundTask t =
        graph_task(7, {{0, 1, 0}, {0, 2, 1}, {1, 4, 0}, {1, 2, 0}, {2, 3, 1}, {3, 4, 1}, {4, 6, 1}}, 0, 5);
    const auto h = table({{0, 5}, {1, 9}, {2, 1}, {3, 1}, {4, 1}, {5, 0}, {6, 10}});
    for (auto mode : {BackupMode::recompute, BackupMode::incremental}) {
        SearchOptions o = deterministic();
        o.backup = mode;
        TreeSearch tree(t, h, nec_config(Algorithm::gbfs_tree, 1.0), o);
        for (int i = 0; i < 5; ++i) REQUIRE(tree.step() == TreeSearch::Status::running);
        REQUIRE(tree.nodes().size() == 8);
        CHECK(tree.node(4).lock == LockReason::duplicate);
        CHECK(tree.node(2).lock == LockReason::duplicate);
        CHECK(tree.node(6).children == std::vector<NodeId>{5});
        CHECK(tree.node(7).children == std::vector<NodeId>{3});
        CHECK(tree.node(3).g == 1);
        CHECK(tree.node(5).g == 1);
        CHECK(tree.node(7).lock == LockReason::exhausted);
        check_tree_against_oracle(tree, t, false);
        CHECK(tree.run().outcome == Outcome::exhausted);
    }
}

TEST_CASE("select_leaf prefers the lower NEC, then the lower id") {
    const GroundTask t = graph_task(4, {{0, 1}, {0, 2}}, 0, 3);
    TreeSearch low(t, table({{0, 9}, {1, 5}, {2, 3}, {3, 0}}), nec_config(Algorithm::guct, 1.0), deterministic());
    (void)low.step();
    CHECK(low.nec(2) < low.nec(1));
    CHECK(low.select_leaf() == 2);

    TreeSearch tie(t, table({{0, 9}, {1, 4}, {2, 4}, {3, 0}}), nec_config(Algorithm::guct, 1.0), deterministic());
    (void)tie.step();
    CHECK(tie.select_leaf() == 1);
}

TEST_CASE("select_leaf follows a single chain") {
    const GroundTask t = graph_task(4, {{0, 1}, {1, 2}}, 0, 3);
    TreeSearch tree(t, table({{0, 3}, {1, 2}, {2, 1}, {3, 0}}), nec_config(Algorithm::guct_normal, 1.0),
                    deterministic());
    (void)tree.step();
    (void)tree.step();
    CHECK(tree.select_leaf() == 2);
}

TEST_CASE("backpropagation examples") {
    // 0 -> 1 -> {2, 3}
    const GroundTask t = graph_task(5, {{0, 1}, {1, 2}, {1, 3}}, 0, 4);
    TreeSearch tree(t, table({{0, 9}, {1, 7}, {2, 4}, {3, 6}, {4, 0}}), nec_config(Algorithm::guct, 1.0),
                    deterministic());
    (void)tree.step();
    // A single grandchild: stats pass through, gh shifted by the edge cost.
    CHECK(tree.node(0).leaf_stats_h == RunningStats::singleton(7));
    CHECK(tree.node(0).leaf_stats_gh == RunningStats::singleton(8));
    (void)tree.step();
    const RunningStats want = RunningStats::from_fields(2, 5.0, 2.0);
    CHECK(tree.node(1).leaf_stats_h == want);
    CHECK(tree.node(0).leaf_stats_h == want);
    CHECK(tree.node(0).leaf_stats_gh == RunningStats::from_fields(2, 7.0, 2.0));
    CHECK(tree.node(0).min_h == 4.0);
    CHECK(tree.node(0).min_gh == 6.0);
    CHECK(tree.node(0).min_h_leaf == 2);
}

TEST_CASE("budget is respected exactly") {
    const auto t = support::load("suite/gripper/domain.pddl", "suite/gripper/p03.pddl").task;
    const auto blind = make_heuristic(HeuristicKind::blind, t);
    for (std::int64_t budget : {1, 2, 17}) {
        for (auto algo : {Algorithm::gbfs, Algorithm::guct, Algorithm::guct_normal2}) {
            const auto r = run_algorithm(algo, 1.0, t, blind, deterministic(budget));
            CHECK(r.outcome == Outcome::budget_reached);
            CHECK(r.expansions == budget);
        }
    }
    SearchOptions bad;
    bad.budget = 0;
    CHECK_THROWS_AS((void)gbfs_queue(t, blind, bad), ContractViolation);
    CHECK_THROWS_AS((void)mcts(t, blind, nec_config(Algorithm::guct, 1.0), bad), ContractViolation);
}

TEST_CASE("a past deadline stops the search") {
    const auto t = support::load("suite/gripper/domain.pddl", "suite/gripper/p03.pddl").task;
    SearchOptions o;
    o.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    const auto h = make_heuristic(HeuristicKind::ff, t);
    for (auto algo : {Algorithm::gbfs, Algorithm::guct}) {
        const auto r = run_algorithm(algo, 1.0, t, h, o);
        CHECK(r.outcome == Outcome::budget_reached);
        CHECK(r.deadline_hit);
        CHECK(r.expansions == 0);
        CHECK(r.wall_notes.find("deadline") != std::string::npos);
    }
}

TEST_CASE("randomized ties are reproducible per seed") {
    const auto t = support::load("suite/gripper/domain.pddl", "suite/gripper/p02.pddl").task;
    const auto h = make_heuristic(HeuristicKind::goal_count, t);
    for (auto algo : {Algorithm::gbfs, Algorithm::gbfs_tree, Algorithm::guct}) {
        SearchOptions o = deterministic();
        o.randomize_ties = true;
        o.seed = 5;
        const auto a = run_algorithm(algo, 1.0, t, h, o);
        const auto b = run_algorithm(algo, 1.0, t, h, o);
        CHECK(a.trace == b.trace);
        CHECK(a.outcome == Outcome::plan);
        CHECK(validate_plan(t, a.plan));
    }
}

TEST_CASE("statistics match a from-scratch aggregate on random tasks") {
    std::mt19937_64 rng(71);
    const Algorithm algos[] = {Algorithm::guct, Algorithm::guct01, Algorithm::guct_normal, Algorithm::guct_normal2,
                               Algorithm::guct_star, Algorithm::guct_normal2_star, Algorithm::gbfs_tree};
    for (int trial = 0; trial < 400; ++trial) {
        const GroundTask t = support::random_task(rng, 6 + trial % 6, 12 + trial % 9, trial % 3 == 0);
        SearchOptions o = deterministic();
        o.backup = trial % 2 ? BackupMode::incremental : BackupMode::recompute;
        o.keep_locked_leaves = trial % 5 == 4;
        const auto algo = algos[trial % std::size(algos)];
        TreeSearch tree(t, support::hashed_heuristic(rng(), true), nec_config(algo, 1.0), o);
        while (tree.status() == TreeSearch::Status::running && tree.nodes().size() < 200) {
            if (tree.step() != TreeSearch::Status::running) break;
            check_tree_against_oracle(tree, t, o.keep_locked_leaves);
            if (!tree.node(tree.root()).locked()) CHECK_FALSE(tree.node(tree.select_leaf()).locked());
        }
        if (tree.status() == TreeSearch::Status::solved) CHECK(validate_plan(t, tree.result().plan));
    }
}

TEST_CASE("tree and queue GBFS expand the same nodes on random tasks") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const GroundTask t = support::random_task(rng, 6 + trial % 7, 16, trial % 2 == 0);
        const auto h = support::hashed_heuristic(rng(), trial % 3 != 0);
        const auto q = gbfs_queue(t, h, deterministic(300));
        const auto tr = gbfs_tree(t, h, deterministic(300));
        CHECK(q.outcome == tr.outcome);
        CHECK(q.trace == tr.trace);
        CHECK(q.plan == tr.plan);
        CHECK(q.generated == tr.generated);
        CHECK(q.evaluations == tr.evaluations);
    }
}

TEST_CASE("scale-free NECs ignore affine changes of h") {
    const auto t = support::load("suite/blocksworld/domain.pddl", "suite/blocksworld/p03.pddl").task;
    const auto ff = make_heuristic(HeuristicKind::ff, t);
    auto affine = [&](double a, double b) {
        return [ff, a, b](const State& s) {
            const double v = ff(s);
            return v == kDeadEnd ? v : a * v + b;
        };
    };
    bool guct_changed = false;
    for (auto [a, b] : {std::pair{2.0, 0.0}, std::pair{4.0, 16.0}, std::pair{0.5, 32.0}, std::pair{8.0, 1.0}}) {
        for (auto algo : {Algorithm::guct_normal2, Algorithm::guct01}) {
            CAPTURE(to_string(algo));
            const auto base = mcts(t, ff, nec_config(algo, 1.0), deterministic());
            const auto moved = mcts(t, affine(a, b), nec_config(algo, 1.0), deterministic());
            CHECK(base.trace == moved.trace);
        }
        const auto base = mcts(t, ff, nec_config(Algorithm::guct, 1.0), deterministic());
        const auto moved = mcts(t, affine(a, b), nec_config(Algorithm::guct, 1.0), deterministic());
        guct_changed = guct_changed || base.trace != moved.trace;
    }
    CHECK(guct_changed);
}

}  // TEST_SUITE
