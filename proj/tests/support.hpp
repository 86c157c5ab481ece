#pragma once

#include "banditplan/bench.hpp"
#include "banditplan/heuristics.hpp"
#include "banditplan/running_stats.hpp"
#include "banditplan/strips.hpp"
#include "banditplan/task.hpp"
#include "banditplan/tree_search.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace support {

using namespace banditplan;

inline std::filesystem::path fixture(const std::string& rel) {
    return std::filesystem::path(BANDITPLAN_FIXTURE_DIR) / rel;
}

inline LoadedTask load(const std::string& domain, const std::string& problem) {
    return load_task(fixture(domain), fixture(problem));
}

inline nlohmann::json manifest() {
    std::ifstream in(fixture("manifest.json"));
    return nlohmann::json::parse(in);
}

struct Brute {
    std::int64_t n = 0;
    double mean = 0.0;
    double pop_var = 0.0;
    double m2 = 0.0;
};

// Two-pass textbook statistics.
inline Brute brute(const std::vector<double>& xs) {
    Brute b;
    b.n = static_cast<std::int64_t>(xs.size());
    if (xs.empty()) return b;
    double sum = 0.0;
    for (double x : xs) sum += x;
    b.mean = sum / static_cast<double>(xs.size());
    for (double x : xs) b.m2 += (x - b.mean) * (x - b.mean);
    b.pop_var = b.m2 / static_cast<double>(xs.size());
    return b;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-12) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b)}) + abs_floor;
}

// A fact per index, named (f i).
inline GroundTask make_task(std::size_t facts) {
    GroundTask t;
    t.domain_name = "synthetic";
    t.problem_name = "synthetic";
    for (std::size_t i = 0; i < facts; ++i) t.facts.push_back({"f", {std::to_string(i)}});
    return t;
}

inline OperatorId add_op(GroundTask& t, std::string name, std::vector<FactId> pre, std::vector<FactId> add,
                         std::vector<FactId> del, std::int64_t cost = 1) {
    t.operators.push_back({std::move(name), {}, std::move(pre), std::move(add), std::move(del), cost});
    return static_cast<OperatorId>(t.operators.size() - 1);
}

// o1: {} => a, o2: {a} => b, goal {a, b}.
inline GroundTask chain_task() {
    GroundTask t = make_task(2);
    add_op(t, "o1", {}, {0}, {});
    add_op(t, "o2", {0}, {1}, {});
    t.goal = {0, 1};
    normalize_task(t);
    return t;
}

// Random STRIPS task with a nontrivial goal; costs in {0,1,2} when requested.
inline GroundTask random_task(std::mt19937_64& rng, std::size_t facts, std::size_t ops, bool varied_costs) {
    GroundTask t = make_task(facts);
    std::uniform_int_distribution<std::size_t> fact(0, facts - 1);
    std::uniform_int_distribution<int> small(0, 2);
    std::uniform_int_distribution<int> cost(0, 2);
    for (std::size_t o = 0; o < ops; ++o) {
        std::vector<FactId> pre, add, del;
        for (int i = small(rng); i > 0; --i) pre.push_back(static_cast<FactId>(fact(rng)));
        for (int i = 1 + small(rng) / 2; i > 0; --i) add.push_back(static_cast<FactId>(fact(rng)));
        for (int i = small(rng); i > 0; --i) del.push_back(static_cast<FactId>(fact(rng)));
        add_op(t, "o" + std::to_string(o), pre, add, del, varied_costs ? cost(rng) : 1);
    }
    for (std::size_t i = 0; i < facts; ++i)
        if (rng() % 3 == 0) t.init.push_back(static_cast<FactId>(i));
    for (int i = 0; i < 3; ++i) t.goal.push_back(static_cast<FactId>(fact(rng)));
    normalize_task(t);
    return t;
}

// Straight Bellman iteration over all operators until nothing changes.
inline std::vector<double> bellman_costs(const GroundTask& task, const State& s, bool additive) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(task.fact_count(), inf);
    for (FactId f = 0; f < task.fact_count(); ++f)
        if (s.test(f)) cost[f] = 0.0;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& op : task.operators) {
            double support = 0.0;
            for (FactId p : op.pre) support = additive ? support + cost[p] : std::max(support, cost[p]);
            const double v = support + static_cast<double>(op.cost);
            for (FactId a : op.add)
                if (v < cost[a]) {
                    cost[a] = v;
                    changed = true;
                }
        }
    }
    return cost;
}

inline double bellman_h(const GroundTask& task, const State& s, bool additive) {
    const auto cost = bellman_costs(task, s, additive);
    double h = 0.0;
    for (FactId g : task.goal) h = additive ? h + cost[g] : std::max(h, cost[g]);
    return h;
}

// Delete-free execution of a relaxed plan, in any order that works.
inline bool relaxed_plan_reaches_goal(const GroundTask& task, const State& s, const std::vector<OperatorId>& plan) {
    State cur = s;
    std::vector<bool> used(plan.size(), false);
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t i = 0; i < plan.size(); ++i) {
            if (used[i] || !cur.contains_all(task.operators[plan[i]].pre)) continue;
            for (FactId a : task.operators[plan[i]].add) cur.set(a);
            used[i] = progress = true;
        }
    }
    return std::all_of(used.begin(), used.end(), [](bool u) { return u; }) && cur.contains_all(task.goal);
}

// Deterministic pseudo-heuristic with occasional dead ends.
inline Evaluator hashed_heuristic(std::uint64_t salt, bool with_dead_ends) {
    return [salt, with_dead_ends](const State& s) {
        const std::uint64_t h = (s.hash() ^ salt) * 0x9e3779b97f4a7c15ull;
        if (with_dead_ends && (h >> 60) == 0) return kDeadEnd;
        return static_cast<double>((h >> 33) % 9);
    };
}

struct OracleStats {
    RunningStats h;
    RunningStats gh;
    double min_h = kDeadEnd;
    NodeId min_leaf = kNoNode;
};

// From-scratch aggregation over the live leaves below `id`.
inline OracleStats oracle(const TreeSearch& tree, const GroundTask& task, NodeId id) {
    OracleStats out;
    struct Item {
        NodeId node;
        double cost;
    };
    std::vector<Item> stack{{id, 0.0}};
    std::vector<std::pair<double, double>> leaves;  // h, cost+h
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const SearchNode& n = tree.node(it.node);
        if (n.locked()) continue;
        if (!n.expanded) {
            out.h.push(n.h);
            out.gh.push(it.cost + n.h);
            if (n.h < out.min_h || (n.h == out.min_h && it.node < out.min_leaf)) {
                out.min_h = n.h;
                out.min_leaf = it.node;
            }
            continue;
        }
        for (NodeId c : n.children)
            stack.push_back({c, it.cost + static_cast<double>(task.operators[*tree.node(c).op_in].cost)});
    }
    return out;
}

}  // namespace support
