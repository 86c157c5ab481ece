#include "banditplan/search.hpp"

#include "banditplan/contract.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <queue>
#include <random>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <utility>

namespace banditplan {

namespace {

struct AlgorithmName {
    Algorithm algorithm;
    std::string_view id;
};

constexpr std::array kAlgorithmNames{
    AlgorithmName{Algorithm::gbfs, "gbfs"},
    AlgorithmName{Algorithm::gbfs_tree, "gbfs-tree"},
    AlgorithmName{Algorithm::guct, "guct"},
    AlgorithmName{Algorithm::guct01, "guct01"},
    AlgorithmName{Algorithm::guct_normal, "guct-normal"},
    AlgorithmName{Algorithm::guct_normal2, "guct-normal2"},
    AlgorithmName{Algorithm::guct_star, "guct-star"},
    AlgorithmName{Algorithm::guct01_star, "guct01-star"},
    AlgorithmName{Algorithm::guct_normal_star, "guct-normal-star"},
    AlgorithmName{Algorithm::guct_normal2_star, "guct-normal2-star"},
};

}  // namespace

Algorithm parse_algorithm(std::string_view id) {
    for (const auto& entry : kAlgorithmNames)
        if (entry.id == id) return entry.algorithm;
    throw std::invalid_argument("unknown algorithm: " + std::string(id));
}

std::string_view to_string(Algorithm algorithm) noexcept {
    for (const auto& entry : kAlgorithmNames)
        if (entry.algorithm == algorithm) return entry.id;
    return "?";
}

bool uses_coefficient(Algorithm algorithm) noexcept {
    switch (algorithm) {
        case Algorithm::guct:
        case Algorithm::guct01:
        case Algorithm::guct_star:
        case Algorithm::guct01_star:
            return true;
        default:
            return false;
    }
}

NecConfig nec_config(Algorithm algorithm, double c) {
    constexpr auto lcb = OptimizationMode::minimize;
    switch (algorithm) {
        case Algorithm::gbfs:
            throw std::invalid_argument("gbfs runs on a priority queue, not a tree");
        case Algorithm::gbfs_tree: return {MeanTerm::minimum, std::nullopt};
        case Algorithm::guct: return {MeanTerm::average, BoundPolicy::ucb1(c, lcb)};
        case Algorithm::guct01: return {MeanTerm::average, BoundPolicy::ucb1_01(c, lcb)};
        case Algorithm::guct_normal: return {MeanTerm::average, BoundPolicy::ucb1_normal(lcb)};
        case Algorithm::guct_normal2: return {MeanTerm::average, BoundPolicy::ucb1_normal2(lcb)};
        case Algorithm::guct_star: return {MeanTerm::minimum, BoundPolicy::ucb1(c, lcb)};
        case Algorithm::guct01_star: return {MeanTerm::minimum, BoundPolicy::ucb1_01(c, lcb)};
        case Algorithm::guct_normal_star: return {MeanTerm::minimum, BoundPolicy::ucb1_normal(lcb)};
        case Algorithm::guct_normal2_star: return {MeanTerm::minimum, BoundPolicy::ucb1_normal2(lcb)};
    }
    throw std::invalid_argument("unknown algorithm");
}

double nec_value(const NecConfig& config, const NodeSummary& node, std::int64_t parent_leaf_count,
                 std::optional<NormalizationContext> ctx) {
    const double mean = config.mean_term == MeanTerm::average ? node.leaf_stats.mean() : node.min_h;
    if (!config.policy) return mean;
    return bound(config.policy->with_mode(OptimizationMode::minimize), mean, node.leaf_stats, parent_leaf_count, ctx);
}

std::string_view to_string(Outcome outcome) noexcept {
    switch (outcome) {
        case Outcome::plan: return "plan";
        case Outcome::exhausted: return "exhausted";
        case Outcome::budget_reached: return "budget_reached";
    }
    return "?";
}

namespace {

struct QueueNode {
    State state;
    NodeId parent = kNoNode;
    OperatorId op = 0;
    std::int64_t g = 0;
    double h = 0.0;
    bool expanded = false;
    bool superseded = false;
    std::vector<NodeId> children;
};

class QueueSearch {
public:
    QueueSearch(const GroundTask& task, const Evaluator& h, const SearchOptions& options)
        : task_(task), h_(h), options_(options), rng_(options.seed) {}

    SearchResult run() {
        require(options_.budget >= 1, "search budget must be at least 1");
        started_ = std::chrono::steady_clock::now();
        const State init = initial_state(task_);
        if (is_goal(task_, init)) return finish(Outcome::plan);
        const NodeId root = add(init, kNoNode, 0, 0);
        nodes_[0].h = h_(nodes_[0].state);
        ++result_.evaluations;
        if (nodes_[0].h == kDeadEnd) return finish(Outcome::exhausted);
        push(root);

        while (true) {
            if (result_.expansions >= options_.budget) return finish(Outcome::budget_reached);
            if (options_.deadline && std::chrono::steady_clock::now() >= *options_.deadline) {
                result_.deadline_hit = true;
                return finish(Outcome::budget_reached);
            }
            const NodeId cur = pop();
            if (cur == kNoNode) return finish(Outcome::exhausted);
            if (expand(cur)) return finish(Outcome::plan);
        }
    }

private:
    using Entry = std::tuple<double, std::uint64_t, NodeId>;

    NodeId add(State state, NodeId parent, OperatorId op, std::int64_t g) {
        QueueNode n;
        n.state = std::move(state);
        n.parent = parent;
        n.op = op;
        n.g = g;
        nodes_.push_back(std::move(n));
        const auto id = static_cast<NodeId>(nodes_.size() - 1);
        if (parent != kNoNode) nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
        live_[nodes_.back().state] = id;
        return id;
    }

    void push(NodeId id) {
        const std::uint64_t key = options_.randomize_ties ? rng_() : static_cast<std::uint64_t>(id);
        open_.emplace(nodes_[static_cast<std::size_t>(id)].h, key, id);
    }

    NodeId pop() {
        while (!open_.empty()) {
            const NodeId id = std::get<2>(open_.top());
            open_.pop();
            const QueueNode& n = nodes_[static_cast<std::size_t>(id)];
            if (!n.expanded && !n.superseded) return id;
        }
        return kNoNode;
    }

    bool is_ancestor(NodeId candidate, NodeId of) const {
        for (NodeId cur = of; cur != kNoNode; cur = nodes_[static_cast<std::size_t>(cur)].parent)
            if (cur == candidate) return true;
        return false;
    }

    // Returns true when a goal was generated.
    bool expand(NodeId cur) {
        ++result_.expansions;
        if (options_.record_trace) result_.trace.push_back({cur, nodes_[static_cast<std::size_t>(cur)].state});
        nodes_[static_cast<std::size_t>(cur)].expanded = true;
        const State state = nodes_[static_cast<std::size_t>(cur)].state;
        const std::int64_t g0 = nodes_[static_cast<std::size_t>(cur)].g;
        for (Successor& succ : successors(task_, state)) {
            ++result_.generated;
            const std::int64_t g = g0 + task_.operators[succ.op].cost;
            if (is_goal(task_, succ.state)) {
                result_.plan = path_to(cur);
                result_.plan.push_back(succ.op);
                return true;
            }
            auto it = live_.find(succ.state);
            if (it != live_.end()) {
                const NodeId old_id = it->second;
                if (g > nodes_[static_cast<std::size_t>(old_id)].g || is_ancestor(old_id, cur)) continue;
                const NodeId id = add(std::move(succ.state), cur, succ.op, g);
                replace(old_id, id);
                continue;
            }
            const NodeId id = add(std::move(succ.state), cur, succ.op, g);
            QueueNode& n = nodes_.back();
            n.h = h_(n.state);
            ++result_.evaluations;
            if (n.h != kDeadEnd) push(id);
        }
        return false;
    }

    void replace(NodeId old_id, NodeId new_id) {
        QueueNode& o = nodes_[static_cast<std::size_t>(old_id)];
        QueueNode& n = nodes_[static_cast<std::size_t>(new_id)];
        o.superseded = true;
        n.h = o.h;
        n.expanded = o.expanded;
        n.children = std::move(o.children);
        o.children.clear();
        std::vector<NodeId> stack = n.children;
        for (NodeId c : n.children) nodes_[static_cast<std::size_t>(c)].parent = new_id;
        while (!stack.empty()) {
            QueueNode& d = nodes_[static_cast<std::size_t>(stack.back())];
            stack.pop_back();
            d.g = nodes_[static_cast<std::size_t>(d.parent)].g + task_.operators[d.op].cost;
            stack.insert(stack.end(), d.children.begin(), d.children.end());
        }
        if (!n.expanded && n.h != kDeadEnd) push(new_id);
    }

    Plan path_to(NodeId id) const {
        Plan plan;
        for (NodeId cur = id; nodes_[static_cast<std::size_t>(cur)].parent != kNoNode;
             cur = nodes_[static_cast<std::size_t>(cur)].parent)
            plan.push_back(nodes_[static_cast<std::size_t>(cur)].op);
        std::reverse(plan.begin(), plan.end());
        return plan;
    }

    SearchResult finish(Outcome outcome) {
        result_.outcome = outcome;
        if (outcome == Outcome::plan) require(validate_plan(task_, result_.plan), "search produced an invalid plan");
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started_).count();
        char buf[64];
        std::snprintf(buf, sizeof buf, "elapsed_ms=%.3f", ms);
        result_.wall_notes = buf;
        if (result_.deadline_hit) result_.wall_notes += ";deadline";
        return std::move(result_);
    }

    const GroundTask& task_;
    const Evaluator& h_;
    SearchOptions options_;
    std::mt19937_64 rng_;
    std::vector<QueueNode> nodes_;
    std::unordered_map<State, NodeId, StateHash> live_;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open_;
    SearchResult result_;
    std::chrono::steady_clock::time_point started_;
};

}  // namespace

SearchResult gbfs_queue(const GroundTask& task, const Evaluator& h, const SearchOptions& options) {
    require(static_cast<bool>(h), "search needs an evaluator");
    return QueueSearch(task, h, options).run();
}

SearchResult run_algorithm(Algorithm algorithm, double c, const GroundTask& task, const Evaluator& h,
                           const SearchOptions& options) {
    if (algorithm == Algorithm::gbfs) return gbfs_queue(task, h, options);
    return mcts(task, h, nec_config(algorithm, c), options);
}

}  // namespace banditplan
