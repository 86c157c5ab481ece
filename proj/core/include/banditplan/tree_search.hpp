#pragma once

#include "banditplan/search.hpp"

#include <random>
#include <set>
#include <span>
#include <tuple>
#include <unordered_map>

namespace banditplan {

enum class LockReason { none, dead_end, duplicate, exhausted };

struct SearchNode {
    NodeId id = kNoNode;
    State state;
    NodeId parent = kNoNode;
    std::optional<OperatorId> op_in;
    std::int64_t g = 0;
    std::int64_t depth = 0;
    std::vector<NodeId> children;  // ascending id
    bool expanded = false;
    LockReason lock = LockReason::none;
    double h = 0.0;

    // Over the live leaves L(n) below this node (the node itself when it is
    // an unexpanded leaf): h(leaf), and path cost from here plus h(leaf).
    RunningStats leaf_stats_h;
    RunningStats leaf_stats_gh;
    double min_h = kDeadEnd;
    double min_gh = kDeadEnd;
    NodeId min_h_leaf = kNoNode;  // lowest-id leaf attaining min_h

    // What the parent currently holds for this node (incremental backups).
    RunningStats contributed_h;
    RunningStats contributed_gh;

    [[nodiscard]] bool locked() const noexcept { return lock != LockReason::none; }
};

/// One search tree. step() runs one select/expand/backpropagate iteration;
/// the pieces are public so tests can drive and inspect the tree.
class TreeSearch {
public:
    enum class Status { running, solved, exhausted, budget_reached };

    TreeSearch(const GroundTask& task, Evaluator h, NecConfig nec, SearchOptions options);

    Status step();
    SearchResult run();

    [[nodiscard]] Status status() const noexcept { return status_; }
    [[nodiscard]] std::span<const SearchNode> nodes() const noexcept { return nodes_; }
    [[nodiscard]] const SearchNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    [[nodiscard]] NodeId root() const noexcept { return 0; }
    [[nodiscard]] const SearchResult& result() const noexcept { return result_; }

    /// Descends from the root along minimal-NEC unlocked children.
    [[nodiscard]] NodeId select_leaf();
    /// f(child) under its parent, as used by select_leaf.
    [[nodiscard]] double nec(NodeId child) const;
    /// Expands an unlocked leaf; returns the nodes created. Sets status to
    /// solved when a successor is a goal. Changed nodes are queued for
    /// backpropagate().
    std::vector<NodeId> expand(NodeId leaf);
    /// Drains the backup queue, deepest (highest g) first.
    void backpropagate();

private:
    void initialize();
    NodeId add_node(State state, NodeId parent, OperatorId op, std::int64_t g);
    void supersede(NodeId old_id, NodeId new_id);
    void update_node(NodeId id);
    [[nodiscard]] bool is_ancestor(NodeId candidate, NodeId of) const;
    [[nodiscard]] NodeSummary summary(const SearchNode& n) const;
    [[nodiscard]] std::optional<NormalizationContext> sibling_range(const SearchNode& parent) const;
    [[nodiscard]] Plan extract_plan(NodeId leaf, OperatorId last) const;
    void enqueue(NodeId id);
    void finish(Outcome outcome);

    const GroundTask& task_;
    Evaluator h_;
    NecConfig nec_;
    SearchOptions options_;
    std::mt19937_64 rng_;
    std::vector<SearchNode> nodes_;
    std::unordered_map<State, NodeId, StateHash> live_;  // state -> current node
    std::set<std::tuple<std::int64_t, std::int64_t, NodeId>, std::greater<>> backup_queue_;
    Status status_ = Status::running;
    bool initialized_ = false;
    SearchResult result_;
    std::chrono::steady_clock::time_point started_;
};

}  // namespace banditplan
