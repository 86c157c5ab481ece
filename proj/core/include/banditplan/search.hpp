#pragma once

#include "banditplan/bandit.hpp"
#include "banditplan/heuristics.hpp"
#include "banditplan/strips.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace banditplan {

using NodeId = std::int64_t;
inline constexpr NodeId kNoNode = -1;

enum class Algorithm {
    gbfs,  // priority queue
    gbfs_tree,
    guct,
    guct01,
    guct_normal,
    guct_normal2,
    guct_star,
    guct01_star,
    guct_normal_star,
    guct_normal2_star,
};

/// Accepts gbfs, gbfs-tree, guct, guct01, guct-normal, guct-normal2 and the
/// "-star" forms. Throws std::invalid_argument.
[[nodiscard]] Algorithm parse_algorithm(std::string_view id);
[[nodiscard]] std::string_view to_string(Algorithm algorithm) noexcept;
/// True for the algorithms whose exploration term is scaled by --c.
[[nodiscard]] bool uses_coefficient(Algorithm algorithm) noexcept;

enum class MeanTerm {
    average,  // mean of the subtree's leaf h-values
    minimum,  // min of the subtree's leaf h-values
};

/// Node evaluation criterion for the tree search: a mean term and an
/// optional lower confidence bound around it. No policy means no
/// exploration at all (f = mean term).
struct NecConfig {
    MeanTerm mean_term = MeanTerm::average;
    std::optional<BoundPolicy> policy;
};

/// NEC used by each tree algorithm. Throws std::invalid_argument for gbfs,
/// which runs on a priority queue.
[[nodiscard]] NecConfig nec_config(Algorithm algorithm, double c);

struct NodeSummary {
    RunningStats leaf_stats;  // h over the node's live leaves
    double min_h;
};

/// f(n) for a child `node` of a parent with `parent_leaf_count` live leaves.
/// `ctx` is the range of the siblings' mean terms, needed for ucb1_01.
[[nodiscard]] double nec_value(const NecConfig& config, const NodeSummary& node, std::int64_t parent_leaf_count,
                               std::optional<NormalizationContext> ctx = std::nullopt);

enum class Outcome { plan, exhausted, budget_reached };
[[nodiscard]] std::string_view to_string(Outcome outcome) noexcept;

enum class BackupMode {
    recompute,    // aggregate every child on each backup
    incremental,  // retract the child's old statistics, merge the new ones
};

struct SearchOptions {
    std::int64_t budget = 10000;  // node expansions
    std::uint64_t seed = 0;
    /// Break ties uniformly at random (seeded) instead of by node id.
    bool randomize_ties = false;
    bool record_trace = false;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    /// Keep leaves of exhausted subtrees in the leaf statistics instead of
    /// retracting them when they lock. Selection skips them either way.
    bool keep_locked_leaves = false;
    BackupMode backup = BackupMode::recompute;
};

struct ExpansionRecord {
    NodeId node;
    State state;
    friend bool operator==(const ExpansionRecord&, const ExpansionRecord&) = default;
};

struct SearchResult {
    Outcome outcome = Outcome::budget_reached;
    Plan plan;
    std::int64_t expansions = 0;
    std::int64_t evaluations = 0;
    std::int64_t generated = 0;
    bool deadline_hit = false;
    std::string wall_notes;
    std::vector<ExpansionRecord> trace;
};

/// Greedy best-first search on a priority queue keyed by (h, node id).
/// Goal test at generation. A regenerated state replaces its old node when
/// its g is not worse; the old node's descendants move with it.
[[nodiscard]] SearchResult gbfs_queue(const GroundTask& task, const Evaluator& h, const SearchOptions& options);

/// Bandit-driven tree search with the given NEC.
[[nodiscard]] SearchResult mcts(const GroundTask& task, const Evaluator& h, const NecConfig& nec,
                                const SearchOptions& options);

/// Tree search with f = subtree min h and no exploration, tie-broken by the
/// id of the leaf holding the minimum; expands nodes in the same order as
/// gbfs_queue.
[[nodiscard]] SearchResult gbfs_tree(const GroundTask& task, const Evaluator& h, const SearchOptions& options);

[[nodiscard]] SearchResult run_algorithm(Algorithm algorithm, double c, const GroundTask& task, const Evaluator& h,
                                         const SearchOptions& options);

}  // namespace banditplan
