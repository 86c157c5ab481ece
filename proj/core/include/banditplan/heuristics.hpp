#pragma once

#include "banditplan/strips.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <string_view>
#include <vector>

namespace banditplan {

/// Heuristic values are nonnegative; +inf marks a dead end.
inline constexpr double kDeadEnd = std::numeric_limits<double>::infinity();

enum class HeuristicKind { ff, add, hmax, goal_count, blind };

/// Accepts "ff", "add", "hmax", "gc", "blind". Throws std::invalid_argument.
[[nodiscard]] HeuristicKind parse_heuristic_kind(std::string_view id);
[[nodiscard]] std::string_view to_string(HeuristicKind kind) noexcept;

/// Per-task index of the delete relaxation (achievers, precondition
/// watchers). Evaluation is const and allocates its own scratch space, so
/// one instance may be shared by concurrent searches.
class RelaxedExploration {
public:
    explicit RelaxedExploration(const GroundTask& task);

    [[nodiscard]] double h_max(const State& state) const;
    [[nodiscard]] double h_add(const State& state) const;
    [[nodiscard]] double h_ff(const State& state) const;
    /// Relaxed plan extracted from h_add best supporters; ties between
    /// supporters go to the lowest operator index. A supporter only counts
    /// if its preconditions were settled before the fact itself, which rules
    /// out cycles through zero-cost operators. Empty for goal states
    /// and for dead ends (check h_add to tell them apart).
    [[nodiscard]] std::vector<OperatorId> relaxed_plan(const State& state) const;

    /// Per-fact costs of the relaxed exploration from `state`.
    [[nodiscard]] std::vector<double> fact_costs(const State& state, bool additive) const;

private:
    struct Exploration {
        std::vector<double> cost;
        std::vector<std::size_t> settled;  // position in settling order, or npos
    };
    [[nodiscard]] Exploration explore(const State& state, bool additive) const;
    [[nodiscard]] std::vector<OperatorId> extract_plan(const State& state, const Exploration& ex) const;

    const GroundTask* task_;
    std::vector<std::vector<OperatorId>> watchers_;   // fact -> ops with it in pre
    std::vector<std::vector<OperatorId>> achievers_;  // fact -> ops adding it
    std::vector<OperatorId> unconditional_;           // ops with empty pre
};

[[nodiscard]] double h_max(const GroundTask& task, const State& state);
[[nodiscard]] double h_add(const GroundTask& task, const State& state);
[[nodiscard]] double h_ff(const GroundTask& task, const State& state);
[[nodiscard]] double h_goal_count(const GroundTask& task, const State& state);
[[nodiscard]] double h_blind(const GroundTask& task, const State& state);

using Evaluator = std::function<double(const State&)>;

/// Reusable evaluator bound to `task`; `task` must outlive it.
[[nodiscard]] Evaluator make_heuristic(HeuristicKind kind, const GroundTask& task);

}  // namespace banditplan
