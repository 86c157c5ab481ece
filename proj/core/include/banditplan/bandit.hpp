#pragma once

#include "banditplan/running_stats.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace banditplan {

enum class BoundKind { ucb1, ucb1_01, ucb1_normal, ucb1_normal2 };
enum class OptimizationMode { maximize, minimize };

/// A confidence-bound rule. In maximize mode the exploration term is added
/// to the mean term (UCB); in minimize mode it is subtracted (LCB).
///
///   ucb1          mean +- c * sqrt(2 ln T / t)
///   ucb1_01       (mean - m) / (M - m) +- c * sqrt(2 ln T / t)
///   ucb1_normal   mean +- sigma * sqrt(16 ln T / t)
///   ucb1_normal2  mean +- sigma * sqrt(2 ln T)
///
/// T is the total number of samples over all arms, t the arm's own count,
/// sigma the sample standard deviation (n-1 denominator, 0 when t = 1), and
/// [m, M] the range of the sibling mean terms.
class BoundPolicy {
public:
    static BoundPolicy ucb1(double c, OptimizationMode mode = OptimizationMode::maximize);
    static BoundPolicy ucb1_01(double c, OptimizationMode mode = OptimizationMode::maximize);
    static BoundPolicy ucb1_normal(OptimizationMode mode = OptimizationMode::maximize);
    static BoundPolicy ucb1_normal2(OptimizationMode mode = OptimizationMode::maximize);

    [[nodiscard]] BoundKind kind() const noexcept { return kind_; }
    [[nodiscard]] double c() const noexcept { return c_; }
    [[nodiscard]] OptimizationMode mode() const noexcept { return mode_; }
    [[nodiscard]] bool uses_coefficient() const noexcept {
        return kind_ == BoundKind::ucb1 || kind_ == BoundKind::ucb1_01;
    }
    [[nodiscard]] BoundPolicy with_mode(OptimizationMode mode) const noexcept;
    [[nodiscard]] std::string name() const;

private:
    BoundPolicy(BoundKind kind, double c, OptimizationMode mode) : kind_(kind), c_(c), mode_(mode) {}

    BoundKind kind_;
    double c_;
    OptimizationMode mode_;
};

/// Accepts "ucb1", "ucb1-01", "ucb1-normal", "ucb1-normal2".
[[nodiscard]] BoundPolicy parse_bound_policy(std::string_view id, double c,
                                             OptimizationMode mode = OptimizationMode::maximize);

struct NormalizationContext {
    double max_mean;
    double min_mean;
};

struct ArmView {
    RunningStats stats;
    std::optional<NormalizationContext> context;
};

/// Nonnegative magnitude of the exploration term.
/// Requires stats.count() >= 1 and total >= stats.count().
[[nodiscard]] double exploration_term(const BoundPolicy& policy, const RunningStats& stats, std::int64_t total);

/// ucb1_01's mean term. Defined as 0 when M == m, so that degenerate sibling
/// sets fall back to comparing exploration terms alone.
[[nodiscard]] double normalized_mean(double mean, const NormalizationContext& ctx) noexcept;

/// Mean term taken from `stats`.
[[nodiscard]] double bound(const BoundPolicy& policy, const RunningStats& stats, std::int64_t total,
                           std::optional<NormalizationContext> ctx = std::nullopt);

/// Mean term supplied separately (a subtree minimum, for instance), while
/// the exploration term still uses `stats`. ucb1_01 requires `ctx`.
[[nodiscard]] double bound(const BoundPolicy& policy, double mean_term, const RunningStats& stats,
                           std::int64_t total, std::optional<NormalizationContext> ctx = std::nullopt);

/// Range of the arms' means.
[[nodiscard]] NormalizationContext sibling_context(std::span<const ArmView> arms);

/// Index of the arm with the best bound (max for maximize, min for
/// minimize); ties go to the lowest index. For ucb1_01, arms without an
/// explicit context use the range of all arms' means.
[[nodiscard]] std::size_t select(const BoundPolicy& policy, std::span<const ArmView> arms, std::int64_t total);

}  // namespace banditplan
