#include "banditplan/bandit.hpp"

#include "banditplan/contract.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace banditplan {

BoundPolicy BoundPolicy::ucb1(double c, OptimizationMode mode) {
    require(c > 0.0, "ucb1: exploration coefficient must be positive");
    return {BoundKind::ucb1, c, mode};
}

BoundPolicy BoundPolicy::ucb1_01(double c, OptimizationMode mode) {
    require(c > 0.0, "ucb1_01: exploration coefficient must be positive");
    return {BoundKind::ucb1_01, c, mode};
}

BoundPolicy BoundPolicy::ucb1_normal(OptimizationMode mode) { return {BoundKind::ucb1_normal, 1.0, mode}; }
BoundPolicy BoundPolicy::ucb1_normal2(OptimizationMode mode) { return {BoundKind::ucb1_normal2, 1.0, mode}; }

BoundPolicy BoundPolicy::with_mode(OptimizationMode mode) const noexcept {
    BoundPolicy p = *this;
    p.mode_ = mode;
    return p;
}

std::string BoundPolicy::name() const {
    switch (kind_) {
        case BoundKind::ucb1: return "ucb1";
        case BoundKind::ucb1_01: return "ucb1-01";
        case BoundKind::ucb1_normal: return "ucb1-normal";
        case BoundKind::ucb1_normal2: return "ucb1-normal2";
    }
    return "?";
}

BoundPolicy parse_bound_policy(std::string_view id, double c, OptimizationMode mode) {
    if (id == "ucb1") return BoundPolicy::ucb1(c, mode);
    if (id == "ucb1-01") return BoundPolicy::ucb1_01(c, mode);
    if (id == "ucb1-normal") return BoundPolicy::ucb1_normal(mode);
    if (id == "ucb1-normal2") return BoundPolicy::ucb1_normal2(mode);
    throw std::invalid_argument("unknown bandit policy '" + std::string(id) +
                                "' (expected ucb1|ucb1-01|ucb1-normal|ucb1-normal2)");
}

double exploration_term(const BoundPolicy& policy, const RunningStats& stats, std::int64_t total) {
    require(stats.count() >= 1, "exploration_term: arm has no samples");
    require(total >= stats.count(), "exploration_term: total samples below the arm's count");
    const double log_total = std::log(static_cast<double>(total));
    const double t = static_cast<double>(stats.count());
    switch (policy.kind()) {
        case BoundKind::ucb1:
        case BoundKind::ucb1_01: return policy.c() * std::sqrt(2.0 * log_total / t);
        case BoundKind::ucb1_normal: return stats.sample_stddev() * std::sqrt(16.0 * log_total / t);
        case BoundKind::ucb1_normal2: return stats.sample_stddev() * std::sqrt(2.0 * log_total);
    }
    return 0.0;
}

double normalized_mean(double mean, const NormalizationContext& ctx) noexcept {
    const double range = ctx.max_mean - ctx.min_mean;
    if (range == 0.0) return 0.0;
    return (mean - ctx.min_mean) / range;
}

double bound(const BoundPolicy& policy, double mean_term, const RunningStats& stats, std::int64_t total,
             std::optional<NormalizationContext> ctx) {
    double mean = mean_term;
    if (policy.kind() == BoundKind::ucb1_01) {
        require(ctx.has_value(), "ucb1_01 bound requires a normalization context");
        mean = normalized_mean(mean_term, *ctx);
    }
    const double explore = exploration_term(policy, stats, total);
    // A zero exploration term must leave the mean untouched bit for bit.
    if (explore == 0.0) return mean;
    return policy.mode() == OptimizationMode::maximize ? mean + explore : mean - explore;
}

double bound(const BoundPolicy& policy, const RunningStats& stats, std::int64_t total,
             std::optional<NormalizationContext> ctx) {
    return bound(policy, stats.mean(), stats, total, ctx);
}

NormalizationContext sibling_context(std::span<const ArmView> arms) {
    require(!arms.empty(), "sibling_context: no arms");
    NormalizationContext ctx{arms.front().stats.mean(), arms.front().stats.mean()};
    for (const auto& arm : arms) {
        ctx.max_mean = std::max(ctx.max_mean, arm.stats.mean());
        ctx.min_mean = std::min(ctx.min_mean, arm.stats.mean());
    }
    return ctx;
}

std::size_t select(const BoundPolicy& policy, std::span<const ArmView> arms, std::int64_t total) {
    require(!arms.empty(), "select: empty arm list");
    std::optional<NormalizationContext> shared;
    if (policy.kind() == BoundKind::ucb1_01) shared = sibling_context(arms);
    const bool maximize = policy.mode() == OptimizationMode::maximize;
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const auto ctx = arms[i].context ? arms[i].context : shared;
        const double value = bound(policy, arms[i].stats, total, ctx);
        if (i == 0 || (maximize ? value > best_value : value < best_value)) {
            best = i;
            best_value = value;
        }
    }
    return best;
}

}  // namespace banditplan
