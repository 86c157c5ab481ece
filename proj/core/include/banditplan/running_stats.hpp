#pragma once

#include <cstdint>

namespace banditplan {

/// Count, mean and sum of squared deviations (m2) of a sample set.
///
/// Storing m2 instead of a variance lets one accumulator serve both the
/// population variance (m2/n) used when merging datasets and the sample
/// variance (m2/(n-1)) used by variance-aware confidence bounds.
///
/// An empty accumulator always has mean 0 and m2 0.
class RunningStats {
public:
    constexpr RunningStats() = default;

    /// Builds an accumulator from raw fields. Throws ContractViolation when
    /// the triple is not a valid state (negative m2, nonzero fields at n=0).
    static RunningStats from_fields(std::int64_t count, double mean, double m2);

    static RunningStats singleton(double x);

    /// Adds one observation. NaN is rejected with ContractViolation.
    void push(double x);

    [[nodiscard]] constexpr std::int64_t count() const noexcept { return count_; }
    [[nodiscard]] constexpr double mean() const noexcept { return mean_; }
    [[nodiscard]] constexpr double m2() const noexcept { return m2_; }
    [[nodiscard]] constexpr bool empty() const noexcept { return count_ == 0; }

    /// m2/n; 0 for an empty set.
    [[nodiscard]] double population_variance() const noexcept;
    /// m2/(n-1); 0 when n < 2.
    [[nodiscard]] double sample_variance() const noexcept;
    /// sqrt(sample_variance()). Defined as 0 for a single observation, which
    /// makes the variance-scaled exploration terms vanish on linear subtrees.
    [[nodiscard]] double sample_stddev() const noexcept;

    /// Every observation offset by `delta`: mean moves, m2 does not.
    [[nodiscard]] RunningStats shifted(double delta) const noexcept;

    friend constexpr bool operator==(const RunningStats&, const RunningStats&) = default;

private:
    std::int64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Statistics of the union of two disjoint datasets.
[[nodiscard]] RunningStats merge(const RunningStats& a, const RunningStats& b);

/// Statistics of `ab` with the dataset summarized by `b` removed.
/// `b` must have been merged into `ab` earlier; b.count() > ab.count() throws
/// ContractViolation. Rounding that drives m2 slightly negative is clamped.
[[nodiscard]] RunningStats retract(const RunningStats& ab, const RunningStats& b);

}  // namespace banditplan
