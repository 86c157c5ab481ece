#include "banditplan/running_stats.hpp"

#include "banditplan/contract.hpp"

#include <cmath>

namespace banditplan {

RunningStats RunningStats::from_fields(std::int64_t count, double mean, double m2) {
    require(count >= 0, "RunningStats: negative count");
    require(std::isfinite(mean) && std::isfinite(m2), "RunningStats: non-finite field");
    require(m2 >= 0.0, "RunningStats: negative m2");
    require(count > 0 || (mean == 0.0 && m2 == 0.0), "RunningStats: empty set with nonzero fields");
    RunningStats s;
    s.count_ = count;
    s.mean_ = mean;
    s.m2_ = m2;
    return s;
}

RunningStats RunningStats::singleton(double x) {
    RunningStats s;
    s.push(x);
    return s;
}

void RunningStats::push(double x) {
    require(!std::isnan(x), "RunningStats::push: NaN observation");
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

double RunningStats::population_variance() const noexcept {
    return count_ == 0 ? 0.0 : m2_ / static_cast<double>(count_);
}

double RunningStats::sample_variance() const noexcept {
    return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double RunningStats::sample_stddev() const noexcept { return std::sqrt(sample_variance()); }

RunningStats RunningStats::shifted(double delta) const noexcept {
    if (count_ == 0) return *this;
    RunningStats s = *this;
    s.mean_ += delta;
    return s;
}

RunningStats merge(const RunningStats& a, const RunningStats& b) {
    if (b.empty()) return a;
    if (a.empty()) return b;
    const double na = static_cast<double>(a.count());
    const double nb = static_cast<double>(b.count());
    const double n = na + nb;
    const double delta = b.mean() - a.mean();
    return RunningStats::from_fields(a.count() + b.count(), a.mean() + delta * (nb / n),
                                     a.m2() + b.m2() + delta * delta * (na * nb / n));
}

RunningStats retract(const RunningStats& ab, const RunningStats& b) {
    require(b.count() <= ab.count(), "retract: removed dataset larger than the union");
    if (b.empty()) return ab;
    if (b.count() == ab.count()) return RunningStats{};
    const double n12 = static_cast<double>(ab.count());
    const double n2 = static_cast<double>(b.count());
    const double n1 = n12 - n2;
    const double mean = (n12 * ab.mean() - n2 * b.mean()) / n1;
    const double d = ab.mean() - b.mean();
    double m2 = ab.m2() - b.m2() - (n2 * n12 / n1) * d * d;
    if (m2 < 0.0) m2 = 0.0;
    if (ab.count() - b.count() == 1) m2 = 0.0;
    return RunningStats::from_fields(ab.count() - b.count(), mean, m2);
}

}  // namespace banditplan
