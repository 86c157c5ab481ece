#include "banditplan/regret.hpp"

#include "banditplan/contract.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace banditplan {

namespace {

double parse_double(std::string_view text) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw std::invalid_argument("not a number: " + std::string(text));
    return value;
}

}  // namespace

std::vector<GaussianArm> parse_arms(std::string_view text) {
    std::vector<GaussianArm> arms;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) throw std::invalid_argument("arm must be mu:sigma: " + std::string(item));
        GaussianArm arm{parse_double(item.substr(0, colon)), parse_double(item.substr(colon + 1))};
        if (!(arm.sigma >= 0.0)) throw std::invalid_argument("arm sigma must be nonnegative");
        arms.push_back(arm);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (arms.empty()) throw std::invalid_argument("no arms given");
    return arms;
}

double GaussianSampler::uniform_open() {
    return static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;
}

double GaussianSampler::standard() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double theta = 2.0 * std::numbers::pi * uniform_open();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

RegretTrace simulate(std::span<const GaussianArm> arms, const BoundPolicy& policy, std::int64_t horizon,
                     std::uint64_t seed) {
    const auto k = static_cast<std::int64_t>(arms.size());
    require(k >= 1, "simulate needs at least one arm");
    require(horizon >= k, "horizon must cover one pull per arm");
    for (const auto& arm : arms) require(arm.sigma >= 0.0, "arm sigma must be nonnegative");

    const BoundPolicy ucb = policy.with_mode(OptimizationMode::maximize);
    double best_mu = arms[0].mu;
    for (const auto& arm : arms) best_mu = std::max(best_mu, arm.mu);

    RegretTrace trace;
    trace.policy = policy.name();
    trace.seed = seed;
    trace.horizon = horizon;
    trace.cum_regret.reserve(static_cast<std::size_t>(horizon));
    trace.pulls.assign(arms.size(), 0);

    GaussianSampler sampler(seed);
    std::vector<ArmView> views(arms.size());
    double regret = 0.0;
    for (std::int64_t t = 0; t < horizon; ++t) {
        const std::size_t arm = t < k ? static_cast<std::size_t>(t) : select(ucb, views, t);
        views[arm].stats.push(sampler(arms[arm].mu, arms[arm].sigma));
        ++trace.pulls[arm];
        regret += best_mu - arms[arm].mu;
        trace.cum_regret.push_back(regret);
    }
    return trace;
}

double subgaussian_moment(double sigma, double t) {
    require(sigma > 0.0 && t > 0.0, "sigma and t must be positive");
    // Integrand is N(0, sigma^2) density times exp(x^2/t^2): a Gaussian
    // shape with precision a = 1/sigma^2 - 2/t^2.
    const double a = 1.0 / (sigma * sigma) - 2.0 / (t * t);
    if (a <= 0.0) return std::numeric_limits<double>::infinity();
    const double width = 40.0 / std::sqrt(a);
    constexpr int kIntervals = 20000;  // even
    const double step = 2.0 * width / kIntervals;
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    auto f = [&](double x) { return norm * std::exp(-0.5 * a * x * x); };
    double sum = f(-width) + f(width);
    for (int i = 1; i < kIntervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(-width + i * step);
    return sum * step / 3.0;
}

double verify_subgaussian_norm(double sigma) {
    require(sigma > 0.0, "sigma must be positive");
    double lo = std::sqrt(2.0) * sigma * (1.0 + 1e-9);
    double hi = 2.0 * sigma;
    while (subgaussian_moment(sigma, hi) > 2.0) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * sigma; ++i) {
        const double mid = 0.5 * (lo + hi);
        (subgaussian_moment(sigma, mid) > 2.0 ? lo : hi) = mid;
    }
    return hi;
}

double verify_chi2_df2(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
    const double p = 1.0 - alpha;
    auto cdf = [](double x) { return -std::expm1(-0.5 * x); };
    double lo = 0.0;
    double hi = 1.0;
    while (cdf(hi) < p) hi *= 2.0;
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

PolicyComparison compare_policies(std::span<const GaussianArm> arms, std::span<const BoundPolicy> policies,
                                  std::int64_t horizon, std::int64_t seeds, std::uint64_t first_seed, int jobs) {
    require(seeds >= 1, "need at least one seed");
    const std::size_t runs = policies.size() * static_cast<std::size_t>(seeds);
    PolicyComparison out;
    out.traces.resize(runs);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runs; i = next++) {
            const auto& policy = policies[i / static_cast<std::size_t>(seeds)];
            const std::uint64_t seed = first_seed + i % static_cast<std::size_t>(seeds);
            out.traces[i] = simulate(arms, policy, horizon, seed);
        }
    };
    const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < std::min(threads, runs); ++i) pool.emplace_back(worker);
    }

    for (std::size_t p = 0; p < policies.size(); ++p) {
        RunningStats finals;
        for (std::int64_t s = 0; s < seeds; ++s)
            finals.push(out.traces[p * static_cast<std::size_t>(seeds) + static_cast<std::size_t>(s)].cum_regret.back());
        out.summary.push_back({policies[p].name(), seeds, finals.mean(), finals.sample_stddev()});
    }
    return out;
}

void write_curves_csv(std::ostream& out, std::span<const RegretTrace> traces, std::int64_t stride) {
    require(stride >= 1, "stride must be positive");
    out << "policy,seed,t,cum_regret\n";
    for (const auto& trace : traces) {
        const auto n = static_cast<std::int64_t>(trace.cum_regret.size());
        for (std::int64_t t = 1; t <= n; ++t) {
            if (t % stride != 0 && t != n) continue;
            out << trace.policy << ',' << trace.seed << ',' << t << ',' << trace.cum_regret[static_cast<std::size_t>(t - 1)]
                << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, std::span<const PolicySummary> rows) {
    out << "policy,runs,mean_final_regret,stddev_final_regret\n";
    for (const auto& row : rows)
        out << row.policy << ',' << row.runs << ',' << row.mean_final_regret << ',' << row.stddev_final_regret << '\n';
}

}  // namespace banditplan
