#pragma once

#include "banditplan/bandit.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace banditplan {

struct GaussianArm {
    double mu = 0.0;
    double sigma = 1.0;  // >= 0
};

/// Parses "mu:sigma,mu:sigma,...". Throws std::invalid_argument.
[[nodiscard]] std::vector<GaussianArm> parse_arms(std::string_view text);

struct RegretTrace {
    std::string policy;
    std::uint64_t seed = 0;
    std::int64_t horizon = 0;
    std::vector<double> cum_regret;  // entry t-1 holds the pseudo-regret after t pulls
    std::vector<std::int64_t> pulls;  // per arm
};

/// std::mt19937_64 with a Box-Muller transform, so sample streams depend
/// only on the seed and not on the standard library's distributions.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
    double standard();
    double operator()(double mu, double sigma) { return mu + sigma * standard(); }

private:
    double uniform_open();  // (0, 1]
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Pulls every arm once, then the arm with the highest index under
/// `policy` (maximize mode). Regret uses the true means.
/// Requires at least one arm and horizon >= number of arms.
[[nodiscard]] RegretTrace simulate(std::span<const GaussianArm> arms, const BoundPolicy& policy,
                                   std::int64_t horizon, std::uint64_t seed);

/// E[exp(x^2/t^2)] for x ~ N(0, sigma^2) by Simpson quadrature.
/// +inf when t^2 <= 2 sigma^2, where the expectation diverges.
[[nodiscard]] double subgaussian_moment(double sigma, double t);
/// Smallest t with subgaussian_moment(sigma, t) <= 2, found by bisection.
[[nodiscard]] double verify_subgaussian_norm(double sigma);
/// Quantile at probability 1 - alpha of the chi-squared distribution with
/// two degrees of freedom, found by bisection on its CDF.
/// Throws std::domain_error unless 0 < alpha < 1.
[[nodiscard]] double verify_chi2_df2(double alpha);

struct PolicySummary {
    std::string policy;
    std::int64_t runs = 0;
    double mean_final_regret = 0.0;
    double stddev_final_regret = 0.0;  // sample stddev over seeds
};

struct PolicyComparison {
    std::vector<PolicySummary> summary;  // one row per policy, input order
    std::vector<RegretTrace> traces;     // policy-major, then seed
};

/// Runs simulate for every policy and seeds first_seed .. first_seed+seeds-1
/// on up to `jobs` threads. Output does not depend on `jobs`.
[[nodiscard]] PolicyComparison compare_policies(std::span<const GaussianArm> arms,
                                                std::span<const BoundPolicy> policies, std::int64_t horizon,
                                                std::int64_t seeds, std::uint64_t first_seed = 0, int jobs = 1);

/// Columns: policy,seed,t,cum_regret. Writes every `stride`-th step and the
/// last one.
void write_curves_csv(std::ostream& out, std::span<const RegretTrace> traces, std::int64_t stride = 1);
/// Columns: policy,runs,mean_final_regret,stddev_final_regret.
void write_summary_csv(std::ostream& out, std::span<const PolicySummary> rows);

}  // namespace banditplan
