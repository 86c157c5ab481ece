#include "banditplan/bench.hpp"
#include "banditplan/regret.hpp"
#include "banditplan/strips.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

namespace bp = banditplan;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find(sep, start);
        std::string item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!item.empty()) out.push_back(item);
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw CLI::ValidationError("--seeds", "bad seed: " + s);
    return v;
}

// "0,1,2", "0..4" or a mix of both.
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    for (const auto& item : split(text, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            seeds.push_back(parse_u64(item));
            continue;
        }
        const auto lo = parse_u64(item.substr(0, dots));
        const auto hi = parse_u64(item.substr(dots + 2));
        if (hi < lo) throw CLI::ValidationError("--seeds", "empty range: " + item);
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (seeds.empty()) throw CLI::ValidationError("--seeds", "no seeds given");
    return seeds;
}

struct SearchFlags {
    std::string algo = "gbfs";
    std::string heuristic = "ff";
    double c = 1.0;
    std::int64_t budget = 10000;
    std::string seeds = "0..4";
    double deadline_s = 900.0;
    std::string ties = "id";
    std::string backup = "recompute";

    void add_to(CLI::App& app) {
        app.add_option("--algo", algo, "comma-separated: gbfs, gbfs-tree, guct, guct01, guct-normal, guct-normal2, *-star")
            ->capture_default_str();
        app.add_option("--heuristic", heuristic, "ff, add, hmax, gc, blind")->capture_default_str();
        app.add_option("--c", c, "exploration coefficient for guct and guct01")->capture_default_str();
        app.add_option("--budget", budget, "node expansions per run")->check(CLI::PositiveNumber)->capture_default_str();
        app.add_option("--seeds", seeds, "seed list, e.g. 0,1,2 or 0..4")->capture_default_str();
        app.add_option("--deadline-s", deadline_s, "per-run wall-clock limit in seconds (0: none)")
            ->capture_default_str();
        app.add_option("--ties", ties, "tie-breaking: id (lowest node id) or random (seeded)")
            ->check(CLI::IsMember({"random", "id"}))
            ->capture_default_str();
        app.add_option("--backup", backup, "tree statistics update: recompute or incremental")
            ->check(CLI::IsMember({"recompute", "incremental"}))
            ->capture_default_str();
    }

    [[nodiscard]] bp::RunConfig config() const {
        bp::RunConfig cfg;
        cfg.algorithms.clear();
        for (const auto& id : split(algo, ',')) cfg.algorithms.push_back(bp::parse_algorithm(id));
        if (cfg.algorithms.empty()) throw std::invalid_argument("--algo is empty");
        cfg.heuristic = bp::parse_heuristic_kind(heuristic);
        if (!(c > 0.0)) throw std::invalid_argument("--c must be positive");
        cfg.c = c;
        cfg.budget = budget;
        cfg.seeds = parse_seed_list(seeds);
        cfg.deadline_s = deadline_s;
        cfg.randomize_ties = ties == "random";
        cfg.backup = backup == "incremental" ? bp::BackupMode::incremental : bp::BackupMode::recompute;
        return cfg;
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

int cmd_verify_plan(const std::string& domain, const std::string& problem, const std::string& plan_file) {
    const bp::LoadedTask loaded = bp::load_task(domain, problem);
    const auto steps = bp::parse_plan_text(bp::read_text_file(plan_file));
    const bool ok = bp::validate_plan_lifted(loaded.domain, loaded.problem, steps);
    std::cout << (ok ? "valid" : "invalid") << " plan, " << steps.size() << " steps\n";
    return ok ? bp::kExitOk : bp::kExitFailure;
}

int cmd_verify_identities(const std::vector<double>& sigmas, const std::vector<double>& alphas) {
    std::cout << std::setprecision(12);
    bool ok = true;
    for (double s : sigmas) {
        const double got = bp::verify_subgaussian_norm(s);
        const double want = std::sqrt(8.0 / 3.0) * s;
        const bool pass = std::abs(got - want) <= 1e-3 * want;
        ok = ok && pass;
        std::cout << "subgaussian_norm sigma=" << s << " numeric=" << got << " closed_form=" << want
                  << (pass ? " ok" : " MISMATCH") << '\n';
    }
    for (double a : alphas) {
        const double got = bp::verify_chi2_df2(a);
        const double want = -2.0 * std::log(a);
        const bool pass = std::abs(got - want) <= 1e-9;
        ok = ok && pass;
        std::cout << "chi2_df2_quantile alpha=" << a << " numeric=" << got << " closed_form=" << want
                  << (pass ? " ok" : " MISMATCH") << '\n';
    }
    return ok ? bp::kExitOk : bp::kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bandit-based tree search and greedy best-first search for STRIPS planning"};
    app.require_subcommand(1);

    SearchFlags run_flags;
    std::string run_domain, run_problem, run_out, run_plan_out;
    auto* run = app.add_subcommand("run", "search one task, one JSON record per algorithm and seed");
    run->add_option("domain", run_domain)->required();
    run->add_option("problem", run_problem)->required();
    run_flags.add_to(*run);
    run->add_option("--out", run_out, "write records here instead of stdout");
    run->add_option("--plan-out", run_plan_out, "write found plans to this file");

    SearchFlags bench_flags;
    std::string bench_suite, bench_out = "records.jsonl";
    int bench_jobs = 1;
    auto* bench = app.add_subcommand("bench", "run every instance of a suite directory, appending JSONL records");
    bench->add_option("suite", bench_suite)->required();
    bench_flags.add_to(*bench);
    bench->add_option("--out", bench_out, "records file (resumed when it exists)")->capture_default_str();
    bench->add_option("--jobs", bench_jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    std::string arms_text = "0:1,1:1", policies_text = "ucb1,ucb1-normal,ucb1-normal2", regret_out, regret_summary;
    double regret_c = 1.0;
    std::int64_t horizon = 10000, regret_seeds = 100, stride = 1;
    int regret_jobs = 1;
    auto* regret = app.add_subcommand("regret", "simulate Gaussian bandits and write cumulative regret curves");
    regret->add_option("--arms", arms_text, "mu:sigma,...")->capture_default_str();
    regret->add_option("--policy", policies_text, "ucb1, ucb1-01, ucb1-normal, ucb1-normal2")->capture_default_str();
    regret->add_option("--c", regret_c, "coefficient for ucb1 and ucb1-01")->capture_default_str();
    regret->add_option("--horizon", horizon)->check(CLI::PositiveNumber)->capture_default_str();
    regret->add_option("--seeds", regret_seeds, "number of seeds, starting at 0")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    regret->add_option("--stride", stride, "write every n-th step")->check(CLI::PositiveNumber)->capture_default_str();
    regret->add_option("--out", regret_out, "curves CSV");
    regret->add_option("--summary", regret_summary, "summary CSV (default: stdout)");
    regret->add_option("--jobs", regret_jobs)->check(CLI::PositiveNumber)->capture_default_str();

    std::vector<std::string> verify_files;
    std::vector<double> sigmas{1.0, 2.0}, alphas{0.5, 0.05, std::exp(-2.0)};
    auto* verify = app.add_subcommand(
        "verify", "validate a plan (DOMAIN PROBLEM PLAN), or check the sub-Gaussian and chi-squared identities");
    verify->add_option("files", verify_files, "domain, problem and plan files")->expected(0, 3);
    verify->add_option("--sigma", sigmas)->capture_default_str();
    verify->add_option("--alpha", alphas)->capture_default_str();

    std::string hist_records, hist_out;
    std::int64_t hist_max = 10000;
    auto* histogram = app.add_subcommand("histogram", "cumulative solved-instance counts by expansions");
    histogram->add_option("records", hist_records)->required();
    histogram->add_option("--budget", hist_max, "largest threshold")->check(CLI::PositiveNumber)->capture_default_str();
    histogram->add_option("--out", hist_out, "CSV file (default: stdout)");

    std::string cmp_records, cmp_a, cmp_b, cmp_out;
    auto* compare = app.add_subcommand("compare", "per-instance comparison on instances solved by both algorithms");
    compare->add_option("records", cmp_records)->required();
    compare->add_option("algo_a", cmp_a)->required();
    compare->add_option("algo_b", cmp_b)->required();
    compare->add_option("--out", cmp_out, "CSV file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto cfg = run_flags.config();
            std::optional<std::filesystem::path> plan_out;
            if (!run_plan_out.empty()) plan_out = run_plan_out;
            if (run_out.empty()) return bp::run_command(cfg, run_domain, run_problem, std::cout, plan_out);
            auto out = open_out(run_out);
            return bp::run_command(cfg, run_domain, run_problem, out, plan_out);
        }
        if (*bench) {
            const auto summary = bp::bench_command(bench_flags.config(), bench_suite, bench_out, bench_jobs, std::cerr);
            std::cerr << "bench: " << summary.written << " written, " << summary.skipped << " skipped, "
                      << summary.failed_instances << " instances failed to load\n";
            return bp::kExitOk;
        }
        if (*regret) {
            const auto arms = bp::parse_arms(arms_text);
            std::vector<bp::BoundPolicy> policies;
            for (const auto& id : split(policies_text, ',')) policies.push_back(bp::parse_bound_policy(id, regret_c));
            const auto result = bp::compare_policies(arms, policies, horizon, regret_seeds, 0, regret_jobs);
            if (!regret_out.empty()) {
                auto out = open_out(regret_out);
                bp::write_curves_csv(out, result.traces, stride);
            }
            if (regret_summary.empty()) {
                bp::write_summary_csv(std::cout, result.summary);
            } else {
                auto out = open_out(regret_summary);
                bp::write_summary_csv(out, result.summary);
            }
            return bp::kExitOk;
        }
        if (*verify) {
            if (verify_files.size() == 3) return cmd_verify_plan(verify_files[0], verify_files[1], verify_files[2]);
            if (!verify_files.empty()) throw std::invalid_argument("verify takes DOMAIN PROBLEM PLAN or no files");
            return cmd_verify_identities(sigmas, alphas);
        }
        if (*histogram) {
            const auto records = bp::read_records(hist_records, &std::cerr);
            if (hist_out.empty()) {
                bp::write_histogram_csv(std::cout, records, hist_max);
            } else {
                auto out = open_out(hist_out);
                bp::write_histogram_csv(out, records, hist_max);
            }
            return bp::kExitOk;
        }
        if (*compare) {
            const auto records = bp::read_records(cmp_records, &std::cerr);
            if (cmp_out.empty()) {
                bp::write_compare_csv(std::cout, records, cmp_a, cmp_b);
            } else {
                auto out = open_out(cmp_out);
                bp::write_compare_csv(out, records, cmp_a, cmp_b);
            }
            return bp::kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "banditplan: " << e.what() << '\n';
        return bp::exit_code_for(e);
    }
    return bp::kExitFailure;
}
