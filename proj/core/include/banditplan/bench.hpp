#pragma once

#include "banditplan/heuristics.hpp"
#include "banditplan/pddl.hpp"
#include "banditplan/search.hpp"
#include "banditplan/task.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace banditplan {

struct BenchRecord {
    std::string domain;
    std::string problem;
    std::string algorithm;
    std::string heuristic;
    std::optional<double> c;  // only for algorithms that use it
    std::int64_t seed = 0;
    std::string outcome;  // plan | exhausted | budget_reached
    std::int64_t expansions = 0;
    std::optional<std::int64_t> plan_length;  // iff outcome == plan
    std::int64_t elapsed_ms = 0;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

/// One JSON object, no trailing newline. Absent optionals are null.
[[nodiscard]] std::string to_json_line(const BenchRecord& record);
/// Throws std::invalid_argument on malformed JSON, missing or mistyped
/// fields, an unknown outcome, or plan_length inconsistent with outcome.
[[nodiscard]] BenchRecord parse_record(std::string_view line);
/// Reads a JSONL file. Blank lines are ignored; malformed lines are skipped
/// with a message on `warnings` when it is not null.
[[nodiscard]] std::vector<BenchRecord> read_records(const std::filesystem::path& path, std::ostream* warnings);

struct RunConfig {
    std::vector<Algorithm> algorithms{Algorithm::gbfs};
    HeuristicKind heuristic = HeuristicKind::ff;
    double c = 1.0;
    std::int64_t budget = 10000;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    double deadline_s = 900.0;
    /// Seeded random tie-breaking. Off by default, in which case every seed
    /// gives the same run.
    bool randomize_ties = false;
    BackupMode backup = BackupMode::recompute;
};

class FileNotFoundError : public std::runtime_error {
public:
    explicit FileNotFoundError(const std::filesystem::path& path)
        : std::runtime_error("file not found: " + path.string()) {}
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitFileNotFound = 2;
inline constexpr int kExitParseError = 3;
inline constexpr int kExitUnsupported = 4;

/// Maps load errors to process exit codes: missing file 2, syntax or
/// semantic error 3, unsupported PDDL feature 4, anything else 1.
[[nodiscard]] int exit_code_for(const std::exception& error) noexcept;

struct LoadedTask {
    DomainAst domain;
    ProblemAst problem;
    GroundTask task;
};

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);
/// Parses and grounds. Throws FileNotFoundError or a PddlError subclass.
[[nodiscard]] LoadedTask load_task(const std::filesystem::path& domain_file,
                                   const std::filesystem::path& problem_file);

/// Runs one search and packages the record. The plan is returned through
/// `plan` when it is not null.
[[nodiscard]] BenchRecord run_once(const RunConfig& config, const GroundTask& task, const Evaluator& h,
                                   Algorithm algorithm, std::uint64_t seed, Plan* plan = nullptr);

/// One record per (algorithm, seed) as JSONL on `out`. Returns 0 when every
/// run ended in plan or budget_reached, 1 otherwise. Load errors propagate.
/// When `plan_out` is set, plans are written there (suffixed with
/// ".<algorithm>.<seed>" when there is more than one run).
int run_command(const RunConfig& config, const std::filesystem::path& domain_file,
                const std::filesystem::path& problem_file, std::ostream& out,
                const std::optional<std::filesystem::path>& plan_out = std::nullopt);

struct Instance {
    std::filesystem::path domain_file;
    std::filesystem::path problem_file;
};

/// Every p*.pddl next to a domain.pddl, searched recursively, sorted by path.
[[nodiscard]] std::vector<Instance> discover_instances(const std::filesystem::path& suite_dir);

struct BenchSummary {
    std::int64_t written = 0;
    std::int64_t skipped = 0;         // already present in the output file
    std::int64_t failed_instances = 0;  // could not be loaded
};

/// Appends one record per instance x algorithm x seed to `out_file`,
/// skipping triples already recorded there. Instances are spread over
/// `jobs` workers; a single writer appends and flushes each record.
/// Load failures are reported on `log` and do not stop the run.
BenchSummary bench_command(const RunConfig& config, const std::filesystem::path& suite_dir,
                           const std::filesystem::path& out_file, int jobs, std::ostream& log);

/// Cumulative solved counts per algorithm at log-spaced thresholds from 1
/// to `max_expansions`, ten per decade, plus max_expansions itself.
/// An instance counts as solved when every recorded seed found a plan; its
/// expansions are exp(mean over seeds of ln max(1, expansions)).
/// Columns: threshold,<algorithm>... in sorted algorithm order.
void write_histogram_csv(std::ostream& out, const std::vector<BenchRecord>& records,
                         std::int64_t max_expansions = 10000);

/// Inner join on (domain, problem) of instances solved by both algorithms,
/// aggregated over seeds as in the histogram; plan lengths are seed means.
/// Columns: domain,problem,expansions_a,expansions_b,plan_length_a,plan_length_b.
/// Throws std::invalid_argument for an unknown algorithm id.
void write_compare_csv(std::ostream& out, const std::vector<BenchRecord>& records, std::string_view algo_a,
                       std::string_view algo_b);

}  // namespace banditplan
