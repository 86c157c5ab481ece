#include "banditplan/bench.hpp"

#include "banditplan/contract.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace banditplan {

namespace {

using ordered_json = nlohmann::ordered_json;

bool valid_outcome(std::string_view s) { return s == "plan" || s == "exhausted" || s == "budget_reached"; }

template <typename T>
T required(const ordered_json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) throw std::invalid_argument(std::string("missing field: ") + key);
    return it->get<T>();
}

template <typename T>
std::optional<T> optional_field(const ordered_json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

}  // namespace

std::string to_json_line(const BenchRecord& r) {
    ordered_json j;
    j["domain"] = r.domain;
    j["problem"] = r.problem;
    j["algorithm"] = r.algorithm;
    j["heuristic"] = r.heuristic;
    j["c"] = r.c ? ordered_json(*r.c) : ordered_json(nullptr);
    j["seed"] = r.seed;
    j["outcome"] = r.outcome;
    j["expansions"] = r.expansions;
    j["plan_length"] = r.plan_length ? ordered_json(*r.plan_length) : ordered_json(nullptr);
    j["elapsed_ms"] = r.elapsed_ms;
    return j.dump();
}

BenchRecord parse_record(std::string_view line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
    BenchRecord r;
    try {
        r.domain = required<std::string>(j, "domain");
        r.problem = required<std::string>(j, "problem");
        r.algorithm = required<std::string>(j, "algorithm");
        r.heuristic = required<std::string>(j, "heuristic");
        r.c = optional_field<double>(j, "c");
        r.seed = required<std::int64_t>(j, "seed");
        r.outcome = required<std::string>(j, "outcome");
        r.expansions = required<std::int64_t>(j, "expansions");
        r.plan_length = optional_field<std::int64_t>(j, "plan_length");
        r.elapsed_ms = required<std::int64_t>(j, "elapsed_ms");
    } catch (const nlohmann::json::type_error& e) {
        throw std::invalid_argument(std::string("mistyped field: ") + e.what());
    }
    if (!valid_outcome(r.outcome)) throw std::invalid_argument("unknown outcome: " + r.outcome);
    if (r.plan_length.has_value() != (r.outcome == "plan"))
        throw std::invalid_argument("plan_length must be present exactly when outcome is plan");
    if (r.expansions < 0) throw std::invalid_argument("negative expansions");
    return r;
}

std::vector<BenchRecord> read_records(const std::filesystem::path& path, std::ostream* warnings) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    std::vector<BenchRecord> records;
    std::string line;
    for (std::int64_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(parse_record(line));
        } catch (const std::invalid_argument& e) {
            if (warnings) *warnings << "warning: " << path.string() << ':' << lineno << ": skipped: " << e.what() << '\n';
        }
    }
    return records;
}

int exit_code_for(const std::exception& error) noexcept {
    if (dynamic_cast<const FileNotFoundError*>(&error)) return kExitFileNotFound;
    if (dynamic_cast<const UnsupportedFeatureError*>(&error)) return kExitUnsupported;
    if (dynamic_cast<const PddlError*>(&error)) return kExitParseError;
    return kExitFailure;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in || std::filesystem::is_directory(path)) throw FileNotFoundError(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

LoadedTask load_task(const std::filesystem::path& domain_file, const std::filesystem::path& problem_file) {
    const std::string domain_text = read_text_file(domain_file);
    const std::string problem_text = read_text_file(problem_file);
    LoadedTask loaded{parse_domain(domain_text), parse_problem(problem_text), {}};
    loaded.task = ground(loaded.domain, loaded.problem);
    return loaded;
}

BenchRecord run_once(const RunConfig& config, const GroundTask& task, const Evaluator& h, Algorithm algorithm,
                     std::uint64_t seed, Plan* plan) {
    require(config.budget >= 1, "budget must be at least 1");
    SearchOptions options;
    options.budget = config.budget;
    options.seed = seed;
    options.randomize_ties = config.randomize_ties;
    options.backup = config.backup;
    const auto start = std::chrono::steady_clock::now();
    if (config.deadline_s > 0)
        options.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                       std::chrono::duration<double>(config.deadline_s));
    SearchResult result = run_algorithm(algorithm, config.c, task, h, options);
    const auto elapsed = std::chrono::steady_clock::now() - start;

    BenchRecord r;
    r.domain = task.domain_name;
    r.problem = task.problem_name;
    r.algorithm = std::string(to_string(algorithm));
    r.heuristic = std::string(to_string(config.heuristic));
    if (uses_coefficient(algorithm)) r.c = config.c;
    r.seed = static_cast<std::int64_t>(seed);
    r.outcome = std::string(to_string(result.outcome));
    r.expansions = result.expansions;
    if (result.outcome == Outcome::plan) r.plan_length = static_cast<std::int64_t>(result.plan.size());
    r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    if (plan) *plan = std::move(result.plan);
    return r;
}

int run_command(const RunConfig& config, const std::filesystem::path& domain_file,
                const std::filesystem::path& problem_file, std::ostream& out,
                const std::optional<std::filesystem::path>& plan_out) {
    const LoadedTask loaded = load_task(domain_file, problem_file);
    const Evaluator h = make_heuristic(config.heuristic, loaded.task);
    const bool many = config.algorithms.size() * config.seeds.size() > 1;
    int code = kExitOk;
    for (Algorithm algorithm : config.algorithms) {
        for (std::uint64_t seed : config.seeds) {
            Plan plan;
            const BenchRecord r = run_once(config, loaded.task, h, algorithm, seed, &plan);
            out << to_json_line(r) << '\n' << std::flush;
            if (r.outcome == "exhausted") code = kExitFailure;
            if (plan_out && r.outcome == "plan") {
                std::filesystem::path path = *plan_out;
                if (many) path += "." + r.algorithm + "." + std::to_string(seed);
                write_plan_file(path, loaded.task, plan);
            }
        }
    }
    return code;
}

std::vector<Instance> discover_instances(const std::filesystem::path& suite_dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(suite_dir)) throw FileNotFoundError(suite_dir);
    std::vector<Instance> out;
    auto scan = [&](const fs::path& dir) {
        const fs::path domain = dir / "domain.pddl";
        if (!fs::is_regular_file(domain)) return;
        for (const auto& entry : fs::directory_iterator(dir)) {
            const fs::path p = entry.path();
            const std::string name = p.filename().string();
            if (entry.is_regular_file() && p.extension() == ".pddl" && name.starts_with("p")) out.push_back({domain, p});
        }
    };
    scan(suite_dir);
    for (const auto& entry : fs::recursive_directory_iterator(suite_dir))
        if (entry.is_directory()) scan(entry.path());
    std::sort(out.begin(), out.end(),
              [](const Instance& a, const Instance& b) { return a.problem_file < b.problem_file; });
    return out;
}

BenchSummary bench_command(const RunConfig& config, const std::filesystem::path& suite_dir,
                           const std::filesystem::path& out_file, int jobs, std::ostream& log) {
    using Key = std::tuple<std::string, std::string, std::string, std::int64_t>;
    std::set<Key> done;
    if (std::filesystem::exists(out_file))
        for (const auto& r : read_records(out_file, &log)) done.emplace(r.domain, r.problem, r.algorithm, r.seed);

    const std::vector<Instance> instances = discover_instances(suite_dir);
    std::ofstream out(out_file, std::ios::app);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_file.string());

    BenchSummary summary;
    std::mutex writer;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < instances.size(); i = next++) {
            const Instance& inst = instances[i];
            LoadedTask loaded;
            try {
                loaded = load_task(inst.domain_file, inst.problem_file);
            } catch (const std::exception& e) {
                std::lock_guard lock(writer);
                log << "error: " << inst.problem_file.string() << ": " << e.what() << '\n';
                ++summary.failed_instances;
                continue;
            }
            const Evaluator h = make_heuristic(config.heuristic, loaded.task);
            for (Algorithm algorithm : config.algorithms) {
                for (std::uint64_t seed : config.seeds) {
                    const Key key{loaded.task.domain_name, loaded.task.problem_name, std::string(to_string(algorithm)),
                                  static_cast<std::int64_t>(seed)};
                    if (done.contains(key)) {
                        std::lock_guard lock(writer);
                        ++summary.skipped;
                        continue;
                    }
                    const BenchRecord r = run_once(config, loaded.task, h, algorithm, seed);
                    std::lock_guard lock(writer);
                    out << to_json_line(r) << '\n' << std::flush;
                    ++summary.written;
                }
            }
        }
    };
    const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
    if (threads == 1 || instances.size() <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < std::min(threads, instances.size()); ++i) pool.emplace_back(worker);
    }
    return summary;
}

namespace {

struct InstanceAggregate {
    std::int64_t runs = 0;
    std::int64_t solved = 0;
    double log_expansions = 0.0;  // sum over solved runs
    double plan_length = 0.0;     // sum over solved runs

    [[nodiscard]] bool all_solved() const noexcept { return runs > 0 && solved == runs; }
    [[nodiscard]] double mean_log() const noexcept { return log_expansions / static_cast<double>(solved); }
};

using InstanceKey = std::pair<std::string, std::string>;

std::map<std::string, std::map<InstanceKey, InstanceAggregate>> aggregate(const std::vector<BenchRecord>& records) {
    std::map<std::string, std::map<InstanceKey, InstanceAggregate>> out;
    for (const auto& r : records) {
        InstanceAggregate& a = out[r.algorithm][{r.domain, r.problem}];
        ++a.runs;
        if (r.outcome == "plan") {
            ++a.solved;
            a.log_expansions += std::log(static_cast<double>(std::max<std::int64_t>(1, r.expansions)));
            a.plan_length += static_cast<double>(r.plan_length.value_or(0));
        }
    }
    return out;
}

}  // namespace

void write_histogram_csv(std::ostream& out, const std::vector<BenchRecord>& records, std::int64_t max_expansions) {
    require(max_expansions >= 1, "histogram range must reach at least 1");
    const auto agg = aggregate(records);

    std::vector<double> thresholds;
    const double top = std::log10(static_cast<double>(max_expansions));
    for (int k = 0; k / 10.0 < top - 1e-12; ++k) thresholds.push_back(std::pow(10.0, k / 10.0));
    thresholds.push_back(static_cast<double>(max_expansions));

    out << "threshold";
    for (const auto& [algo, _] : agg) out << ',' << algo;
    out << '\n';
    for (double t : thresholds) {
        out << t;
        const double log_t = std::log(t);
        for (const auto& [algo, instances] : agg) {
            std::int64_t count = 0;
            for (const auto& [_, a] : instances)
                if (a.all_solved() && a.mean_log() <= log_t + 1e-9) ++count;
            out << ',' << count;
        }
        out << '\n';
    }
}

void write_compare_csv(std::ostream& out, const std::vector<BenchRecord>& records, std::string_view algo_a,
                       std::string_view algo_b) {
    (void)parse_algorithm(algo_a);
    (void)parse_algorithm(algo_b);
    const auto agg = aggregate(records);
    out << "domain,problem,expansions_a,expansions_b,plan_length_a,plan_length_b\n";
    const auto ia = agg.find(std::string(algo_a));
    const auto ib = agg.find(std::string(algo_b));
    if (ia == agg.end() || ib == agg.end()) return;
    for (const auto& [key, a] : ia->second) {
        auto jt = ib->second.find(key);
        if (jt == ib->second.end() || !a.all_solved() || !jt->second.all_solved()) continue;
        const auto& b = jt->second;
        out << key.first << ',' << key.second << ',' << std::exp(a.mean_log()) << ',' << std::exp(b.mean_log()) << ','
            << a.plan_length / static_cast<double>(a.solved) << ',' << b.plan_length / static_cast<double>(b.solved)
            << '\n';
    }
}

}  // namespace banditplan
