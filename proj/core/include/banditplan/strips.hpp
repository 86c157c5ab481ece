#pragma once

#include "banditplan/task.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace banditplan {

/// Fixed-width set of true facts. Equality and hashing are by value.
class State {
public:
    State() = default;
    explicit State(std::size_t width);
    static State from_facts(std::size_t width, std::span<const FactId> facts);

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] bool test(FactId f) const noexcept { return (words_[f >> 6] >> (f & 63)) & 1u; }
    void set(FactId f) noexcept { words_[f >> 6] |= std::uint64_t{1} << (f & 63); }
    void reset(FactId f) noexcept { words_[f >> 6] &= ~(std::uint64_t{1} << (f & 63)); }

    [[nodiscard]] bool contains_all(std::span<const FactId> facts) const noexcept;
    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] std::vector<FactId> facts() const;
    [[nodiscard]] std::size_t hash() const noexcept;

    friend bool operator==(const State&, const State&) = default;

private:
    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

struct StateHash {
    std::size_t operator()(const State& s) const noexcept { return s.hash(); }
};

using Plan = std::vector<OperatorId>;

struct Successor {
    OperatorId op;
    State state;
};

[[nodiscard]] State initial_state(const GroundTask& task);
[[nodiscard]] bool applicable(const GroundTask& task, const State& state, OperatorId op);
/// Delete effects are applied before add effects. Throws ContractViolation
/// when `op` is not applicable.
[[nodiscard]] State apply(const GroundTask& task, const State& state, OperatorId op);
/// One entry per applicable operator, in ascending operator order.
[[nodiscard]] std::vector<Successor> successors(const GroundTask& task, const State& state);
[[nodiscard]] bool is_goal(const GroundTask& task, const State& state);
[[nodiscard]] bool validate_plan(const GroundTask& task, std::span<const OperatorId> plan);
[[nodiscard]] std::int64_t plan_cost(const GroundTask& task, std::span<const OperatorId> plan);

/// One "(action arg ...)" line per step.
[[nodiscard]] std::string format_plan(const GroundTask& task, std::span<const OperatorId> plan);
void write_plan_file(const std::filesystem::path& path, const GroundTask& task, std::span<const OperatorId> plan);

}  // namespace banditplan
