#include "banditplan/strips.hpp"

#include "banditplan/contract.hpp"

#include <bit>
#include <fstream>

namespace banditplan {

State::State(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {}

State State::from_facts(std::size_t width, std::span<const FactId> facts) {
    State s(width);
    for (FactId f : facts) {
        require(f < width, "State::from_facts: fact index out of range");
        s.set(f);
    }
    return s;
}

bool State::contains_all(std::span<const FactId> facts) const noexcept {
    for (FactId f : facts)
        if (!test(f)) return false;
    return true;
}

std::size_t State::count() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::vector<FactId> State::facts() const {
    std::vector<FactId> out;
    for (std::size_t f = 0; f < width_; ++f)
        if (test(static_cast<FactId>(f))) out.push_back(static_cast<FactId>(f));
    return out;
}

std::size_t State::hash() const noexcept {
    // FNV-1a over the words, folded with the width.
    std::uint64_t h = 1469598103934665603ull ^ width_;
    for (auto w : words_) {
        h ^= w;
        h *= 1099511628211ull;
        h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
}

State initial_state(const GroundTask& task) { return State::from_facts(task.fact_count(), task.init); }

bool applicable(const GroundTask& task, const State& state, OperatorId op) {
    require(op < task.operator_count(), "applicable: operator index out of range");
    return state.contains_all(task.operators[op].pre);
}

State apply(const GroundTask& task, const State& state, OperatorId op) {
    require(applicable(task, state, op), "apply: operator not applicable");
    State next = state;
    const GroundOperator& o = task.operators[op];
    for (FactId f : o.del) next.reset(f);
    for (FactId f : o.add) next.set(f);
    return next;
}

std::vector<Successor> successors(const GroundTask& task, const State& state) {
    std::vector<Successor> out;
    for (std::size_t i = 0; i < task.operator_count(); ++i) {
        const auto op = static_cast<OperatorId>(i);
        if (state.contains_all(task.operators[op].pre)) out.push_back({op, apply(task, state, op)});
    }
    return out;
}

bool is_goal(const GroundTask& task, const State& state) { return state.contains_all(task.goal); }

bool validate_plan(const GroundTask& task, std::span<const OperatorId> plan) {
    State s = initial_state(task);
    for (OperatorId op : plan) {
        if (op >= task.operator_count() || !applicable(task, s, op)) return false;
        s = apply(task, s, op);
    }
    return is_goal(task, s);
}

std::int64_t plan_cost(const GroundTask& task, std::span<const OperatorId> plan) {
    std::int64_t total = 0;
    for (OperatorId op : plan) total += task.operators.at(op).cost;
    return total;
}

std::string format_plan(const GroundTask& task, std::span<const OperatorId> plan) {
    std::string out;
    for (OperatorId op : plan) out += "(" + task.operators.at(op).label() + ")\n";
    return out;
}

void write_plan_file(const std::filesystem::path& path, const GroundTask& task, std::span<const OperatorId> plan) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write plan file " + path.string());
    file << format_plan(task, plan);
}

}  // namespace banditplan
