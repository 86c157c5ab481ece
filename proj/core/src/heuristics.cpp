#include "banditplan/heuristics.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace banditplan {

HeuristicKind parse_heuristic_kind(std::string_view id) {
    if (id == "ff") return HeuristicKind::ff;
    if (id == "add") return HeuristicKind::add;
    if (id == "hmax") return HeuristicKind::hmax;
    if (id == "gc") return HeuristicKind::goal_count;
    if (id == "blind") return HeuristicKind::blind;
    throw std::invalid_argument("unknown heuristic '" + std::string(id) + "' (expected ff|add|hmax|gc|blind)");
}

std::string_view to_string(HeuristicKind kind) noexcept {
    switch (kind) {
        case HeuristicKind::ff: return "ff";
        case HeuristicKind::add: return "add";
        case HeuristicKind::hmax: return "hmax";
        case HeuristicKind::goal_count: return "gc";
        case HeuristicKind::blind: return "blind";
    }
    return "?";
}

RelaxedExploration::RelaxedExploration(const GroundTask& task)
    : task_(&task), watchers_(task.fact_count()), achievers_(task.fact_count()) {
    for (std::size_t i = 0; i < task.operator_count(); ++i) {
        const auto op = static_cast<OperatorId>(i);
        const GroundOperator& o = task.operators[op];
        if (o.pre.empty()) unconditional_.push_back(op);
        for (FactId f : o.pre) watchers_[f].push_back(op);
        for (FactId f : o.add) achievers_[f].push_back(op);
    }
}

// Generalized Dijkstra over the relaxed planning graph: an operator fires once
// its last precondition is settled, with cost(op) + sum/max of precondition
// costs.
std::vector<double> RelaxedExploration::fact_costs(const State& state, bool additive) const {
    return explore(state, additive).cost;
}

RelaxedExploration::Exploration RelaxedExploration::explore(const State& state, bool additive) const {
    const GroundTask& task = *task_;
    Exploration ex{std::vector<double>(task.fact_count(), kDeadEnd),
                   std::vector<std::size_t>(task.fact_count(), std::string::npos)};
    std::vector<double>& cost = ex.cost;
    std::size_t order = 0;
    std::vector<std::size_t> unsatisfied(task.operator_count());
    std::vector<double> support(task.operator_count(), 0.0);
    for (std::size_t i = 0; i < task.operator_count(); ++i) unsatisfied[i] = task.operators[i].pre.size();

    using Entry = std::pair<double, FactId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    auto relax = [&](FactId f, double c) {
        if (c < cost[f]) {
            cost[f] = c;
            open.emplace(c, f);
        }
    };
    auto fire = [&](OperatorId op) {
        const GroundOperator& o = task.operators[op];
        const double c = static_cast<double>(o.cost) + support[op];
        for (FactId f : o.add) relax(f, c);
    };

    for (std::size_t f = 0; f < task.fact_count(); ++f)
        if (state.test(static_cast<FactId>(f))) relax(static_cast<FactId>(f), 0.0);
    for (OperatorId op : unconditional_) fire(op);

    while (!open.empty()) {
        auto [c, f] = open.top();
        open.pop();
        if (c > cost[f]) continue;
        ex.settled[f] = order++;
        for (OperatorId op : watchers_[f]) {
            support[op] = additive ? support[op] + c : std::max(support[op], c);
            if (--unsatisfied[op] == 0) fire(op);
        }
    }
    return ex;
}

namespace {

double aggregate_goal(const GroundTask& task, const std::vector<double>& cost, bool additive) {
    double h = 0.0;
    for (FactId g : task.goal) {
        if (cost[g] == kDeadEnd) return kDeadEnd;
        h = additive ? h + cost[g] : std::max(h, cost[g]);
    }
    return h;
}

}  // namespace

double RelaxedExploration::h_max(const State& state) const {
    if (is_goal(*task_, state)) return 0.0;
    return aggregate_goal(*task_, fact_costs(state, false), false);
}

double RelaxedExploration::h_add(const State& state) const {
    if (is_goal(*task_, state)) return 0.0;
    return aggregate_goal(*task_, fact_costs(state, true), true);
}

std::vector<OperatorId> RelaxedExploration::relaxed_plan(const State& state) const {
    if (is_goal(*task_, state)) return {};
    const Exploration ex = explore(state, true);
    if (aggregate_goal(*task_, ex.cost, true) == kDeadEnd) return {};
    return extract_plan(state, ex);
}

std::vector<OperatorId> RelaxedExploration::extract_plan(const State& state, const Exploration& ex) const {
    const GroundTask& task = *task_;
    const std::vector<double>& cost = ex.cost;

    auto best_supporter = [&](FactId f) {
        OperatorId best = 0;
        double best_cost = kDeadEnd;
        for (OperatorId op : achievers_[f]) {  // ascending, so '<' keeps the lowest index on ties
            const GroundOperator& o = task.operators[op];
            const bool earlier = std::all_of(o.pre.begin(), o.pre.end(),
                                             [&](FactId p) { return ex.settled[p] < ex.settled[f]; });
            if (!earlier) continue;
            double c = static_cast<double>(o.cost);
            for (FactId p : o.pre) c += cost[p];
            if (c < best_cost) {
                best_cost = c;
                best = op;
            }
        }
        return best;
    };

    std::vector<bool> fact_done(task.fact_count(), false);
    std::vector<bool> op_used(task.operator_count(), false);
    std::vector<FactId> stack(task.goal.begin(), task.goal.end());
    while (!stack.empty()) {
        const FactId f = stack.back();
        stack.pop_back();
        if (fact_done[f] || state.test(f)) continue;
        fact_done[f] = true;
        const OperatorId op = best_supporter(f);
        if (op_used[op]) continue;
        op_used[op] = true;
        for (FactId p : task.operators[op].pre) stack.push_back(p);
    }
    std::vector<OperatorId> plan;
    for (std::size_t i = 0; i < op_used.size(); ++i)
        if (op_used[i]) plan.push_back(static_cast<OperatorId>(i));
    return plan;
}

double RelaxedExploration::h_ff(const State& state) const {
    if (is_goal(*task_, state)) return 0.0;
    const Exploration ex = explore(state, true);
    if (aggregate_goal(*task_, ex.cost, true) == kDeadEnd) return kDeadEnd;
    double h = 0.0;
    for (OperatorId op : extract_plan(state, ex)) h += static_cast<double>(task_->operators[op].cost);
    return h;
}

double h_max(const GroundTask& task, const State& state) { return RelaxedExploration(task).h_max(state); }
double h_add(const GroundTask& task, const State& state) { return RelaxedExploration(task).h_add(state); }
double h_ff(const GroundTask& task, const State& state) { return RelaxedExploration(task).h_ff(state); }

double h_goal_count(const GroundTask& task, const State& state) {
    double unmet = 0.0;
    for (FactId g : task.goal)
        if (!state.test(g)) unmet += 1.0;
    return unmet;
}

double h_blind(const GroundTask& task, const State& state) { return is_goal(task, state) ? 0.0 : 1.0; }

Evaluator make_heuristic(HeuristicKind kind, const GroundTask& task) {
    switch (kind) {
        case HeuristicKind::goal_count:
            return [&task](const State& s) { return h_goal_count(task, s); };
        case HeuristicKind::blind:
            return [&task](const State& s) { return h_blind(task, s); };
        default:
            break;
    }
    auto relaxed = std::make_shared<const RelaxedExploration>(task);
    switch (kind) {
        case HeuristicKind::ff: return [relaxed](const State& s) { return relaxed->h_ff(s); };
        case HeuristicKind::add: return [relaxed](const State& s) { return relaxed->h_add(s); };
        default: return [relaxed](const State& s) { return relaxed->h_max(s); };
    }
}

}  // namespace banditplan
