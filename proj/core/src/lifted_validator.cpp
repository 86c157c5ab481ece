#include "banditplan/pddl.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace banditplan {

namespace {

std::map<std::string, std::string> object_types(const DomainAst& domain, const ProblemAst& problem) {
    std::map<std::string, std::string> types;
    for (const auto& c : domain.constants) types.emplace(c.name, c.type);
    for (const auto& o : problem.objects) types.emplace(o.name, o.type);
    return types;
}

GroundAtom substitute(const AtomSchema& atom, const std::map<std::string, std::string>& binding) {
    GroundAtom out{atom.predicate, {}};
    for (const auto& arg : atom.args) {
        auto it = binding.find(arg);
        out.args.push_back(it == binding.end() ? arg : it->second);
    }
    return out;
}

}  // namespace

bool validate_plan_lifted(const DomainAst& domain, const ProblemAst& problem, std::span<const PlanStep> steps) {
    const auto types = object_types(domain, problem);
    std::set<GroundAtom> state(problem.init.begin(), problem.init.end());

    for (const PlanStep& step : steps) {
        const ActionSchema* action = domain.find_action(step.action);
        if (!action || action->parameters.size() != step.args.size()) return false;
        std::map<std::string, std::string> binding;
        for (std::size_t i = 0; i < step.args.size(); ++i) {
            auto it = types.find(step.args[i]);
            if (it == types.end() || !domain.is_subtype(it->second, action->parameters[i].type)) return false;
            binding[action->parameters[i].name] = step.args[i];
        }
        for (const auto& pre : action->precondition)
            if (!state.contains(substitute(pre, binding))) return false;
        for (const auto& del : action->delete_effects) state.erase(substitute(del, binding));
        for (const auto& add : action->add_effects) state.insert(substitute(add, binding));
    }
    return std::all_of(problem.goal.begin(), problem.goal.end(),
                       [&](const GroundAtom& g) { return state.contains(g); });
}

}  // namespace banditplan
