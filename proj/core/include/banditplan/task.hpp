#pragma once

#include "banditplan/pddl.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace banditplan {

using FactId = std::uint32_t;
using OperatorId = std::uint32_t;

struct GroundOperator {
    std::string action;
    std::vector<std::string> args;
    std::vector<FactId> pre;  // sorted, unique
    std::vector<FactId> add;
    std::vector<FactId> del;
    std::int64_t cost = 1;

    /// "pick ball1 rooma left"
    [[nodiscard]] std::string label() const;
};

/// A propositional STRIPS task. Facts and operators are ordered
/// lexicographically by name then arguments, so indices are reproducible.
struct GroundTask {
    std::string domain_name;
    std::string problem_name;
    std::vector<GroundAtom> facts;
    std::vector<GroundOperator> operators;
    std::vector<FactId> init;
    std::vector<FactId> goal;
    /// Set when some goal atom is unreachable even ignoring delete effects.
    /// Such atoms are still listed in `facts` so `goal` stays well formed.
    bool unsolvable = false;

    [[nodiscard]] std::size_t fact_count() const noexcept { return facts.size(); }
    [[nodiscard]] std::size_t operator_count() const noexcept { return operators.size(); }
    [[nodiscard]] std::optional<FactId> find_fact(const GroundAtom& atom) const;
    [[nodiscard]] std::optional<OperatorId> find_operator(std::string_view action,
                                                          const std::vector<std::string>& args) const;
};

/// Checks index validity and sortedness of every fact set; sorts and
/// deduplicates them in place. Throws ContractViolation on a bad index or a
/// negative cost. Useful for tasks built by hand.
void normalize_task(GroundTask& task);

/// Instantiates `problem` against `domain`, keeping only facts and operators
/// reachable from the initial state in the delete relaxation.
/// Throws SemanticError on a domain-name mismatch, undeclared objects,
/// predicates or types, and arity or type mismatches in init/goal.
[[nodiscard]] GroundTask ground(const DomainAst& domain, const ProblemAst& problem);

}  // namespace banditplan
