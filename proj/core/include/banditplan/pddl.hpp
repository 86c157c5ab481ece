#pragma once

// PDDL front end for the :strips + :typing fragment.
//
// Identifiers are case-insensitive and normalized to lower case. Anything
// outside the fragment (ADL, conditional effects, costs, ...) is rejected
// with UnsupportedFeatureError instead of being dropped.

#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace banditplan {

struct SourcePos {
    int line = 0;
    int column = 0;
};

class PddlError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public PddlError {
public:
    SyntaxError(const std::string& message, SourcePos pos);
    [[nodiscard]] SourcePos position() const noexcept { return pos_; }

private:
    SourcePos pos_;
};

class UnsupportedFeatureError : public PddlError {
public:
    explicit UnsupportedFeatureError(std::string feature);
    [[nodiscard]] const std::string& feature() const noexcept { return feature_; }

private:
    std::string feature_;
};

// Undeclared names, arity and type mismatches.
class SemanticError : public PddlError {
public:
    using PddlError::PddlError;
};

inline constexpr std::string_view kRootType = "object";

struct TypedName {
    std::string name;
    std::string type{kRootType};
    friend bool operator==(const TypedName&, const TypedName&) = default;
};

struct TypeDecl {
    std::string name;
    std::string parent{kRootType};
    friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

struct PredicateDecl {
    std::string name;
    std::vector<TypedName> parameters;
};

// An atom inside an action schema; arguments are `?variables` or constants.
struct AtomSchema {
    std::string predicate;
    std::vector<std::string> args;
    friend bool operator==(const AtomSchema&, const AtomSchema&) = default;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> parameters;
    std::vector<AtomSchema> precondition;
    std::vector<AtomSchema> add_effects;
    std::vector<AtomSchema> delete_effects;
};

struct DomainAst {
    std::string name;
    std::vector<std::string> requirements;
    std::vector<TypeDecl> types;
    std::vector<TypedName> constants;
    std::vector<PredicateDecl> predicates;
    std::vector<ActionSchema> actions;

    [[nodiscard]] const PredicateDecl* find_predicate(std::string_view name) const;
    [[nodiscard]] const ActionSchema* find_action(std::string_view name) const;
    [[nodiscard]] bool has_type(std::string_view type) const;
    /// True when `type` equals `ancestor` or inherits from it.
    [[nodiscard]] bool is_subtype(std::string_view type, std::string_view ancestor) const;
};

struct GroundAtom {
    std::string predicate;
    std::vector<std::string> args;

    /// "(at ball1 rooma)"
    [[nodiscard]] std::string to_string() const;
    friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

struct ProblemAst {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;
    std::vector<GroundAtom> init;  // duplicates removed, first-seen order
    std::vector<GroundAtom> goal;
};

/// Parses a domain and checks it for internal consistency (declared
/// predicates and types, arities, unique parameter names).
[[nodiscard]] DomainAst parse_domain(std::string_view text);

/// Parses a problem. Checking it against a domain happens in ground().
[[nodiscard]] ProblemAst parse_problem(std::string_view text);

// A plan step at the lifted level: action name plus object arguments.
struct PlanStep {
    std::string action;
    std::vector<std::string> args;
    friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

/// Parses VAL-style plan text: one "(action arg ...)" per line, ';' comments.
[[nodiscard]] std::vector<PlanStep> parse_plan_text(std::string_view text);

/// Simulates `steps` directly on the ASTs, without going through grounding.
/// Returns false on an unknown action, bad arguments, an unsatisfied
/// precondition, or an unmet goal at the end.
[[nodiscard]] bool validate_plan_lifted(const DomainAst& domain, const ProblemAst& problem,
                                        std::span<const PlanStep> steps);

}  // namespace banditplan
