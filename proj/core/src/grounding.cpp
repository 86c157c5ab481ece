#include "banditplan/task.hpp"

#include "banditplan/contract.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace banditplan {

std::string GroundOperator::label() const {
    std::string out = action;
    for (const auto& a : args) out += " " + a;
    return out;
}

std::optional<FactId> GroundTask::find_fact(const GroundAtom& atom) const {
    auto it = std::lower_bound(facts.begin(), facts.end(), atom);
    if (it != facts.end() && *it == atom) return static_cast<FactId>(it - facts.begin());
    // Hand-built tasks need not be sorted.
    for (std::size_t i = 0; i < facts.size(); ++i)
        if (facts[i] == atom) return static_cast<FactId>(i);
    return std::nullopt;
}

std::optional<OperatorId> GroundTask::find_operator(std::string_view action,
                                                    const std::vector<std::string>& args) const {
    for (std::size_t i = 0; i < operators.size(); ++i)
        if (operators[i].action == action && operators[i].args == args) return static_cast<OperatorId>(i);
    return std::nullopt;
}

namespace {

void normalize_set(std::vector<FactId>& ids, std::size_t width) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    require(ids.empty() || ids.back() < width, "task references a fact index out of range");
}

}  // namespace

void normalize_task(GroundTask& task) {
    const std::size_t width = task.facts.size();
    normalize_set(task.init, width);
    normalize_set(task.goal, width);
    for (auto& op : task.operators) {
        normalize_set(op.pre, width);
        normalize_set(op.add, width);
        normalize_set(op.del, width);
        require(op.cost >= 0, "operator cost must be nonnegative");
    }
}

namespace {

using ObjectId = int;
using Tuple = std::vector<ObjectId>;

struct Term {
    bool is_variable;
    int index;  // parameter index or object id
};

struct CompiledAtom {
    int predicate;
    std::vector<Term> terms;
};

struct CompiledAction {
    const ActionSchema* schema;
    std::vector<std::vector<ObjectId>> candidates;  // per parameter, type-compatible objects
    std::vector<CompiledAtom> pre;
    std::vector<CompiledAtom> add;
    std::vector<CompiledAtom> del;
};

class Grounder {
public:
    Grounder(const DomainAst& domain, const ProblemAst& problem) : domain_(domain), problem_(problem) {}

    GroundTask run() {
        if (problem_.domain_name != domain_.name)
            throw SemanticError("problem '" + problem_.name + "' is for domain '" + problem_.domain_name +
                                "', not '" + domain_.name + "'");
        collect_objects();
        for (std::size_t i = 0; i < domain_.predicates.size(); ++i)
            predicate_index_[domain_.predicates[i].name] = static_cast<int>(i);
        reachable_.resize(domain_.predicates.size());
        reachable_lists_.resize(domain_.predicates.size());

        std::vector<std::pair<int, Tuple>> init;
        for (const auto& atom : problem_.init) init.push_back(resolve(atom, "init"));
        std::vector<std::pair<int, Tuple>> goal;
        for (const auto& atom : problem_.goal) goal.push_back(resolve(atom, "goal"));

        for (const auto& a : domain_.actions) actions_.push_back(compile(a));
        for (auto& [p, t] : init) insert_reachable(p, t);
        explore();
        return assemble(init, goal);
    }

private:
    void collect_objects() {
        auto add_object = [&](const TypedName& obj) {
            if (!domain_.has_type(obj.type))
                throw SemanticError("object '" + obj.name + "' has undeclared type '" + obj.type + "'");
            auto [it, fresh] = object_index_.emplace(obj.name, static_cast<ObjectId>(objects_.size()));
            if (!fresh) {
                if (objects_[it->second].type != obj.type)
                    throw SemanticError("object '" + obj.name + "' declared twice with different types");
                return;
            }
            objects_.push_back(obj);
        };
        for (const auto& c : domain_.constants) add_object(c);
        for (const auto& o : problem_.objects) add_object(o);
    }

    std::vector<ObjectId> objects_of_type(const std::string& type) const {
        std::vector<ObjectId> out;
        for (std::size_t i = 0; i < objects_.size(); ++i)
            if (domain_.is_subtype(objects_[i].type, type)) out.push_back(static_cast<ObjectId>(i));
        return out;
    }

    std::pair<int, Tuple> resolve(const GroundAtom& atom, const char* where) const {
        auto pit = predicate_index_.find(atom.predicate);
        if (pit == predicate_index_.end())
            throw SemanticError(std::string(where) + " atom " + atom.to_string() + " uses undeclared predicate");
        const PredicateDecl& decl = domain_.predicates[pit->second];
        if (decl.parameters.size() != atom.args.size())
            throw SemanticError(std::string(where) + " atom " + atom.to_string() + ": predicate '" +
                                atom.predicate + "' expects " + std::to_string(decl.parameters.size()) +
                                " arguments, got " + std::to_string(atom.args.size()));
        Tuple t;
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            auto oit = object_index_.find(atom.args[i]);
            if (oit == object_index_.end())
                throw SemanticError(std::string(where) + " atom " + atom.to_string() + " uses undeclared object '" +
                                    atom.args[i] + "'");
            const TypedName& obj = objects_[oit->second];
            if (!domain_.is_subtype(obj.type, decl.parameters[i].type))
                throw SemanticError(std::string(where) + " atom " + atom.to_string() + ": object '" + obj.name +
                                    "' of type '" + obj.type + "' does not fit '" + decl.parameters[i].type + "'");
            t.push_back(oit->second);
        }
        return {pit->second, std::move(t)};
    }

    CompiledAction compile(const ActionSchema& a) const {
        CompiledAction out{&a, {}, {}, {}, {}};
        for (const auto& p : a.parameters) out.candidates.push_back(objects_of_type(p.type));
        auto compile_atom = [&](const AtomSchema& atom) {
            CompiledAtom c{predicate_index_.at(atom.predicate), {}};
            for (const auto& arg : atom.args) {
                if (arg.front() == '?') {
                    auto it = std::find_if(a.parameters.begin(), a.parameters.end(),
                                           [&](const TypedName& p) { return p.name == arg; });
                    c.terms.push_back({true, static_cast<int>(it - a.parameters.begin())});
                } else {
                    c.terms.push_back({false, object_index_.at(arg)});
                }
            }
            return c;
        };
        for (const auto& atom : a.precondition) out.pre.push_back(compile_atom(atom));
        for (const auto& atom : a.add_effects) out.add.push_back(compile_atom(atom));
        for (const auto& atom : a.delete_effects) out.del.push_back(compile_atom(atom));
        return out;
    }

    bool insert_reachable(int predicate, const Tuple& t) {
        if (!reachable_[predicate].insert(t).second) return false;
        reachable_lists_[predicate].push_back(t);
        return true;
    }

    static Tuple instantiate(const CompiledAtom& atom, const std::vector<ObjectId>& binding) {
        Tuple t;
        t.reserve(atom.terms.size());
        for (const auto& term : atom.terms) t.push_back(term.is_variable ? binding[term.index] : term.index);
        return t;
    }

    // Calls `emit` once per parameter binding whose preconditions all hold in
    // the current reachable set.
    void enumerate(const CompiledAction& action, const std::function<void(const std::vector<ObjectId>&)>& emit) {
        const std::size_t arity = action.candidates.size();
        std::vector<ObjectId> binding(arity, -1);
        std::vector<std::vector<bool>> allowed(arity);
        for (std::size_t p = 0; p < arity; ++p) {
            allowed[p].assign(objects_.size(), false);
            for (ObjectId o : action.candidates[p]) allowed[p][o] = true;
        }

        std::function<void(std::size_t)> bind_free = [&](std::size_t p) {
            if (p == arity) {
                emit(binding);
                return;
            }
            if (binding[p] != -1) {
                bind_free(p + 1);
                return;
            }
            for (ObjectId o : action.candidates[p]) {
                binding[p] = o;
                bind_free(p + 1);
            }
            binding[p] = -1;
        };

        std::function<void(std::size_t)> match = [&](std::size_t k) {
            if (k == action.pre.size()) {
                bind_free(0);
                return;
            }
            const CompiledAtom& atom = action.pre[k];
            // Index-based loop: the list does not grow during enumeration.
            const auto& tuples = reachable_lists_[atom.predicate];
            for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
                const Tuple& tuple = tuples[ti];
                std::vector<int> newly_bound;
                bool ok = true;
                for (std::size_t i = 0; i < atom.terms.size() && ok; ++i) {
                    const Term& term = atom.terms[i];
                    if (!term.is_variable) {
                        ok = tuple[i] == term.index;
                    } else if (binding[term.index] != -1) {
                        ok = binding[term.index] == tuple[i];
                    } else if (allowed[term.index][tuple[i]]) {
                        binding[term.index] = tuple[i];
                        newly_bound.push_back(term.index);
                    } else {
                        ok = false;
                    }
                }
                if (ok) match(k + 1);
                for (int p : newly_bound) binding[p] = -1;
            }
        };
        match(0);
    }

    void explore() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& action : actions_) {
                std::vector<std::pair<int, Tuple>> fresh;
                enumerate(action, [&](const std::vector<ObjectId>& binding) {
                    for (const auto& atom : action.add) {
                        Tuple t = instantiate(atom, binding);
                        if (!reachable_[atom.predicate].contains(t)) fresh.emplace_back(atom.predicate, std::move(t));
                    }
                });
                for (auto& [p, t] : fresh) changed |= insert_reachable(p, t);
            }
        }
    }

    GroundAtom to_atom(int predicate, const Tuple& t) const {
        GroundAtom atom{domain_.predicates[predicate].name, {}};
        for (ObjectId o : t) atom.args.push_back(objects_[o].name);
        return atom;
    }

    GroundTask assemble(const std::vector<std::pair<int, Tuple>>& init,
                        const std::vector<std::pair<int, Tuple>>& goal) {
        GroundTask task;
        task.domain_name = domain_.name;
        task.problem_name = problem_.name;

        std::map<GroundAtom, FactId> ids;
        for (std::size_t p = 0; p < reachable_.size(); ++p)
            for (const auto& t : reachable_[p]) ids.emplace(to_atom(static_cast<int>(p), t), 0);
        for (const auto& [p, t] : goal) {
            if (!reachable_[p].contains(t)) {
                task.unsolvable = true;
                ids.emplace(to_atom(p, t), 0);
            }
        }
        for (auto& [atom, id] : ids) {
            id = static_cast<FactId>(task.facts.size());
            task.facts.push_back(atom);
        }
        auto id_of = [&](int p, const Tuple& t) { return ids.at(to_atom(p, t)); };

        for (const auto& [p, t] : init) task.init.push_back(id_of(p, t));
        for (const auto& [p, t] : goal) task.goal.push_back(id_of(p, t));

        for (const auto& action : actions_) {
            enumerate(action, [&](const std::vector<ObjectId>& binding) {
                GroundOperator op;
                op.action = action.schema->name;
                for (ObjectId o : binding) op.args.push_back(objects_[o].name);
                for (const auto& atom : action.pre) op.pre.push_back(id_of(atom.predicate, instantiate(atom, binding)));
                for (const auto& atom : action.add) op.add.push_back(id_of(atom.predicate, instantiate(atom, binding)));
                for (const auto& atom : action.del) {
                    // A delete of a never-reachable atom can never matter.
                    Tuple t = instantiate(atom, binding);
                    if (reachable_[atom.predicate].contains(t)) op.del.push_back(id_of(atom.predicate, t));
                }
                task.operators.push_back(std::move(op));
            });
        }
        std::sort(task.operators.begin(), task.operators.end(), [](const GroundOperator& a, const GroundOperator& b) {
            return std::tie(a.action, a.args) < std::tie(b.action, b.args);
        });
        normalize_task(task);
        return task;
    }

    const DomainAst& domain_;
    const ProblemAst& problem_;
    std::vector<TypedName> objects_;
    std::unordered_map<std::string, ObjectId> object_index_;
    std::unordered_map<std::string, int> predicate_index_;
    std::vector<CompiledAction> actions_;
    std::vector<std::set<Tuple>> reachable_;
    std::vector<std::vector<Tuple>> reachable_lists_;
};

}  // namespace

GroundTask ground(const DomainAst& domain, const ProblemAst& problem) {
    return Grounder(domain, problem).run();
}

}  // namespace banditplan
