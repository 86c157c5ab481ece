#include "banditplan/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_set>

namespace banditplan {

SyntaxError::SyntaxError(const std::string& message, SourcePos pos)
    : PddlError("syntax error at " + std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                ": " + message),
      pos_(pos) {}

UnsupportedFeatureError::UnsupportedFeatureError(std::string feature)
    : PddlError("unsupported PDDL feature: " + feature), feature_(std::move(feature)) {}

std::string GroundAtom::to_string() const {
    std::string out = "(" + predicate;
    for (const auto& a : args) out += " " + a;
    out += ")";
    return out;
}

const PredicateDecl* DomainAst::find_predicate(std::string_view n) const {
    for (const auto& p : predicates)
        if (p.name == n) return &p;
    return nullptr;
}

const ActionSchema* DomainAst::find_action(std::string_view n) const {
    for (const auto& a : actions)
        if (a.name == n) return &a;
    return nullptr;
}

bool DomainAst::has_type(std::string_view type) const {
    if (type == kRootType) return true;
    return std::any_of(types.begin(), types.end(), [&](const TypeDecl& t) { return t.name == type; });
}

bool DomainAst::is_subtype(std::string_view type, std::string_view ancestor) const {
    std::string current(type);
    // The hierarchy is validated acyclic at parse time; the bound is a guard.
    for (std::size_t steps = 0; steps <= types.size() + 1; ++steps) {
        if (current == ancestor) return true;
        if (current == kRootType) return false;
        auto it = std::find_if(types.begin(), types.end(),
                               [&](const TypeDecl& t) { return t.name == current; });
        if (it == types.end()) return false;
        current = it->parent;
    }
    return false;
}

namespace {

// ---------------------------------------------------------------------------
// Tokenizer and s-expressions
// ---------------------------------------------------------------------------

struct Token {
    std::string text;
    SourcePos pos;
};

std::vector<Token> tokenize(std::string_view input) {
    std::vector<Token> tokens;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    auto advance = [&] {
        if (input[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++i;
    };
    while (i < input.size()) {
        const unsigned char ch = static_cast<unsigned char>(input[i]);
        if (std::isspace(ch)) {
            advance();
            continue;
        }
        if (ch == ';') {
            while (i < input.size() && input[i] != '\n') advance();
            continue;
        }
        SourcePos pos{line, column};
        if (ch == '(' || ch == ')') {
            tokens.push_back({std::string(1, static_cast<char>(ch)), pos});
            advance();
            continue;
        }
        std::string word;
        while (i < input.size()) {
            const unsigned char c = static_cast<unsigned char>(input[i]);
            if (std::isspace(c) || c == '(' || c == ')' || c == ';') break;
            word.push_back(static_cast<char>(std::tolower(c)));
            advance();
        }
        tokens.push_back({std::move(word), pos});
    }
    return tokens;
}

struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;
    SourcePos pos;

    [[nodiscard]] bool is_atom(std::string_view s) const { return !is_list && atom == s; }
    [[nodiscard]] bool head_is(std::string_view s) const {
        return is_list && !items.empty() && items.front().is_atom(s);
    }
};

SExpr parse_sexpr(const std::vector<Token>& tokens, std::size_t& pos) {
    const Token& tok = tokens[pos];
    if (tok.text == ")") throw SyntaxError("unexpected ')'", tok.pos);
    if (tok.text != "(") {
        ++pos;
        return SExpr{false, tok.text, {}, tok.pos};
    }
    SExpr list{true, {}, {}, tok.pos};
    ++pos;
    while (pos < tokens.size() && tokens[pos].text != ")") list.items.push_back(parse_sexpr(tokens, pos));
    if (pos >= tokens.size()) throw SyntaxError("unbalanced '(' opened here", tok.pos);
    ++pos;
    return list;
}

SExpr parse_document(std::string_view text) {
    const auto tokens = tokenize(text);
    if (tokens.empty()) throw SyntaxError("empty input", SourcePos{1, 1});
    std::size_t pos = 0;
    SExpr root = parse_sexpr(tokens, pos);
    if (pos != tokens.size()) throw SyntaxError("trailing input after definition", tokens[pos].pos);
    if (!root.head_is("define")) throw SyntaxError("expected (define ...)", root.pos);
    return root;
}

const std::string& expect_name(const SExpr& e, const char* what) {
    if (e.is_list || e.atom.empty()) throw SyntaxError(std::string("expected ") + what, e.pos);
    return e.atom;
}

const std::string& expect_identifier(const SExpr& e, const char* what) {
    const std::string& s = expect_name(e, what);
    if (s.front() == '?' || s.front() == ':' || s == "-")
        throw SyntaxError(std::string("expected ") + what + ", got '" + s + "'", e.pos);
    return s;
}

// "a b - t1 c - t2 d" -> (a t1) (b t1) (c t2) (d object)
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, std::size_t start,
                                        bool variables) {
    std::vector<TypedName> out;
    std::vector<std::string> pending;
    for (std::size_t i = start; i < items.size(); ++i) {
        const SExpr& e = items[i];
        if (e.is_list) throw SyntaxError("unexpected list in typed list", e.pos);
        if (e.atom == "-") {
            if (pending.empty()) throw SyntaxError("'-' without preceding names", e.pos);
            if (++i >= items.size()) throw SyntaxError("expected type after '-'", e.pos);
            const SExpr& t = items[i];
            if (t.head_is("either")) throw UnsupportedFeatureError("either types");
            const std::string& type = expect_identifier(t, "type name");
            for (auto& n : pending) out.push_back({std::move(n), type});
            pending.clear();
            continue;
        }
        const bool is_var = !e.atom.empty() && e.atom.front() == '?';
        if (variables != is_var)
            throw SyntaxError(std::string(variables ? "expected variable" : "expected name") + ", got '" +
                                  e.atom + "'",
                              e.pos);
        pending.push_back(e.atom);
    }
    for (auto& n : pending) out.push_back({std::move(n), std::string(kRootType)});
    return out;
}

void check_requirements(const SExpr& section, std::vector<std::string>& out) {
    static const std::set<std::string, std::less<>> kSupported = {":strips", ":typing"};
    for (std::size_t i = 1; i < section.items.size(); ++i) {
        const std::string& req = expect_name(section.items[i], "requirement flag");
        if (!kSupported.contains(req)) throw UnsupportedFeatureError("requirement " + req);
        out.push_back(req);
    }
}

template <typename Sink>
void parse_atom_schema(const SExpr& e, Sink&& sink) {
    if (!e.is_list || e.items.empty()) throw SyntaxError("expected atom", e.pos);
    const std::string& pred = expect_name(e.items.front(), "predicate name");
    if (pred == "=") throw UnsupportedFeatureError("equality");
    AtomSchema atom{pred, {}};
    for (std::size_t i = 1; i < e.items.size(); ++i)
        atom.args.push_back(expect_name(e.items[i], "term"));
    sink(std::move(atom), e.pos);
}

void parse_precondition(const SExpr& e, std::vector<AtomSchema>& out) {
    if (!e.is_list) throw SyntaxError("expected precondition formula", e.pos);
    if (e.items.empty()) return;
    const SExpr& head = e.items.front();
    if (head.is_atom("and")) {
        for (std::size_t i = 1; i < e.items.size(); ++i) parse_precondition(e.items[i], out);
        return;
    }
    if (head.is_atom("not")) throw UnsupportedFeatureError("negative preconditions");
    if (head.is_atom("or")) throw UnsupportedFeatureError("disjunctive preconditions");
    if (head.is_atom("imply")) throw UnsupportedFeatureError("implications");
    if (head.is_atom("exists") || head.is_atom("forall"))
        throw UnsupportedFeatureError("quantified preconditions");
    parse_atom_schema(e, [&](AtomSchema a, SourcePos) { out.push_back(std::move(a)); });
}

void parse_effect(const SExpr& e, ActionSchema& action) {
    if (!e.is_list) throw SyntaxError("expected effect formula", e.pos);
    if (e.items.empty()) return;
    const SExpr& head = e.items.front();
    if (head.is_atom("and")) {
        for (std::size_t i = 1; i < e.items.size(); ++i) parse_effect(e.items[i], action);
        return;
    }
    if (head.is_atom("when")) throw UnsupportedFeatureError("conditional effects");
    if (head.is_atom("forall")) throw UnsupportedFeatureError("universal effects");
    if (head.is_atom("increase") || head.is_atom("decrease") || head.is_atom("assign"))
        throw UnsupportedFeatureError("numeric effects");
    if (head.is_atom("not")) {
        if (e.items.size() != 2) throw SyntaxError("'not' takes one atom", e.pos);
        parse_atom_schema(e.items[1],
                          [&](AtomSchema a, SourcePos) { action.delete_effects.push_back(std::move(a)); });
        return;
    }
    parse_atom_schema(e, [&](AtomSchema a, SourcePos) { action.add_effects.push_back(std::move(a)); });
}

ActionSchema parse_action(const SExpr& section) {
    if (section.items.size() < 2) throw SyntaxError("action without a name", section.pos);
    ActionSchema action;
    action.name = expect_identifier(section.items[1], "action name");
    for (std::size_t i = 2; i < section.items.size(); ++i) {
        const SExpr& key = section.items[i];
        const std::string& k = expect_name(key, "action keyword");
        if (i + 1 >= section.items.size()) throw SyntaxError("missing value for " + k, key.pos);
        const SExpr& value = section.items[++i];
        if (k == ":parameters") {
            if (!value.is_list) throw SyntaxError("expected parameter list", value.pos);
            action.parameters = parse_typed_list(value.items, 0, true);
        } else if (k == ":precondition") {
            parse_precondition(value, action.precondition);
        } else if (k == ":effect") {
            parse_effect(value, action);
        } else {
            throw SyntaxError("unknown action keyword '" + k + "'", key.pos);
        }
    }
    return action;
}

struct DomainChecker {
    const DomainAst& d;

    void run() const {
        std::unordered_set<std::string> seen;
        for (const auto& t : d.types) {
            if (t.name == kRootType) continue;
            if (!seen.insert(t.name).second) throw SemanticError("type '" + t.name + "' declared twice");
        }
        for (const auto& t : d.types) {
            if (!d.has_type(t.parent))
                throw SemanticError("type '" + t.name + "' has undeclared parent '" + t.parent + "'");
            // Walk to the root; a revisit means a cycle.
            std::unordered_set<std::string> path{t.name};
            std::string cur = t.parent;
            while (cur != kRootType) {
                if (!path.insert(cur).second) throw SemanticError("cyclic type hierarchy at '" + cur + "'");
                auto it = std::find_if(d.types.begin(), d.types.end(),
                                       [&](const TypeDecl& x) { return x.name == cur; });
                cur = it->parent;
            }
        }
        for (const auto& c : d.constants) check_type(c.type, "constant '" + c.name + "'");
        seen.clear();
        for (const auto& p : d.predicates) {
            if (!seen.insert(p.name).second) throw SemanticError("predicate '" + p.name + "' declared twice");
            for (const auto& param : p.parameters) check_type(param.type, "predicate '" + p.name + "'");
        }
        seen.clear();
        for (const auto& a : d.actions) {
            if (!seen.insert(a.name).second) throw SemanticError("action '" + a.name + "' declared twice");
            check_action(a);
        }
    }

    void check_type(const std::string& type, const std::string& context) const {
        if (!d.has_type(type)) throw SemanticError(context + " uses undeclared type '" + type + "'");
    }

    void check_action(const ActionSchema& a) const {
        std::unordered_set<std::string> names;
        for (const auto& p : a.parameters) {
            if (!names.insert(p.name).second)
                throw SemanticError("action '" + a.name + "' repeats parameter " + p.name);
            check_type(p.type, "action '" + a.name + "'");
        }
        auto check_atom = [&](const AtomSchema& atom) {
            const PredicateDecl* pred = d.find_predicate(atom.predicate);
            if (!pred)
                throw SemanticError("action '" + a.name + "' uses undeclared predicate '" + atom.predicate + "'");
            if (pred->parameters.size() != atom.args.size())
                throw SemanticError("action '" + a.name + "': predicate '" + atom.predicate + "' expects " +
                                    std::to_string(pred->parameters.size()) + " arguments, got " +
                                    std::to_string(atom.args.size()));
            for (std::size_t i = 0; i < atom.args.size(); ++i) {
                const std::string& arg = atom.args[i];
                std::string type;
                if (arg.front() == '?') {
                    auto it = std::find_if(a.parameters.begin(), a.parameters.end(),
                                           [&](const TypedName& p) { return p.name == arg; });
                    if (it == a.parameters.end())
                        throw SemanticError("action '" + a.name + "' uses unbound variable " + arg);
                    type = it->type;
                } else {
                    auto it = std::find_if(d.constants.begin(), d.constants.end(),
                                           [&](const TypedName& c) { return c.name == arg; });
                    if (it == d.constants.end())
                        throw SemanticError("action '" + a.name + "' uses undeclared constant '" + arg + "'");
                    type = it->type;
                }
                if (!d.is_subtype(type, pred->parameters[i].type))
                    throw SemanticError("action '" + a.name + "': argument " + arg + " of type '" + type +
                                        "' does not fit '" + pred->parameters[i].type + "' in predicate '" +
                                        atom.predicate + "'");
            }
        };
        for (const auto& atom : a.precondition) check_atom(atom);
        for (const auto& atom : a.add_effects) check_atom(atom);
        for (const auto& atom : a.delete_effects) check_atom(atom);
    }
};

GroundAtom parse_ground_atom(const SExpr& e) {
    if (!e.is_list || e.items.empty()) throw SyntaxError("expected ground atom", e.pos);
    if (e.items.front().is_atom("not")) throw UnsupportedFeatureError("negative literals");
    if (e.items.front().is_atom("=")) throw UnsupportedFeatureError("equality");
    GroundAtom atom{expect_identifier(e.items.front(), "predicate name"), {}};
    for (std::size_t i = 1; i < e.items.size(); ++i)
        atom.args.push_back(expect_identifier(e.items[i], "object name"));
    return atom;
}

void parse_goal(const SExpr& e, std::vector<GroundAtom>& out) {
    if (!e.is_list) throw SyntaxError("expected goal formula", e.pos);
    if (e.items.empty()) return;
    const SExpr& head = e.items.front();
    if (head.is_atom("and")) {
        for (std::size_t i = 1; i < e.items.size(); ++i) parse_goal(e.items[i], out);
        return;
    }
    if (head.is_atom("not")) throw UnsupportedFeatureError("negative goals");
    if (head.is_atom("or")) throw UnsupportedFeatureError("disjunctive goals");
    if (head.is_atom("exists") || head.is_atom("forall")) throw UnsupportedFeatureError("quantified goals");
    GroundAtom atom = parse_ground_atom(e);
    if (std::find(out.begin(), out.end(), atom) == out.end()) out.push_back(std::move(atom));
}

}  // namespace

DomainAst parse_domain(std::string_view text) {
    const SExpr root = parse_document(text);
    DomainAst domain;
    bool named = false;
    for (std::size_t i = 1; i < root.items.size(); ++i) {
        const SExpr& section = root.items[i];
        if (!section.is_list || section.items.empty()) throw SyntaxError("expected section", section.pos);
        const std::string& key = expect_name(section.items.front(), "section keyword");
        if (key == "domain") {
            if (section.items.size() != 2) throw SyntaxError("expected (domain <name>)", section.pos);
            domain.name = expect_identifier(section.items[1], "domain name");
            named = true;
        } else if (key == ":requirements") {
            check_requirements(section, domain.requirements);
        } else if (key == ":types") {
            for (auto& t : parse_typed_list(section.items, 1, false)) {
                if (t.name == kRootType) continue;
                domain.types.push_back({std::move(t.name), std::move(t.type)});
            }
        } else if (key == ":constants") {
            domain.constants = parse_typed_list(section.items, 1, false);
        } else if (key == ":predicates") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                const SExpr& p = section.items[j];
                if (!p.is_list || p.items.empty()) throw SyntaxError("expected predicate declaration", p.pos);
                PredicateDecl decl{expect_identifier(p.items.front(), "predicate name"),
                                   parse_typed_list(p.items, 1, true)};
                domain.predicates.push_back(std::move(decl));
            }
        } else if (key == ":action") {
            domain.actions.push_back(parse_action(section));
        } else if (key == ":functions") {
            throw UnsupportedFeatureError("numeric fluents");
        } else if (key == ":derived") {
            throw UnsupportedFeatureError("derived predicates");
        } else if (key == ":durative-action") {
            throw UnsupportedFeatureError("durative actions");
        } else if (key == ":constraints") {
            throw UnsupportedFeatureError("constraints");
        } else {
            throw SyntaxError("unknown domain section '" + key + "'", section.pos);
        }
    }
    if (!named) throw SyntaxError("missing (domain <name>)", root.pos);
    DomainChecker{domain}.run();
    return domain;
}

ProblemAst parse_problem(std::string_view text) {
    const SExpr root = parse_document(text);
    ProblemAst problem;
    bool named = false;
    bool has_domain = false;
    for (std::size_t i = 1; i < root.items.size(); ++i) {
        const SExpr& section = root.items[i];
        if (!section.is_list || section.items.empty()) throw SyntaxError("expected section", section.pos);
        const std::string& key = expect_name(section.items.front(), "section keyword");
        if (key == "problem") {
            if (section.items.size() != 2) throw SyntaxError("expected (problem <name>)", section.pos);
            problem.name = expect_identifier(section.items[1], "problem name");
            named = true;
        } else if (key == ":domain") {
            if (section.items.size() != 2) throw SyntaxError("expected (:domain <name>)", section.pos);
            problem.domain_name = expect_identifier(section.items[1], "domain name");
            has_domain = true;
        } else if (key == ":requirements") {
            std::vector<std::string> ignored;
            check_requirements(section, ignored);
        } else if (key == ":objects") {
            problem.objects = parse_typed_list(section.items, 1, false);
        } else if (key == ":init") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                const SExpr& e = section.items[j];
                if (e.head_is("=")) throw UnsupportedFeatureError("numeric fluents");
                GroundAtom atom = parse_ground_atom(e);
                if (std::find(problem.init.begin(), problem.init.end(), atom) == problem.init.end())
                    problem.init.push_back(std::move(atom));
            }
        } else if (key == ":goal") {
            if (section.items.size() != 2) throw SyntaxError("expected one goal formula", section.pos);
            parse_goal(section.items[1], problem.goal);
        } else if (key == ":metric") {
            throw UnsupportedFeatureError("metric minimization");
        } else {
            throw SyntaxError("unknown problem section '" + key + "'", section.pos);
        }
    }
    if (!named) throw SyntaxError("missing (problem <name>)", root.pos);
    if (!has_domain) throw SyntaxError("missing (:domain <name>)", root.pos);
    return problem;
}

std::vector<PlanStep> parse_plan_text(std::string_view text) {
    std::vector<PlanStep> steps;
    const auto tokens = tokenize(text);
    std::size_t pos = 0;
    while (pos < tokens.size()) {
        SExpr e = parse_sexpr(tokens, pos);
        if (!e.is_list || e.items.empty()) throw SyntaxError("expected (action args...)", e.pos);
        PlanStep step{expect_identifier(e.items.front(), "action name"), {}};
        for (std::size_t i = 1; i < e.items.size(); ++i)
            step.args.push_back(expect_identifier(e.items[i], "object name"));
        steps.push_back(std::move(step));
    }
    return steps;
}

}  // namespace banditplan
