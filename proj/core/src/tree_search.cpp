#include "banditplan/tree_search.hpp"

#include "banditplan/contract.hpp"

#include <algorithm>
#include <cstdio>

namespace banditplan {

TreeSearch::TreeSearch(const GroundTask& task, Evaluator h, NecConfig nec, SearchOptions options)
    : task_(task), h_(std::move(h)), nec_(std::move(nec)), options_(options), rng_(options.seed) {
    require(options_.budget >= 1, "search budget must be at least 1");
    require(static_cast<bool>(h_), "search needs an evaluator");
    if (nec_.policy) nec_.policy = nec_.policy->with_mode(OptimizationMode::minimize);
}

void TreeSearch::initialize() {
    initialized_ = true;
    started_ = std::chrono::steady_clock::now();

    SearchNode root;
    root.id = 0;
    root.state = initial_state(task_);
    nodes_.push_back(root);
    live_.emplace(nodes_[0].state, 0);

    if (is_goal(task_, nodes_[0].state)) {
        result_.plan.clear();
        finish(Outcome::plan);
        return;
    }
    SearchNode& r = nodes_[0];
    r.h = h_(r.state);
    ++result_.evaluations;
    if (r.h == kDeadEnd) {
        r.lock = LockReason::dead_end;
        finish(Outcome::exhausted);
        return;
    }
    r.leaf_stats_h = RunningStats::singleton(r.h);
    r.leaf_stats_gh = RunningStats::singleton(r.h);
    r.min_h = r.min_gh = r.h;
    r.min_h_leaf = 0;
}

TreeSearch::Status TreeSearch::step() {
    if (!initialized_) initialize();
    if (status_ != Status::running) return status_;
    if (result_.expansions >= options_.budget) {
        finish(Outcome::budget_reached);
        return status_;
    }
    if (options_.deadline && std::chrono::steady_clock::now() >= *options_.deadline) {
        result_.deadline_hit = true;
        finish(Outcome::budget_reached);
        return status_;
    }
    const NodeId leaf = select_leaf();
    expand(leaf);
    if (status_ != Status::running) return status_;
    backpropagate();
    if (nodes_[0].locked()) finish(Outcome::exhausted);
    return status_;
}

SearchResult TreeSearch::run() {
    while (step() == Status::running) {
    }
    return result_;
}

NodeSummary TreeSearch::summary(const SearchNode& n) const { return {n.leaf_stats_h, n.min_h}; }

std::optional<NormalizationContext> TreeSearch::sibling_range(const SearchNode& parent) const {
    if (!nec_.policy || nec_.policy->kind() != BoundKind::ucb1_01) return std::nullopt;
    NormalizationContext ctx{-kDeadEnd, kDeadEnd};
    for (NodeId c : parent.children) {
        const SearchNode& ch = nodes_[static_cast<std::size_t>(c)];
        if (ch.locked()) continue;
        const double m = nec_.mean_term == MeanTerm::average ? ch.leaf_stats_h.mean() : ch.min_h;
        ctx.max_mean = std::max(ctx.max_mean, m);
        ctx.min_mean = std::min(ctx.min_mean, m);
    }
    return ctx;
}

double TreeSearch::nec(NodeId child) const {
    const SearchNode& ch = node(child);
    require(ch.parent != kNoNode, "the root has no NEC value");
    const SearchNode& p = node(ch.parent);
    return nec_value(nec_, summary(ch), p.leaf_stats_h.count(), sibling_range(p));
}

NodeId TreeSearch::select_leaf() {
    require(!nodes_.empty() && !nodes_[0].locked(), "selection on a locked tree");
    const bool leaf_ties = !nec_.policy && nec_.mean_term == MeanTerm::minimum;
    std::vector<NodeId> tied;
    NodeId cur = 0;
    while (nodes_[static_cast<std::size_t>(cur)].expanded) {
        const SearchNode& p = nodes_[static_cast<std::size_t>(cur)];
        const auto ctx = sibling_range(p);
        const std::int64_t total = p.leaf_stats_h.count();
        double best_f = kDeadEnd;
        NodeId best_key = kNoNode;
        tied.clear();
        for (NodeId c : p.children) {
            const SearchNode& ch = nodes_[static_cast<std::size_t>(c)];
            if (ch.locked()) continue;
            const double f = nec_value(nec_, summary(ch), total, ctx);
            const NodeId key = leaf_ties ? ch.min_h_leaf : c;
            if (tied.empty() || f < best_f || (f == best_f && !options_.randomize_ties && key < best_key)) {
                best_f = f;
                best_key = key;
                tied.assign(1, c);
            } else if (f == best_f && options_.randomize_ties) {
                tied.push_back(c);
            }
        }
        require(!tied.empty(), "unlocked node without unlocked children");
        if (tied.size() == 1) {
            cur = tied.front();
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
            cur = tied[pick(rng_)];
        }
    }
    return cur;
}

NodeId TreeSearch::add_node(State state, NodeId parent, OperatorId op, std::int64_t g) {
    SearchNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.state = std::move(state);
    n.parent = parent;
    n.op_in = op;
    n.g = g;
    n.depth = nodes_[static_cast<std::size_t>(parent)].depth + 1;
    nodes_.push_back(std::move(n));
    nodes_[static_cast<std::size_t>(parent)].children.push_back(nodes_.back().id);
    return nodes_.back().id;
}

bool TreeSearch::is_ancestor(NodeId candidate, NodeId of) const {
    for (NodeId cur = of; cur != kNoNode; cur = nodes_[static_cast<std::size_t>(cur)].parent)
        if (cur == candidate) return true;
    return false;
}

void TreeSearch::supersede(NodeId old_id, NodeId new_id) {
    SearchNode& o = nodes_[static_cast<std::size_t>(old_id)];
    SearchNode& n = nodes_[static_cast<std::size_t>(new_id)];
    n.h = o.h;
    n.expanded = o.expanded;
    n.lock = o.lock;
    n.children = std::move(o.children);
    n.leaf_stats_h = o.leaf_stats_h;
    n.leaf_stats_gh = o.leaf_stats_gh;
    n.min_h = o.min_h;
    n.min_gh = o.min_gh;
    n.min_h_leaf = o.min_h_leaf == old_id ? new_id : o.min_h_leaf;

    o.children.clear();
    o.lock = LockReason::duplicate;
    o.leaf_stats_h = o.leaf_stats_gh = RunningStats{};
    o.min_h = o.min_gh = kDeadEnd;
    o.min_h_leaf = kNoNode;

    std::vector<NodeId> stack(n.children.begin(), n.children.end());
    for (NodeId c : n.children) nodes_[static_cast<std::size_t>(c)].parent = new_id;
    while (!stack.empty()) {
        SearchNode& d = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        const SearchNode& p = nodes_[static_cast<std::size_t>(d.parent)];
        d.g = p.g + task_.operators[*d.op_in].cost;
        d.depth = p.depth + 1;
        stack.insert(stack.end(), d.children.begin(), d.children.end());
    }
    live_[n.state] = new_id;
    enqueue(old_id);
    enqueue(new_id);
}

std::vector<NodeId> TreeSearch::expand(NodeId leaf_id) {
    require(leaf_id >= 0 && static_cast<std::size_t>(leaf_id) < nodes_.size(), "node id out of range");
    {
        const SearchNode& leaf = nodes_[static_cast<std::size_t>(leaf_id)];
        require(!leaf.expanded && !leaf.locked(), "only unlocked leaves can be expanded");
    }
    ++result_.expansions;
    if (options_.record_trace) result_.trace.push_back({leaf_id, nodes_[static_cast<std::size_t>(leaf_id)].state});
    nodes_[static_cast<std::size_t>(leaf_id)].expanded = true;
    if (options_.backup == BackupMode::incremental)
        nodes_[static_cast<std::size_t>(leaf_id)].leaf_stats_h =
            nodes_[static_cast<std::size_t>(leaf_id)].leaf_stats_gh = RunningStats{};

    std::vector<NodeId> created;
    const State parent_state = nodes_[static_cast<std::size_t>(leaf_id)].state;
    const std::int64_t parent_g = nodes_[static_cast<std::size_t>(leaf_id)].g;
    for (Successor& succ : successors(task_, parent_state)) {
        ++result_.generated;
        const std::int64_t g = parent_g + task_.operators[succ.op].cost;
        if (is_goal(task_, succ.state)) {
            result_.plan = extract_plan(leaf_id, succ.op);
            require(validate_plan(task_, result_.plan), "search produced an invalid plan");
            finish(Outcome::plan);
            return created;
        }
        auto it = live_.find(succ.state);
        if (it != live_.end()) {
            const NodeId old_id = it->second;
            if (g > nodes_[static_cast<std::size_t>(old_id)].g || is_ancestor(old_id, leaf_id)) continue;
            const NodeId id = add_node(std::move(succ.state), leaf_id, succ.op, g);
            created.push_back(id);
            supersede(old_id, id);
            continue;
        }
        const NodeId id = add_node(std::move(succ.state), leaf_id, succ.op, g);
        created.push_back(id);
        SearchNode& n = nodes_.back();
        live_.emplace(n.state, id);
        n.h = h_(n.state);
        ++result_.evaluations;
        if (n.h == kDeadEnd) {
            n.lock = LockReason::dead_end;
        } else {
            n.leaf_stats_h = RunningStats::singleton(n.h);
            n.leaf_stats_gh = RunningStats::singleton(n.h);
            n.min_h = n.min_gh = n.h;
            n.min_h_leaf = id;
        }
        enqueue(id);
    }
    enqueue(leaf_id);
    return created;
}

void TreeSearch::update_node(NodeId id) {
    SearchNode& x = nodes_[static_cast<std::size_t>(id)];
    const bool incremental = options_.backup == BackupMode::incremental;
    if (x.expanded && x.lock != LockReason::duplicate) {
        RunningStats sh;
        RunningStats sgh;
        double mh = kDeadEnd;
        double mgh = kDeadEnd;
        NodeId mleaf = kNoNode;
        bool any_unlocked = false;
        for (NodeId c : x.children) {
            const SearchNode& ch = nodes_[static_cast<std::size_t>(c)];
            const auto cost = static_cast<double>(task_.operators[*ch.op_in].cost);
            if (!incremental) {
                sh = merge(sh, ch.leaf_stats_h);
                sgh = merge(sgh, ch.leaf_stats_gh.shifted(cost));
            }
            if (ch.locked()) continue;
            any_unlocked = true;
            if (ch.min_h < mh || (ch.min_h == mh && ch.min_h_leaf < mleaf)) {
                mh = ch.min_h;
                mleaf = ch.min_h_leaf;
            }
            mgh = std::min(mgh, ch.min_gh + cost);
        }
        if (!incremental) {
            x.leaf_stats_h = sh;
            x.leaf_stats_gh = sgh;
        }
        if (!any_unlocked && !x.locked())
            x.lock = x.children.empty() ? LockReason::dead_end : LockReason::exhausted;
        if (x.locked()) {
            mh = mgh = kDeadEnd;
            mleaf = kNoNode;
            if (!options_.keep_locked_leaves) {
                x.leaf_stats_h = x.leaf_stats_gh = RunningStats{};
            } else if (x.children.empty()) {
                x.leaf_stats_h = x.leaf_stats_gh = RunningStats::singleton(x.h);
            }
        }
        x.min_h = mh;
        x.min_gh = mgh;
        x.min_h_leaf = mleaf;
    }

    if (x.parent == kNoNode) return;
    if (incremental) {
        SearchNode& p = nodes_[static_cast<std::size_t>(x.parent)];
        const auto cost = static_cast<double>(task_.operators[*x.op_in].cost);
        const RunningStats gh = x.leaf_stats_gh.shifted(cost);
        // A locked parent already dropped everything below it, possibly
        // before this child got here through a subtree move.
        if (!p.locked() || options_.keep_locked_leaves) {
            p.leaf_stats_h = merge(retract(p.leaf_stats_h, x.contributed_h), x.leaf_stats_h);
            p.leaf_stats_gh = merge(retract(p.leaf_stats_gh, x.contributed_gh), gh);
        }
        x.contributed_h = x.leaf_stats_h;
        x.contributed_gh = gh;
    }
    enqueue(x.parent);
}

void TreeSearch::enqueue(NodeId id) {
    const SearchNode& n = nodes_[static_cast<std::size_t>(id)];
    backup_queue_.emplace(n.g, n.depth, id);
}

void TreeSearch::backpropagate() {
    while (!backup_queue_.empty()) {
        const NodeId id = std::get<2>(*backup_queue_.begin());
        backup_queue_.erase(backup_queue_.begin());
        update_node(id);
    }
}

Plan TreeSearch::extract_plan(NodeId leaf, OperatorId last) const {
    Plan plan{last};
    for (NodeId cur = leaf; nodes_[static_cast<std::size_t>(cur)].op_in;
         cur = nodes_[static_cast<std::size_t>(cur)].parent)
        plan.push_back(*nodes_[static_cast<std::size_t>(cur)].op_in);
    std::reverse(plan.begin(), plan.end());
    return plan;
}

void TreeSearch::finish(Outcome outcome) {
    result_.outcome = outcome;
    switch (outcome) {
        case Outcome::plan: status_ = Status::solved; break;
        case Outcome::exhausted: status_ = Status::exhausted; break;
        case Outcome::budget_reached: status_ = Status::budget_reached; break;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started_).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "elapsed_ms=%.3f", ms);
    result_.wall_notes = buf;
    if (result_.deadline_hit) result_.wall_notes += ";deadline";
}

SearchResult mcts(const GroundTask& task, const Evaluator& h, const NecConfig& nec, const SearchOptions& options) {
    TreeSearch search(task, h, nec, options);
    return search.run();
}

SearchResult gbfs_tree(const GroundTask& task, const Evaluator& h, const SearchOptions& options) {
    return mcts(task, h, nec_config(Algorithm::gbfs_tree, 1.0), options);
}

}  // namespace banditplan
