#include "doctest.h"
#include "support.hpp"

#include "banditplan/contract.hpp"
#include "banditplan/strips.hpp"

#include <filesystem>
#include <random>

using namespace banditplan;
using support::add_op;
using support::make_task;

TEST_SUITE("strips") {

TEST_CASE("applicable and apply on hand-built tasks") {
    GroundTask t = make_task(2);
    const auto free_op = add_op(t, "free", {}, {0}, {});
    const auto swap_op = add_op(t, "swap", {0}, {1}, {0});
    normalize_task(t);
    const State empty = initial_state(t);
    CHECK(applicable(t, empty, free_op));
    CHECK_FALSE(applicable(t, empty, swap_op));
    CHECK_THROWS_AS((void)apply(t, empty, swap_op), ContractViolation);
    CHECK_THROWS_AS((void)applicable(t, empty, 7), ContractViolation);

    const State a = apply(t, empty, free_op);
    CHECK(a.facts() == std::vector<FactId>{0});
    CHECK(apply(t, a, swap_op).facts() == std::vector<FactId>{1});
}

TEST_CASE("delete before add") {
    GroundTask t = make_task(1);
    const auto op = add_op(t, "keep", {0}, {0}, {0});
    t.init = {0};
    normalize_task(t);
    CHECK(apply(t, initial_state(t), op).test(0));
}

TEST_CASE("goal test") {
    GroundTask t = make_task(2);
    normalize_task(t);
    CHECK(is_goal(t, initial_state(t)));
    t.goal = {0};
    CHECK(is_goal(t, State::from_facts(2, std::vector<FactId>{0, 1})));
    CHECK_FALSE(is_goal(t, initial_state(t)));
}

TEST_CASE("gripper successors and plans") {
    const auto loaded = support::load("suite/gripper/domain.pddl", "suite/gripper/p01.pddl");
    const auto& t = loaded.task;
    const State init = initial_state(t);
    CHECK_FALSE(is_goal(t, init));
    CHECK(applicable(t, init, *t.find_operator("pick", {"ball1", "rooma", "left"})));

    // move rooma->rooma, move rooma->roomb, four picks.
    const auto succ = successors(t, init);
    CHECK(succ.size() == 6);
    for (std::size_t i = 1; i < succ.size(); ++i) CHECK(succ[i - 1].op < succ[i].op);

    State s = apply(t, init, *t.find_operator("pick", {"ball1", "rooma", "left"}));
    s = apply(t, s, *t.find_operator("move", {"rooma", "roomb"}));
    s = apply(t, s, *t.find_operator("drop", {"ball1", "roomb", "left"}));
    CHECK(s.test(*t.find_fact({"at", {"ball1", "roomb"}})));

    const Plan plan{*t.find_operator("pick", {"ball1", "rooma", "left"}),
                    *t.find_operator("pick", {"ball2", "rooma", "right"}),
                    *t.find_operator("move", {"rooma", "roomb"}),
                    *t.find_operator("drop", {"ball1", "roomb", "left"}),
                    *t.find_operator("drop", {"ball2", "roomb", "right"})};
    CHECK(validate_plan(t, plan));
    CHECK(plan_cost(t, plan) == 5);
    CHECK_FALSE(validate_plan(t, Plan{}));
    CHECK(format_plan(t, std::span(plan).first(1)) == "(pick ball1 rooma left)\n");

    const auto path = std::filesystem::temp_directory_path() / "banditplan_test.plan";
    write_plan_file(path, t, plan);
    const auto steps = parse_plan_text(read_text_file(path));
    CHECK(validate_plan_lifted(loaded.domain, loaded.problem, steps));
    std::filesystem::remove(path);
}

TEST_CASE("empty plan solves an empty goal") {
    GroundTask t = make_task(1);
    normalize_task(t);
    CHECK(validate_plan(t, Plan{}));
}

TEST_CASE("successors agree with brute force on random reachable states") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const GroundTask t = support::random_task(rng, 8 + trial % 60, 12, false);
        State s = initial_state(t);
        for (int step = 0; step < 20; ++step) {
            const auto succ = successors(t, s);
            std::vector<Successor> brute;
            for (OperatorId o = 0; o < t.operator_count(); ++o)
                if (applicable(t, s, o)) brute.push_back({o, apply(t, s, o)});
            REQUIRE(succ.size() == brute.size());
            for (std::size_t i = 0; i < succ.size(); ++i) {
                CHECK(succ[i].op == brute[i].op);
                CHECK(succ[i].state == brute[i].state);
                CHECK(succ[i].state.width() == t.fact_count());
            }
            if (succ.empty()) break;
            s = succ[rng() % succ.size()].state;
        }
    }
}

TEST_CASE("state hashing is by value") {
    State a = State::from_facts(130, std::vector<FactId>{0, 64, 129});
    State b(130);
    b.set(129);
    b.set(0);
    b.set(64);
    CHECK(a == b);
    CHECK(a.hash() == b.hash());
    CHECK(a.count() == 3);
    b.reset(64);
    CHECK_FALSE(a == b);
}

}  // TEST_SUITE
