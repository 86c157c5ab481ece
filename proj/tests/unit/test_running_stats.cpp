#include "doctest.h"
#include "support.hpp"

#include "banditplan/contract.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace banditplan;
using support::brute;
using support::close_rel;

namespace {

RunningStats of(std::initializer_list<double> xs) {
    RunningStats s;
    for (double x : xs) s.push(x);
    return s;
}

}  // namespace

TEST_SUITE("running_stats") {

TEST_CASE("push") {
    RunningStats s;
    s.push(5);
    CHECK(s.count() == 1);
    CHECK(s.mean() == 5);
    CHECK(s.m2() == 0);

    const auto two = of({1, 3});
    CHECK(two.count() == 2);
    CHECK(two.mean() == 2);
    CHECK(two.m2() == 2);
    CHECK(two.sample_variance() == 2);
    CHECK(two.population_variance() == 1);

    CHECK_THROWS_AS(s.push(std::numeric_limits<double>::quiet_NaN()), ContractViolation);
}

TEST_CASE("single observation has zero sample deviation") {
    CHECK(RunningStats::singleton(7).sample_stddev() == 0.0);
    CHECK(RunningStats{}.sample_variance() == 0.0);
    CHECK(RunningStats{}.population_variance() == 0.0);
}

TEST_CASE("from_fields validates") {
    CHECK_THROWS_AS(RunningStats::from_fields(0, 1.0, 0.0), ContractViolation);
    CHECK_THROWS_AS(RunningStats::from_fields(2, 1.0, -1.0), ContractViolation);
    CHECK_THROWS_AS(RunningStats::from_fields(-1, 0.0, 0.0), ContractViolation);
    CHECK(RunningStats::from_fields(3, 3.0, 8.0) == merge(of({1, 3}), of({5})));
}

TEST_CASE("merge examples") {
    const auto s = of({1, 3});
    CHECK(merge(s, RunningStats{}) == s);
    CHECK(merge(RunningStats{}, s) == s);

    const auto m = merge(s, of({5}));
    CHECK(m.count() == 3);
    CHECK(m.mean() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(m.population_variance() == doctest::Approx(8.0 / 3.0).epsilon(1e-12));

    const auto eq = merge(RunningStats::singleton(4.25), RunningStats::singleton(4.25));
    CHECK(eq.count() == 2);
    CHECK(eq.mean() == 4.25);
    CHECK(eq.m2() == 0);
}

TEST_CASE("retract examples") {
    const auto s = of({1, 3});
    CHECK(retract(s, RunningStats{}) == s);

    const auto back = retract(merge(s, of({5})), of({5}));
    CHECK(back.count() == 2);
    CHECK(back.mean() == doctest::Approx(2.0));
    CHECK(back.m2() == doctest::Approx(2.0));

    const auto five = retract(of({1, 3, 5}), of({1, 3}));
    CHECK(five.count() == 1);
    CHECK(five.mean() == doctest::Approx(5.0));
    CHECK(five.m2() == 0.0);

    CHECK(retract(s, s).empty());
    CHECK_THROWS_AS((void)retract(of({1}), s), ContractViolation);
}

TEST_CASE("shifted moves the mean only") {
    const auto s = of({1, 2, 6}).shifted(10);
    CHECK(s.mean() == doctest::Approx(13.0));
    CHECK(s.m2() == doctest::Approx(of({1, 2, 6}).m2()));
    CHECK(RunningStats{}.shifted(3).empty());
    CHECK(RunningStats{}.shifted(3).mean() == 0.0);
}

TEST_CASE("push and merge trees agree with brute force") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> value(-100, 100);
    std::uniform_int_distribution<int> size(0, 50);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> xs(static_cast<std::size_t>(size(rng)));
        for (double& x : xs) x = value(rng);
        const auto want = brute(xs);

        RunningStats pushed;
        for (double x : xs) pushed.push(x);

        // Random binary merge tree over singletons.
        std::vector<RunningStats> parts;
        for (double x : xs) parts.push_back(RunningStats::singleton(x));
        while (parts.size() > 1) {
            std::uniform_int_distribution<std::size_t> pick(0, parts.size() - 2);
            const std::size_t i = pick(rng);
            parts[i] = merge(parts[i], parts[i + 1]);
            parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        }
        const RunningStats tree = parts.empty() ? RunningStats{} : parts.front();

        for (const auto& s : {pushed, tree}) {
            CHECK(s.count() == want.n);
            CHECK(close_rel(s.mean(), want.mean, 1e-9, 1e-9));
            CHECK(close_rel(s.population_variance(), want.pop_var, 1e-9, 1e-9));
        }
    }
}

TEST_CASE("merge is commutative and associative") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> value(3, 20);
    for (int trial = 0; trial < 200; ++trial) {
        RunningStats a, b, c;
        for (int i = 0; i < 1 + trial % 7; ++i) a.push(value(rng));
        for (int i = 0; i < trial % 5; ++i) b.push(value(rng));
        for (int i = 0; i < 1 + trial % 3; ++i) c.push(value(rng));
        const auto ab = merge(a, b), ba = merge(b, a);
        CHECK(ab.count() == ba.count());
        CHECK(close_rel(ab.mean(), ba.mean(), 1e-9, 1e-12));
        CHECK(close_rel(ab.m2(), ba.m2(), 1e-9, 1e-9));
        const auto l = merge(merge(a, b), c), r = merge(a, merge(b, c));
        CHECK(close_rel(l.mean(), r.mean(), 1e-9, 1e-12));
        CHECK(close_rel(l.m2(), r.m2(), 1e-9, 1e-9));
    }
}

TEST_CASE("retract roundtrip and clamp") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> value(-100, 100);
    for (int trial = 0; trial < 300; ++trial) {
        RunningStats a, b;
        for (int i = 0; i < 1 + trial % 20; ++i) a.push(value(rng));
        for (int i = 0; i < trial % 9; ++i) b.push(value(rng));
        const auto back = retract(merge(a, b), b);
        CHECK(back.count() == a.count());
        CHECK(close_rel(back.mean(), a.mean(), 1e-7, 1e-9));
        CHECK(close_rel(back.m2(), a.m2(), 1e-7, 1e-7));
        CHECK(back.m2() >= 0.0);
    }
    // Nearly identical halves drive the retracted m2 into rounding noise.
    const auto tiny = retract(of({1e8, 1e8 + 1e-6, 1e8}), of({1e8 + 1e-6, 1e8}));
    CHECK(tiny.m2() == 0.0);
}

}  // TEST_SUITE
