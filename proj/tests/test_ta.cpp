#include <catch2/catch_amalgamated.hpp>

#include "support/gen.hpp"
#include "tadist/ta.hpp"

#include <random>

using namespace tadist;
using testsupport::parse_str;

namespace {

TimedAutomaton single_edge_x1() {
    return parse_str(
        "automaton A\n"
        "clocks x\n"
        "alphabet a\n"
        "init q0\n"
        "accepting q1\n"
        "trans q0 -> q1 : a ; guard x=1 ; reset x\n");
}

}  // namespace

TEST_CASE("validate flags a reset of an undeclared clock") {
    TimedAutomaton a = single_edge_x1();
    a.transitions[0].resets = {5};
    auto diags = validate(a);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("unknown clock in resets") != std::string::npos);
}

TEST_CASE("validate accepts an automaton with no transitions") {
    TimedAutomaton a;
    a.locations = {"q0"};
    a.initial = 0;
    a.accepting = {0};
    a.actions = {"a"};
    CHECK(validate(a).empty());
}

TEST_CASE("validate flags an accepting id that is no location") {
    TimedAutomaton a = single_edge_x1();
    a.accepting.insert(7);
    auto diags = validate(a);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("accepting") != std::string::npos);
}

TEST_CASE("validate flags contradictory guards as unsatisfiable") {
    TimedAutomaton a = parse_str(
        "automaton A\nclocks x\nalphabet a\ninit q0\naccepting q1\n"
        "trans q0 -> q1 : a ; guard x<1,x>1\n");
    auto diags = validate(a);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("unsatisfiable") != std::string::npos);
}

TEST_CASE("step applies delay, guard and resets") {
    TimedAutomaton a = single_edge_x1();
    State s{0, ClockValuation::zero(1)};

    SECTION("guard satisfied, clock reset") {
        State next = step(s, Rational(1), a.transitions[0]);
        CHECK(next.location == 1);
        CHECK(next.valuation.values[0] == Rational(0));
    }
    SECTION("guard violated") {
        CHECK_THROWS_AS(step(s, Rational(1, 2), a.transitions[0]), GuardViolation);
    }
    SECTION("wrong source location") {
        State at1{1, ClockValuation::zero(1)};
        CHECK_THROWS_AS(step(at1, Rational(1), a.transitions[0]), SourceMismatch);
    }
}

TEST_CASE("step advances unreset clocks") {
    TimedAutomaton a = parse_str(
        "automaton A\nclocks x y\nalphabet a\ninit q0\naccepting q1\n"
        "trans q0 -> q1 : a ; guard y>=3 ; reset x\n");
    State s{0, ClockValuation::zero(2)};
    s.valuation.values[1] = Rational(2);
    State next = step(s, Rational(1), a.transitions[0]);
    CHECK(next.valuation.values[0] == Rational(0));
    CHECK(next.valuation.values[1] == Rational(3));
}

TEST_CASE("accepts searches the discrete nondeterminism") {
    TimedAutomaton a = single_edge_x1();
    CHECK(accepts(a, TimedTrace{{{Rational(1), 0}}}));
    CHECK_FALSE(accepts(a, TimedTrace{{{Rational(2), 0}}}));
    CHECK_FALSE(accepts(a, TimedTrace{{{Rational(1), 0}, {Rational(2), 0}}}));
}

TEST_CASE("accepts rejects unknown actions") {
    TimedAutomaton a = single_edge_x1();
    CHECK_THROWS_AS(accepts(a, TimedTrace{{{Rational(1), 9}}}), UnknownAction);
}

TEST_CASE("accepts explores both branches of a nondeterministic choice") {
    TimedAutomaton a = parse_str(
        "automaton A\nclocks x\nalphabet a b\ninit q0\naccepting q2\n"
        "trans q0 -> q1 : a ; guard x=1\n"
        "trans q0 -> q2 : a ; guard x=1\n"
        "trans q1 -> q2 : b ; guard x=2\n");
    CHECK(accepts(a, TimedTrace{{{Rational(1), 0}}}));
    CHECK(accepts(a, TimedTrace{{{Rational(1), 0}, {Rational(2), 1}}}));
    CHECK_FALSE(accepts(a, TimedTrace{{{Rational(1), 0}, {Rational(1), 1}}}));
}

TEST_CASE("scale multiplies guard bounds") {
    TimedAutomaton a = single_edge_x1();
    TimedAutomaton a3 = scale(a, 3);
    CHECK(a3.transitions[0].guard.atoms[0].bound == 3);
    CHECK(scale(a, 1).transitions == a.transitions);
    CHECK(accepts(a, TimedTrace{{{Rational(1), 0}}}));
    CHECK(accepts(a3, TimedTrace{{{Rational(3), 0}}}));
    CHECK_FALSE(accepts(a3, TimedTrace{{{Rational(1), 0}}}));
}

TEST_CASE("scale composes multiplicatively") {
    std::mt19937 rng(7);
    for (int i = 0; i < 20; ++i) {
        TimedAutomaton a = testsupport::random_ta(rng);
        CHECK(scale(scale(a, 2), 3).transitions == scale(a, 6).transitions);
    }
}

TEST_CASE("random accepted runs round-trip through accepts") {
    std::mt19937 rng(11);
    int checked = 0;
    while (checked < 40) {
        TimedAutomaton a = testsupport::random_ta(rng);
        auto run = testsupport::random_accepted_run(rng, a, 4, 20);
        if (!run) continue;
        REQUIRE(run_ends_accepting(a, *run));
        CHECK(accepts(a, trace_of(a, *run)));
        ++checked;
    }
}

TEST_CASE("trace timestamps are the prefix sums of the delays") {
    std::mt19937 rng(13);
    int checked = 0;
    while (checked < 25) {
        TimedAutomaton a = testsupport::random_ta(rng);
        auto run = testsupport::random_accepted_run(rng, a, 4, 20);
        if (!run) continue;
        TimedTrace tau = trace_of(a, *run);
        Rational sum(0);
        for (std::size_t i = 0; i < run->steps.size(); ++i) {
            sum += run->steps[i].delay;
            CHECK(tau.events[i].time == sum);
        }
        ++checked;
    }
}

TEST_CASE("step is a pure function of its inputs") {
    TimedAutomaton a = single_edge_x1();
    State s{0, ClockValuation::zero(1)};
    State r1 = step(s, Rational(1), a.transitions[0]);
    State r2 = step(s, Rational(1), a.transitions[0]);
    CHECK(r1.location == r2.location);
    CHECK(r1.valuation == r2.valuation);
}

TEST_CASE("merge_alphabets unifies action ids by name") {
    TimedAutomaton a = parse_str(
        "automaton A\nclocks\nalphabet a b\ninit q0\naccepting q0\n"
        "trans q0 -> q0 : b\n");
    TimedAutomaton b = parse_str(
        "automaton B\nclocks\nalphabet b c\ninit p0\naccepting p0\n"
        "trans p0 -> p0 : b\ntrans p0 -> p0 : c\n");
    merge_alphabets(a, b);
    REQUIRE(a.actions == b.actions);
    CHECK(a.actions == std::vector<std::string>{"a", "b", "c"});
    CHECK(b.transitions[0].action == 1);
    CHECK(b.transitions[1].action == 2);
}
