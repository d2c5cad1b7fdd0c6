#include <catch2/catch_amalgamated.hpp>

#include "support/enum_oracle.hpp"
#include "support/gen.hpp"
#include "tadist/distance.hpp"
#include "tadist/pipeline.hpp"

#include <random>

using namespace tadist;
using testsupport::parse_str;

namespace {

DiscreteTA disc_of(const TimedAutomaton& a) { return discretize(build_region_automaton(a)); }

TimedAutomaton point_edge(int bound) {
    return parse_str(
        "automaton A\nclocks x\nalphabet a\ninit q0\naccepting q1\n"
        "trans q0 -> q1 : a ; guard x=" + std::to_string(bound) + "\n");
}

TimedAutomaton loop_every(int bound) {
    return parse_str(
        "automaton A\nclocks x\nalphabet a\ninit q0\naccepting q0\n"
        "trans q0 -> q0 : a ; guard x=" + std::to_string(bound) + " ; reset x\n");
}

TimedTrace tt(std::initializer_list<std::pair<Rational, ActionId>> evs) {
    TimedTrace t;
    for (auto& [time, act] : evs) t.events.push_back({time, act});
    return t;
}

// Language union of two discretized automata over the same alphabet: a fresh
// initial location carries the out-edges of both initials.
DiscreteTA disc_union(const DiscreteTA& x, const DiscreteTA& y) {
    REQUIRE(x.actions == y.actions);
    DiscreteTA u;
    u.actions = x.actions;
    u.num_base_actions = x.num_base_actions;
    u.locations.push_back("u0");
    int off_x = 1;
    for (const auto& l : x.locations) u.locations.push_back("x:" + l);
    int off_y = 1 + int(x.locations.size());
    for (const auto& l : y.locations) u.locations.push_back("y:" + l);
    u.initial = 0;
    if (x.accepting.count(x.initial) || y.accepting.count(y.initial)) u.accepting.insert(0);
    for (int q : x.accepting) u.accepting.insert(q + off_x);
    for (int q : y.accepting) u.accepting.insert(q + off_y);
    for (const auto& e : x.edges) {
        u.edges.push_back({e.source + off_x, e.action, e.guard, e.target + off_x});
        if (e.source == x.initial) u.edges.push_back({0, e.action, e.guard, e.target + off_x});
    }
    for (const auto& e : y.edges) {
        u.edges.push_back({e.source + off_y, e.action, e.guard, e.target + off_y});
        if (e.source == y.initial) u.edges.push_back({0, e.action, e.guard, e.target + off_y});
    }
    return u;
}

}  // namespace

TEST_CASE("trace_distance is the max absolute timestamp difference") {
    TimedTrace t1 = tt({{Rational(1), 0}, {Rational(2), 1}});
    TimedTrace t2 = tt({{Rational(3, 2), 0}, {Rational(2), 1}});
    CHECK(trace_distance(t1, t2) == DistValue::finite(Rational(1, 2)));
    CHECK(trace_distance(t1, t1) == DistValue::finite(Rational(0)));
    CHECK(trace_distance(tt({{Rational(1), 0}}), tt({{Rational(1), 1}})).infinite);
    CHECK(trace_distance(tt({{Rational(1), 0}}), tt({})).infinite);
}

TEST_CASE("trace_distance is an extended metric on equal-word traces") {
    std::mt19937 rng(59);
    auto rand_times = [&](int n) {
        std::vector<Rational> ts;
        long long cur = 0;
        for (int i = 0; i < n; ++i) {
            cur += std::uniform_int_distribution<long long>(0, 6)(rng);
            ts.push_back(Rational(cur, 2));
        }
        return ts;
    };
    for (int i = 0; i < 200; ++i) {
        int n = std::uniform_int_distribution<int>(1, 4)(rng);
        TimedTrace a, b, c;
        auto fill = [&](TimedTrace& t) {
            for (Rational time : rand_times(n)) t.events.push_back({time, 0});
        };
        fill(a);
        fill(b);
        fill(c);
        auto dab = trace_distance(a, b), dba = trace_distance(b, a);
        auto dac = trace_distance(a, c), dcb = trace_distance(c, b);
        CHECK(dab == dba);
        CHECK(trace_distance(a, a) == DistValue::finite(Rational(0)));
        CHECK(dab.value <= dac.value + dcb.value);
    }
}

TEST_CASE("conformance distance of an automaton to itself is zero") {
    DiscreteTA d = disc_of(loop_every(2));
    DistValue v = conformance_oracle(d, d, 4, HalfTime::whole(10));
    CHECK(v == DistValue::half_units(0));
}

TEST_CASE("single-trace languages measure their timestamp gap") {
    DiscreteTA a = disc_of(point_edge(1));
    DiscreteTA b = disc_of(point_edge(2));
    DistValue v = conformance_oracle(a, b, 3, HalfTime::whole(6));
    REQUIRE_FALSE(v.infinite);
    CHECK(v.value == Rational(1));
    CHECK(v.annotation == Annotation::Exact);
}

TEST_CASE("drifting loops grow with the event bound and are flagged") {
    DiscreteTA a = disc_of(loop_every(2));
    DiscreteTA b = disc_of(loop_every(3));
    DistValue v = conformance_oracle(a, b, 4, HalfTime::whole(16));
    REQUIRE_FALSE(v.infinite);
    CHECK(v.value == Rational(4));
    CHECK(v.annotation == Annotation::LimitFromAbove);
}

TEST_CASE("missing words make the conformance distance infinite") {
    TimedAutomaton a = parse_str(
        "automaton A\nclocks\nalphabet a b\ninit q0\naccepting q1\n"
        "trans q0 -> q1 : b\n");
    TimedAutomaton b = parse_str(
        "automaton B\nclocks\nalphabet a b\ninit q0\naccepting q1\n"
        "trans q0 -> q1 : a\n");
    merge_alphabets(a, b);
    CHECK(conformance_oracle(disc_of(a), disc_of(b), 3, HalfTime::whole(6)).infinite);
}

TEST_CASE("check_inclusion on identical automata") {
    DiscreteTA d = determinize(disc_of(loop_every(2)));
    auto res = check_inclusion(d, d);
    CHECK(res.included);
}

TEST_CASE("check_inclusion reports a shortest witness for a missing action") {
    TimedAutomaton a = parse_str(
        "automaton A\nclocks\nalphabet a b\ninit q0\naccepting q1\n"
        "trans q0 -> q1 : b\n");
    TimedAutomaton b = parse_str(
        "automaton B\nclocks\nalphabet a b\ninit q0\naccepting q1\n"
        "trans q0 -> q1 : a\n");
    merge_alphabets(a, b);
    auto res = check_inclusion(determinize(disc_of(a)), determinize(disc_of(b)));
    REQUIRE_FALSE(res.included);
    REQUIRE(res.witness->events.size() == 1);
    CHECK(res.witness->events[0].action == 1);
}

TEST_CASE("a point guard is included in the matching lower bound") {
    TimedAutomaton a = point_edge(1);
    TimedAutomaton b = parse_str(
        "automaton B\nclocks x\nalphabet a\ninit q0\naccepting q1\n"
        "trans q0 -> q1 : a ; guard x>=1\n");
    DiscreteTA da = determinize(disc_of(a));
    DiscreteTA db = determinize(disc_of(b));
    auto res = check_inclusion(da, db);
    CHECK(res.included);

    // Enumeration cross-check: every accepted trace of a is accepted by b.
    for (const auto& t : testsupport::enumerate_disc_traces(da, 3, 8))
        CHECK(accepts_disc(db, t));
}

TEST_CASE("check_inclusion requires a deterministic right-hand side") {
    DiscreteTA b;
    b.actions = {"a"};
    b.num_base_actions = 1;
    b.locations = {"l0", "l1", "l2"};
    b.edges.push_back({0, 0, {GuardKind::Eq, HalfTime(2)}, 1});
    b.edges.push_back({0, 0, {GuardKind::Eq, HalfTime(2)}, 2});
    CHECK_THROWS_AS(check_inclusion(b, b), NotDeterministic);
}

TEST_CASE("lift_delta applies the distance case table") {
    CHECK(lift_delta(DistValue::half_units(5)) ==
          DistValue::half_units(6, Annotation::LimitFromBelow));  // 2.5 -> 3
    CHECK(lift_delta(DistValue::half_units(8)) ==
          DistValue::half_units(9, Annotation::LimitFromBelow));  // 4 -> 4.5
    CHECK(lift_delta(DistValue::half_units(7)) ==
          DistValue::half_units(6, Annotation::LimitFromAbove));  // 3.5 -> 3
    CHECK(lift_delta(DistValue::half_units(6)) == DistValue::half_units(6));
    CHECK(lift_delta(DistValue::half_units(3)) == DistValue::half_units(3));
    CHECK(lift_delta(DistValue::inf()).infinite);
    CHECK_THROWS_AS(lift_delta(DistValue::finite(Rational(1, 3))), InvalidInput);
}

TEST_CASE("greedy_game returns zero for identical deterministic automata") {
    DiscreteTA d = determinize(disc_of(loop_every(2)));
    DistValue v = greedy_game(d, d, 1, 4);
    CHECK(v == DistValue::half_units(0));
}

TEST_CASE("greedy_game matches the oracle on the drifting loop pair") {
    DiscreteTA a = disc_of(loop_every(2));
    DiscreteTA b = disc_of(loop_every(3));
    DistValue game = greedy_game(a, b, 1, 4);
    REQUIRE_FALSE(game.infinite);
    CHECK(game.value == Rational(4));
    DistValue oracle = conformance_oracle(a, b, 4, HalfTime::whole(16));
    CHECK(game.value == oracle.value);
}

TEST_CASE("greedy_game with deeper lookahead never reports less") {
    std::mt19937 rng(61);
    int checked = 0;
    while (checked < 20) {
        TimedAutomaton a = testsupport::random_ta(rng);
        TimedAutomaton b = testsupport::random_ta(rng);
        if (!validate(a).empty() || !validate(b).empty()) continue;
        merge_alphabets(a, b);
        DiscreteTA da = disc_of(a), db = disc_of(b);
        DistValue g1 = greedy_game(da, db, 1, 3);
        DistValue g2 = greedy_game(da, db, 2, 3);
        if (g1.infinite) {
            CHECK(g2.infinite);
        } else if (!g2.infinite) {
            CHECK(g2.value >= g1.value);
        }
        ++checked;
    }
}

TEST_CASE("greedy_game is a lower bound on the oracle") {
    std::mt19937 rng(67);
    int checked = 0;
    while (checked < 20) {
        TimedAutomaton a = testsupport::random_ta(rng);
        TimedAutomaton b = testsupport::random_ta(rng);
        if (!validate(a).empty() || !validate(b).empty()) continue;
        merge_alphabets(a, b);
        DiscreteTA da = disc_of(a), db = disc_of(b);
        int max_const = std::max(a.max_const(), b.max_const());
        HalfTime horizon = HalfTime::whole(3 * (max_const + 2));
        DistValue game = greedy_game(da, db, 1, 3);
        DistValue oracle = conformance_oracle(da, db, 3, horizon);
        if (oracle.infinite) continue;
        REQUIRE_FALSE(game.infinite);
        CHECK(game.value <= oracle.value);
        ++checked;
    }
}

TEST_CASE("conformance distance is subadditive") {
    std::mt19937 rng(71);
    int checked = 0;
    while (checked < 15) {
        TimedAutomaton a = testsupport::random_ta(rng);
        TimedAutomaton b = testsupport::random_ta(rng);
        TimedAutomaton c = testsupport::random_ta(rng);
        if (!validate(a).empty() || !validate(b).empty() || !validate(c).empty()) continue;
        merge_alphabets(a, b);
        merge_alphabets(a, c);
        merge_alphabets(b, c);
        if (a.actions != b.actions || b.actions != c.actions) continue;
        int m = std::max({a.max_const(), b.max_const(), c.max_const()});
        HalfTime horizon = HalfTime::whole(2 * (m + 2));
        DistValue d13 = conformance_oracle(disc_of(a), disc_of(c), 3, horizon);
        DistValue d12 = conformance_oracle(disc_of(a), disc_of(b), 3, horizon);
        DistValue d23 = conformance_oracle(disc_of(b), disc_of(c), 3, horizon);
        if (d12.infinite || d23.infinite) {
            ++checked;
            continue;  // the right-hand side is infinite
        }
        if (!d13.infinite) CHECK(d13.value <= d12.value + d23.value);
        ++checked;
    }
}

TEST_CASE("enlarging the right language never increases the distance") {
    std::mt19937 rng(73);
    int checked = 0;
    while (checked < 15) {
        TimedAutomaton a = testsupport::random_ta(rng);
        TimedAutomaton b = testsupport::random_ta(rng);
        TimedAutomaton c = testsupport::random_ta(rng);
        if (!validate(a).empty() || !validate(b).empty() || !validate(c).empty()) continue;
        merge_alphabets(a, b);
        merge_alphabets(a, c);
        merge_alphabets(b, c);
        if (a.actions != b.actions || b.actions != c.actions) continue;
        int m = std::max({a.max_const(), b.max_const(), c.max_const()});
        HalfTime horizon = HalfTime::whole(2 * (m + 2));
        DiscreteTA db = disc_of(b);
        DiscreteTA wider = disc_union(db, disc_of(c));
        DistValue narrow = conformance_oracle(disc_of(a), db, 3, horizon);
        DistValue wide = conformance_oracle(disc_of(a), wider, 3, horizon);
        if (narrow.infinite) {
            ++checked;
            continue;
        }
        REQUIRE_FALSE(wide.infinite);
        CHECK(wide.value <= narrow.value);
        ++checked;
    }
}

TEST_CASE("inclusion holds exactly when the bounded distance is zero") {
    std::mt19937 rng(79);
    int checked = 0;
    while (checked < 25) {
        TimedAutomaton a = testsupport::random_ta(rng);
        TimedAutomaton b = testsupport::random_ta(rng);
        if (!validate(a).empty() || !validate(b).empty()) continue;
        merge_alphabets(a, b);
        DiscreteTA da = disc_of(a), db = disc_of(b);
        auto inc = check_inclusion(determinize(da), determinize(db));
        int m = std::max(a.max_const(), b.max_const());
        HalfTime horizon = HalfTime::whole(3 * (m + 2));
        DistValue v = conformance_oracle(da, db, 3, horizon);
        if (inc.included) {
            CHECK(v == DistValue::half_units(0));
        } else {
            CHECK((v.infinite || v.value > Rational(0)));
        }
        ++checked;
    }
}

TEST_CASE("oracle outputs stay in half-integers or infinity") {
    std::mt19937 rng(83);
    int checked = 0;
    while (checked < 30) {
        TimedAutomaton a = testsupport::random_ta(rng);
        TimedAutomaton b = testsupport::random_ta(rng);
        if (!validate(a).empty() || !validate(b).empty()) continue;
        merge_alphabets(a, b);
        int m = std::max(a.max_const(), b.max_const());
        DistValue v = conformance_oracle(disc_of(a), disc_of(b), 3, HalfTime::whole(2 * (m + 2)));
        CHECK(v.is_half_integral());
        ++checked;
    }
}
