#pragma once

#include "tadist/discrete.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tadist {

enum class Annotation { Exact, LimitFromAbove, LimitFromBelow };

// Distance value: a nonnegative rational or infinity. Computed conformance
// distances land in half-integers; the rational representation lets lift_delta
// reject anything else.
struct DistValue {
    bool infinite = false;
    Rational value{0};
    Annotation annotation = Annotation::Exact;

    static DistValue inf() { return DistValue{true, Rational(0), Annotation::Exact}; }
    static DistValue finite(Rational v, Annotation ann = Annotation::Exact) {
        return DistValue{false, v, ann};
    }
    static DistValue half_units(long long h, Annotation ann = Annotation::Exact) {
        return DistValue{false, Rational(h, 2), ann};
    }

    bool is_half_integral() const { return infinite || tadist::is_half_integral(value); }

    bool operator==(const DistValue&) const = default;

    std::string str() const {
        if (infinite) return "inf";
        std::string s = rational_str(value);
        if (annotation == Annotation::LimitFromAbove) s += "+";
        if (annotation == Annotation::LimitFromBelow) s += "-";
        return s;
    }
};

// ============================================================================
// trace_distance — the max-metric on timed traces
// ============================================================================

inline DistValue trace_distance(const TimedTrace& t1, const TimedTrace& t2) {
    if (t1.events.size() != t2.events.size()) return DistValue::inf();
    Rational best(0);
    for (std::size_t i = 0; i < t1.events.size(); ++i) {
        if (t1.events[i].action != t2.events[i].action) return DistValue::inf();
        best = std::max(best, rat_abs(t1.events[i].time - t2.events[i].time));
    }
    return DistValue::finite(best);
}

inline TimedTrace disc_to_timed(const DiscTrace& t) {
    TimedTrace out;
    for (const auto& e : t.events) out.events.push_back({e.time.value(), e.action});
    return out;
}

// ============================================================================
// accepted-trace enumeration and the per-trace infimum
// ============================================================================

namespace detail {

struct EnumeratedTrace {
    DiscTrace trace;
    bool geq_at_cap = false;  // some Geq delay was cut off by the time bound
};

inline void spend(long long& budget, const char* what) {
    if (--budget < 0) throw BudgetExceeded(std::string(what) + ": node budget exhausted");
}

// All accepted traces with at most max_events events and absolute times at
// most max_time; delays of Geq edges are enumerated up to the time bound.
inline std::vector<EnumeratedTrace> enumerate_accepted(const DiscreteTA& d, int max_events,
                                                       HalfTime max_time, long long& budget) {
    std::vector<EnumeratedTrace> out;
    auto adj = d.out_edges();
    DiscTrace prefix;

    auto rec = [&](auto&& self, int loc, HalfTime now, bool at_cap) -> void {
        spend(budget, "enumerate_accepted");
        if (d.accepting.count(loc)) out.push_back({prefix, at_cap});
        if (int(prefix.events.size()) == max_events) return;
        for (int ei : adj[loc]) {
            const DiscEdge& e = d.edges[ei];
            if (e.guard.kind == GuardKind::EqInf) continue;
            HalfTime lo = e.guard.bound;
            HalfTime hi = e.guard.kind == GuardKind::Eq
                              ? e.guard.bound
                              : HalfTime(max_time.halves - now.halves);
            for (HalfTime dl = lo; dl <= hi; dl = HalfTime(dl.halves + 1)) {
                HalfTime t = now + dl;
                if (t > max_time) break;
                bool cut = e.guard.kind == GuardKind::Geq && dl == hi;
                prefix.events.push_back({t, e.action});
                self(self, e.target, t, at_cap || cut);
                prefix.events.pop_back();
            }
        }
    };
    rec(rec, d.initial, HalfTime(0), false);
    return out;
}

struct InfSearch {
    const DiscreteTA& b;
    const DiscTrace& tau;
    const std::vector<std::vector<int>>& adj;
    long long cap_abs;  // bound on B's absolute event times for Geq tails
    long long& budget;
    std::optional<long long> best;  // max-metric in half units

    void run(std::size_t i, int loc, long long tb, long long cur_max) {
        spend(budget, "disc_trace_inf");
        if (best && cur_max >= *best) return;
        if (i == tau.events.size()) {
            if (b.accepting.count(loc)) best = cur_max;
            return;
        }
        long long ta = tau.events[i].time.halves;
        for (int ei : adj[loc]) {
            const DiscEdge& e = b.edges[ei];
            if (e.action != tau.events[i].action) continue;
            if (e.guard.kind == GuardKind::EqInf) continue;
            long long lo = e.guard.bound.halves;
            long long hi = e.guard.kind == GuardKind::Eq ? lo : cap_abs - tb;
            for (long long dl = lo; dl <= hi; ++dl) {
                long long t = tb + dl;
                long long diff = t > ta ? t - ta : ta - t;
                long long m = std::max(cur_max, diff);
                if (best && m >= *best) {
                    if (t >= ta) break;  // larger delays only grow this diff
                    continue;
                }
                run(i + 1, e.target, t, m);
            }
        }
    }
};

}  // namespace detail

// Infimum of the max-metric between tau and the same-word accepted traces of
// b, in half units; nullopt when no same-word accepted trace exists. The
// search bound on B's absolute times starts generous enough that a word
// match, if any, is found, and is re-widened until the optimum provably lies
// inside it.
inline std::optional<long long> disc_trace_inf(const DiscreteTA& b, const DiscTrace& tau,
                                               long long& budget) {
    auto adj = b.out_edges();
    long long max_bound = 0;
    for (const auto& e : b.edges)
        if (e.guard.kind != GuardKind::EqInf)
            max_bound = std::max(max_bound, e.guard.bound.halves);
    long long horizon = tau.events.empty() ? 0 : tau.events.back().time.halves;
    long long cap = horizon + (static_cast<long long>(tau.events.size()) + 1) * (max_bound + 2);
    for (;;) {
        detail::InfSearch s{b, tau, adj, cap, budget, std::nullopt};
        s.run(0, b.initial, 0, 0);
        if (!s.best) return std::nullopt;
        if (horizon + *s.best <= cap) return s.best;
        cap = horizon + *s.best + 2;
    }
}

// ============================================================================
// conformance_oracle — bounded sup/inf over accepted traces
// ============================================================================

inline constexpr long long kDefaultBudget = 20'000'000;

// Bounded brute force for sup over a's accepted traces of the distance to
// b's language. Infinite when some a-trace has no same-word b-trace. The
// LimitFromAbove annotation marks a supremum that was still growing when the
// enumeration bound cut it off (longer traces or larger unbounded delays keep
// increasing it).
inline DistValue conformance_oracle(const DiscreteTA& a, const DiscreteTA& b, int max_events,
                                    HalfTime max_time, long long budget = kDefaultBudget) {
    if (max_events < 1) throw InvalidInput("max_events must be >= 1");
    auto traces = detail::enumerate_accepted(a, max_events, max_time, budget);

    long long sup = 0;
    bool sup_at_cap = false;
    // Largest infimum among traces with fewer than max_events events, used to
    // detect growth that is still driven by the event bound.
    long long sup_shorter = -1;

    for (const auto& et : traces) {
        auto inf = disc_trace_inf(b, et.trace, budget);
        if (!inf) return DistValue::inf();
        if (*inf > sup) {
            sup = *inf;
            sup_at_cap = et.geq_at_cap;
        }
        if (int(et.trace.events.size()) < max_events)
            sup_shorter = std::max(sup_shorter, *inf);
    }

    bool grew_with_bound = sup_shorter >= 0 && sup > sup_shorter;
    Annotation ann = (sup_at_cap || grew_with_bound) ? Annotation::LimitFromAbove
                                                     : Annotation::Exact;
    return DistValue::half_units(sup, ann);
}

// ============================================================================
// check_inclusion — product walk against a completed deterministic B
// ============================================================================

struct InclusionResult {
    bool included = false;
    std::optional<DiscTrace> witness;  // shortest, when not included
};

inline InclusionResult check_inclusion(const DiscreteTA& a, const DiscreteTA& b) {
    if (!is_deterministic(b))
        throw NotDeterministic("check_inclusion requires a deterministic B");

    auto adj_a = a.out_edges();
    auto adj_b = b.out_edges();
    constexpr int kSink = -1;

    // b's unique response to (action, delay); the sink absorbs everything.
    auto respond = [&](int bloc, ActionId act, HalfTime delay) -> int {
        if (bloc == kSink) return kSink;
        for (int ei : adj_b[bloc]) {
            const DiscEdge& e = b.edges[ei];
            if (e.action == act && e.guard.admits(delay)) return e.target;
        }
        return kSink;
    };

    struct Node {
        int aloc, bloc;
        auto operator<=>(const Node&) const = default;
    };
    struct Parent {
        int prev;
        ActionId action;
        HalfTime delay;
    };

    std::map<Node, int> index;
    std::vector<Node> nodes;
    std::vector<Parent> parents;
    std::deque<int> queue;
    auto push = [&](Node n, int prev, ActionId act, HalfTime delay) {
        if (index.count(n)) return;
        index[n] = int(nodes.size());
        nodes.push_back(n);
        parents.push_back({prev, act, delay});
        queue.push_back(int(nodes.size()) - 1);
    };
    push({a.initial, b.initial}, -1, 0, HalfTime(0));

    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        Node n = nodes[id];

        bool a_acc = a.accepting.count(n.aloc) > 0;
        bool b_acc = n.bloc != kSink && b.accepting.count(n.bloc) > 0;
        if (a_acc && !b_acc) {
            // Reconstruct the shortest offending trace.
            std::vector<std::pair<ActionId, HalfTime>> steps;
            for (int cur = id; parents[cur].prev >= 0; cur = parents[cur].prev)
                steps.push_back({parents[cur].action, parents[cur].delay});
            std::reverse(steps.begin(), steps.end());
            DiscTrace w;
            HalfTime now;
            for (auto& [act, dl] : steps) {
                now = now + dl;
                w.events.push_back({now, act});
            }
            return {false, w};
        }

        for (int ei : adj_a[n.aloc]) {
            const DiscEdge& e = a.edges[ei];
            if (e.guard.kind == GuardKind::EqInf) continue;
            // Representative delays: every half-step from the guard's lower
            // end up to just past the largest b bound for this action. Beyond
            // that, b's response no longer changes.
            long long top = e.guard.bound.halves;
            if (e.guard.kind == GuardKind::Geq && n.bloc != kSink) {
                for (int bi : adj_b[n.bloc]) {
                    const DiscEdge& be = b.edges[bi];
                    if (be.action == e.action && be.guard.kind != GuardKind::EqInf)
                        top = std::max(top, be.guard.bound.halves + 1);
                }
            }
            long long lo = e.guard.bound.halves;
            long long hi = e.guard.kind == GuardKind::Eq ? lo : top;
            for (long long dl = lo; dl <= hi; ++dl) {
                int resp = respond(n.bloc, e.action, HalfTime(dl));
                push({e.target, resp}, id, e.action, HalfTime(dl));
            }
        }
    }
    return {true, std::nullopt};
}

// ============================================================================
// lift_delta — map a discretized distance back through the case table
// ============================================================================

// Input: a conformance distance of the discretized pair built at triple
// speed. Output: the distance of the concrete (still triple-speed) pair,
// which is the nearest multiple of 3/2; rounding down marks a limit from
// above, rounding up a limit from below.
inline DistValue lift_delta(const DistValue& delta_d) {
    if (delta_d.infinite) return DistValue::inf();
    if (!delta_d.is_half_integral() || delta_d.value < Rational(0))
        throw InvalidInput("lift_delta requires a value in half-integers or infinity");
    long long h = delta_d.value.numerator() * (2 / delta_d.value.denominator());
    long long r = h % 6;
    long long out = h;
    Annotation ann = Annotation::Exact;
    switch (r) {
        case 0:
        case 3: break;
        case 1:
        case 4:
            out = h - 1;
            ann = Annotation::LimitFromAbove;
            break;
        case 2:
        case 5:
            out = h + 1;
            ann = Annotation::LimitFromBelow;
            break;
    }
    if (ann == Annotation::Exact) ann = delta_d.annotation;
    return DistValue::half_units(out, ann);
}

// ============================================================================
// greedy_game — committed max-min play with bounded lookahead
// ============================================================================

namespace detail {

struct GameCtx {
    const DiscreteTA& a;
    const DiscreteTA& b;
    std::vector<std::vector<int>> adj_a;
    std::vector<std::vector<int>> adj_b;
    long long delay_cap;  // enumeration cap for Geq delays, in half units

    std::vector<std::pair<int, long long>> moves(const DiscreteTA& d,
                                                 const std::vector<std::vector<int>>& adj,
                                                 int loc, std::optional<ActionId> act) const {
        std::vector<std::pair<int, long long>> out;
        if (loc < 0) return out;
        for (int ei : adj[loc]) {
            const DiscEdge& e = d.edges[ei];
            if (act && e.action != *act) continue;
            if (e.guard.kind == GuardKind::EqInf) continue;
            long long hi = e.guard.kind == GuardKind::Eq ? e.guard.bound.halves
                                                         : e.guard.bound.halves + delay_cap;
            for (long long dl = e.guard.bound.halves; dl <= hi; ++dl) out.push_back({ei, dl});
        }
        return out;
    }

    // Value of the position for white, looking `depth` full plies ahead.
    long long eval(int aloc, int bloc, long long diff, int depth) const {
        if (depth == 0) return std::llabs(diff);
        long long best = std::llabs(diff);
        for (auto [aei, adl] : moves(a, adj_a, aloc, std::nullopt)) {
            const DiscEdge& ae = a.edges[aei];
            auto resp = moves(b, adj_b, bloc, ae.action);
            long long val;
            if (resp.empty()) {
                // No same-action reply; white escapes b's language entirely.
                val = std::numeric_limits<long long>::max() / 2;
            } else {
                val = std::numeric_limits<long long>::max();
                for (auto [bei, bdl] : resp)
                    val = std::min(val, eval(ae.target, b.edges[bei].target,
                                             diff + adl - bdl, depth - 1));
            }
            best = std::max(best, val);
        }
        return best;
    }
};

}  // namespace detail

// Heuristic lower bound on the conformance distance: white walks a trying to
// maximize the final time difference, black replies on b minimizing it, both
// committing one ply at a time with minimax evaluation `lookahead` plies
// deep. Every accepted prefix of white's walk is scored with the exact
// infimum against b, which keeps the result a sound lower bound no matter
// how the heuristic plays.
inline DistValue greedy_game(const DiscreteTA& a, const DiscreteTA& b, int lookahead,
                             int max_plies, long long budget = kDefaultBudget) {
    if (lookahead < 1) throw InvalidInput("lookahead must be >= 1");
    long long max_bound = 0;
    for (const auto& e : a.edges)
        if (e.guard.kind != GuardKind::EqInf) max_bound = std::max(max_bound, e.guard.bound.halves);
    for (const auto& e : b.edges)
        if (e.guard.kind != GuardKind::EqInf) max_bound = std::max(max_bound, e.guard.bound.halves);
    detail::GameCtx ctx{a, b, a.out_edges(), b.out_edges(), max_bound + 2};

    int aloc = a.initial, bloc = b.initial;
    long long diff = 0;
    DiscTrace tau;
    HalfTime now;
    long long best = -1;

    auto score_prefix = [&]() {
        if (!a.accepting.count(aloc)) return false;
        auto inf = disc_trace_inf(b, tau, budget);
        if (!inf) return true;  // accepted prefix with no same-word b trace
        best = std::max(best, *inf);
        return false;
    };
    if (score_prefix()) return DistValue::inf();

    for (int ply = 0; ply < max_plies; ++ply) {
        auto white = ctx.moves(a, ctx.adj_a, aloc, std::nullopt);
        if (white.empty()) break;

        // White commits to the move with the best lookahead value; ties go to
        // the smallest resulting |diff|, then the lexicographically least
        // action name.
        long long best_val = -1;
        int w_ei = -1;
        long long w_dl = 0, w_diff_after = 0;
        for (auto [ei, dl] : white) {
            const DiscEdge& e = a.edges[ei];
            auto resp = ctx.moves(b, ctx.adj_b, bloc, e.action);
            long long val, diff_after;
            if (resp.empty()) {
                val = std::numeric_limits<long long>::max() / 2;
                diff_after = diff + dl;
            } else {
                val = std::numeric_limits<long long>::max();
                diff_after = std::numeric_limits<long long>::max();
                for (auto [bei, bdl] : resp) {
                    long long d2 = diff + dl - bdl;
                    val = std::min(val, ctx.eval(e.target, b.edges[bei].target, d2, lookahead - 1));
                    diff_after = std::min(diff_after, std::llabs(d2));
                }
            }
            bool better = val > best_val;
            if (!better && val == best_val && w_ei >= 0) {
                if (std::llabs(diff_after) < std::llabs(w_diff_after))
                    better = true;
                else if (std::llabs(diff_after) == std::llabs(w_diff_after) &&
                         ctx.a.actions[e.action] < ctx.a.actions[ctx.a.edges[w_ei].action])
                    better = true;
            }
            if (better) {
                best_val = val;
                w_ei = ei;
                w_dl = dl;
                w_diff_after = diff_after;
            }
        }

        const DiscEdge& we = a.edges[w_ei];
        now = now + HalfTime(w_dl);
        tau.events.push_back({now, we.action});
        aloc = we.target;

        // Black commits to its minimizing reply.
        auto resp = ctx.moves(b, ctx.adj_b, bloc, we.action);
        if (resp.empty()) {
            bloc = -1;
            diff += w_dl;
        } else {
            long long b_val = std::numeric_limits<long long>::max();
            int b_ei = -1;
            long long b_dl = 0;
            for (auto [bei, bdl] : resp) {
                long long v = ctx.eval(aloc, b.edges[bei].target, diff + w_dl - bdl,
                                       lookahead - 1);
                long long after = std::llabs(diff + w_dl - bdl);
                bool better = b_ei < 0 || v < b_val ||
                              (v == b_val && after < std::llabs(diff + w_dl - b_dl));
                if (better) {
                    b_val = v;
                    b_ei = bei;
                    b_dl = bdl;
                }
            }
            bloc = b.edges[b_ei].target;
            diff = diff + w_dl - b_dl;
        }

        if (score_prefix()) return DistValue::inf();
    }
    return DistValue::half_units(std::max(best, 0LL));
}

}  // namespace tadist
