#pragma once

#include "tadist/errors.hpp"
#include "tadist/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tadist {

// Interned identifiers. Each automaton owns its name tables; ids are dense
// indices into them.
using ClockId = std::uint32_t;
using ActionId = std::uint32_t;
using LocationId = std::uint32_t;

enum class Rel { Lt, Le, Eq, Ge, Gt };

inline const char* rel_str(Rel r) {
    switch (r) {
        case Rel::Lt: return "<";
        case Rel::Le: return "<=";
        case Rel::Eq: return "=";
        case Rel::Ge: return ">=";
        case Rel::Gt: return ">";
    }
    return "?";
}

// One conjunct of a transition guard: clock ~ bound.
struct GuardAtom {
    ClockId clock = 0;
    Rel rel = Rel::Eq;
    int bound = 0;

    bool operator==(const GuardAtom&) const = default;
};

// Conjunction of atoms; an empty list is the guard "true".
struct Guard {
    std::vector<GuardAtom> atoms;

    bool operator==(const Guard&) const = default;
};

struct Transition {
    LocationId source = 0;
    ActionId action = 0;
    Guard guard;
    std::vector<ClockId> resets;  // sorted, unique
    LocationId target = 0;

    bool operator==(const Transition&) const = default;
};

// Non-deterministic timed automaton. Location invariants are not part of the
// model; they can always be folded into the guards of adjacent transitions.
struct TimedAutomaton {
    std::string name = "ta";
    std::vector<std::string> locations;
    std::vector<std::string> clocks;
    std::vector<std::string> actions;
    // Clocks with id < num_declared_clocks were declared; ids at or past it
    // were interned from guard/reset mentions and are flagged by validate().
    std::size_t num_declared_clocks = 0;
    LocationId initial = 0;
    std::set<LocationId> accepting;
    std::vector<Transition> transitions;

    // Largest integer bound appearing in any guard (0 if none).
    int max_const() const {
        int m = 0;
        for (const auto& t : transitions)
            for (const auto& a : t.guard.atoms) m = std::max(m, a.bound);
        return m;
    }

    std::optional<LocationId> location_id(const std::string& n) const {
        for (std::size_t i = 0; i < locations.size(); ++i)
            if (locations[i] == n) return static_cast<LocationId>(i);
        return std::nullopt;
    }
    std::optional<ActionId> action_id(const std::string& n) const {
        for (std::size_t i = 0; i < actions.size(); ++i)
            if (actions[i] == n) return static_cast<ActionId>(i);
        return std::nullopt;
    }
    std::optional<ClockId> clock_id(const std::string& n) const {
        for (std::size_t i = 0; i < clocks.size(); ++i)
            if (clocks[i] == n) return static_cast<ClockId>(i);
        return std::nullopt;
    }
};

// Valuation over exactly the automaton's clocks, indexed by ClockId.
struct ClockValuation {
    std::vector<Rational> values;

    static ClockValuation zero(std::size_t num_clocks) {
        ClockValuation v;
        v.values.assign(num_clocks, Rational(0));
        return v;
    }

    ClockValuation advanced(const Rational& d) const {
        ClockValuation v = *this;
        for (auto& x : v.values) x += d;
        return v;
    }

    ClockValuation with_resets(const std::vector<ClockId>& resets) const {
        ClockValuation v = *this;
        for (ClockId c : resets)
            if (c < v.values.size()) v.values[c] = Rational(0);
        return v;
    }

    bool operator==(const ClockValuation&) const = default;
};

struct State {
    LocationId location = 0;
    ClockValuation valuation;
};

struct TimedEvent {
    Rational time;  // absolute
    ActionId action = 0;

    bool operator==(const TimedEvent&) const = default;
};

struct TimedTrace {
    std::vector<TimedEvent> events;

    bool operator==(const TimedTrace&) const = default;
};

// A run is a sequence of (delay, transition index) steps from (q0, 0).
struct RunStep {
    Rational delay;
    std::size_t transition = 0;
};

struct Run {
    std::vector<RunStep> steps;
};

inline bool atom_satisfied(const GuardAtom& a, const Rational& v) {
    Rational b(a.bound);
    switch (a.rel) {
        case Rel::Lt: return v < b;
        case Rel::Le: return v <= b;
        case Rel::Eq: return v == b;
        case Rel::Ge: return v >= b;
        case Rel::Gt: return v > b;
    }
    return false;
}

inline bool satisfies(const ClockValuation& v, const Guard& g) {
    for (const auto& a : g.atoms) {
        if (a.clock >= v.values.size()) return false;
        if (!atom_satisfied(a, v.values[a.clock])) return false;
    }
    return true;
}

// True iff some nonnegative clock value satisfies all atoms of g that
// mention the same clock (atoms over distinct clocks are independent).
inline bool guard_satisfiable(const Guard& g) {
    std::map<ClockId, std::vector<GuardAtom>> per_clock;
    for (const auto& a : g.atoms) per_clock[a.clock].push_back(a);
    for (const auto& [c, atoms] : per_clock) {
        // Feasible interval [lo, hi] with strictness flags; clocks start at 0
        // and can take any nonnegative rational value.
        Rational lo(0), hi(0);
        bool has_hi = false, lo_strict = false, hi_strict = false;
        for (const auto& a : atoms) {
            Rational b(a.bound);
            switch (a.rel) {
                case Rel::Lt:
                    if (!has_hi || b < hi || (b == hi && !hi_strict)) { hi = b; hi_strict = true; }
                    has_hi = true;
                    break;
                case Rel::Le:
                    if (!has_hi || b < hi) { hi = b; hi_strict = false; }
                    has_hi = true;
                    break;
                case Rel::Eq:
                    if (b > lo) { lo = b; lo_strict = false; }
                    if (!has_hi || b < hi) { hi = b; hi_strict = false; }
                    has_hi = true;
                    break;
                case Rel::Ge:
                    if (b > lo) { lo = b; lo_strict = false; }
                    break;
                case Rel::Gt:
                    if (b > lo || (b == lo && !lo_strict)) { lo = b; lo_strict = true; }
                    break;
            }
        }
        if (has_hi && (lo > hi || (lo == hi && (lo_strict || hi_strict)))) return false;
    }
    return true;
}

// ============================================================================
// validate — diagnostics for broken TYPE invariants; does not throw
// ============================================================================

inline std::vector<std::string> validate(const TimedAutomaton& a) {
    std::vector<std::string> out;
    auto loc_ok = [&](LocationId q) { return q < a.locations.size(); };

    if (!loc_ok(a.initial)) out.push_back("initial location id out of range");
    for (LocationId q : a.accepting)
        if (!loc_ok(q))
            out.push_back("unknown location in accepting set: id " + std::to_string(q));

    auto dup = [](const std::vector<std::string>& names) {
        std::set<std::string> seen;
        for (const auto& n : names)
            if (!seen.insert(n).second) return true;
        return false;
    };
    if (dup(a.locations)) out.push_back("duplicate location name");
    if (dup(a.clocks)) out.push_back("duplicate clock name");
    if (dup(a.actions)) out.push_back("duplicate action name");

    for (std::size_t i = 0; i < a.transitions.size(); ++i) {
        const Transition& t = a.transitions[i];
        std::string at = "transition " + std::to_string(i) + ": ";
        if (!loc_ok(t.source)) out.push_back(at + "source location out of range");
        if (!loc_ok(t.target)) out.push_back(at + "target location out of range");
        if (t.action >= a.actions.size()) out.push_back(at + "unknown action");
        for (const auto& atom : t.guard.atoms) {
            if (atom.clock >= a.num_declared_clocks)
                out.push_back(at + "unknown clock in guard");
            if (atom.bound < 0) out.push_back(at + "negative guard bound");
        }
        for (ClockId c : t.resets)
            if (c >= a.num_declared_clocks) out.push_back(at + "unknown clock in resets");
        if (!guard_satisfiable(t.guard)) out.push_back(at + "guard unsatisfiable");
    }
    return out;
}

// ============================================================================
// step — one delay + one discrete transition
// ============================================================================

inline State step(const State& s, const Rational& delay, const Transition& tr) {
    if (delay < Rational(0)) throw InvalidInput("negative delay");
    if (tr.source != s.location)
        throw SourceMismatch("transition source does not match current location");
    ClockValuation advanced = s.valuation.advanced(delay);
    if (!satisfies(advanced, tr.guard))
        throw GuardViolation("guard not satisfied at transition time");
    return State{tr.target, advanced.with_resets(tr.resets)};
}

// ============================================================================
// accepts — does some run over A realize the trace exactly?
// ============================================================================

namespace detail {

inline bool accepts_from(const TimedAutomaton& a, const State& s, const TimedTrace& tau,
                         std::size_t i, const Rational& now) {
    if (i == tau.events.size()) return a.accepting.count(s.location) > 0;
    Rational delay = tau.events[i].time - now;
    if (delay < Rational(0)) return false;
    ClockValuation advanced = s.valuation.advanced(delay);
    for (const auto& tr : a.transitions) {
        if (tr.source != s.location || tr.action != tau.events[i].action) continue;
        if (!satisfies(advanced, tr.guard)) continue;
        State next{tr.target, advanced.with_resets(tr.resets)};
        if (accepts_from(a, next, tau, i + 1, tau.events[i].time)) return true;
    }
    return false;
}

}  // namespace detail

inline bool accepts(const TimedAutomaton& a, const TimedTrace& tau) {
    for (std::size_t i = 0; i < tau.events.size(); ++i) {
        if (tau.events[i].action >= a.actions.size())
            throw UnknownAction("trace uses action not in the automaton's alphabet");
        if (i > 0 && tau.events[i].time < tau.events[i - 1].time)
            throw InvalidInput("trace times must be weakly increasing");
    }
    State s{a.initial, ClockValuation::zero(a.clocks.size())};
    return detail::accepts_from(a, s, tau, 0, Rational(0));
}

// ============================================================================
// scale — multiply all guard bounds by k (time scaling t -> k*t)
// ============================================================================

inline TimedAutomaton scale(const TimedAutomaton& a, int k) {
    if (k < 1) throw InvalidInput("scale factor must be >= 1");
    TimedAutomaton out = a;
    for (auto& t : out.transitions)
        for (auto& atom : t.guard.atoms) atom.bound *= k;
    return out;
}

// ============================================================================
// Run helpers
// ============================================================================

inline TimedTrace trace_of(const TimedAutomaton& a, const Run& run) {
    TimedTrace tau;
    Rational now(0);
    for (const auto& st : run.steps) {
        now += st.delay;
        tau.events.push_back({now, a.transitions[st.transition].action});
    }
    return tau;
}

// Replays the run, throwing if any step is illegal; returns the final state.
inline State replay(const TimedAutomaton& a, const Run& run) {
    State s{a.initial, ClockValuation::zero(a.clocks.size())};
    for (const auto& st : run.steps) s = step(s, st.delay, a.transitions[st.transition]);
    return s;
}

inline bool run_ends_accepting(const TimedAutomaton& a, const Run& run) {
    return a.accepting.count(replay(a, run).location) > 0;
}

// Rewrites both automata onto the union of their action tables (A's actions
// first, then B's unseen ones). Language comparisons require a shared
// alphabet; locations and clocks stay per-automaton.
inline void merge_alphabets(TimedAutomaton& a, TimedAutomaton& b) {
    std::vector<std::string> merged = a.actions;
    std::vector<ActionId> remap(b.actions.size());
    for (std::size_t i = 0; i < b.actions.size(); ++i) {
        auto it = std::find(merged.begin(), merged.end(), b.actions[i]);
        if (it == merged.end()) {
            merged.push_back(b.actions[i]);
            remap[i] = static_cast<ActionId>(merged.size() - 1);
        } else {
            remap[i] = static_cast<ActionId>(it - merged.begin());
        }
    }
    for (auto& t : b.transitions) t.action = remap[t.action];
    a.actions = merged;
    b.actions = merged;
}

}  // namespace tadist
