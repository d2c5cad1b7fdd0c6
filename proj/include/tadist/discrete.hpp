#pragma once

#include "tadist/region.hpp"

#include <cassert>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace tadist {

// Exact time in half units: value() = halves/2.
struct HalfTime {
    long long halves = 0;

    constexpr HalfTime() = default;
    constexpr explicit HalfTime(long long h) : halves(h) {}
    static constexpr HalfTime whole(long long units) { return HalfTime(2 * units); }

    Rational value() const { return Rational(halves, 2); }
    auto operator<=>(const HalfTime&) const = default;
    HalfTime operator+(HalfTime o) const { return HalfTime(halves + o.halves); }
    HalfTime operator-(HalfTime o) const { return HalfTime(halves - o.halves); }

    std::string str() const {
        if (halves % 2 == 0) return std::to_string(halves / 2);
        return std::to_string(halves) + "/2";
    }
};

enum class GuardKind {
    Eq,     // t = bound
    Geq,    // t >= bound
    EqInf,  // t = infinity; only on barred edges added for the S1/S2 check
};

struct DiscreteGuard {
    GuardKind kind = GuardKind::Eq;
    HalfTime bound;

    auto operator<=>(const DiscreteGuard&) const = default;

    bool admits(HalfTime delay) const {
        switch (kind) {
            case GuardKind::Eq: return delay == bound;
            case GuardKind::Geq: return delay >= bound;
            case GuardKind::EqInf: return false;
        }
        return false;
    }

    std::string str() const {
        switch (kind) {
            case GuardKind::Eq: return "t=" + bound.str();
            case GuardKind::Geq: return "t>=" + bound.str();
            case GuardKind::EqInf: return "t=inf";
        }
        return "?";
    }
};

struct DiscEdge {
    int source = 0;
    ActionId action = 0;
    DiscreteGuard guard;
    int target = 0;

    auto operator<=>(const DiscEdge&) const = default;
};

// Single-clock automaton with the clock reset on every transition, so each
// guard constrains the delay since the previous event.
struct DiscreteTA {
    std::vector<std::string> locations;  // display labels; index is the id
    int initial = 0;
    std::set<int> accepting;
    std::vector<DiscEdge> edges;
    std::vector<std::string> actions;
    // Actions with id >= num_base_actions are barred copies (divergence
    // analysis only); equal to actions.size() when no bars were added.
    std::size_t num_base_actions = 0;

    bool is_barred(ActionId a) const { return a >= num_base_actions; }

    std::vector<std::vector<int>> out_edges() const {
        std::vector<std::vector<int>> out(locations.size());
        for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].source].push_back(int(i));
        return out;
    }
};

// Trace of a discretized automaton: absolute times on the half-unit grid.
struct DiscEventHalf {
    HalfTime time;  // absolute
    ActionId action = 0;

    auto operator<=>(const DiscEventHalf&) const = default;
};

struct DiscTrace {
    std::vector<DiscEventHalf> events;

    auto operator<=>(const DiscTrace&) const = default;

    std::string str(const std::vector<std::string>& action_names) const {
        std::string s;
        for (std::size_t i = 0; i < events.size(); ++i) {
            if (i > 0) s += ",";
            s += "(" + events[i].time.str() + "," + action_names[events[i].action] + ")";
        }
        return s;
    }
};

// ============================================================================
// delta — the half-unit correction term of the discretized guard
// ============================================================================

// Returns the correction in half units: (ceil of target t-fraction) minus
// (ceil of source t-fraction), where the ceiling of the fraction is 0 on the
// zero block and 1 on (0,1).
inline int delta_half(bool source_frac_zero, bool target_frac_zero) {
    return (target_frac_zero ? 0 : 1) - (source_frac_zero ? 0 : 1);
}

// ============================================================================
// discretize — same graph as the region automaton, guards from weight + delta
// ============================================================================

inline DiscreteTA discretize(const AugRegionAutomaton& ra) {
    DiscreteTA d;
    d.actions = ra.actions;
    d.num_base_actions = ra.actions.size();
    d.initial = 0;
    d.locations.reserve(ra.vertices.size());
    for (std::size_t v = 0; v < ra.vertices.size(); ++v) {
        d.locations.push_back("v" + std::to_string(v));
        if (ra.accepting[v]) d.accepting.insert(int(v));
    }
    for (const AugEdge& e : ra.edges) {
        int dh = delta_half(ra.vertices[e.source].region.t_frac_zero(),
                            ra.vertices[e.target].region.t_frac_zero());
        long long bound = 2LL * e.weight + dh;
        // weight 0 forces the source fraction at or below the target's, so
        // the bound can never go negative.
        assert(bound >= 0);
        DiscreteGuard g{e.starred ? GuardKind::Geq : GuardKind::Eq, HalfTime(bound)};
        d.edges.push_back({e.source, e.action, g, e.target});
    }
    return d;
}

// ============================================================================
// trace acceptance (works for deterministic and non-deterministic inputs)
// ============================================================================

inline bool accepts_disc(const DiscreteTA& d, const DiscTrace& tau) {
    auto out = d.out_edges();
    std::set<int> current{d.initial};
    HalfTime now;
    for (const auto& ev : tau.events) {
        if (ev.action >= d.actions.size())
            throw UnknownAction("trace uses action not in the automaton's alphabet");
        HalfTime delay = ev.time - now;
        if (delay.halves < 0) throw InvalidInput("trace times must be weakly increasing");
        std::set<int> next;
        for (int loc : current)
            for (int ei : out[loc]) {
                const DiscEdge& e = d.edges[ei];
                if (e.action == ev.action && e.guard.admits(delay)) next.insert(e.target);
            }
        if (next.empty()) return false;
        current = std::move(next);
        now = ev.time;
    }
    for (int loc : current)
        if (d.accepting.count(loc)) return true;
    return false;
}

inline std::set<std::vector<ActionId>> untimed_words_upto(const DiscreteTA& d, int n) {
    std::set<std::vector<ActionId>> words;
    auto out = d.out_edges();
    std::map<std::vector<ActionId>, std::set<int>> frontier;
    frontier[{}] = {d.initial};
    for (int len = 0; len <= n; ++len) {
        std::map<std::vector<ActionId>, std::set<int>> next;
        for (const auto& [word, locs] : frontier) {
            for (int v : locs)
                if (d.accepting.count(v)) {
                    words.insert(word);
                    break;
                }
            if (len == n) continue;
            for (int v : locs)
                for (int ei : out[v]) {
                    auto w = word;
                    w.push_back(d.edges[ei].action);
                    next[std::move(w)].insert(d.edges[ei].target);
                }
        }
        frontier = std::move(next);
    }
    return words;
}

// ============================================================================
// determinize — subset construction over (action, delay) behavior
// ============================================================================

namespace detail {

inline std::string subset_label(const std::vector<int>& subset) {
    std::string s = "{";
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (i > 0) s += ",";
        s += std::to_string(subset[i]);
    }
    return s + "}";
}

}  // namespace detail

// Splits Geq edges against every Eq bound so that the successor of a subset
// is a function of the concrete delay: point guards are emitted for each
// delay up to the last breakpoint whose successor differs from the common
// tail, then a single Geq covers the tail.
inline DiscreteTA determinize(const DiscreteTA& in) {
    for (const auto& e : in.edges)
        if (e.guard.kind == GuardKind::EqInf)
            throw InvalidInput("determinize does not accept bar-extended automata");

    auto out_in = in.out_edges();

    DiscreteTA d;
    d.actions = in.actions;
    d.num_base_actions = in.num_base_actions;
    d.initial = 0;

    std::map<std::vector<int>, int> index;
    std::queue<std::vector<int>> work;
    auto subset_id = [&](std::vector<int> subset) {
        auto it = index.find(subset);
        if (it != index.end()) return it->second;
        int id = int(d.locations.size());
        d.locations.push_back(detail::subset_label(subset));
        for (int loc : subset)
            if (in.accepting.count(loc)) {
                d.accepting.insert(id);
                break;
            }
        index.emplace(subset, id);
        work.push(std::move(subset));
        return id;
    };

    subset_id({in.initial});
    while (!work.empty()) {
        std::vector<int> subset = work.front();
        work.pop();
        int src = index[subset];

        std::set<ActionId> acts;
        for (int loc : subset)
            for (int ei : out_in[loc]) acts.insert(in.edges[ei].action);

        for (ActionId act : acts) {
            std::vector<const DiscEdge*> eqs, geqs;
            for (int loc : subset)
                for (int ei : out_in[loc]) {
                    const DiscEdge& e = in.edges[ei];
                    if (e.action != act) continue;
                    (e.guard.kind == GuardKind::Eq ? eqs : geqs).push_back(&e);
                }

            auto succ_at = [&](HalfTime delay) {
                std::set<int> s;
                for (const DiscEdge* e : eqs)
                    if (e->guard.bound == delay) s.insert(e->target);
                for (const DiscEdge* e : geqs)
                    if (e->guard.bound <= delay) s.insert(e->target);
                return std::vector<int>(s.begin(), s.end());
            };

            // Far tail: all Geq edges enabled.
            std::set<int> tail_set;
            for (const DiscEdge* e : geqs) tail_set.insert(e->target);
            std::vector<int> tail(tail_set.begin(), tail_set.end());

            HalfTime top;
            for (const DiscEdge* e : eqs) top = std::max(top, e->guard.bound);
            for (const DiscEdge* e : geqs) top = std::max(top, e->guard.bound);

            // Smallest threshold from which the successor equals the tail.
            HalfTime split(top.halves + 1);
            while (!geqs.empty() && split.halves > 0 &&
                   succ_at(HalfTime(split.halves - 1)) == tail)
                split = HalfTime(split.halves - 1);

            for (HalfTime dly; dly < split; dly = HalfTime(dly.halves + 1)) {
                auto s = succ_at(dly);
                if (s.empty()) continue;
                d.edges.push_back({src, act, {GuardKind::Eq, dly}, subset_id(std::move(s))});
            }
            if (!geqs.empty())
                d.edges.push_back({src, act, {GuardKind::Geq, split}, subset_id(tail)});
        }
    }
    return d;
}

// True iff no two edges from the same location with the same action can fire
// on the same delay.
inline bool is_deterministic(const DiscreteTA& d) {
    auto out = d.out_edges();
    for (std::size_t loc = 0; loc < d.locations.size(); ++loc) {
        for (std::size_t i = 0; i < out[loc].size(); ++i)
            for (std::size_t j = i + 1; j < out[loc].size(); ++j) {
                const DiscEdge& a = d.edges[out[loc][i]];
                const DiscEdge& b = d.edges[out[loc][j]];
                if (a.action != b.action) continue;
                if (a.guard.kind == GuardKind::EqInf || b.guard.kind == GuardKind::EqInf)
                    continue;
                bool a_eq = a.guard.kind == GuardKind::Eq;
                bool b_eq = b.guard.kind == GuardKind::Eq;
                if (a_eq && b_eq) {
                    if (a.guard.bound == b.guard.bound) return false;
                } else if (a_eq != b_eq) {
                    const DiscreteGuard& eq = a_eq ? a.guard : b.guard;
                    const DiscreteGuard& ge = a_eq ? b.guard : a.guard;
                    if (eq.bound >= ge.bound) return false;
                } else {
                    return false;  // two Geq ranges always overlap in the tail
                }
            }
    }
    return true;
}

// ============================================================================
// project_trace — the half-unit projection of a concrete run's trace
// ============================================================================

// Integral event times are kept; a time n + eps with 0 < eps < 1 maps to
// n + 1/2.
inline HalfTime project_time(const Rational& t) {
    long long n = floor_of(t);
    if (frac_of(t) == Rational(0)) return HalfTime::whole(n);
    return HalfTime(2 * n + 1);
}

inline DiscTrace project_trace(const TimedAutomaton& a, const Run& run) {
    replay(a, run);  // throws if the run is not valid on a
    DiscTrace out;
    Rational now(0);
    for (const auto& st : run.steps) {
        now += st.delay;
        out.events.push_back({project_time(now), a.transitions[st.transition].action});
    }
    return out;
}

}  // namespace tadist
