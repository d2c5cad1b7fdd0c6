#pragma once

#include "tadist/distance.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tadist {

// Action possibly from the barred copy of the alphabet. Barred actions stand
// for transitions that are unbounded in time.
struct BarAction {
    ActionId base = 0;
    bool barred = false;

    auto operator<=>(const BarAction&) const = default;
};

inline std::string bar_action_str(const BarAction& a, const std::vector<std::string>& names) {
    return names[a.base] + (a.barred ? "~" : "");
}

// ============================================================================
// bar_extend — add a barred, time-unbounded copy of every Geq edge
// ============================================================================

inline DiscreteTA bar_extend(const DiscreteTA& x) {
    if (x.num_base_actions != x.actions.size())
        throw InvalidInput("bar_extend: input already carries barred actions");
    DiscreteTA out = x;
    for (const auto& n : x.actions) out.actions.push_back(n + "~");
    for (const auto& e : x.edges) {
        if (e.guard.kind != GuardKind::Geq) continue;
        out.edges.push_back({e.source, ActionId(e.action + x.num_base_actions),
                             {GuardKind::EqInf, HalfTime(0)}, e.target});
    }
    return out;
}

// ============================================================================
// complete_with_sink — make the untimed view action-complete
// ============================================================================

inline DiscreteTA complete_with_sink(const DiscreteTA& x) {
    DiscreteTA out = x;
    int sink = int(out.locations.size());
    out.locations.push_back("sink");
    for (int loc = 0; loc <= sink; ++loc) {
        for (ActionId act = 0; act < out.actions.size(); ++act) {
            bool found = false;
            for (const auto& e : x.edges)
                if (e.source == loc && e.action == act) {
                    found = true;
                    break;
                }
            if (!found)
                out.edges.push_back({loc, act, {GuardKind::Geq, HalfTime(0)}, sink});
        }
    }
    return out;
}

// ============================================================================
// untimed_determinize — subset DFA over actions, time ignored
// ============================================================================

struct UntimedDfa {
    std::vector<std::vector<int>> states;  // sorted subsets of the input's locations
    int initial = 0;
    std::set<int> accepting;
    std::map<std::pair<int, ActionId>, int> trans;
    std::vector<std::string> actions;
    std::size_t num_base_actions = 0;
};

inline UntimedDfa untimed_determinize(const DiscreteTA& x) {
    UntimedDfa u;
    u.actions = x.actions;
    u.num_base_actions = x.num_base_actions;
    auto adj = x.out_edges();

    std::map<std::vector<int>, int> index;
    std::deque<int> work;
    auto state_id = [&](std::vector<int> subset) {
        auto it = index.find(subset);
        if (it != index.end()) return it->second;
        int id = int(u.states.size());
        for (int loc : subset)
            if (x.accepting.count(loc)) {
                u.accepting.insert(id);
                break;
            }
        u.states.push_back(subset);
        index.emplace(std::move(subset), id);
        work.push_back(id);
        return id;
    };
    state_id({x.initial});
    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        std::vector<int> subset = u.states[id];
        std::map<ActionId, std::set<int>> next;
        for (int loc : subset)
            for (int ei : adj[loc]) next[x.edges[ei].action].insert(x.edges[ei].target);
        for (auto& [act, tgts] : next)
            u.trans[{id, act}] = state_id(std::vector<int>(tgts.begin(), tgts.end()));
    }
    return u;
}

// Accepted action words of the DFA, length <= n.
inline std::set<std::vector<ActionId>> untimed_words_upto(const UntimedDfa& u, int n) {
    std::set<std::vector<ActionId>> words;
    std::map<std::vector<ActionId>, int> frontier{{{}, u.initial}};
    for (int len = 0; len <= n; ++len) {
        std::map<std::vector<ActionId>, int> next;
        for (const auto& [word, st] : frontier) {
            if (u.accepting.count(st)) words.insert(word);
            if (len == n) continue;
            for (ActionId a = 0; a < u.actions.size(); ++a) {
                auto it = u.trans.find({st, a});
                if (it == u.trans.end()) continue;
                auto w = word;
                w.push_back(a);
                next[std::move(w)] = it->second;
            }
        }
        frontier = std::move(next);
    }
    return words;
}

// ============================================================================
// s12_check — infinite distance from a missing word (S1) or from an
// unbounded-vs-bounded final transition (S2)
// ============================================================================

struct S12Result {
    bool infinite = false;
    std::vector<ActionId> witness_word;  // over the bar-extended alphabet
};

inline S12Result s12_check(const DiscreteTA& a, const DiscreteTA& b) {
    if (a.actions != b.actions)
        throw InvalidInput("s12_check requires automata over a shared alphabet");
    UntimedDfa ua = untimed_determinize(bar_extend(a));
    UntimedDfa ub = untimed_determinize(complete_with_sink(bar_extend(b)));

    struct Node {
        int qa, qb;
        auto operator<=>(const Node&) const = default;
    };
    std::map<Node, int> index;
    std::vector<Node> nodes;
    std::vector<std::pair<int, ActionId>> parent;  // (prev id, action)
    std::deque<int> queue;
    auto push = [&](Node n, int prev, ActionId act) {
        if (index.count(n)) return;
        index[n] = int(nodes.size());
        nodes.push_back(n);
        parent.push_back({prev, act});
        queue.push_back(int(nodes.size()) - 1);
    };
    push({ua.initial, ub.initial}, -1, 0);

    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        Node n = nodes[id];
        if (ua.accepting.count(n.qa) && !ub.accepting.count(n.qb)) {
            std::vector<ActionId> word;
            for (int cur = id; parent[cur].first >= 0; cur = parent[cur].first)
                word.push_back(parent[cur].second);
            std::reverse(word.begin(), word.end());
            return {true, word};
        }
        for (ActionId act = 0; act < ua.actions.size(); ++act) {
            auto ita = ua.trans.find({n.qa, act});
            if (ita == ua.trans.end()) continue;
            auto itb = ub.trans.find({n.qb, act});
            if (itb == ub.trans.end()) continue;  // cannot happen: ub is complete
            push({ita->second, itb->second}, id, act);
        }
    }
    return {false, {}};
}

// ============================================================================
// expand_delays — replace Geq guards by a concrete delay fan plus a barred,
// starred (M+1) edge
// ============================================================================

struct ExEdge {
    int source = 0;
    ActionId action = 0;
    bool barred = false;
    long long delay_halves = 0;
    bool starred = false;  // delay stands for (M+1), (M+1)+1/2, ...
    int target = 0;

    auto operator<=>(const ExEdge&) const = default;
};

struct ExpandedTA {
    std::vector<std::string> locations;
    int initial = 0;
    std::set<int> accepting;
    std::vector<ExEdge> edges;
    std::vector<std::string> actions;  // base alphabet; bars are the flag
    long long star_delay_halves = 0;   // 2*(M+1)

    std::vector<std::vector<int>> out_edges() const {
        std::vector<std::vector<int>> out(locations.size());
        for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].source].push_back(int(i));
        return out;
    }
};

// m_units must be the largest integer appearing in the guards of the two
// automata under analysis (floor of the largest bound).
inline ExpandedTA expand_delays(const DiscreteTA& x, int m_units) {
    ExpandedTA out;
    out.locations = x.locations;
    out.initial = x.initial;
    out.accepting = x.accepting;
    out.actions = x.actions;
    out.star_delay_halves = 2LL * (m_units + 1);
    const long long top = 2LL * m_units + 1;  // M + 1/2 in halves
    for (const auto& e : x.edges) {
        switch (e.guard.kind) {
            case GuardKind::Eq:
                out.edges.push_back({e.source, e.action, false, e.guard.bound.halves, false,
                                     e.target});
                break;
            case GuardKind::Geq: {
                if (e.guard.bound.halves > top)
                    throw InvalidInput("expand_delays: Geq bound exceeds M + 1/2");
                for (long long d = e.guard.bound.halves; d <= top; ++d)
                    out.edges.push_back({e.source, e.action, false, d, false, e.target});
                out.edges.push_back({e.source, e.action, true, out.star_delay_halves, true,
                                     e.target});
                break;
            }
            case GuardKind::EqInf:
                throw InvalidInput("expand_delays: input must not be bar-extended");
        }
    }
    return out;
}

// ============================================================================
// delay_determinize — subset construction per action, keeping the set E of
// underlying edges on each transition
// ============================================================================

struct DelayDetTransition {
    BarAction action;
    std::vector<ExEdge> underlying;  // E: every matching edge of the input
    int target = 0;                  // target state id
};

struct DelayDetTA {
    std::vector<std::vector<int>> states;  // sorted subsets of input locations
    int initial = 0;
    std::set<int> accepting;
    std::vector<std::vector<DelayDetTransition>> trans;  // per state, action-sorted
    std::vector<std::string> actions;
    long long star_delay_halves = 0;
};

inline DelayDetTA delay_determinize(const ExpandedTA& x) {
    DelayDetTA d;
    d.actions = x.actions;
    d.star_delay_halves = x.star_delay_halves;
    auto adj = x.out_edges();

    std::map<std::vector<int>, int> index;
    std::deque<int> work;
    auto state_id = [&](std::vector<int> subset) {
        auto it = index.find(subset);
        if (it != index.end()) return it->second;
        int id = int(d.states.size());
        for (int loc : subset)
            if (x.accepting.count(loc)) {
                d.accepting.insert(id);
                break;
            }
        d.states.push_back(subset);
        d.trans.emplace_back();
        index.emplace(std::move(subset), id);
        work.push_back(id);
        return id;
    };
    state_id({x.initial});
    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        std::vector<int> subset = d.states[id];
        std::map<BarAction, std::vector<ExEdge>> grouped;
        for (int loc : subset)
            for (int ei : adj[loc])
                grouped[{x.edges[ei].action, x.edges[ei].barred}].push_back(x.edges[ei]);
        for (auto& [act, edges] : grouped) {
            std::set<int> tgts;
            for (const auto& e : edges) tgts.insert(e.target);
            std::sort(edges.begin(), edges.end());
            int tgt = state_id(std::vector<int>(tgts.begin(), tgts.end()));
            d.trans[id].push_back({act, std::move(edges), tgt});
        }
    }
    return d;
}

// ============================================================================
// accumulated time differences
// ============================================================================

// One tracked difference in half units. marks > 0 means the value stands for
// any member of {base, base+1/2, base+1, ...}. Bases are clamped to
// [-sat, sat]; a magnitude of exactly sat marks a value that left the bounded
// range and keeps drifting.
struct AtdValue {
    long long base = 0;
    int marks = 0;

    auto operator<=>(const AtdValue&) const = default;
};

inline constexpr int kMaxMarks = 8;

inline AtdValue atd_shift(const AtdValue& v, long long delta_halves, long long sat) {
    if (v.marks == 0 && (v.base >= sat || v.base <= -sat)) return v;  // absorbing
    long long nb = v.base + delta_halves;
    nb = std::clamp(nb, -sat, sat);
    return {nb, v.marks};
}

inline AtdValue atd_add_mark(const AtdValue& v) {
    return {v.base, std::min(v.marks + 1, kMaxMarks)};
}

// Realizes one plus mark as a concrete extra delay j >= 0.
inline AtdValue atd_realize(const AtdValue& v, long long j_halves, long long sat) {
    if (v.marks == 0) throw InvalidInput("atd_realize: value has no mark");
    if (j_halves < 0) throw InvalidInput("atd_realize: realized delay must be >= 0");
    AtdValue out{v.base, v.marks - 1};
    return atd_shift(out, j_halves, sat);
}

// Smallest achievable |value| among the values this AtdValue stands for.
inline long long atd_min_abs(const AtdValue& v) {
    if (v.marks > 0) return v.base <= 0 ? 0 : v.base;
    return v.base < 0 ? -v.base : v.base;
}

// A value是 still bounded if it has not drifted past the saturation range;
// marked values with nonpositive base can always realize to 0.
inline bool atd_bounded(const AtdValue& v, long long sat) {
    if (v.marks > 0) return v.base < sat;
    return v.base > -sat && v.base < sat;
}

struct AtdSet {
    std::vector<AtdValue> values;  // sorted, unique

    void insert(const AtdValue& v) {
        auto it = std::lower_bound(values.begin(), values.end(), v);
        if (it == values.end() || *it != v) values.insert(it, v);
    }
    bool operator==(const AtdSet&) const = default;
    auto operator<=>(const AtdSet&) const = default;
};

// Per-sublocation ATD sets at a product location of A-expanded x D(B).
struct AtdAnnotatedLocation {
    std::vector<int> sublocs;  // sorted B locations of the D(B) state
    std::vector<AtdSet> atds;  // parallel to sublocs

    bool operator==(const AtdAnnotatedLocation&) const = default;
    auto operator<=>(const AtdAnnotatedLocation&) const = default;
};

// One synchronized step: subtract the A edge's delay from each underlying B
// delay and push every source value to the corresponding target sublocation.
// Two starred delays差 contribute a plus mark on an unchanged base; a starred
// delay against a concrete one is pinned to M+1 on the A side, and to
// (M+1)-or-more on the B side.
inline AtdAnnotatedLocation atd_step(const AtdAnnotatedLocation& loc, const ExEdge& a_edge,
                                     const DelayDetTransition& dt, long long star_delay_halves,
                                     long long sat) {
    if (dt.action.base != a_edge.action || dt.action.barred != a_edge.barred)
        throw NoMatchingEdge("atd_step: D(B) transition action does not match the A edge");

    std::set<int> tgt_set;
    for (const auto& e : dt.underlying) tgt_set.insert(e.target);
    AtdAnnotatedLocation out;
    out.sublocs.assign(tgt_set.begin(), tgt_set.end());
    out.atds.resize(out.sublocs.size());
    auto pos_of = [](const std::vector<int>& v, int x) {
        return int(std::lower_bound(v.begin(), v.end(), x) - v.begin());
    };

    for (const auto& e : dt.underlying) {
        int from = pos_of(loc.sublocs, e.source);
        if (from >= int(loc.sublocs.size()) || loc.sublocs[from] != e.source) continue;
        int to = pos_of(out.sublocs, e.target);
        for (const AtdValue& v : loc.atds[from].values) {
            AtdValue nv;
            if (a_edge.starred && e.starred) {
                nv = atd_add_mark(v);
            } else {
                long long da = a_edge.starred ? star_delay_halves : a_edge.delay_halves;
                long long db = e.starred ? star_delay_halves : e.delay_halves;
                nv = atd_shift(v, db - da, sat);
                if (e.starred) nv = atd_add_mark(nv);
            }
            out.atds[to].insert(nv);
        }
    }
    return out;
}

// ============================================================================
// s3_check — unbounded time drift over power cycles
// ============================================================================

struct S3Limits {
    int max_cycles = 8192;
    int max_configs = 50000;
    int max_pump_iters = 512;
    int max_set_size = 96;
    long long node_budget = 5'000'000;
};

struct S3Result {
    bool infinite = false;
    std::string scheme;  // rho0 (sigma1)* rho1 ... for the infinite case
};

// ============================================================================
// the product of an expanded A against D(B)
// ============================================================================

struct ProdEdge {
    int source = 0;
    int a_edge = 0;  // index into the expanded A edge list
    int dtrans = 0;  // index into trans[dstate of source]
    int target = 0;
};

struct Product {
    std::vector<std::pair<int, int>> nodes;  // (A location, D(B) state)
    std::vector<ProdEdge> edges;
    std::vector<std::vector<int>> out;
    int initial = 0;
};

inline Product build_product(const ExpandedTA& a, const DelayDetTA& db) {
    Product p;
    std::map<std::pair<int, int>, int> index;
    std::deque<int> work;
    auto adj_a = a.out_edges();
    auto node_id = [&](int al, int ds) {
        auto key = std::make_pair(al, ds);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = int(p.nodes.size());
        p.nodes.push_back(key);
        p.out.emplace_back();
        index.emplace(key, id);
        work.push_back(id);
        return id;
    };
    node_id(a.initial, db.initial);
    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        auto [al, ds] = p.nodes[id];
        for (int aei : adj_a[al]) {
            const ExEdge& ae = a.edges[aei];
            for (std::size_t ti = 0; ti < db.trans[ds].size(); ++ti) {
                const DelayDetTransition& dt = db.trans[ds][ti];
                if (dt.action.base != ae.action || dt.action.barred != ae.barred) continue;
                int tgt = node_id(ae.target, dt.target);
                p.edges.push_back({id, aei, int(ti), tgt});
                p.out[id].push_back(int(p.edges.size()) - 1);
                break;  // transitions are per action; at most one matches
            }
        }
    }
    return p;
}

namespace detail {

inline void prune_atd_state(AtdAnnotatedLocation& st, int max_set_size) {
    for (auto& s : st.atds) {
        if (int(s.values.size()) <= max_set_size) continue;
        std::sort(s.values.begin(), s.values.end(), [](const AtdValue& x, const AtdValue& y) {
            auto kx = std::make_tuple(atd_min_abs(x), x.base, x.marks);
            auto ky = std::make_tuple(atd_min_abs(y), y.base, y.marks);
            return kx < ky;
        });
        s.values.resize(max_set_size);
        std::sort(s.values.begin(), s.values.end());
    }
}

inline bool all_sublocs_unbounded(const AtdAnnotatedLocation& st, long long sat) {
    if (st.sublocs.empty()) return false;
    for (const auto& s : st.atds) {
        if (s.values.empty()) return false;
        for (const AtdValue& v : s.values)
            if (atd_bounded(v, sat)) return false;
    }
    return true;
}

// Enumerates simple cycles of the product graph as edge-index sequences; each
// cycle is reported once, anchored at its smallest node id.
inline std::vector<std::vector<int>> simple_cycles(const Product& p, int max_cycles) {
    std::vector<std::vector<int>> cycles;
    std::vector<int> path_edges;
    std::vector<bool> on_path(p.nodes.size(), false);

    auto dfs = [&](auto&& self, int start, int node) -> void {
        for (int ei : p.out[node]) {
            int tgt = p.edges[ei].target;
            if (tgt == start) {
                path_edges.push_back(ei);
                cycles.push_back(path_edges);
                path_edges.pop_back();
                if (int(cycles.size()) > max_cycles)
                    throw BudgetExceeded("s3_check: too many simple cycles");
                continue;
            }
            if (tgt < start || on_path[tgt]) continue;
            on_path[tgt] = true;
            path_edges.push_back(ei);
            self(self, start, tgt);
            path_edges.pop_back();
            on_path[tgt] = false;
        }
    };
    for (int s = 0; s < int(p.nodes.size()); ++s) {
        on_path[s] = true;
        dfs(dfs, s, s);
        on_path[s] = false;
    }
    return cycles;
}

}  // namespace detail

inline S3Result s3_check(const DiscreteTA& a, const DiscreteTA& b, int k,
                         const S3Limits& limits = {}) {
    if (k < 1) throw InvalidInput("s3_check requires K >= 1");
    if (a.actions != b.actions)
        throw InvalidInput("s3_check requires automata over a shared alphabet");

    int m_units = 0;
    for (const auto& e : a.edges)
        if (e.guard.kind != GuardKind::EqInf)
            m_units = std::max(m_units, int(e.guard.bound.halves / 2));
    for (const auto& e : b.edges)
        if (e.guard.kind != GuardKind::EqInf)
            m_units = std::max(m_units, int(e.guard.bound.halves / 2));

    ExpandedTA aexp = expand_delays(a, m_units);
    ExpandedTA bexp = expand_delays(b, m_units);
    DelayDetTA db = delay_determinize(bexp);
    Product prod = build_product(aexp, db);

    const long long lm = static_cast<long long>(prod.nodes.size()) * (m_units + 1);
    const long long sat = 2 * lm + 8LL * (m_units + 2) + 16;
    long long budget = limits.node_budget;

    auto state_of = [&](int node) {
        AtdAnnotatedLocation st;
        st.sublocs = db.states[prod.nodes[node].second];
        st.atds.resize(st.sublocs.size());
        return st;
    };
    auto step_edge = [&](const AtdAnnotatedLocation& st, const ProdEdge& pe) {
        const ExEdge& ae = aexp.edges[pe.a_edge];
        const DelayDetTransition& dt = db.trans[prod.nodes[pe.source].second][pe.dtrans];
        AtdAnnotatedLocation ns = atd_step(st, ae, dt, db.star_delay_halves, sat);
        detail::prune_atd_state(ns, limits.max_set_size);
        return ns;
    };

    // Action word of a sequence of product edges, for reporting.
    auto word_of = [&](const std::vector<int>& edge_ids) {
        std::string w;
        for (std::size_t i = 0; i < edge_ids.size(); ++i) {
            const ExEdge& ae = aexp.edges[prod.edges[edge_ids[i]].a_edge];
            if (i > 0) w += " ";
            w += bar_action_str({ae.action, ae.barred}, aexp.actions);
        }
        return w;
    };

    // Forward value-flow fixpoint: per node, the union over all incoming
    // paths of the per-sublocation ATD sets.
    std::vector<AtdAnnotatedLocation> fwd(prod.nodes.size());
    for (std::size_t i = 0; i < prod.nodes.size(); ++i) fwd[i] = state_of(int(i));
    // The initial D(B) state is the singleton {B's initial location}; the runs
    // start with a time difference of 0.
    fwd[prod.initial].atds[0].insert({0, 0});
    {
        std::deque<int> work{prod.initial};
        std::set<int> queued{prod.initial};
        while (!work.empty()) {
            detail::spend(budget, "s3_check fixpoint");
            int node = work.front();
            work.pop_front();
            queued.erase(node);
            for (int ei : prod.out[node]) {
                const auto& pe = prod.edges[ei];
                AtdAnnotatedLocation ns = step_edge(fwd[node], pe);
                AtdAnnotatedLocation& cur = fwd[pe.target];
                bool changed = false;
                for (std::size_t s = 0; s < ns.sublocs.size(); ++s)
                    for (const AtdValue& v : ns.atds[s].values) {
                        std::size_t before = cur.atds[s].values.size();
                        cur.atds[s].insert(v);
                        changed |= cur.atds[s].values.size() != before;
                    }
                if (changed) {
                    detail::prune_atd_state(cur, limits.max_set_size);
                    if (queued.insert(pe.target).second) work.push_back(pe.target);
                }
            }
        }
    }

    auto cycles = detail::simple_cycles(prod, limits.max_cycles);
    std::vector<std::vector<int>> cycles_at(prod.nodes.size());
    for (std::size_t c = 0; c < cycles.size(); ++c)
        cycles_at[prod.edges[cycles[c].front()].source].push_back(int(c));

    // Pump a cycle to stability by iterating its composed transform until the
    // state repeats, then keep the repeating window's final state.
    auto pump = [&](const AtdAnnotatedLocation& start, const std::vector<int>& cycle)
        -> std::optional<AtdAnnotatedLocation> {
        std::map<AtdAnnotatedLocation, int> seen;
        AtdAnnotatedLocation st = start;
        for (int it = 0; it < limits.max_pump_iters; ++it) {
            if (seen.count(st)) return st;
            seen.emplace(st, it);
            for (int ei : cycle) st = step_edge(st, prod.edges[ei]);
        }
        return std::nullopt;  // did not stabilize within the window
    };

    struct Config {
        int node;
        AtdAnnotatedLocation state;
        std::string scheme;
    };

    // Shortest action word from the initial product node, for rho0.
    auto prefix_word = [&](int node) {
        std::vector<int> prev_edge(prod.nodes.size(), -1);
        std::vector<int> prev_node(prod.nodes.size(), -1);
        std::vector<bool> seen(prod.nodes.size(), false);
        std::deque<int> q{prod.initial};
        seen[prod.initial] = true;
        while (!q.empty()) {
            int n = q.front();
            q.pop_front();
            for (int ei : prod.out[n]) {
                int t = prod.edges[ei].target;
                if (seen[t]) continue;
                seen[t] = true;
                prev_edge[t] = ei;
                prev_node[t] = n;
                q.push_back(t);
            }
        }
        std::vector<int> path;
        for (int cur = node; prev_edge[cur] >= 0; cur = prev_node[cur])
            path.push_back(prev_edge[cur]);
        std::reverse(path.begin(), path.end());
        return word_of(path);
    };

    std::set<std::pair<int, AtdAnnotatedLocation>> visited;
    std::vector<Config> frontier;
    for (std::size_t n = 0; n < prod.nodes.size(); ++n) {
        if (fwd[n].atds.empty()) continue;
        bool reached = false;
        for (const auto& s : fwd[n].atds)
            if (!s.values.empty()) reached = true;
        if (!reached) continue;
        if (detail::all_sublocs_unbounded(fwd[n], sat))
            return {true, prefix_word(int(n))};
        frontier.push_back({int(n), fwd[n], prefix_word(int(n))});
        visited.insert({int(n), fwd[n]});
    }

    for (int phase = 0; phase < k; ++phase) {
        std::vector<Config> pumped_configs;
        for (const Config& cfg : frontier) {
            for (int ci : cycles_at[cfg.node]) {
                detail::spend(budget, "s3_check pump");
                auto res = pump(cfg.state, cycles[ci]);
                if (!res) continue;
                std::string scheme = cfg.scheme;
                if (!scheme.empty()) scheme += " ";
                scheme += "(" + word_of(cycles[ci]) + ")*";
                if (detail::all_sublocs_unbounded(*res, sat)) return {true, scheme};
                if (visited.insert({cfg.node, *res}).second) {
                    pumped_configs.push_back({cfg.node, *res, scheme});
                    if (int(visited.size()) > limits.max_configs)
                        throw BudgetExceeded("s3_check: configuration budget exhausted");
                }
            }
        }

        // Propagate the pumped states along simple paths; the targets feed
        // the next pumping phase.
        std::vector<Config> next;
        for (const Config& cfg : pumped_configs) {
            std::vector<bool> on_path(prod.nodes.size(), false);
            on_path[cfg.node] = true;
            auto dfs = [&](auto&& self, int node, const AtdAnnotatedLocation& st,
                           const std::string& scheme) -> std::optional<S3Result> {
                for (int ei : prod.out[node]) {
                    const auto& pe = prod.edges[ei];
                    if (on_path[pe.target]) continue;
                    detail::spend(budget, "s3_check propagate");
                    AtdAnnotatedLocation ns = step_edge(st, pe);
                    const ExEdge& ae = aexp.edges[pe.a_edge];
                    std::string s2 = scheme + " " +
                                     bar_action_str({ae.action, ae.barred}, aexp.actions);
                    if (detail::all_sublocs_unbounded(ns, sat)) return S3Result{true, s2};
                    if (visited.insert({pe.target, ns}).second) {
                        next.push_back({pe.target, ns, s2});
                        if (int(visited.size()) > limits.max_configs)
                            throw BudgetExceeded("s3_check: configuration budget exhausted");
                        on_path[pe.target] = true;
                        auto r = self(self, pe.target, ns, s2);
                        on_path[pe.target] = false;
                        if (r) return r;
                    }
                }
                return std::nullopt;
            };
            auto r = dfs(dfs, cfg.node, cfg.state, cfg.scheme);
            if (r) return *r;
            next.push_back(cfg);
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return {false, ""};
}

// ============================================================================
// diverge — the S1/S2 check followed by the S3 check
// ============================================================================

struct DivergeResult {
    enum class Kind { InfiniteS1S2, InfiniteS3, Bounded } kind = Kind::Bounded;
    std::vector<ActionId> witness_word;  // S1/S2
    std::string scheme;                  // S3
    int k = 0;
};

inline DivergeResult diverge(const DiscreteTA& a, const DiscreteTA& b, int k,
                             const S3Limits& limits = {}) {
    S12Result s12 = s12_check(a, b);
    if (s12.infinite) return {DivergeResult::Kind::InfiniteS1S2, s12.witness_word, "", k};
    S3Result s3 = s3_check(a, b, k, limits);
    if (s3.infinite) return {DivergeResult::Kind::InfiniteS3, {}, s3.scheme, k};
    return {DivergeResult::Kind::Bounded, {}, "", k};
}

}  // namespace tadist
