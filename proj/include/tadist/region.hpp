#pragma once

#include "tadist/ta.hpp"

#include <cassert>
#include <compare>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace tadist {

// Fractional-order member ids: 0 is the absolute-time clock t, clock i of the
// automaton is i+1.
using FracId = int;
constexpr FracId kFracT = 0;
inline FracId frac_id_of_clock(ClockId c) { return static_cast<FracId>(c) + 1; }

// Integral part of a clock that passed the maximal constant M.
constexpr int kTop = -1;

// A region over the automaton's clocks extended with t. Integral parts are
// capped at M (kTop beyond); clocks beyond M are dropped from the fractional
// order since their fractional part no longer matters. t has no stored
// integral part — only its fractional block, which is {0} or (0,1).
struct Region {
    std::vector<int> int_parts;            // per clock; kTop past M
    std::vector<std::vector<FracId>> blocks;  // ascending fractional value
    bool zero_first = false;               // blocks[0] sits at fraction 0

    auto operator<=>(const Region&) const = default;

    bool frac_zero(FracId f) const {
        if (!zero_first || blocks.empty()) return false;
        const auto& b = blocks.front();
        return std::find(b.begin(), b.end(), f) != b.end();
    }
    bool t_frac_zero() const { return frac_zero(kFracT); }
    bool is_top(ClockId c) const { return int_parts[c] == kTop; }
    bool all_top() const {
        for (int ip : int_parts)
            if (ip != kTop) return false;
        return true;
    }
};

struct AugVertex {
    LocationId location = 0;
    Region region;

    auto operator<=>(const AugVertex&) const = default;
};

// Weighted edge of the augmented region automaton. A starred edge stands for
// the weights weight, weight+1, weight+2, ...
struct AugEdge {
    int source = 0;
    int target = 0;
    ActionId action = 0;
    int weight = 0;
    bool starred = false;

    auto operator<=>(const AugEdge&) const = default;
};

struct AugRegionAutomaton {
    std::vector<AugVertex> vertices;  // index 0 is the initial vertex
    std::vector<AugEdge> edges;
    std::vector<bool> accepting;  // per vertex, from the location
    std::vector<std::string> actions;
    int max_const = 0;

    std::vector<std::vector<int>> out_edges() const {
        std::vector<std::vector<int>> out(vertices.size());
        for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].source].push_back(int(i));
        return out;
    }
};

// ============================================================================
// initial_region
// ============================================================================

inline Region initial_region(std::size_t num_clocks) {
    Region r;
    r.int_parts.assign(num_clocks, 0);
    std::vector<FracId> all;
    all.push_back(kFracT);
    for (std::size_t c = 0; c < num_clocks; ++c) all.push_back(frac_id_of_clock(ClockId(c)));
    r.blocks.push_back(std::move(all));
    r.zero_first = true;
    return r;
}

// ============================================================================
// time_successor — the immediate next region under time elapse
// ============================================================================

struct TimeStep {
    Region region;
    bool t_wrapped = false;  // t's integral part advanced during this step
};

inline TimeStep time_successor(const Region& r, int max_const) {
    TimeStep out;
    out.region = r;
    Region& nr = out.region;

    if (r.zero_first) {
        // The zero block moves into (0,1) below all other blocks. Clocks
        // sitting exactly at M leave the bounded range and become top.
        std::vector<FracId> moved;
        for (FracId f : nr.blocks.front()) {
            if (f == kFracT) {
                moved.push_back(f);
                continue;
            }
            ClockId c = ClockId(f - 1);
            if (nr.int_parts[c] == max_const) {
                nr.int_parts[c] = kTop;
            } else {
                moved.push_back(f);
            }
        }
        nr.blocks.erase(nr.blocks.begin());
        if (!moved.empty()) nr.blocks.insert(nr.blocks.begin(), std::move(moved));
        nr.zero_first = false;
        return out;
    }

    // All fractions positive: the maximal block wraps to fraction 0 and each
    // wrapped clock's integral part advances; a wrapped t is reported.
    assert(!nr.blocks.empty());
    std::vector<FracId> wrapped = nr.blocks.back();
    nr.blocks.pop_back();
    for (FracId f : wrapped) {
        if (f == kFracT) {
            out.t_wrapped = true;
        } else {
            ClockId c = ClockId(f - 1);
            assert(nr.int_parts[c] < max_const);
            nr.int_parts[c] += 1;
        }
    }
    nr.blocks.insert(nr.blocks.begin(), std::move(wrapped));
    nr.zero_first = true;
    return out;
}

// ============================================================================
// guard entailment and discrete_successor
// ============================================================================

// A region either wholly satisfies or wholly violates an atom with bound <= M.
inline bool region_satisfies_atom(const Region& r, const GuardAtom& a) {
    if (a.clock >= r.int_parts.size()) return false;
    int ip = r.int_parts[a.clock];
    if (ip == kTop) {
        return a.rel == Rel::Ge || a.rel == Rel::Gt;
    }
    bool fz = r.frac_zero(frac_id_of_clock(a.clock));
    switch (a.rel) {
        case Rel::Eq: return ip == a.bound && fz;
        case Rel::Lt: return ip < a.bound;
        case Rel::Le: return ip < a.bound || (ip == a.bound && fz);
        case Rel::Ge: return ip >= a.bound;
        case Rel::Gt: return ip > a.bound || (ip == a.bound && !fz);
    }
    return false;
}

inline bool region_satisfies(const Region& r, const Guard& g) {
    for (const auto& a : g.atoms)
        if (!region_satisfies_atom(r, a)) return false;
    return true;
}

inline std::optional<Region> discrete_successor(const Region& r, const Transition& tr) {
    if (!region_satisfies(r, tr.guard)) return std::nullopt;
    Region nr = r;
    std::set<FracId> reset_ids;
    for (ClockId c : tr.resets) reset_ids.insert(frac_id_of_clock(c));

    for (auto& block : nr.blocks) {
        std::erase_if(block, [&](FracId f) { return reset_ids.count(f) > 0; });
    }
    // The zero block survives only if the erasure left it nonempty.
    bool zero_alive = nr.zero_first && !nr.blocks.empty() && !nr.blocks.front().empty();
    std::erase_if(nr.blocks, [](const std::vector<FracId>& b) { return b.empty(); });
    nr.zero_first = zero_alive;
    for (ClockId c : tr.resets) nr.int_parts[c] = 0;

    if (!reset_ids.empty()) {
        std::vector<FracId> zero(reset_ids.begin(), reset_ids.end());
        if (nr.zero_first) {
            auto& b = nr.blocks.front();
            b.insert(b.end(), zero.begin(), zero.end());
            std::sort(b.begin(), b.end());
        } else {
            nr.blocks.insert(nr.blocks.begin(), std::move(zero));
            nr.zero_first = true;
        }
    }
    return nr;
}

// ============================================================================
// build — BFS closure of the augmented region automaton
// ============================================================================

inline AugRegionAutomaton build_region_automaton(const TimedAutomaton& a) {
    {
        auto diags = validate(a);
        if (!diags.empty()) throw InvalidInput("invalid automaton: " + diags.front());
    }
    const int m = a.max_const();

    AugRegionAutomaton ra;
    ra.actions = a.actions;
    ra.max_const = m;

    std::map<AugVertex, int> index;
    std::queue<int> work;
    auto vertex_id = [&](LocationId q, const Region& r) {
        AugVertex v{q, r};
        auto it = index.find(v);
        if (it != index.end()) return it->second;
        int id = int(ra.vertices.size());
        ra.vertices.push_back(v);
        ra.accepting.push_back(a.accepting.count(q) > 0);
        index.emplace(std::move(v), id);
        work.push(id);
        return id;
    };

    vertex_id(a.initial, initial_region(a.clocks.size()));
    std::set<AugEdge> seen_edges;

    while (!work.empty()) {
        int src = work.front();
        work.pop();
        const LocationId q = ra.vertices[src].location;

        // Time-elapse chain from the vertex region, stopping at the first
        // repeated region. Positions from the first occurrence of the repeat
        // onward form the cycle that repeats forever; edges enabled there are
        // starred (the chain gains one t-wrap per revolution).
        std::vector<Region> chain{ra.vertices[src].region};
        std::vector<int> weight{0};
        std::map<Region, int> pos_of{{chain[0], 0}};
        int cycle_start = -1;
        while (cycle_start < 0) {
            TimeStep ts = time_successor(chain.back(), m);
            int w = weight.back() + (ts.t_wrapped ? 1 : 0);
            auto it = pos_of.find(ts.region);
            if (it != pos_of.end()) {
                cycle_start = it->second;
                break;
            }
            pos_of.emplace(ts.region, int(chain.size()));
            chain.push_back(std::move(ts.region));
            weight.push_back(w);
        }

        for (std::size_t pos = 0; pos < chain.size(); ++pos) {
            const bool starred = int(pos) >= cycle_start;
            for (const auto& tr : a.transitions) {
                if (tr.source != q) continue;
                auto succ = discrete_successor(chain[pos], tr);
                if (!succ) continue;
                int tgt = vertex_id(tr.target, *succ);
                AugEdge e{src, tgt, tr.action, weight[pos], starred};
                if (seen_edges.insert(e).second) ra.edges.push_back(e);
            }
        }
    }
    return ra;
}

// ============================================================================
// untimed_words_upto — accepted action words of length <= n, time ignored
// ============================================================================

inline std::set<std::vector<ActionId>> untimed_words_upto(const AugRegionAutomaton& ra, int n) {
    std::set<std::vector<ActionId>> words;
    auto out = ra.out_edges();
    std::map<std::vector<ActionId>, std::set<int>> frontier;
    frontier[{}] = {0};
    for (int len = 0; len <= n; ++len) {
        std::map<std::vector<ActionId>, std::set<int>> next;
        for (const auto& [word, verts] : frontier) {
            for (int v : verts)
                if (ra.accepting[v]) {
                    words.insert(word);
                    break;
                }
            if (len == n) continue;
            for (int v : verts) {
                for (int ei : out[v]) {
                    const AugEdge& e = ra.edges[ei];
                    auto w = word;
                    w.push_back(e.action);
                    next[std::move(w)].insert(e.target);
                }
            }
        }
        frontier = std::move(next);
    }
    return words;
}

// ============================================================================
// printing helpers
// ============================================================================

inline std::string region_str(const Region& r, const std::vector<std::string>& clock_names) {
    auto frac_name = [&](FracId f) -> std::string {
        if (f == kFracT) return "t";
        return clock_names[std::size_t(f) - 1];
    };
    std::string s;
    for (std::size_t c = 0; c < r.int_parts.size(); ++c) {
        if (c > 0) s += ",";
        s += clock_names[c] + ":";
        s += r.int_parts[c] == kTop ? "T" : std::to_string(r.int_parts[c]);
    }
    if (!r.int_parts.empty()) s += " | ";
    bool first = true;
    if (!r.zero_first) s += "0";
    for (std::size_t i = 0; i < r.blocks.size(); ++i) {
        if (!first || !r.zero_first) s += "<";
        s += "{";
        for (std::size_t j = 0; j < r.blocks[i].size(); ++j) {
            if (j > 0) s += ",";
            s += frac_name(r.blocks[i][j]);
        }
        s += "}";
        if (i == 0 && r.zero_first) s += "=0";
        first = false;
    }
    return s;
}

inline std::string vertex_str(const AugRegionAutomaton& ra, int v,
                              const TimedAutomaton& a) {
    return a.locations[ra.vertices[v].location] + " | " +
           region_str(ra.vertices[v].region, a.clocks);
}

}  // namespace tadist
