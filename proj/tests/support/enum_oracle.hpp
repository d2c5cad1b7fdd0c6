#pragma once

#include "tadist/discrete.hpp"

#include <set>
#include <vector>

// Straight-line recursive trace enumeration, kept independent of the library's
// search code so it can serve as the oracle for it.
namespace testsupport {

using namespace tadist;

// Accepted traces with at most max_events events; each delay runs from the
// guard's bound up to delay_cap half units (Eq delays are always the bound).
inline std::set<DiscTrace> enumerate_disc_traces(const DiscreteTA& d, int max_events,
                                                 long long delay_cap_halves) {
    std::set<DiscTrace> out;
    auto adj = d.out_edges();
    DiscTrace prefix;

    auto rec = [&](auto&& self, int loc, HalfTime now) -> void {
        if (d.accepting.count(loc)) out.insert(prefix);
        if (int(prefix.events.size()) == max_events) return;
        for (int ei : adj[loc]) {
            const DiscEdge& e = d.edges[ei];
            if (e.guard.kind == GuardKind::EqInf) continue;
            long long lo = e.guard.bound.halves;
            long long hi = e.guard.kind == GuardKind::Eq ? lo : std::max(lo, delay_cap_halves);
            for (long long dl = lo; dl <= hi; ++dl) {
                prefix.events.push_back({now + HalfTime(dl), e.action});
                self(self, e.target, now + HalfTime(dl));
                prefix.events.pop_back();
            }
        }
    };
    rec(rec, d.initial, HalfTime(0));
    return out;
}

}  // namespace testsupport
