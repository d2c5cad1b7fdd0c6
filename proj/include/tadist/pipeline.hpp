#pragma once

#include "tadist/discrete.hpp"
#include "tadist/distance.hpp"
#include "tadist/divergence.hpp"

namespace tadist {

// The standard chain: region automaton, discretization, determinization.
struct Prepared {
    AugRegionAutomaton region;
    DiscreteTA disc;
    DiscreteTA det;
};

inline Prepared prepare(const TimedAutomaton& a) {
    Prepared p;
    p.region = build_region_automaton(a);
    p.disc = discretize(p.region);
    p.det = determinize(p.disc);
    return p;
}

// Language inclusion of A in the closure of B's language, decided on the
// determinized discretizations of the triple-speed automata.
struct IncludeOutcome {
    bool included = false;
    std::optional<DiscTrace> witness;  // in triple-speed half units
    std::vector<std::string> actions;
};

inline IncludeOutcome include_automata(TimedAutomaton a, TimedAutomaton b) {
    merge_alphabets(a, b);
    Prepared pa = prepare(scale(a, 3));
    Prepared pb = prepare(scale(b, 3));
    auto res = check_inclusion(pa.det, pb.det);
    return {res.included, res.witness, pa.det.actions};
}

// Conformance distance via the discretized pair at triple speed. delta_d is
// the raw discretized value, lifted the distance of the triple-speed pair,
// and original_scale the same divided back by 3.
struct DistanceOutcome {
    DistValue delta_d;
    DistValue lifted;
    DistValue original_scale;
};

inline DistanceOutcome distance_between(TimedAutomaton a, TimedAutomaton b, int max_events,
                                        HalfTime max_time_original,
                                        long long budget = kDefaultBudget) {
    merge_alphabets(a, b);
    Prepared pa = prepare(scale(a, 3));
    Prepared pb = prepare(scale(b, 3));
    HalfTime horizon(3 * max_time_original.halves);
    DistanceOutcome out;
    out.delta_d = conformance_oracle(pa.disc, pb.disc, max_events, horizon, budget);
    out.lifted = lift_delta(out.delta_d);
    out.original_scale = out.lifted;
    if (!out.original_scale.infinite) out.original_scale.value /= 3;
    return out;
}

// Finite-or-infinite distance; no speed-up is needed for this question.
struct DivergeOutcome {
    DivergeResult result;
    std::vector<std::string> actions;  // bar-extended names for the witness
};

inline DivergeOutcome diverge_automata(TimedAutomaton a, TimedAutomaton b, int k,
                                       const S3Limits& limits = {}) {
    merge_alphabets(a, b);
    Prepared pa = prepare(a);
    Prepared pb = prepare(b);
    DivergeResult res = diverge(pa.disc, pb.disc, k, limits);
    std::vector<std::string> names = pa.disc.actions;
    for (const auto& n : pa.disc.actions) names.push_back(n + "~");
    return {res, names};
}

}  // namespace tadist
