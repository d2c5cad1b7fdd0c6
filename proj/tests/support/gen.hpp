#pragma once

#include "tadist/parse.hpp"
#include "tadist/ta.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using namespace tadist;

inline TimedAutomaton parse_str(const std::string& text) {
    return io::parse_ta(text).ta;
}

struct GenParams {
    int max_locations = 3;
    int max_clocks = 2;
    int max_const = 2;
    int max_actions = 2;
    int max_transitions = 5;
};

inline TimedAutomaton random_ta(std::mt19937& rng, const GenParams& p = {}) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    TimedAutomaton ta;
    ta.name = "rnd";
    int nloc = pick(1, p.max_locations);
    int nclk = pick(0, p.max_clocks);
    int nact = pick(1, p.max_actions);
    for (int i = 0; i < nloc; ++i) ta.locations.push_back("q" + std::to_string(i));
    const char* clock_names[] = {"x", "y", "z"};
    for (int i = 0; i < nclk; ++i) ta.clocks.push_back(clock_names[i]);
    ta.num_declared_clocks = ta.clocks.size();
    const char* action_names[] = {"a", "b", "c"};
    for (int i = 0; i < nact; ++i) ta.actions.push_back(action_names[i]);
    ta.initial = 0;

    int ntr = pick(1, p.max_transitions);
    for (int i = 0; i < ntr; ++i) {
        Transition tr;
        tr.source = LocationId(pick(0, nloc - 1));
        tr.target = LocationId(pick(0, nloc - 1));
        tr.action = ActionId(pick(0, nact - 1));
        if (nclk > 0) {
            int natoms = pick(0, 2);
            for (int g = 0; g < natoms; ++g) {
                GuardAtom atom;
                atom.clock = ClockId(pick(0, nclk - 1));
                atom.rel = static_cast<Rel>(pick(0, 4));
                atom.bound = pick(0, p.max_const);
                tr.guard.atoms.push_back(atom);
            }
            for (int c = 0; c < nclk; ++c)
                if (pick(0, 3) == 0) tr.resets.push_back(ClockId(c));
        }
        ta.transitions.push_back(std::move(tr));
    }
    for (int q = 0; q < nloc; ++q)
        if (pick(0, 1)) ta.accepting.insert(LocationId(q));
    if (ta.accepting.empty()) ta.accepting.insert(LocationId(pick(0, nloc - 1)));
    return ta;
}

// Delays d >= 0 for which (v + d) satisfies g, as one interval.
struct DelayInterval {
    bool empty = false;
    Rational lo{0};
    bool lo_strict = false;
    std::optional<Rational> hi;
    bool hi_strict = false;
};

inline DelayInterval feasible_delays(const ClockValuation& v, const Guard& g) {
    DelayInterval iv;
    auto tighten_lo = [&](Rational b, bool strict) {
        if (b > iv.lo || (b == iv.lo && strict && !iv.lo_strict)) {
            iv.lo = b;
            iv.lo_strict = strict;
        }
    };
    auto tighten_hi = [&](Rational b, bool strict) {
        if (!iv.hi || b < *iv.hi || (b == *iv.hi && strict && !iv.hi_strict)) {
            iv.hi = b;
            iv.hi_strict = strict;
        }
    };
    for (const auto& atom : g.atoms) {
        Rational gap = Rational(atom.bound) - v.values[atom.clock];
        switch (atom.rel) {
            case Rel::Lt: tighten_hi(gap, true); break;
            case Rel::Le: tighten_hi(gap, false); break;
            case Rel::Eq:
                tighten_lo(gap, false);
                tighten_hi(gap, false);
                break;
            case Rel::Ge: tighten_lo(gap, false); break;
            case Rel::Gt: tighten_lo(gap, true); break;
        }
    }
    if (iv.hi) {
        if (*iv.hi < iv.lo || (*iv.hi == iv.lo && (iv.lo_strict || iv.hi_strict))) iv.empty = true;
        if (*iv.hi < Rational(0)) iv.empty = true;
    }
    return iv;
}

// Picks a grid point k/den inside the interval, or nullopt. Unbounded
// intervals are cut at `cap`.
inline std::optional<Rational> sample_delay(std::mt19937& rng, const DelayInterval& iv,
                                            Rational cap) {
    if (iv.empty) return std::nullopt;
    static const int dens[] = {1, 2, 3, 4, 5, 6, 8};
    int start = std::uniform_int_distribution<int>(0, 6)(rng);
    for (int t = 0; t < 7; ++t) {
        long long den = dens[(start + t) % 7];
        Rational hi = iv.hi ? std::min(*iv.hi, cap) : cap;
        // smallest admissible numerator
        Rational lo_scaled = iv.lo * den;
        long long k_lo = floor_of(lo_scaled);
        if (Rational(k_lo) < lo_scaled || (iv.lo_strict && Rational(k_lo) == lo_scaled)) ++k_lo;
        Rational hi_scaled = hi * den;
        long long k_hi = floor_of(hi_scaled);
        if (iv.hi && hi == *iv.hi && iv.hi_strict && Rational(k_hi) == hi_scaled) --k_hi;
        if (k_lo < 0) k_lo = 0;
        if (k_hi < k_lo) continue;
        long long k = std::uniform_int_distribution<long long>(k_lo, k_hi)(rng);
        return Rational(k, den);
    }
    return std::nullopt;
}

inline std::optional<Run> random_accepted_run(std::mt19937& rng, const TimedAutomaton& a,
                                              int max_len, int attempts = 60) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    Rational cap(a.max_const() + 2);
    for (int att = 0; att < attempts; ++att) {
        Run run;
        State s{a.initial, ClockValuation::zero(a.clocks.size())};
        int target_len = pick(1, max_len);
        for (int len = 0; len < target_len; ++len) {
            std::vector<std::size_t> cand;
            for (std::size_t i = 0; i < a.transitions.size(); ++i)
                if (a.transitions[i].source == s.location) cand.push_back(i);
            std::shuffle(cand.begin(), cand.end(), rng);
            bool moved = false;
            for (std::size_t ti : cand) {
                auto iv = feasible_delays(s.valuation, a.transitions[ti].guard);
                auto d = sample_delay(rng, iv, cap);
                if (!d) continue;
                s = step(s, *d, a.transitions[ti]);
                run.steps.push_back({*d, ti});
                moved = true;
                break;
            }
            if (!moved) break;
            if (a.accepting.count(s.location) && pick(0, 2) == 0) break;
        }
        if (!run.steps.empty() && a.accepting.count(s.location)) return run;
    }
    return std::nullopt;
}

struct TaWithRuns {
    TimedAutomaton ta;
    std::vector<Run> runs;
};

// A random automaton together with accepted runs; regenerates the automaton
// until enough runs are found.
inline TaWithRuns random_ta_with_runs(std::mt19937& rng, const GenParams& p, int num_runs,
                                      int max_len) {
    for (;;) {
        TimedAutomaton ta = random_ta(rng, p);
        std::vector<Run> runs;
        for (int i = 0; i < num_runs; ++i) {
            auto r = random_accepted_run(rng, ta, max_len);
            if (!r) break;
            runs.push_back(std::move(*r));
        }
        if (int(runs.size()) == num_runs) return {std::move(ta), std::move(runs)};
    }
}

}  // namespace testsupport
