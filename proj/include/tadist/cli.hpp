#pragma once

#include "tadist/export.hpp"
#include "tadist/parse.hpp"
#include "tadist/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace tadist::io {

// Accepts "3", "7/2" or "3.5"; value in half units.
inline HalfTime parse_half_time(const std::string& s) {
    auto bad = [&] { return InvalidInput("expected a half-integer time, got '" + s + "'"); };
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            long long num = std::stoll(s.substr(0, slash));
            long long den = std::stoll(s.substr(slash + 1));
            if (den != 2 && den != 1) throw bad();
            return HalfTime(den == 2 ? num : 2 * num);
        }
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            long long whole = std::stoll(s.substr(0, dot));
            std::string frac = s.substr(dot + 1);
            if (frac == "0") return HalfTime(2 * whole);
            if (frac == "5") return HalfTime(2 * whole + 1);
            throw bad();
        }
        return HalfTime(2 * std::stoll(s));
    } catch (const std::invalid_argument&) {
        throw bad();
    }
}

namespace detail {

inline TimedAutomaton load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        TaDocument doc = parse_ta(buf.str());
        auto diags = validate(doc.ta);
        if (!diags.empty()) throw InvalidInput(path + ": " + diags.front());
        return doc.ta;
    } catch (const ParseError& e) {
        throw InvalidInput(path + ":" + std::to_string(e.line) + ":" +
                           std::to_string(e.column) + ": " + e.message);
    }
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << content;
}

inline std::string witness_str(const DiscTrace& w, const std::vector<std::string>& actions) {
    return w.events.empty() ? "(empty)" : w.str(actions);
}

}  // namespace detail

// Exit codes: 0 success / positive verdict, 1 negative verdict, 2 errors.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"timed-automata discretization, inclusion and distance"};
    app.require_subcommand(1);

    std::string file_a, file_b, dot_path, json_path;
    bool det = false;
    int max_events = 4;
    std::string max_time = "8";
    int k = 2;
    long long budget = kDefaultBudget;

    auto* regionize = app.add_subcommand("regionize", "build the augmented region automaton");
    regionize->add_option("file", file_a)->required();
    regionize->add_option("--dot", dot_path, "write DOT to this path");
    regionize->add_option("--json", json_path, "write JSON to this path");

    auto* discretize_cmd = app.add_subcommand("discretize", "build the discretized automaton");
    discretize_cmd->add_option("file", file_a)->required();
    discretize_cmd->add_flag("--det", det, "determinize the result");
    discretize_cmd->add_option("--dot", dot_path, "write DOT to this path");
    discretize_cmd->add_option("--json", json_path, "write JSON to this path");

    auto* include_cmd = app.add_subcommand(
        "include", "decide inclusion of A in the closure of B's language");
    include_cmd->add_option("A", file_a)->required();
    include_cmd->add_option("B", file_b)->required();

    auto* distance_cmd = app.add_subcommand("distance", "conformance distance from A to B");
    distance_cmd->add_option("A", file_a)->required();
    distance_cmd->add_option("B", file_b)->required();
    distance_cmd->add_option("--max-events", max_events, "event bound for the enumeration");
    distance_cmd->add_option("--max-time", max_time, "time horizon (original time units)");
    distance_cmd->add_option("--budget", budget, "search node budget");

    auto* diverge_cmd = app.add_subcommand("diverge", "decide whether the distance is infinite");
    diverge_cmd->add_option("A", file_a)->required();
    diverge_cmd->add_option("B", file_b)->required();
    diverge_cmd->add_option("--K", k, "power-cycle budget");
    diverge_cmd->add_option("--budget", budget, "search node budget");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (regionize->parsed()) {
            TimedAutomaton a = detail::load(file_a);
            AugRegionAutomaton ra = build_region_automaton(a);
            out << "region automaton of " << a.name << ": " << ra.vertices.size()
                << " vertices, " << ra.edges.size() << " edges\n";
            for (std::size_t v = 0; v < ra.vertices.size(); ++v)
                out << "  v" << v << ": " << vertex_str(ra, int(v), a)
                    << (ra.accepting[v] ? " [accepting]" : "") << "\n";
            for (const auto& e : ra.edges)
                out << "  v" << e.source << " -" << ra.actions[e.action] << "/" << e.weight
                    << (e.starred ? "*" : "") << "-> v" << e.target << "\n";
            if (!dot_path.empty()) detail::write_file(dot_path, to_dot(ra, a));
            if (!json_path.empty()) detail::write_file(json_path, to_json(ra, a).dump(2) + "\n");
            return 0;
        }
        if (discretize_cmd->parsed()) {
            TimedAutomaton a = detail::load(file_a);
            DiscreteTA d = discretize(build_region_automaton(a));
            if (det) d = determinize(d);
            out << "discretized automaton of " << a.name << ": " << d.locations.size()
                << " locations, " << d.edges.size() << " edges\n";
            for (std::size_t v = 0; v < d.locations.size(); ++v)
                out << "  v" << v << ": " << d.locations[v]
                    << (d.accepting.count(int(v)) ? " [accepting]" : "") << "\n";
            for (const auto& e : d.edges)
                out << "  v" << e.source << " -" << d.actions[e.action] << "/" << e.guard.str()
                    << "-> v" << e.target << "\n";
            if (!dot_path.empty()) detail::write_file(dot_path, to_dot(d));
            if (!json_path.empty()) detail::write_file(json_path, to_json(d).dump(2) + "\n");
            return 0;
        }
        if (include_cmd->parsed()) {
            auto res = include_automata(detail::load(file_a), detail::load(file_b));
            if (res.included) {
                out << "INCLUDED\n";
                return 0;
            }
            out << "NOT-INCLUDED witness=" << detail::witness_str(*res.witness, res.actions)
                << "\n";
            return 1;
        }
        if (distance_cmd->parsed()) {
            auto res = distance_between(detail::load(file_a), detail::load(file_b), max_events,
                                        parse_half_time(max_time), budget);
            out << res.original_scale.str() << "\n";
            return !res.original_scale.infinite && res.original_scale.value == Rational(0) ? 0 : 1;
        }
        if (diverge_cmd->parsed()) {
            auto res = diverge_automata(detail::load(file_a), detail::load(file_b), k);
            switch (res.result.kind) {
                case DivergeResult::Kind::InfiniteS1S2: {
                    out << "INF-S1S2 witness=";
                    for (std::size_t i = 0; i < res.result.witness_word.size(); ++i) {
                        if (i > 0) out << " ";
                        out << res.actions[res.result.witness_word[i]];
                    }
                    out << "\n";
                    return 1;
                }
                case DivergeResult::Kind::InfiniteS3:
                    out << "INF-S3 scheme=" << res.result.scheme << "\n";
                    return 1;
                case DivergeResult::Kind::Bounded:
                    out << "BOUNDED(K=" << res.result.k << ")\n";
                    return 0;
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace tadist::io
