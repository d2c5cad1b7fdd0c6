#pragma once

#include "tadist/discrete.hpp"
#include "tadist/region.hpp"

#include <json.hpp>

#include <sstream>
#include <string>

namespace tadist::io {

using ordered_json = nlohmann::ordered_json;

// ============================================================================
// DOT export; node order is construction (BFS) order, so output is stable
// ============================================================================

inline std::string to_dot(const AugRegionAutomaton& ra, const TimedAutomaton& a) {
    std::ostringstream out;
    out << "digraph region_automaton {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle fontsize=10];\n";
    out << "  __init [shape=none label=\"\"];\n";
    out << "  __init -> v0;\n";
    for (std::size_t v = 0; v < ra.vertices.size(); ++v) {
        out << "  v" << v << " [shape=" << (ra.accepting[v] ? "doublecircle" : "circle")
            << " label=\"" << vertex_str(ra, int(v), a) << "\"];\n";
    }
    for (const auto& e : ra.edges) {
        out << "  v" << e.source << " -> v" << e.target << " [label=\""
            << ra.actions[e.action] << "/" << e.weight << (e.starred ? "*" : "") << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

inline std::string to_dot(const DiscreteTA& d) {
    std::ostringstream out;
    out << "digraph discrete_ta {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle fontsize=10];\n";
    out << "  __init [shape=none label=\"\"];\n";
    out << "  __init -> v" << d.initial << ";\n";
    for (std::size_t v = 0; v < d.locations.size(); ++v) {
        out << "  v" << v << " [shape=" << (d.accepting.count(int(v)) ? "doublecircle" : "circle")
            << " label=\"" << d.locations[v] << "\"];\n";
    }
    for (const auto& e : d.edges) {
        out << "  v" << e.source << " -> v" << e.target << " [label=\"" << d.actions[e.action]
            << "/" << e.guard.str() << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

// ============================================================================
// JSON export, schema version 1
// ============================================================================

inline ordered_json to_json(const TimedAutomaton& a) {
    ordered_json j;
    j["format"] = 1;
    j["type"] = "timed-automaton";
    j["name"] = a.name;
    j["locations"] = a.locations;
    j["clocks"] = std::vector<std::string>(a.clocks.begin(),
                                           a.clocks.begin() + a.num_declared_clocks);
    j["actions"] = a.actions;
    j["initial"] = a.locations[a.initial];
    ordered_json acc = ordered_json::array();
    for (LocationId q : a.accepting) acc.push_back(a.locations[q]);
    j["accepting"] = acc;
    ordered_json trans = ordered_json::array();
    for (const auto& t : a.transitions) {
        ordered_json tj;
        tj["source"] = a.locations[t.source];
        tj["target"] = a.locations[t.target];
        tj["action"] = a.actions[t.action];
        ordered_json guard = ordered_json::array();
        for (const auto& atom : t.guard.atoms) {
            ordered_json g;
            g["clock"] = a.clocks[atom.clock];
            g["rel"] = rel_str(atom.rel);
            g["bound"] = atom.bound;
            guard.push_back(g);
        }
        tj["guard"] = guard;
        ordered_json resets = ordered_json::array();
        for (ClockId c : t.resets) resets.push_back(a.clocks[c]);
        tj["resets"] = resets;
        trans.push_back(tj);
    }
    j["transitions"] = trans;
    return j;
}

inline ordered_json to_json(const AugRegionAutomaton& ra, const TimedAutomaton& a) {
    ordered_json j;
    j["format"] = 1;
    j["type"] = "region-automaton";
    j["max_const"] = ra.max_const;
    ordered_json verts = ordered_json::array();
    for (std::size_t v = 0; v < ra.vertices.size(); ++v) {
        ordered_json vj;
        vj["id"] = v;
        vj["location"] = a.locations[ra.vertices[v].location];
        vj["region"] = region_str(ra.vertices[v].region, a.clocks);
        vj["accepting"] = bool(ra.accepting[v]);
        verts.push_back(vj);
    }
    j["vertices"] = verts;
    ordered_json edges = ordered_json::array();
    for (const auto& e : ra.edges) {
        ordered_json ej;
        ej["source"] = e.source;
        ej["target"] = e.target;
        ej["action"] = ra.actions[e.action];
        ej["weight"] = e.weight;
        ej["starred"] = e.starred;
        edges.push_back(ej);
    }
    j["edges"] = edges;
    return j;
}

inline ordered_json to_json(const DiscreteTA& d) {
    ordered_json j;
    j["format"] = 1;
    j["type"] = "discrete-ta";
    j["locations"] = d.locations;
    j["actions"] = d.actions;
    j["initial"] = d.initial;
    ordered_json acc = ordered_json::array();
    for (int q : d.accepting) acc.push_back(q);
    j["accepting"] = acc;
    ordered_json edges = ordered_json::array();
    for (const auto& e : d.edges) {
        ordered_json ej;
        ej["source"] = e.source;
        ej["target"] = e.target;
        ej["action"] = d.actions[e.action];
        ej["guard"] = e.guard.str();
        edges.push_back(ej);
    }
    j["edges"] = edges;
    return j;
}

}  // namespace tadist::io
