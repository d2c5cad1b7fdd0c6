#pragma once

#include "tadist/ta.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tadist::io {

struct TokenSpan {
    int line = 0;       // 1-based
    int col_begin = 0;  // 1-based, inclusive
    int col_end = 0;    // exclusive
    std::string text;
};

// Parsed automaton plus enough source positions to point diagnostics at the
// offending construct.
struct TaDocument {
    TimedAutomaton ta;
    std::vector<TokenSpan> tokens;          // every token, in source order
    std::vector<int> transition_lines;      // per transition
    int init_line = 0;
};

namespace detail {

struct Line {
    int number = 0;
    std::vector<TokenSpan> tokens;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        Line line{lineno, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            char c = raw[i];
            if (c == '#') break;
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            std::size_t start = i;
            if (ident_start(c)) {
                while (i < raw.size() && ident_char(raw[i])) ++i;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                while (i < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i]))) ++i;
            } else if (c == '-' && i + 1 < raw.size() && raw[i + 1] == '>') {
                i += 2;
            } else if ((c == '<' || c == '>') && i + 1 < raw.size() && raw[i + 1] == '=') {
                i += 2;
            } else if (c == '<' || c == '>' || c == '=' || c == ';' || c == ',' || c == ':') {
                ++i;
            } else {
                throw ParseError(lineno, int(i) + 1, std::string("unexpected character '") + c + "'");
            }
            line.tokens.push_back({lineno, int(start) + 1, int(i) + 1, raw.substr(start, i - start)});
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

struct Cursor {
    const Line& line;
    std::size_t pos = 0;

    bool done() const { return pos >= line.tokens.size(); }
    const TokenSpan& peek() const {
        if (done()) throw ParseError(line.number, line.tokens.back().col_end, "unexpected end of line");
        return line.tokens[pos];
    }
    TokenSpan take() {
        const TokenSpan& t = peek();
        ++pos;
        return t;
    }
    TokenSpan expect(const std::string& text) {
        const TokenSpan& t = peek();
        if (t.text != text)
            throw ParseError(t.line, t.col_begin, "expected '" + text + "', got '" + t.text + "'");
        ++pos;
        return t;
    }
    TokenSpan expect_ident(const char* what) {
        const TokenSpan& t = peek();
        if (!ident_start(t.text[0]))
            throw ParseError(t.line, t.col_begin, std::string("expected ") + what + ", got '" + t.text + "'");
        ++pos;
        return t;
    }
};

}  // namespace detail

inline TaDocument parse_ta(const std::string& text) {
    using detail::Cursor;
    auto lines = detail::tokenize(text);

    TaDocument doc;
    TimedAutomaton& ta = doc.ta;

    bool saw_automaton = false, saw_alphabet = false, saw_init = false, saw_accepting = false,
         saw_clocks = false;
    std::vector<std::pair<TokenSpan, std::string>> accepting_names;

    auto intern = [](std::vector<std::string>& table, const std::string& n) {
        for (std::size_t i = 0; i < table.size(); ++i)
            if (table[i] == n) return static_cast<std::uint32_t>(i);
        table.push_back(n);
        return static_cast<std::uint32_t>(table.size() - 1);
    };

    std::string init_name;
    TokenSpan init_span;

    for (const auto& line : lines) {
        Cursor cur{line};
        const TokenSpan head = cur.take();
        for (const auto& t : line.tokens) doc.tokens.push_back(t);

        if (head.text == "automaton") {
            if (saw_automaton) throw ParseError(head.line, head.col_begin, "duplicate automaton header");
            saw_automaton = true;
            ta.name = cur.expect_ident("automaton name").text;
        } else if (head.text == "clocks") {
            if (saw_clocks) throw ParseError(head.line, head.col_begin, "duplicate clocks line");
            saw_clocks = true;
            while (!cur.done()) intern(ta.clocks, cur.expect_ident("clock name").text);
            ta.num_declared_clocks = ta.clocks.size();
        } else if (head.text == "alphabet") {
            if (saw_alphabet) throw ParseError(head.line, head.col_begin, "duplicate alphabet line");
            saw_alphabet = true;
            while (!cur.done()) intern(ta.actions, cur.expect_ident("action name").text);
            if (ta.actions.empty())
                throw ParseError(head.line, head.col_begin, "alphabet requires at least one action");
        } else if (head.text == "init") {
            if (saw_init) throw ParseError(head.line, head.col_begin, "duplicate init line");
            saw_init = true;
            init_span = cur.expect_ident("location name");
            init_name = init_span.text;
            ta.initial = intern(ta.locations, init_name);
            doc.init_line = head.line;
        } else if (head.text == "accepting") {
            if (saw_accepting) throw ParseError(head.line, head.col_begin, "duplicate accepting line");
            saw_accepting = true;
            while (!cur.done()) {
                TokenSpan t = cur.expect_ident("location name");
                accepting_names.push_back({t, t.text});
            }
        } else if (head.text == "trans") {
            Transition tr;
            tr.source = intern(ta.locations, cur.expect_ident("source location").text);
            cur.expect("->");
            tr.target = intern(ta.locations, cur.expect_ident("target location").text);
            cur.expect(":");
            TokenSpan act = cur.expect_ident("action name");
            auto aid = ta.action_id(act.text);
            if (!aid)
                throw ParseError(act.line, act.col_begin,
                                 "unknown action '" + act.text + "' (declare it in the alphabet)");
            tr.action = *aid;

            while (!cur.done()) {
                cur.expect(";");
                TokenSpan kw = cur.expect_ident("'guard' or 'reset'");
                if (kw.text == "guard") {
                    for (;;) {
                        TokenSpan ck = cur.expect_ident("clock name");
                        GuardAtom atom;
                        atom.clock = intern(ta.clocks, ck.text);
                        TokenSpan rel = cur.take();
                        if (rel.text == "<") atom.rel = Rel::Lt;
                        else if (rel.text == "<=") atom.rel = Rel::Le;
                        else if (rel.text == "=") atom.rel = Rel::Eq;
                        else if (rel.text == ">=") atom.rel = Rel::Ge;
                        else if (rel.text == ">") atom.rel = Rel::Gt;
                        else
                            throw ParseError(rel.line, rel.col_begin,
                                             "expected a relation, got '" + rel.text + "'");
                        TokenSpan num = cur.take();
                        if (!std::isdigit(static_cast<unsigned char>(num.text[0])))
                            throw ParseError(num.line, num.col_begin,
                                             "expected a nonnegative integer bound");
                        atom.bound = std::stoi(num.text);
                        tr.guard.atoms.push_back(atom);
                        if (cur.done() || cur.peek().text != ",") break;
                        cur.take();
                    }
                } else if (kw.text == "reset") {
                    for (;;) {
                        TokenSpan ck = cur.expect_ident("clock name");
                        tr.resets.push_back(intern(ta.clocks, ck.text));
                        if (cur.done() || cur.peek().text != ",") break;
                        cur.take();
                    }
                } else {
                    throw ParseError(kw.line, kw.col_begin,
                                     "expected 'guard' or 'reset', got '" + kw.text + "'");
                }
            }
            std::sort(tr.resets.begin(), tr.resets.end());
            tr.resets.erase(std::unique(tr.resets.begin(), tr.resets.end()), tr.resets.end());
            doc.transition_lines.push_back(head.line);
            ta.transitions.push_back(std::move(tr));
        } else {
            throw ParseError(head.line, head.col_begin, "unknown directive '" + head.text + "'");
        }
    }

    if (!saw_automaton) throw ParseError(1, 1, "automaton header required");
    if (!saw_alphabet) throw ParseError(1, 1, "alphabet required");
    if (!saw_init) throw ParseError(1, 1, "init required");
    if (!saw_clocks) ta.num_declared_clocks = 0;

    for (auto& [span, name] : accepting_names) {
        auto id = ta.location_id(name);
        if (!id) {
            ta.locations.push_back(name);
            id = LocationId(ta.locations.size() - 1);
        }
        ta.accepting.insert(*id);
    }
    return doc;
}

// Canonical text form; parse_ta(print_ta(a)).ta is structurally equal to a.
inline std::string print_ta(const TimedAutomaton& ta) {
    std::ostringstream out;
    out << "automaton " << ta.name << "\n";
    out << "clocks";
    for (std::size_t c = 0; c < ta.num_declared_clocks; ++c) out << " " << ta.clocks[c];
    out << "\n";
    out << "alphabet";
    for (const auto& a : ta.actions) out << " " << a;
    out << "\n";
    out << "init " << ta.locations[ta.initial] << "\n";
    out << "accepting";
    for (LocationId q : ta.accepting) out << " " << ta.locations[q];
    out << "\n";
    for (const auto& t : ta.transitions) {
        out << "trans " << ta.locations[t.source] << " -> " << ta.locations[t.target] << " : "
            << ta.actions[t.action];
        if (!t.guard.atoms.empty()) {
            out << " ; guard ";
            for (std::size_t i = 0; i < t.guard.atoms.size(); ++i) {
                const auto& atom = t.guard.atoms[i];
                if (i > 0) out << ",";
                out << ta.clocks[atom.clock] << rel_str(atom.rel) << atom.bound;
            }
        }
        if (!t.resets.empty()) {
            out << " ; reset ";
            for (std::size_t i = 0; i < t.resets.size(); ++i) {
                if (i > 0) out << ",";
                out << ta.clocks[t.resets[i]];
            }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace tadist::io
