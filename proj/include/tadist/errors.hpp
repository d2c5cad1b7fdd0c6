#pragma once

#include <stdexcept>
#include <string>

namespace tadist {

struct GuardViolation : std::runtime_error {
    explicit GuardViolation(const std::string& what) : std::runtime_error(what) {}
};

struct SourceMismatch : std::runtime_error {
    explicit SourceMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownAction : std::runtime_error {
    explicit UnknownAction(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

struct NotDeterministic : std::runtime_error {
    explicit NotDeterministic(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct NoMatchingEdge : std::runtime_error {
    explicit NoMatchingEdge(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    int line;
    int column;
    std::string message;  // without the position prefix
    ParseError(int line_, int column_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ":" +
                             std::to_string(column_) + ": " + msg),
          line(line_),
          column(column_),
          message(msg) {}
};

}  // namespace tadist
