#pragma once

#include <stdexcept>
#include <string>

namespace limitlog {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lexical or syntactic problem in program/dataset text.
struct ParseError : Error {
    int line, column;
    ParseError(int line_, int column_, const std::string& what_)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(column_) + ": " + what_),
          line(line_), column(column_) {}
};

// Well-formed syntax that violates a language rule (arity clash, missing
// min/max declaration, misplaced '*', unsafe rule, ...).
struct ValidationError : Error {
    using Error::Error;
};

// An operation was invoked outside its stated precondition.
struct ContractViolation : Error {
    using Error::Error;
};

// Internal evaluation guard tripped (optimiser iteration cap, oracle
// enumeration blow-up).  Indicates a resource refusal, not a wrong answer.
struct EvalError : Error {
    using Error::Error;
};

}  // namespace limitlog
