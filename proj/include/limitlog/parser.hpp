#pragma once

#include <string>
#include <vector>

#include "limitlog/ast.hpp"

namespace limitlog {

struct ParseOptions {
    // Keep rules that violate safety instead of throwing (the `check` command
    // loads leniently so it can report the safety flag itself).
    bool allow_unsafe = false;
    // Rewrite compound numeric arguments of body standard atoms into a fresh
    // variable plus an equality (standard body literals are function-free
    // after loading).  Disabled only by tests probing the rewrite itself.
    bool flatten_bodies = true;
};

// Parses program text (.lpl): declarations, rules and facts.  Performs sort
// inference (object vs numeric positions and variables), expands `lub` and
// `=` sugar, normalises bodies and validates the result.
Program parse_program(const std::string& text, const ParseOptions& opts = {});

// Parses dataset text (.lpd): facts only, no declarations.  Star facts over
// undeclared numeric predicates are tolerated here; merging with a program
// that declares them min/max re-validates.
Dataset parse_dataset(const std::string& text);

// Parses a single ground fact (query syntax; trailing '.' optional),
// resolving the predicate against an existing vocabulary.
GroundFact parse_query(const std::string& text, const Program& vocab);

// Ordered-dataset check: first/next/last must spell out one repetition-free
// enumeration of exactly the objects of D.
struct OrderedCheck {
    bool ok = false;
    std::string reason;               // set when !ok
    std::vector<std::string> order;   // the enumeration when ok
};
OrderedCheck check_ordered(const Dataset& D);

}  // namespace limitlog
