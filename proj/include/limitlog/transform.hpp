#pragma once

#include <cstddef>
#include <vector>

#include "limitlog/ast.hpp"

namespace limitlog {

// A rule of a semi-ground program: all remaining variables are numeric and
// occur only in limit atoms and comparisons.  `origin` indexes the source rule
// the instance was produced from.
struct SemiGroundRule {
    Rule rule;
    size_t origin = 0;
};

struct SemiGroundProgram {
    std::map<std::string, PredicateInfo> preds;
    std::vector<SemiGroundRule> rules;

    Program as_program() const;
};

// Instantiates every object variable with the program's object constants and
// every numeric variable occurring in an ordinary numeric atom with its
// integer constants, in all combinations, folding arithmetic that becomes
// ground.  A rule needing constants of a sort the program lacks yields no
// instances.  With `prune`, instances that can never fire are dropped — those
// containing a false ground comparison, or a ground positive literal that the
// facts fail over a predicate no proper rule defines — and true ground
// comparisons are elided; none of this changes what the program entails.  The
// two-argument form grounds a program over the combined constants of the
// program and a dataset.
SemiGroundProgram semi_ground(const Program& p, bool prune = true);
SemiGroundProgram semi_ground(const Program& p, const Dataset& d, bool prune = true);

// Eliminates the negative body literals of a semi-positive semi-ground program
// using the program's own facts.  A ground negated atom entailed by the facts
// deletes its rule, otherwise the literal is dropped.  A negated limit atom
// over a variable deletes the rule when the slot covers all integers, is
// dropped when the slot is empty, and otherwise becomes a strict comparison of
// the variable against the slot's optimal value.  Negation on a predicate that
// any proper rule defines is a contract violation, as is a non-ground negated
// ordinary literal.
SemiGroundProgram reduct(const SemiGroundProgram& sg);

// Reduct variant that keeps the output type-consistent.  Each negated limit
// literal over a variable must sit in an exact-bound pattern
// A(a,n), not A(a,m), m = n+1 (max) or m = n-1 (min); the whole pattern is
// removed and the pinned values substituted: n becomes the slot's optimal
// value k and m becomes k+1 or k-1.  A pattern whose slot is empty or covers
// all integers can never fire, so its rule is deleted.  Negated limit
// variables without the pattern make the input ineligible and raise a
// contract violation.
SemiGroundProgram tc_rewrite_reduct(const SemiGroundProgram& sg);

}  // namespace limitlog
