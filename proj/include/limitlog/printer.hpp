#pragma once

#include <string>
#include <vector>

#include "limitlog/ast.hpp"
#include "limitlog/pseudo.hpp"

namespace limitlog {

// Text renderings that parse back to the identical AST.

std::string print_term(const Term& t);
std::string print_atom(const Atom& a);
std::string print_literal(const Literal& l);
std::string print_rule(const Rule& r);

// Declarations for every limit predicate (sorted by name), then rules in
// their stored order.
std::string print_program(const Program& p);

std::string print_fact(const GroundFact& f);

// One fact per line, sorted by predicate, objects, then value.
std::string print_facts(std::vector<GroundFact> facts);

// Sections for object facts, ordinary facts and limit entries.  Limit
// entries print one fact per slot holding the strongest derived bound.
std::string print_pseudo(const Program& ctx, const PseudoInterpretation& J);

}  // namespace limitlog
