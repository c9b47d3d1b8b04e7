#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "limitlog/ast.hpp"

namespace limitlog {

// Result of stratifying a program by its predicate dependency graph.
// Edges run from body predicates to head predicates; an edge is negative when
// the body literal is negated. A program is stratifiable iff no negative edge
// lies on a dependency cycle. `lambda` is the minimal stratification:
// lambda(A) = 1 + (longest path into A counted by negative edges).
struct Stratification {
    bool ok = false;
    std::map<std::string, int> lambda;        // predicate -> stratum, 1-based
    int num_strata = 0;
    std::vector<std::vector<size_t>> strata;  // rule indices grouped by head stratum
    std::vector<std::string> witness;         // on failure: cycle of predicates, front()==back()
    std::string message;                      // on failure: human-readable reason
};

Stratification compute_stratification(const Program& p);

// Numeric variables guarded in rule r: a variable occurring in a positive
// ordinary numeric body literal, or one bound by an exact-bound pattern
//   A(s,N1), not A(s,N2), N2 <= N1 + t, N1 + t <= N2
// with A a limit predicate and t = +1 (max) / -1 (min). The pattern is
// matched on polynomial normal forms, so comparison order and syntactic
// variants of the same linear term do not matter.
std::set<std::string> guarded_variables(const Program& ctx, const Rule& r);

// Limit-linearity: every numeric term of every rule decomposes as
// s0 + sum_i(s_i * m_i) with the m_i distinct numeric variables not occurring
// in any ordinary numeric literal, s0 built from positively-bound ordinary
// variables, and each coefficient s_i a product of guarded variables and
// integers. Implies (and therefore first checks) safety and stratifiability.
// Diagnostics, one string per problem, are appended to *diags when given.
bool check_limit_linear(const Program& p, std::vector<std::string>* diags = nullptr);

// Type-consistency, decided on the non-ground program without enumerating its
// semi-grounding: the five conditions below are checked per rule against the
// achievable values of each coefficient over the program's constants
// (zero/nonzero and sign reachability of products). Implies limit-linearity.
bool check_type_consistent(const Program& p, std::vector<std::string>* diags = nullptr);

// Type-consistency checked literally on an explicitly semi-ground program
// (no object variables, no variables in ordinary numeric atoms). After
// simplifying every numeric term, each rule must satisfy:
//   1. every numeric term is k0 + sum_i(k_i * m_i), k_i nonzero integers;
//   2. every numeric variable occurs in exactly one standard body literal;
//   3. every numeric variable in a negative literal is guarded;
//   4. for a limit head, every unguarded head variable with positive
//      (negative) coefficient occurs in a unique positive limit body literal
//      of the same (different) kind as the head;
//   5. for each comparison s1 < s2 or s1 <= s2, every unguarded variable in
//      s1 with positive (negative) coefficient occurs in a unique positive
//      min (max) body literal, and dually for s2.
// Throws ContractViolation if the input is not semi-ground.
bool check_type_consistent_reference(const Program& semi_ground,
                                     std::vector<std::string>* diags = nullptr);

// Summary of every static property the engine consults. Invariants:
// type_consistent implies limit_linear implies (stratified and safe).
struct Classification {
    bool safe = false;
    bool stratified = false;
    bool semi_positive = false;  // negation only on predicates with no proper rule
    bool positive = false;       // no negation at all
    bool limit_linear = false;
    bool type_consistent = false;
    Stratification strat;
    std::vector<std::string> diagnostics;
};

Classification classify(const Program& p);

}  // namespace limitlog
