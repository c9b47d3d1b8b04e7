#pragma once

#include <map>
#include <set>
#include <string>

#include "limitlog/ast.hpp"

namespace limitlog {

// ---------------------------------------------------------------------------
// Bounded brute-force oracle.
//
// An independent ground-level implementation of the semantics, used to
// cross-check the evaluator: every numeric variable literally ranges over the
// window [-B, B], rules are applied stratum by stratum to a naive fixpoint,
// and the limit closure (a limit fact implies every weaker value) is applied
// truncated to the window.  No pseudo-interpretations, no linear arithmetic:
// just ground atoms.
//
// The window edge can distort results: a derivation chain can march out of
// the window, an optimal binding can be cut short at +/-B, and a negated
// limit atom can probe a value the window cannot represent.  The store
// therefore tracks a `clipped` set: slots in whose derivation cone such an
// effect occurred, so their window content may deviate from the unbounded
// materialisation.  Unclipped slots agree exactly with the unbounded
// materialisation inside the window for programs that keep every rule
// optimum at a finite entry frontier (the type-consistent discipline);
// queries that depend on a clipped slot are answered "out of window" rather
// than guessed.
// ---------------------------------------------------------------------------

struct BoundedUniverse {
    Int bound;                        // window half-width B
    std::set<std::string> constants;  // object constants of program + dataset

    std::set<SlotKey> object_facts;
    // Ordinary and limit values alike, each within [-bound, bound].  A limit
    // slot's set is contiguous from the weak window edge up to its frontier.
    std::map<SlotKey, std::set<Int>> numeric_facts;
    // Slots asserted by a '*' fact: known to hold every integer, not merely
    // every window value.
    std::set<SlotKey> star_slots;
    // Slots whose window content may be distorted by the window edge.
    std::set<SlotKey> clipped;

    bool has_object(const SlotKey& s) const { return object_facts.count(s) > 0; }
    bool has_numeric(const SlotKey& s, const Int& v) const {
        auto it = numeric_facts.find(s);
        return it != numeric_facts.end() && it->second.count(v) > 0;
    }
    // Every value of [-bound, bound] present.
    bool saturated(const SlotKey& s) const {
        auto it = numeric_facts.find(s);
        return it != numeric_facts.end() && Int(it->second.size()) == 2 * bound + 1;
    }
    bool is_clipped(const SlotKey& s) const { return clipped.count(s) > 0; }
};

// Window half-width used when none is given explicitly: the value of the
// LIMITLOG_ORACLE_BOUND environment variable when set (it must parse as a
// positive integer), otherwise 64.
Int default_oracle_bound();

// Ground materialisation of a stratified program over the window.  Numeric
// variables range over [-bound, bound]; negative literals are evaluated
// against the already-completed lower strata; limit facts are stored closed
// under the limit closure restricted to the window.  Requires bound >= every
// integer magnitude in the program and dataset, and a stratifiable program;
// both are ContractViolations otherwise.  An internal sweep budget derived
// from the bound and the slot count guards the fixpoint (EvalError).
BoundedUniverse brute_force_materialise(const Program& p, const Dataset& d, const Int& bound);

enum class OracleVerdict { True, False, OutOfWindow };

// Membership of a ground fact in the bounded store, answered window-
// relatively: values outside [-bound, bound] and queries touching a clipped
// slot are OutOfWindow.  A '*' query asks whether the slot is saturated
// across the whole window (certainly True only for slots asserted by a '*'
// fact; a saturated derived slot reports True as a window-relative answer).
OracleVerdict oracle_entails(const Program& ctx, const BoundedUniverse& u, const GroundFact& phi);

}  // namespace limitlog
