#pragma once

#include <map>
#include <set>

#include "limitlog/ast.hpp"

namespace limitlog {

// ---------------------------------------------------------------------------
// Limit values and the strength order.
//
// An entry for a limit slot is either a finite bound or "all integers".
// Under a max predicate the fact p(t, k) says "the value is k or more", so a
// numerically larger entry is the stronger one; under min it is the smaller.
// AllInts is the top of the order in both cases.
// ---------------------------------------------------------------------------

struct LimitValue {
    bool all_ints = false;
    Int finite;  // meaningful iff !all_ints

    static LimitValue all() { return LimitValue{true, 0}; }
    static LimitValue of(Int v) { return LimitValue{false, std::move(v)}; }
    bool operator==(const LimitValue&) const = default;
};

// k1 is implied by k2 under the given limit kind (k1 "at most as strong").
inline bool value_leq(PredKind kind, const Int& k1, const Int& k2) {
    return kind == PredKind::LimitMax ? k1 <= k2 : k1 >= k2;
}
// Strict version.
inline bool value_lt(PredKind kind, const Int& k1, const Int& k2) {
    return kind == PredKind::LimitMax ? k1 < k2 : k1 > k2;
}

// Does the entry make the ground atom with value k true?
inline bool entry_covers(PredKind kind, const LimitValue& e, const Int& k) {
    return e.all_ints || value_leq(kind, k, e.finite);
}

// a at least as strong as b.
inline bool entry_geq(PredKind kind, const LimitValue& a, const LimitValue& b) {
    if (a.all_ints) return true;
    if (b.all_ints) return false;
    return value_leq(kind, b.finite, a.finite);
}

// The stronger of two entries.
inline LimitValue entry_join(PredKind kind, const LimitValue& a, const LimitValue& b) {
    return entry_geq(kind, a, b) ? a : b;
}

// ---------------------------------------------------------------------------
// Pseudo-interpretations: the finite representation of (possibly infinite)
// sets of ground facts.  Object facts and ordinary numeric facts are stored
// explicitly; each limit slot holds at most one entry, which stands for the
// downward (strength-)closure of that value.
// ---------------------------------------------------------------------------

class PseudoInterpretation {
public:
    std::set<SlotKey> object_facts;
    std::map<SlotKey, std::set<Int>> ordinary_facts;
    std::map<SlotKey, LimitValue> limit_entries;

    bool operator==(const PseudoInterpretation&) const = default;

    bool empty() const {
        return object_facts.empty() && ordinary_facts.empty() && limit_entries.empty();
    }

    bool has_object(const SlotKey& s) const { return object_facts.count(s) > 0; }
    bool has_ordinary(const SlotKey& s, const Int& v) const {
        auto it = ordinary_facts.find(s);
        return it != ordinary_facts.end() && it->second.count(v) > 0;
    }
    const LimitValue* limit_entry(const SlotKey& s) const {
        auto it = limit_entries.find(s);
        return it == limit_entries.end() ? nullptr : &it->second;
    }

    // Adds a fact; limit facts join with the existing entry.  Returns true if
    // the interpretation strictly grew.
    bool add_object(const SlotKey& s) { return object_facts.insert(s).second; }
    bool add_ordinary(const SlotKey& s, const Int& v) { return ordinary_facts[s].insert(v).second; }
    bool add_limit(PredKind kind, const SlotKey& s, const LimitValue& v) {
        auto it = limit_entries.find(s);
        if (it == limit_entries.end()) {
            limit_entries.emplace(s, v);
            return true;
        }
        if (entry_geq(kind, it->second, v)) return false;
        it->second = entry_join(kind, it->second, v);
        return true;
    }
    bool add_fact(const Program& ctx, const GroundFact& f);

    // Containment in the induced-fact-set order (every fact of *this* is a
    // fact of `other`).  Needs predicate kinds for the limit direction.
    bool subsumed_by(const Program& ctx, const PseudoInterpretation& other) const;
};

// ---------------------------------------------------------------------------
// Satisfaction.
// ---------------------------------------------------------------------------

// J |= alpha for a ground atom (comparisons allowed: both sides ground).
// Throws ContractViolation when the literal is not ground.
bool satisfies(const Program& ctx, const PseudoInterpretation& J, const Literal& lit);
bool satisfies(const Program& ctx, const PseudoInterpretation& J, const Atom& ground_atom);

// Exact least-upper-bound check: true iff the slot's entry is finite and
// equals k (an AllInts entry has no finite lub; an absent entry has none).
bool satisfies_lub(const Program& ctx, const PseudoInterpretation& J, const SlotKey& slot,
                   const Int& k);

// Entailment of a ground fact (value or '*').
bool entails(const Program& ctx, const PseudoInterpretation& J, const GroundFact& f);

// Folds the interpretation back into facts: explicit facts unchanged, each
// limit entry as a single fact (finite value or '*').
std::vector<GroundFact> to_facts(const PseudoInterpretation& J);

// Turns ground facts into fact rules appended onto a program vocabulary.
Rule fact_rule(const GroundFact& f);

}  // namespace limitlog
