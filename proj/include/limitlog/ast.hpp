#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "limitlog/errors.hpp"
#include "limitlog/ints.hpp"

namespace limitlog {

// ---------------------------------------------------------------------------
// Predicates.
//
// Every predicate has at most one numeric position, always the last one.
// Numeric predicates declared `min p/k` or `max p/k` are limit predicates;
// undeclared numeric predicates are ordinary (extensional data only, since a
// numeric predicate appearing in a proper rule head must be declared).
// ---------------------------------------------------------------------------

enum class PredKind { Object, Ordinary, LimitMin, LimitMax };

inline bool is_numeric(PredKind k) { return k != PredKind::Object; }
inline bool is_limit(PredKind k) { return k == PredKind::LimitMin || k == PredKind::LimitMax; }

struct PredicateInfo {
    std::string name;
    int arity = 0;                      // total positions; numeric position (if any) is last
    PredKind kind = PredKind::Object;
    bool declared = false;              // carries an explicit min/max declaration
    bool edb = true;                    // never the head of a proper (non-fact) rule

    int object_arity() const { return is_numeric(kind) ? arity - 1 : arity; }
};

// ---------------------------------------------------------------------------
// Terms.
//
// Numeric terms are integer constants, numeric variables and +,-,* trees.
// `Star` is the "all integers" marker; it is only legal as the numeric
// argument of a fact over a limit predicate.
// ---------------------------------------------------------------------------

struct Term {
    enum class Kind { Constant, Variable, Add, Sub, Mul, Star };

    Kind kind = Kind::Constant;
    Int value;               // Constant
    std::string var;         // Variable
    std::vector<Term> kids;  // Add/Sub/Mul: exactly two children

    static Term constant(Int v) {
        Term t;
        t.kind = Kind::Constant;
        t.value = std::move(v);
        return t;
    }
    static Term variable(std::string name) {
        Term t;
        t.kind = Kind::Variable;
        t.var = std::move(name);
        return t;
    }
    static Term star() {
        Term t;
        t.kind = Kind::Star;
        return t;
    }
    static Term binary(Kind k, Term a, Term b) {
        Term t;
        t.kind = k;
        t.kids.push_back(std::move(a));
        t.kids.push_back(std::move(b));
        return t;
    }
    static Term add(Term a, Term b) { return binary(Kind::Add, std::move(a), std::move(b)); }
    static Term sub(Term a, Term b) { return binary(Kind::Sub, std::move(a), std::move(b)); }
    static Term mul(Term a, Term b) { return binary(Kind::Mul, std::move(a), std::move(b)); }

    bool is_constant() const { return kind == Kind::Constant; }
    bool is_variable() const { return kind == Kind::Variable; }
    bool is_star() const { return kind == Kind::Star; }

    bool operator==(const Term& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case Kind::Constant: return value == o.value;
            case Kind::Variable: return var == o.var;
            case Kind::Star: return true;
            default: return kids == o.kids;
        }
    }

    void collect_vars(std::set<std::string>& out) const {
        if (kind == Kind::Variable) out.insert(var);
        for (const Term& k : kids) k.collect_vars(out);
    }
    std::set<std::string> vars() const {
        std::set<std::string> out;
        collect_vars(out);
        return out;
    }
};

// Object argument: either a variable or an object constant.
struct ObjTerm {
    bool is_var = false;
    std::string name;

    static ObjTerm var(std::string n) { return ObjTerm{true, std::move(n)}; }
    static ObjTerm constant(std::string n) { return ObjTerm{false, std::move(n)}; }
    auto operator<=>(const ObjTerm&) const = default;
};

// ---------------------------------------------------------------------------
// Atoms, literals, rules.
// ---------------------------------------------------------------------------

struct Atom {
    std::string pred;
    std::vector<ObjTerm> objects;       // object positions, in order
    std::optional<Term> numeric;        // present iff the predicate is numeric

    bool ground() const {
        for (const ObjTerm& o : objects)
            if (o.is_var) return false;
        if (numeric && !(numeric->is_constant() || numeric->is_star())) return false;
        return true;
    }
    bool operator==(const Atom&) const = default;
};

struct Comparison {
    enum class Op { Lt, Le };  // lhs < rhs | lhs <= rhs
    Op op = Op::Le;
    Term lhs, rhs;
    bool operator==(const Comparison&) const = default;
};

struct Literal {
    enum class Kind { Positive, Negative, Compare };
    Kind kind = Kind::Positive;
    Atom atom;        // Positive / Negative
    Comparison cmp;   // Compare

    static Literal pos(Atom a) {
        Literal l;
        l.kind = Kind::Positive;
        l.atom = std::move(a);
        return l;
    }
    static Literal neg(Atom a) {
        Literal l;
        l.kind = Kind::Negative;
        l.atom = std::move(a);
        return l;
    }
    static Literal compare(Comparison c) {
        Literal l;
        l.kind = Kind::Compare;
        l.cmp = std::move(c);
        return l;
    }
    bool is_standard() const { return kind != Kind::Compare; }
    bool operator==(const Literal&) const = default;
};

struct Rule {
    Atom head;
    std::vector<Literal> body;

    // A fact is a rule with an empty body whose head carries no object
    // variables (a lone numeric variable was normalised to Star at load).
    bool is_fact() const { return body.empty() && head.ground(); }
    bool operator==(const Rule&) const = default;
};

// ---------------------------------------------------------------------------
// Ground facts and slots.
// ---------------------------------------------------------------------------

// A slot names one cell of a pseudo-interpretation: a predicate applied to a
// fixed tuple of object constants (the numeric position, if any, excluded).
struct SlotKey {
    std::string pred;
    std::vector<std::string> objects;
    auto operator<=>(const SlotKey&) const = default;
};

struct GroundFact {
    std::string pred;
    std::vector<std::string> objects;
    bool has_numeric = false;
    bool all_ints = false;  // the '*' marker
    Int value;              // meaningful iff has_numeric && !all_ints

    SlotKey slot() const { return SlotKey{pred, objects}; }
};

// ---------------------------------------------------------------------------
// Programs and datasets.
// ---------------------------------------------------------------------------

struct Program {
    std::vector<Rule> rules;  // facts included, in source order
    std::map<std::string, PredicateInfo> preds;

    const PredicateInfo& pred_info(const std::string& name) const {
        auto it = preds.find(name);
        if (it == preds.end()) throw ContractViolation("unknown predicate: " + name);
        return it->second;
    }
    PredKind kind_of(const std::string& name) const { return pred_info(name).kind; }
};

// Datasets are programs that happen to contain only facts.
using Dataset = Program;

// Converts a fact rule to its GroundFact view.  Throws ContractViolation if
// the rule is not a fact.
GroundFact fact_view(const Program& ctx, const Rule& r);

// All facts of a program (rules with empty bodies).
std::vector<GroundFact> facts_of(const Program& p);

// Unions rules and predicate tables; predicate signatures must agree (an
// explicit min/max declaration on one side refines an undeclared numeric
// predicate on the other).  Re-derives EDB flags and revalidates the result.
Program merge_programs(const Program& a, const Program& b);

// Language-level validation shared by the parser and merge_programs: arity
// and kind coherence, min/max totality on numeric rule heads, '*' placement,
// and (optionally) safety.  Throws ValidationError.
void validate_program(const Program& p, bool require_safe);

// Safety: every object variable of a rule occurs in a positive standard body
// literal.  Returns violation messages (empty means safe).
std::vector<std::string> safety_violations(const Program& p);

// Object and integer constants occurring anywhere in the program.
std::set<std::string> object_constants(const Program& p);
std::set<Int> integer_constants(const Program& p);

}  // namespace limitlog
