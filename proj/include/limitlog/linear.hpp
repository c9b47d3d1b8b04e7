#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "limitlog/ints.hpp"
#include "limitlog/poly.hpp"

namespace limitlog {

// ---------------------------------------------------------------------------
// Linear expressions and conjunctive integer linear systems.
//
// The engine reduces every rule body to a conjunction of linear equalities
// and inequalities over the rule's numeric variables, then asks for
// feasibility or for the exact integer optimum of a linear objective.  All
// arithmetic is exact; rationals appear only transiently in the relaxation
// bound.
// ---------------------------------------------------------------------------

// constant + sum of coeff * var.  Zero coefficients are never stored.
struct LinExpr {
    std::map<std::string, Int> coeffs;
    Int constant;

    static LinExpr of_constant(Int v) {
        LinExpr e;
        e.constant = std::move(v);
        return e;
    }
    static LinExpr of_variable(const std::string& v) {
        LinExpr e;
        e.coeffs[v] = 1;
        return e;
    }
    // Converts a polynomial; throws ContractViolation on a non-linear
    // monomial (degree two or higher).
    static LinExpr of_poly(const Poly& p);

    bool is_constant() const { return coeffs.empty(); }
    Int coeff(const std::string& v) const {
        auto it = coeffs.find(v);
        return it == coeffs.end() ? Int(0) : it->second;
    }

    LinExpr operator+(const LinExpr& o) const;
    LinExpr operator-(const LinExpr& o) const;
    LinExpr negated() const {
        LinExpr r;
        r.constant = -constant;
        for (const auto& [v, c] : coeffs) r.coeffs[v] = -c;
        return r;
    }
    LinExpr scaled(const Int& k) const;

    // Replaces v by e everywhere.
    LinExpr substitute(const std::string& v, const LinExpr& e) const;

    // Evaluation under a total assignment (unassigned variables count as 0).
    Int eval(const std::map<std::string, Int>& assignment) const;
};

// Conjunction of e = 0 and e >= 0 constraints.
struct IntLinSystem {
    std::vector<LinExpr> eqs;
    std::vector<LinExpr> ges;

    void add_eq(LinExpr e) { eqs.push_back(std::move(e)); }
    void add_ge(LinExpr e) { ges.push_back(std::move(e)); }       // e >= 0
    void add_le(LinExpr e) { ges.push_back(e.negated()); }        // e <= 0
    // lhs <= rhs, lhs < rhs.
    void add_leq(const LinExpr& lhs, const LinExpr& rhs) { add_ge(rhs - lhs); }
    void add_lt(const LinExpr& lhs, const LinExpr& rhs) {
        add_ge(rhs - lhs - LinExpr::of_constant(1));
    }

    std::set<std::string> variables() const;
};

// Exact integer feasibility.  Equalities are eliminated by unit-coefficient
// substitution with a modulus-reduction step for systems without a unit
// coefficient (detecting divisibility conflicts on the way); the remaining
// inequalities are decided by shadow projection with splinter branching,
// which is complete for integers.  Throws EvalError if the search budget is
// exhausted (does not happen at the problem sizes the engine produces).
bool lin_feasible(const IntLinSystem& sys);

enum class OptStatus { Infeasible, Unbounded, Optimum };

struct OptResult {
    OptStatus status = OptStatus::Infeasible;
    Int value;  // meaningful iff status == Optimum

    static OptResult infeasible() { return OptResult{OptStatus::Infeasible, 0}; }
    static OptResult unbounded() { return OptResult{OptStatus::Unbounded, 0}; }
    static OptResult optimum(Int v) { return OptResult{OptStatus::Optimum, std::move(v)}; }
    bool operator==(const OptResult&) const = default;
};

// Exact integer extremum of `objective` over the solutions of `sys`.
// Feasibility and unboundedness are decided first; a finite search then
// closes the gap between the rational relaxation bound and the integer
// optimum: take the floor of the relaxation bound, test whether it is
// attained, and otherwise cut it off and repeat.
OptResult lin_optimise(const IntLinSystem& sys, const LinExpr& objective, bool maximise);

}  // namespace limitlog
