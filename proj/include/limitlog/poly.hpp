#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "limitlog/ast.hpp"

namespace limitlog {

// Multivariate polynomial normal form for numeric terms: a map from
// monomials (sorted variable multisets) to nonzero integer coefficients.
// Used for term simplification, linearity analysis and syntactic matching
// up to arithmetic identity.
struct Poly {
    using Monomial = std::vector<std::string>;  // sorted, with multiplicity
    std::map<Monomial, Int> terms;              // zero coefficients never stored

    static Poly constant(Int v) {
        Poly p;
        if (v != 0) p.terms[{}] = std::move(v);
        return p;
    }
    static Poly variable(const std::string& v) {
        Poly p;
        p.terms[{v}] = 1;
        return p;
    }
    // Conversion from a term; Star is rejected (ContractViolation).
    static Poly of(const Term& t);

    void add_term(Monomial m, const Int& c) {
        if (c == 0) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(std::move(m), c);
        } else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly negated() const;
    bool operator==(const Poly&) const = default;

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty()); }
    Int constant_value() const {
        auto it = terms.find({});
        return it == terms.end() ? Int(0) : it->second;
    }

    std::set<std::string> vars() const;

    // Substitutes an integer for a variable.
    Poly substitute(const std::string& var, const Int& value) const;
    Poly substitute(const std::map<std::string, Int>& values) const;

    // Evaluates a ground polynomial; throws ContractViolation if variables remain.
    Int eval() const;

    // Canonical term rebuild: constant part first (if any), then monomials in
    // map order, negative coefficients rendered through subtraction.
    Term to_term() const;
};

// Simplifies a term to its canonical polynomial form (Star passes through).
Term simplify_term(const Term& t);

}  // namespace limitlog
