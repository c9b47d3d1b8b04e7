#include "limitlog/poly.hpp"

#include <algorithm>

namespace limitlog {

Poly Poly::of(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Constant: return Poly::constant(t.value);
        case Term::Kind::Variable: return Poly::variable(t.var);
        case Term::Kind::Add: return Poly::of(t.kids[0]) + Poly::of(t.kids[1]);
        case Term::Kind::Sub: return Poly::of(t.kids[0]) - Poly::of(t.kids[1]);
        case Term::Kind::Mul: return Poly::of(t.kids[0]) * Poly::of(t.kids[1]);
        case Term::Kind::Star: throw ContractViolation("'*' has no polynomial form");
    }
    throw ContractViolation("corrupt term");
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms) r.add_term(m, -c);
    return r;
}

Poly Poly::negated() const {
    Poly r;
    for (const auto& [m, c] : terms) r.terms[m] = -c;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    for (const auto& [m1, c1] : terms) {
        for (const auto& [m2, c2] : o.terms) {
            Monomial m = m1;
            m.insert(m.end(), m2.begin(), m2.end());
            std::sort(m.begin(), m.end());
            r.add_term(std::move(m), c1 * c2);
        }
    }
    return r;
}

std::set<std::string> Poly::vars() const {
    std::set<std::string> out;
    for (const auto& [m, c] : terms) out.insert(m.begin(), m.end());
    return out;
}

Poly Poly::substitute(const std::string& var, const Int& value) const {
    Poly r;
    for (const auto& [m, c] : terms) {
        Int coeff = c;
        Monomial rest;
        for (const std::string& v : m) {
            if (v == var)
                coeff *= value;
            else
                rest.push_back(v);
        }
        r.add_term(std::move(rest), coeff);
    }
    return r;
}

Poly Poly::substitute(const std::map<std::string, Int>& values) const {
    Poly r;
    for (const auto& [m, c] : terms) {
        Int coeff = c;
        Monomial rest;
        for (const std::string& v : m) {
            auto it = values.find(v);
            if (it != values.end())
                coeff *= it->second;
            else
                rest.push_back(v);
        }
        r.add_term(std::move(rest), coeff);
    }
    return r;
}

Int Poly::eval() const {
    if (!is_constant()) throw ContractViolation("polynomial is not ground");
    return constant_value();
}

namespace {

// One monomial as a term: coefficient times its variables.  The coefficient
// factor is emitted whenever it is not exactly 1 (so a leading negative
// monomial renders as e.g. -3*M rather than 0-3*M).
Term monomial_term(const Poly::Monomial& m, const Int& coeff) {
    Term t;
    bool have = false;
    if (coeff != 1 || m.empty()) {
        t = Term::constant(coeff);
        have = true;
    }
    for (const std::string& v : m) {
        Term var = Term::variable(v);
        t = have ? Term::mul(std::move(t), std::move(var)) : std::move(var);
        have = true;
    }
    return t;
}

}  // namespace

Term Poly::to_term() const {
    if (terms.empty()) return Term::constant(0);
    Term out;
    bool have = false;
    // Constant part first for readability, then monomials in map order.
    auto cit = terms.find({});
    if (cit != terms.end()) {
        out = Term::constant(cit->second);
        have = true;
    }
    for (const auto& [m, c] : terms) {
        if (m.empty()) continue;
        if (!have) {
            out = monomial_term(m, c);
            have = true;
        } else {
            Term piece = monomial_term(m, boost::multiprecision::abs(c));
            out = (c < 0) ? Term::sub(std::move(out), std::move(piece))
                          : Term::add(std::move(out), std::move(piece));
        }
    }
    return out;
}

Term simplify_term(const Term& t) {
    if (t.is_star()) return t;
    return Poly::of(t).to_term();
}

}  // namespace limitlog
