#include "limitlog/printer.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace limitlog {

namespace {

bool plain_name(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return s != "not" && s != "lub" && s != "min" && s != "max";
}

std::string name(const std::string& s) { return plain_name(s) ? s : "'" + s + "'"; }

int prec(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Add:
        case Term::Kind::Sub: return 1;
        case Term::Kind::Mul: return 2;
        default: return 3;
    }
}

void term_to(std::ostream& os, const Term& t) {
    auto child = [&os](const Term& c, bool needs_parens) {
        if (needs_parens) os << '(';
        term_to(os, c);
        if (needs_parens) os << ')';
    };
    switch (t.kind) {
        case Term::Kind::Constant:
            os << t.value;
            break;
        case Term::Kind::Variable:
            os << t.var;
            break;
        case Term::Kind::Star:
            os << '*';
            break;
        case Term::Kind::Add:
        case Term::Kind::Sub:
        case Term::Kind::Mul: {
            // Left child needs parens when strictly looser; right child also
            // when equally tight (left-associative reparse would regroup it).
            child(t.kids[0], prec(t.kids[0]) < prec(t));
            os << (t.kind == Term::Kind::Add ? "+" : t.kind == Term::Kind::Sub ? "-" : "*");
            const Term& r = t.kids[1];
            bool parens = prec(r) <= prec(t);
            // A constant right operand of '+'/'*' never regroups; a negative
            // one still needs parens so the sign survives ('X+-1' is invalid).
            if (r.is_constant()) parens = r.value < 0;
            child(r, parens);
            break;
        }
    }
}

}  // namespace

std::string print_term(const Term& t) {
    std::ostringstream os;
    term_to(os, t);
    return os.str();
}

std::string print_atom(const Atom& a) {
    std::ostringstream os;
    os << name(a.pred);
    if (a.objects.empty() && !a.numeric) return os.str();
    os << '(';
    bool first = true;
    for (const ObjTerm& o : a.objects) {
        if (!first) os << ',';
        first = false;
        os << (o.is_var ? o.name : name(o.name));
    }
    if (a.numeric) {
        if (!first) os << ',';
        term_to(os, *a.numeric);
    }
    os << ')';
    return os.str();
}

std::string print_literal(const Literal& l) {
    switch (l.kind) {
        case Literal::Kind::Positive: return print_atom(l.atom);
        case Literal::Kind::Negative: return "not " + print_atom(l.atom);
        case Literal::Kind::Compare:
            return print_term(l.cmp.lhs) + (l.cmp.op == Comparison::Op::Lt ? " < " : " <= ") +
                   print_term(l.cmp.rhs);
    }
    throw ContractViolation("unreachable literal kind");
}

std::string print_rule(const Rule& r) {
    std::string out = print_atom(r.head);
    if (!r.body.empty()) {
        out += " :- ";
        for (size_t i = 0; i < r.body.size(); ++i) {
            if (i) out += ", ";
            out += print_literal(r.body[i]);
        }
    }
    return out + ".";
}

std::string print_program(const Program& p) {
    std::ostringstream os;
    for (const auto& [pname, info] : p.preds) {
        if (!is_limit(info.kind)) continue;
        os << (info.kind == PredKind::LimitMin ? "min " : "max ") << name(pname) << '/'
           << info.arity << ".\n";
    }
    for (const Rule& r : p.rules) os << print_rule(r) << '\n';
    return os.str();
}

std::string print_fact(const GroundFact& f) {
    std::ostringstream os;
    os << name(f.pred);
    if (!f.objects.empty() || f.has_numeric) {
        os << '(';
        bool first = true;
        for (const std::string& o : f.objects) {
            if (!first) os << ',';
            first = false;
            os << name(o);
        }
        if (f.has_numeric) {
            if (!first) os << ',';
            if (f.all_ints) os << '*';
            else os << f.value;
        }
        os << ')';
    }
    os << '.';
    return os.str();
}

std::string print_facts(std::vector<GroundFact> facts) {
    std::sort(facts.begin(), facts.end(), [](const GroundFact& a, const GroundFact& b) {
        if (a.pred != b.pred) return a.pred < b.pred;
        if (a.objects != b.objects) return a.objects < b.objects;
        if (a.all_ints != b.all_ints) return b.all_ints;  // finite before '*'
        return a.value < b.value;
    });
    std::string out;
    for (const GroundFact& f : facts) {
        out += print_fact(f);
        out += '\n';
    }
    return out;
}

std::string print_pseudo(const Program& ctx, const PseudoInterpretation& J) {
    std::ostringstream os;
    if (!J.object_facts.empty()) {
        os << "% object facts\n";
        for (const SlotKey& s : J.object_facts) {
            GroundFact f;
            f.pred = s.pred;
            f.objects = s.objects;
            os << print_fact(f) << '\n';
        }
    }
    if (!J.ordinary_facts.empty()) {
        os << "% ordinary facts\n";
        for (const auto& [slot, values] : J.ordinary_facts) {
            for (const Int& v : values) {
                GroundFact f;
                f.pred = slot.pred;
                f.objects = slot.objects;
                f.has_numeric = true;
                f.value = v;
                os << print_fact(f) << '\n';
            }
        }
    }
    if (!J.limit_entries.empty()) {
        os << "% limit entries (strongest bound per slot)\n";
        for (const auto& [slot, entry] : J.limit_entries) {
            GroundFact f;
            f.pred = slot.pred;
            f.objects = slot.objects;
            f.has_numeric = true;
            if (entry.all_ints) {
                f.all_ints = true;
            } else {
                f.value = entry.finite;
            }
            os << print_fact(f);
            os << "  % " << (ctx.kind_of(slot.pred) == PredKind::LimitMin ? "min" : "max")
               << " lub\n";
        }
    }
    return os.str();
}

}  // namespace limitlog
