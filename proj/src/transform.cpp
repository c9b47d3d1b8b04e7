#include "limitlog/transform.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "limitlog/errors.hpp"
#include "limitlog/poly.hpp"
#include "limitlog/pseudo.hpp"

namespace limitlog {

namespace {

Term subst_term(const Term& t, const std::map<std::string, Int>& nmap) {
    switch (t.kind) {
        case Term::Kind::Constant:
        case Term::Kind::Star:
            return t;
        case Term::Kind::Variable: {
            auto it = nmap.find(t.var);
            return it == nmap.end() ? t : Term::constant(it->second);
        }
        default: {
            Term out = t;
            for (Term& k : out.kids) k = subst_term(k, nmap);
            return out;
        }
    }
}

ObjTerm subst_obj(const ObjTerm& o, const std::map<std::string, std::string>& omap) {
    if (!o.is_var) return o;
    auto it = omap.find(o.name);
    return it == omap.end() ? o : ObjTerm::constant(it->second);
}

Atom subst_atom(const Atom& a, const std::map<std::string, std::string>& omap,
                const std::map<std::string, Int>& nmap) {
    Atom out = a;
    for (ObjTerm& o : out.objects) o = subst_obj(o, omap);
    if (out.numeric) *out.numeric = simplify_term(subst_term(*out.numeric, nmap));
    return out;
}

// Evaluates a comparison whose sides are both ground; no value when either
// side still has variables (a star never reaches comparisons).
std::optional<bool> ground_compare(const Comparison& c) {
    Poly d = Poly::of(c.lhs) - Poly::of(c.rhs);
    if (!d.is_constant()) return std::nullopt;
    Int v = d.constant_value();
    return c.op == Comparison::Op::Lt ? v < 0 : v <= 0;
}

// Instantiates one rule under the given assignment; false when pruning
// removed the instance because a ground comparison came out false.
bool instantiate(const Rule& r, const std::map<std::string, std::string>& omap,
                 const std::map<std::string, Int>& nmap, bool prune, Rule& out) {
    out = Rule{};
    out.head = subst_atom(r.head, omap, nmap);
    for (const Literal& l : r.body) {
        if (l.kind == Literal::Kind::Compare) {
            Comparison c;
            c.op = l.cmp.op;
            c.lhs = simplify_term(subst_term(l.cmp.lhs, nmap));
            c.rhs = simplify_term(subst_term(l.cmp.rhs, nmap));
            if (prune) {
                std::optional<bool> v = ground_compare(c);
                if (v.has_value()) {
                    if (!*v) return false;
                    continue;
                }
            }
            Literal nl;
            nl.kind = Literal::Kind::Compare;
            nl.cmp = std::move(c);
            out.body.push_back(std::move(nl));
        } else {
            Literal nl = l;
            nl.atom = subst_atom(l.atom, omap, nmap);
            out.body.push_back(std::move(nl));
        }
    }
    return true;
}

SlotKey slot_of(const Atom& a) {
    SlotKey s;
    s.pred = a.pred;
    s.objects.reserve(a.objects.size());
    for (const ObjTerm& o : a.objects) {
        if (o.is_var) throw ContractViolation("reduct: input is not semi-ground");
        s.objects.push_back(o.name);
    }
    return s;
}

PseudoInterpretation facts_interpretation(const Program& ctx, const SemiGroundProgram& sg) {
    PseudoInterpretation D;
    for (const SemiGroundRule& sr : sg.rules)
        if (sr.rule.is_fact()) D.add_fact(ctx, fact_view(ctx, sr.rule));
    return D;
}

std::set<std::string> rule_defined_preds(const SemiGroundProgram& sg) {
    std::set<std::string> idb;
    for (const SemiGroundRule& sr : sg.rules)
        if (!sr.rule.is_fact()) idb.insert(sr.rule.head.pred);
    return idb;
}

}  // namespace

Program SemiGroundProgram::as_program() const {
    Program p;
    p.preds = preds;
    p.rules.reserve(rules.size());
    for (const SemiGroundRule& sr : rules) p.rules.push_back(sr.rule);
    return p;
}

SemiGroundProgram semi_ground(const Program& p, bool prune) {
    SemiGroundProgram out;
    out.preds = p.preds;
    std::set<std::string> objs = object_constants(p);
    std::set<Int> ints = integer_constants(p);

    // For pruning: a ground positive literal over a predicate no proper rule
    // defines is decided by the facts alone, so an instance it fails in can
    // never fire.
    PseudoInterpretation facts;
    std::set<std::string> idb;
    if (prune) {
        for (const Rule& r : p.rules) {
            if (r.is_fact()) facts.add_fact(p, fact_view(p, r));
            else idb.insert(r.head.pred);
        }
    }
    auto viable = [&](const Rule& inst) {
        if (!prune) return true;
        for (const Literal& l : inst.body) {
            if (l.kind != Literal::Kind::Positive) continue;
            if (idb.count(l.atom.pred) || !l.atom.ground()) continue;
            if (!satisfies(p, facts, l.atom)) return false;
        }
        return true;
    };

    for (size_t ridx = 0; ridx < p.rules.size(); ++ridx) {
        const Rule& r = p.rules[ridx];
        if (r.is_fact()) {
            out.rules.push_back(SemiGroundRule{r, ridx});
            continue;
        }
        // Variables needing instantiation: object variables anywhere, and
        // numeric variables occurring in an ordinary numeric atom.
        std::set<std::string> ovars;
        std::set<std::string> nvars;
        auto scan_atom = [&](const Atom& a) {
            for (const ObjTerm& o : a.objects)
                if (o.is_var) ovars.insert(o.name);
            if (a.numeric && p.kind_of(a.pred) == PredKind::Ordinary)
                a.numeric->collect_vars(nvars);
        };
        scan_atom(r.head);
        for (const Literal& l : r.body)
            if (l.is_standard()) scan_atom(l.atom);

        if ((!ovars.empty() && objs.empty()) || (!nvars.empty() && ints.empty()))
            continue;  // no instances over an empty domain

        std::vector<std::string> ov(ovars.begin(), ovars.end());
        std::vector<std::string> nv(nvars.begin(), nvars.end());
        std::vector<std::string> odom(objs.begin(), objs.end());
        std::vector<Int> ndom(ints.begin(), ints.end());

        std::vector<size_t> idx(ov.size() + nv.size(), 0);
        while (true) {
            std::map<std::string, std::string> omap;
            std::map<std::string, Int> nmap;
            for (size_t i = 0; i < ov.size(); ++i) omap[ov[i]] = odom[idx[i]];
            for (size_t i = 0; i < nv.size(); ++i) nmap[nv[i]] = ndom[idx[ov.size() + i]];
            Rule inst;
            if (instantiate(r, omap, nmap, prune, inst) && viable(inst))
                out.rules.push_back(SemiGroundRule{std::move(inst), ridx});
            // advance the odometer
            size_t pos = 0;
            for (; pos < idx.size(); ++pos) {
                size_t lim = pos < ov.size() ? odom.size() : ndom.size();
                if (++idx[pos] < lim) break;
                idx[pos] = 0;
            }
            if (pos == idx.size()) break;
        }
    }
    return out;
}

SemiGroundProgram semi_ground(const Program& p, const Dataset& d, bool prune) {
    return semi_ground(merge_programs(p, d), prune);
}

SemiGroundProgram reduct(const SemiGroundProgram& sg) {
    Program ctx = sg.as_program();
    PseudoInterpretation D = facts_interpretation(ctx, sg);
    std::set<std::string> idb = rule_defined_preds(sg);

    SemiGroundProgram out;
    out.preds = sg.preds;
    for (const SemiGroundRule& sr : sg.rules) {
        if (sr.rule.is_fact()) {
            out.rules.push_back(sr);
            continue;
        }
        Rule nr;
        nr.head = sr.rule.head;
        bool deleted = false;
        for (const Literal& l : sr.rule.body) {
            if (l.kind != Literal::Kind::Negative) {
                nr.body.push_back(l);
                continue;
            }
            const Atom& a = l.atom;
            if (idb.count(a.pred))
                throw ContractViolation("reduct: negation on predicate '" + a.pred +
                                        "', which is defined by a rule");
            if (a.ground()) {
                if (satisfies(ctx, D, a)) {
                    deleted = true;
                    break;
                }
                continue;  // facts never entail it: drop the literal
            }
            PredKind pk = ctx.kind_of(a.pred);
            if (!is_limit(pk))
                throw ContractViolation("reduct: non-ground negated ordinary literal over '" +
                                        a.pred + "'");
            const LimitValue* e = D.limit_entry(slot_of(a));
            if (e && e->all_ints) {
                deleted = true;  // the atom holds for every value
                break;
            }
            if (!e) continue;  // the atom holds for no value: drop the literal
            // Negation of "within the optimum" is a strict comparison past it.
            Comparison cmp;
            cmp.op = Comparison::Op::Lt;
            if (pk == PredKind::LimitMax) {
                cmp.lhs = Term::constant(e->finite);
                cmp.rhs = *a.numeric;
            } else {
                cmp.lhs = *a.numeric;
                cmp.rhs = Term::constant(e->finite);
            }
            nr.body.push_back(Literal::compare(std::move(cmp)));
        }
        if (!deleted) out.rules.push_back(SemiGroundRule{std::move(nr), sr.origin});
    }
    return out;
}

SemiGroundProgram tc_rewrite_reduct(const SemiGroundProgram& sg) {
    Program ctx = sg.as_program();
    PseudoInterpretation D = facts_interpretation(ctx, sg);
    std::set<std::string> idb = rule_defined_preds(sg);

    SemiGroundProgram out;
    out.preds = sg.preds;
    for (const SemiGroundRule& sr : sg.rules) {
        if (sr.rule.is_fact()) {
            out.rules.push_back(sr);
            continue;
        }
        const Rule& r = sr.rule;
        std::set<size_t> remove;         // body positions consumed by patterns
        std::map<std::string, Int> pin;  // variables pinned to exact values
        bool deleted = false;
        auto try_pin = [&](const std::string& v, const Int& k) {
            auto [it, fresh] = pin.emplace(v, k);
            if (!fresh && it->second != k)
                throw ContractViolation("reduct rewriting: variable '" + v +
                                        "' is pinned by two exact-bound patterns to "
                                        "different values");
        };

        for (size_t qi = 0; qi < r.body.size() && !deleted; ++qi) {
            const Literal& l = r.body[qi];
            if (l.kind != Literal::Kind::Negative) continue;
            const Atom& a = l.atom;
            if (idb.count(a.pred))
                throw ContractViolation("reduct: negation on predicate '" + a.pred +
                                        "', which is defined by a rule");
            if (a.ground()) {
                if (satisfies(ctx, D, a)) deleted = true;
                else remove.insert(qi);
                continue;
            }
            PredKind pk = ctx.kind_of(a.pred);
            if (!is_limit(pk))
                throw ContractViolation("reduct: non-ground negated ordinary literal over '" +
                                        a.pred + "'");
            if (!a.numeric || !a.numeric->is_variable())
                throw ContractViolation(
                    "reduct rewriting: negated limit literal lacks an exact-bound pattern");
            const std::string& m = a.numeric->var;
            Int t = pk == PredKind::LimitMax ? 1 : -1;
            bool found = false;
            for (size_t pi = 0; pi < r.body.size() && !found; ++pi) {
                const Literal& pl = r.body[pi];
                if (pl.kind != Literal::Kind::Positive || pl.atom.pred != a.pred) continue;
                if (!(pl.atom.objects == a.objects)) continue;
                if (!pl.atom.numeric || !pl.atom.numeric->is_variable()) continue;
                const std::string& n = pl.atom.numeric->var;
                if (n == m) continue;
                Poly want = Poly::variable(m) - Poly::variable(n) - Poly::constant(t);
                ptrdiff_t c1 = -1, c2 = -1;
                for (size_t ci = 0; ci < r.body.size(); ++ci) {
                    const Literal& cl = r.body[ci];
                    if (cl.kind != Literal::Kind::Compare ||
                        cl.cmp.op != Comparison::Op::Le)
                        continue;
                    Poly q = Poly::of(cl.cmp.lhs) - Poly::of(cl.cmp.rhs);
                    if (c1 < 0 && q == want) c1 = static_cast<ptrdiff_t>(ci);
                    else if (c2 < 0 && q == want.negated()) c2 = static_cast<ptrdiff_t>(ci);
                }
                if (c1 < 0 || c2 < 0) continue;
                found = true;
                const LimitValue* e = D.limit_entry(slot_of(a));
                if (!e || e->all_ints) {
                    // Empty slot: the pattern's positive half can never fire.
                    // Saturated slot: its negative half can never hold.
                    deleted = true;
                    break;
                }
                remove.insert(qi);
                remove.insert(pi);
                remove.insert(static_cast<size_t>(c1));
                remove.insert(static_cast<size_t>(c2));
                try_pin(n, e->finite);
                try_pin(m, e->finite + t);
            }
            if (!found && !deleted)
                throw ContractViolation(
                    "reduct rewriting: negated limit literal lacks an exact-bound pattern");
        }
        if (deleted) continue;

        std::map<std::string, std::string> no_objs;
        Rule nr;
        bool unsat = false;
        nr.head = subst_atom(r.head, no_objs, pin);
        for (size_t i = 0; i < r.body.size() && !unsat; ++i) {
            if (remove.count(i)) continue;
            const Literal& l = r.body[i];
            if (l.kind == Literal::Kind::Compare) {
                Comparison c;
                c.op = l.cmp.op;
                c.lhs = simplify_term(subst_term(l.cmp.lhs, pin));
                c.rhs = simplify_term(subst_term(l.cmp.rhs, pin));
                std::optional<bool> v = ground_compare(c);
                if (v.has_value()) {
                    if (!*v) unsat = true;
                    continue;
                }
                Literal nl;
                nl.kind = Literal::Kind::Compare;
                nl.cmp = std::move(c);
                nr.body.push_back(std::move(nl));
            } else {
                Literal nl = l;
                nl.atom = subst_atom(l.atom, no_objs, pin);
                nr.body.push_back(std::move(nl));
            }
        }
        if (!unsat) out.rules.push_back(SemiGroundRule{std::move(nr), sr.origin});
    }
    return out;
}

}  // namespace limitlog
