#include "limitlog/pseudo.hpp"

#include "limitlog/poly.hpp"

namespace limitlog {

bool PseudoInterpretation::add_fact(const Program& ctx, const GroundFact& f) {
    const PredicateInfo& info = ctx.pred_info(f.pred);
    switch (info.kind) {
        case PredKind::Object:
            return add_object(f.slot());
        case PredKind::Ordinary:
            if (f.all_ints) throw ContractViolation("'*' fact over ordinary predicate " + f.pred);
            return add_ordinary(f.slot(), f.value);
        default:
            return add_limit(info.kind, f.slot(),
                             f.all_ints ? LimitValue::all() : LimitValue::of(f.value));
    }
}

bool PseudoInterpretation::subsumed_by(const Program& ctx, const PseudoInterpretation& other) const {
    for (const SlotKey& s : object_facts)
        if (!other.has_object(s)) return false;
    for (const auto& [s, vals] : ordinary_facts) {
        auto it = other.ordinary_facts.find(s);
        for (const Int& v : vals)
            if (it == other.ordinary_facts.end() || !it->second.count(v)) return false;
    }
    for (const auto& [s, e] : limit_entries) {
        const LimitValue* oe = other.limit_entry(s);
        if (!oe || !entry_geq(ctx.kind_of(s.pred), *oe, e)) return false;
    }
    return true;
}

bool satisfies(const Program& ctx, const PseudoInterpretation& J, const Atom& a) {
    if (!a.ground()) throw ContractViolation("satisfaction check on non-ground atom " + a.pred);
    const PredicateInfo& info = ctx.pred_info(a.pred);
    SlotKey slot;
    slot.pred = a.pred;
    for (const ObjTerm& o : a.objects) slot.objects.push_back(o.name);
    switch (info.kind) {
        case PredKind::Object:
            return J.has_object(slot);
        case PredKind::Ordinary:
            if (a.numeric->is_star()) throw ContractViolation("'*' in a satisfaction query over " + a.pred);
            return J.has_ordinary(slot, a.numeric->value);
        default: {
            if (a.numeric->is_star()) {
                const LimitValue* e = J.limit_entry(slot);
                return e && e->all_ints;
            }
            const LimitValue* e = J.limit_entry(slot);
            return e && entry_covers(info.kind, *e, a.numeric->value);
        }
    }
}

bool satisfies(const Program& ctx, const PseudoInterpretation& J, const Literal& lit) {
    switch (lit.kind) {
        case Literal::Kind::Positive:
            return satisfies(ctx, J, lit.atom);
        case Literal::Kind::Negative:
            return !satisfies(ctx, J, lit.atom);
        case Literal::Kind::Compare: {
            if (!lit.cmp.lhs.vars().empty() || !lit.cmp.rhs.vars().empty())
                throw ContractViolation("satisfaction check on non-ground comparison");
            Int l = Poly::of(lit.cmp.lhs).eval();
            Int r = Poly::of(lit.cmp.rhs).eval();
            return lit.cmp.op == Comparison::Op::Lt ? l < r : l <= r;
        }
    }
    throw ContractViolation("corrupt literal");
}

bool satisfies_lub(const Program& ctx, const PseudoInterpretation& J, const SlotKey& slot,
                   const Int& k) {
    if (!is_limit(ctx.kind_of(slot.pred)))
        throw ContractViolation("lub check on non-limit predicate " + slot.pred);
    const LimitValue* e = J.limit_entry(slot);
    return e && !e->all_ints && e->finite == k;
}

bool entails(const Program& ctx, const PseudoInterpretation& J, const GroundFact& f) {
    const PredicateInfo& info = ctx.pred_info(f.pred);
    switch (info.kind) {
        case PredKind::Object:
            return J.has_object(f.slot());
        case PredKind::Ordinary:
            if (f.all_ints) throw ContractViolation("'*' query over ordinary predicate " + f.pred);
            return J.has_ordinary(f.slot(), f.value);
        default: {
            const LimitValue* e = J.limit_entry(f.slot());
            if (!e) return false;
            if (f.all_ints) return e->all_ints;
            return entry_covers(info.kind, *e, f.value);
        }
    }
}

std::vector<GroundFact> to_facts(const PseudoInterpretation& J) {
    std::vector<GroundFact> out;
    for (const SlotKey& s : J.object_facts) {
        GroundFact f;
        f.pred = s.pred;
        f.objects = s.objects;
        out.push_back(std::move(f));
    }
    for (const auto& [s, vals] : J.ordinary_facts) {
        for (const Int& v : vals) {
            GroundFact f;
            f.pred = s.pred;
            f.objects = s.objects;
            f.has_numeric = true;
            f.value = v;
            out.push_back(std::move(f));
        }
    }
    for (const auto& [s, e] : J.limit_entries) {
        GroundFact f;
        f.pred = s.pred;
        f.objects = s.objects;
        f.has_numeric = true;
        if (e.all_ints)
            f.all_ints = true;
        else
            f.value = e.finite;
        out.push_back(std::move(f));
    }
    return out;
}

Rule fact_rule(const GroundFact& f) {
    Rule r;
    r.head.pred = f.pred;
    for (const std::string& o : f.objects) r.head.objects.push_back(ObjTerm::constant(o));
    if (f.has_numeric) r.head.numeric = f.all_ints ? Term::star() : Term::constant(f.value);
    return r;
}

}  // namespace limitlog
