#include "limitlog/ast.hpp"

namespace limitlog {

GroundFact fact_view(const Program& ctx, const Rule& r) {
    if (!r.is_fact()) throw ContractViolation("rule is not a fact");
    const PredicateInfo& info = ctx.pred_info(r.head.pred);
    GroundFact f;
    f.pred = r.head.pred;
    for (const ObjTerm& o : r.head.objects) f.objects.push_back(o.name);
    if (is_numeric(info.kind)) {
        f.has_numeric = true;
        if (r.head.numeric->is_star()) {
            f.all_ints = true;
        } else {
            f.value = r.head.numeric->value;
        }
    }
    return f;
}

std::vector<GroundFact> facts_of(const Program& p) {
    std::vector<GroundFact> out;
    for (const Rule& r : p.rules)
        if (r.is_fact()) out.push_back(fact_view(p, r));
    return out;
}

std::vector<std::string> safety_violations(const Program& p) {
    std::vector<std::string> out;
    for (size_t i = 0; i < p.rules.size(); ++i) {
        const Rule& r = p.rules[i];
        std::set<std::string> bound;
        for (const Literal& l : r.body) {
            if (l.kind != Literal::Kind::Positive) continue;
            for (const ObjTerm& o : l.atom.objects)
                if (o.is_var) bound.insert(o.name);
        }
        std::set<std::string> reported;
        auto check_atom = [&](const Atom& a) {
            for (const ObjTerm& o : a.objects)
                if (o.is_var && !bound.count(o.name) && reported.insert(o.name).second)
                    out.push_back("rule " + std::to_string(i + 1) + ": object variable " + o.name +
                                  " does not occur in a positive standard body literal");
        };
        check_atom(r.head);
        for (const Literal& l : r.body)
            if (l.is_standard()) check_atom(l.atom);
    }
    return out;
}

void validate_program(const Program& p, bool require_safe) {
    for (size_t i = 0; i < p.rules.size(); ++i) {
        const Rule& r = p.rules[i];
        const std::string where = "rule " + std::to_string(i + 1) + ": ";

        auto check_atom = [&](const Atom& a, bool in_head) {
            auto it = p.preds.find(a.pred);
            if (it == p.preds.end())
                throw ValidationError(where + "predicate " + a.pred + " missing from predicate table");
            const PredicateInfo& info = it->second;
            int arity = static_cast<int>(a.objects.size()) + (a.numeric ? 1 : 0);
            if (arity != info.arity)
                throw ValidationError(where + a.pred + " used with arity " + std::to_string(arity) +
                                      " but registered with arity " + std::to_string(info.arity));
            if (is_numeric(info.kind) != a.numeric.has_value())
                throw ValidationError(where + a.pred + " numeric position does not match its kind");
            if (a.numeric && a.numeric->is_star()) {
                if (!(in_head && r.body.empty()))
                    throw ValidationError(where + "'*' is only allowed in facts");
                if (!is_limit(info.kind))
                    throw ValidationError(where + "'*' requires a min/max predicate, but " + a.pred +
                                          " is not one");
            }
        };

        check_atom(r.head, true);
        for (const Literal& l : r.body) {
            if (l.is_standard()) check_atom(l.atom, false);
        }

        // A numeric predicate heading a proper rule must be a limit predicate.
        if (!r.body.empty()) {
            const PredicateInfo& hinfo = p.pred_info(r.head.pred);
            if (hinfo.kind == PredKind::Ordinary)
                throw ValidationError(where + "numeric predicate " + r.head.pred +
                                      " heads a rule but has no min/max declaration");
        }
    }

    if (require_safe) {
        auto viols = safety_violations(p);
        if (!viols.empty()) throw ValidationError("unsafe program: " + viols.front());
    }
}

Program merge_programs(const Program& a, const Program& b) {
    Program out = a;
    for (const auto& [name, info] : b.preds) {
        auto it = out.preds.find(name);
        if (it == out.preds.end()) {
            out.preds[name] = info;
            continue;
        }
        PredicateInfo& mine = it->second;
        if (mine.arity != info.arity)
            throw ValidationError("predicate " + name + " has arity " + std::to_string(mine.arity) +
                                  " in one input and " + std::to_string(info.arity) + " in another");
        if (is_numeric(mine.kind) != is_numeric(info.kind))
            throw ValidationError("predicate " + name + " is numeric in one input but not the other");
        if (is_limit(mine.kind) && is_limit(info.kind) && mine.kind != info.kind)
            throw ValidationError("predicate " + name + " declared both min and max");
        // An explicit declaration refines an undeclared ordinary predicate.
        if (info.declared && !mine.declared) {
            mine.kind = info.kind;
            mine.declared = true;
        }
    }
    for (const Rule& r : b.rules) out.rules.push_back(r);

    // Recompute EDB flags over the union.
    for (auto& [name, info] : out.preds) info.edb = true;
    for (const Rule& r : out.rules)
        if (!r.body.empty()) out.preds[r.head.pred].edb = false;

    validate_program(out, /*require_safe=*/true);
    return out;
}

std::set<std::string> object_constants(const Program& p) {
    std::set<std::string> out;
    auto scan = [&](const Atom& a) {
        for (const ObjTerm& o : a.objects)
            if (!o.is_var) out.insert(o.name);
    };
    for (const Rule& r : p.rules) {
        scan(r.head);
        for (const Literal& l : r.body)
            if (l.is_standard()) scan(l.atom);
    }
    return out;
}

std::set<Int> integer_constants(const Program& p) {
    std::set<Int> out;
    auto scan_term = [&](const Term& t, auto&& self) -> void {
        if (t.is_constant()) out.insert(t.value);
        for (const Term& k : t.kids) self(k, self);
    };
    auto scan_atom = [&](const Atom& a) {
        if (a.numeric && !a.numeric->is_star()) scan_term(*a.numeric, scan_term);
    };
    for (const Rule& r : p.rules) {
        scan_atom(r.head);
        for (const Literal& l : r.body) {
            if (l.is_standard()) {
                scan_atom(l.atom);
            } else {
                scan_term(l.cmp.lhs, scan_term);
                scan_term(l.cmp.rhs, scan_term);
            }
        }
    }
    return out;
}

}  // namespace limitlog
