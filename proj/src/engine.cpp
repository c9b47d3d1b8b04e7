#include "limitlog/engine.hpp"

#include <algorithm>
#include <utility>

#include "limitlog/analysis.hpp"
#include "limitlog/errors.hpp"
#include "limitlog/poly.hpp"
#include "limitlog/transform.hpp"

namespace limitlog {

namespace {

SlotKey atom_slot(const Atom& a) {
    SlotKey s;
    s.pred = a.pred;
    for (const ObjTerm& o : a.objects) {
        if (o.is_var) throw ContractViolation("object variable in a rule given to the evaluator");
        s.objects.push_back(o.name);
    }
    return s;
}

// The comparison as a single row with meaning e >= 0.
LinExpr comparison_row(const Comparison& c) {
    LinExpr e = LinExpr::of_poly(Poly::of(c.rhs) - Poly::of(c.lhs));
    if (c.op == Comparison::Op::Lt) e.constant -= 1;
    return e;
}

Int int_abs(const Int& v) { return v < 0 ? Int(-v) : v; }

}  // namespace

RuleConstraintSystem build_rule_constraints(const Program& ctx, const Rule& r,
                                            const PseudoInterpretation& J) {
    RuleConstraintSystem sys;
    for (const Literal& lit : r.body) {
        if (lit.kind == Literal::Kind::Negative)
            throw ContractViolation("the evaluator only accepts positive rules");
        if (lit.kind == Literal::Kind::Compare) {
            LinExpr row = comparison_row(lit.cmp);
            if (row.is_constant()) {
                if (row.constant < 0) sys.applicable = false;
                continue;
            }
            for (const auto& [v, c] : row.coeffs) sys.variables.insert(v);
            sys.constraints.add_ge(row);
            continue;
        }
        const Atom& a = lit.atom;
        PredKind k = ctx.kind_of(a.pred);
        SlotKey slot = atom_slot(a);
        if (k == PredKind::Object) {
            if (!J.has_object(slot)) sys.applicable = false;
            continue;
        }
        if (!a.numeric) throw ContractViolation("numeric predicate without a numeric argument");
        if (a.numeric->is_star()) throw ContractViolation("'*' in a rule body");
        LinExpr term = LinExpr::of_poly(Poly::of(*a.numeric));
        if (k == PredKind::Ordinary) {
            if (!term.is_constant())
                throw ContractViolation("variable in an ordinary numeric atom of a semi-ground rule");
            if (!J.has_ordinary(slot, term.constant)) sys.applicable = false;
            continue;
        }
        // Limit predicate.
        const LimitValue* entry = J.limit_entry(slot);
        if (term.is_constant()) {
            if (!entry || !entry_covers(k, *entry, term.constant)) sys.applicable = false;
            continue;
        }
        for (const auto& [v, c] : term.coeffs) sys.variables.insert(v);
        if (!entry) {
            sys.applicable = false;
            continue;
        }
        if (entry->all_ints) continue;  // every value works: no constraint
        // Max: term <= entry; min: term >= entry.
        LinExpr bound = LinExpr::of_constant(entry->finite) - term;
        if (k == PredKind::LimitMin) bound = bound.negated();
        sys.constraints.add_ge(bound);
    }

    PredKind hk = ctx.kind_of(r.head.pred);
    if (is_limit(hk)) {
        sys.head_is_limit = true;
        sys.maximise = hk == PredKind::LimitMax;
        if (!r.head.numeric) throw ContractViolation("numeric predicate without a numeric argument");
        if (r.head.numeric->is_star()) {
            sys.head_all_ints = true;
        } else {
            sys.objective = LinExpr::of_poly(Poly::of(*r.head.numeric));
            for (const auto& [v, c] : sys.objective.coeffs) sys.variables.insert(v);
        }
    } else if (hk == PredKind::Ordinary) {
        if (!r.head.numeric || !LinExpr::of_poly(Poly::of(*r.head.numeric)).is_constant())
            throw ContractViolation("variable in an ordinary head of a semi-ground rule");
    }
    return sys;
}

namespace {

// Direct solution for rules whose variables each come from a unique
// bare-variable limit introduction and obey the sign discipline: a variable
// with positive coefficient in a (rhs - lhs >= 0) comparison row must be
// introduced by a max literal, negative by min, and the objective follows the
// same rule when maximising, the opposite when minimising.  Then every
// position wants the variable at the finite end of its interval (max: the
// entry is an upper bound, min: a lower bound), so plugging those extremes at
// once maximises every row and the objective together; an AllInts entry makes
// the favourable direction unbounded.  Returns nothing when the shape or the
// discipline fails, and the caller falls back to the integer optimiser.
std::optional<Derivation> try_extremes(const Program& ctx, const Rule& r,
                                       const PseudoInterpretation& J,
                                       const RuleConstraintSystem& sys) {
    std::map<std::string, std::pair<PredKind, LimitValue>> defs;
    for (const Literal& lit : r.body) {
        if (lit.kind != Literal::Kind::Positive) continue;
        const Atom& a = lit.atom;
        PredKind k = ctx.kind_of(a.pred);
        if (!is_limit(k)) continue;
        LinExpr term = LinExpr::of_poly(Poly::of(*a.numeric));
        if (term.is_constant()) continue;
        bool bare = term.constant == 0 && term.coeffs.size() == 1 &&
                    term.coeffs.begin()->second == 1;
        if (!bare) return std::nullopt;
        const LimitValue* entry = J.limit_entry(atom_slot(a));
        if (!entry) return std::nullopt;
        if (!defs.emplace(term.coeffs.begin()->first, std::make_pair(k, *entry)).second)
            return std::nullopt;
    }
    for (const std::string& v : sys.variables)
        if (!defs.count(v)) return std::nullopt;

    // Evaluate a row at the extremes; false when the discipline fails.
    auto at_extremes = [&](const LinExpr& e, bool flip, bool& open, Int& val) {
        open = false;
        val = e.constant;
        for (const auto& [v, c] : e.coeffs) {
            const auto& [k, entry] = defs.at(v);
            bool want_max = (c > 0) != flip;
            if (k != (want_max ? PredKind::LimitMax : PredKind::LimitMin)) return false;
            if (entry.all_ints) open = true;
            else val += c * entry.finite;
        }
        return true;
    };

    Derivation out;  // NotApplicable until shown otherwise
    for (const Literal& lit : r.body) {
        if (lit.kind != Literal::Kind::Compare) continue;
        LinExpr row = comparison_row(lit.cmp);
        if (row.is_constant()) continue;  // folded during applicability
        bool open = false;
        Int best;
        if (!at_extremes(row, false, open, best)) return std::nullopt;
        if (!open && best < 0) return out;  // even the pointwise supremum fails
    }
    bool open = false;
    Int best;
    if (!at_extremes(sys.objective, !sys.maximise, open, best)) return std::nullopt;
    out.kind = Derivation::Kind::Limit;
    out.slot = atom_slot(r.head);
    out.value = open ? LimitValue::all() : LimitValue::of(best);
    return out;
}

}  // namespace

Derivation opt_rule(const Program& ctx, const Rule& r, const PseudoInterpretation& J) {
    RuleConstraintSystem sys = build_rule_constraints(ctx, r, J);
    Derivation out;
    if (!sys.applicable) return out;

    if (!sys.head_is_limit) {
        if (!lin_feasible(sys.constraints)) return out;
        out.kind = Derivation::Kind::Fact;
        out.fact.pred = r.head.pred;
        for (const ObjTerm& o : r.head.objects) out.fact.objects.push_back(o.name);
        if (r.head.numeric) {
            out.fact.has_numeric = true;
            out.fact.value = LinExpr::of_poly(Poly::of(*r.head.numeric)).constant;
        }
        return out;
    }

    if (sys.head_all_ints) {
        if (!lin_feasible(sys.constraints)) return out;
        out.kind = Derivation::Kind::Limit;
        out.slot = atom_slot(r.head);
        out.value = LimitValue::all();
        return out;
    }

    if (auto fast = try_extremes(ctx, r, J, sys)) return *fast;

    OptResult res = lin_optimise(sys.constraints, sys.objective, sys.maximise);
    if (res.status == OptStatus::Infeasible) return out;
    out.kind = Derivation::Kind::Limit;
    out.slot = atom_slot(r.head);
    out.value = res.status == OptStatus::Unbounded ? LimitValue::all() : LimitValue::of(res.value);
    return out;
}

PseudoInterpretation step(const Program& ctx, const std::vector<Rule>& rules,
                          const PseudoInterpretation& J) {
    PseudoInterpretation out = J;
    for (const Rule& r : rules) {
        Derivation d = opt_rule(ctx, r, J);
        if (d.kind == Derivation::Kind::Fact) out.add_fact(ctx, d.fact);
        else if (d.kind == Derivation::Kind::Limit)
            out.add_limit(ctx.kind_of(d.slot.pred), d.slot, d.value);
    }
    return out;
}

namespace {

// Improvement bound that certifies divergence for a type-consistent positive
// program: a run of strict improvements longer than (#limit slots x #rules)
// must revisit some rule improving some slot from an already-improved state,
// which only an unbounded derivation chain produces.
Int certified_bound(const Program& pos) {
    std::set<SlotKey> slots;
    auto note = [&](const Atom& a) {
        if (is_limit(pos.kind_of(a.pred))) slots.insert(atom_slot(a));
    };
    for (const Rule& r : pos.rules) {
        note(r.head);
        for (const Literal& l : r.body)
            if (l.kind != Literal::Kind::Compare) note(l.atom);
    }
    return Int(slots.size()) * Int(pos.rules.size()) + 1;
}

// One stratum: iterate step over the positive program to its fixpoint, with
// change-driven rule scheduling, improvement counting, and promotion of
// runaway slots to AllInts.  Appends growth to `st`, extends the taint set,
// and clears `exact` on any uncertified shortcut.
PseudoInterpretation run_positive(const Program& pos, const EngineConfig& cfg, StratumTrace& st,
                                  std::set<SlotKey>& tainted, bool& exact, bool& incomplete) {
    const std::vector<Rule>& rules = pos.rules;
    Int certified = certified_bound(pos);
    std::optional<Int> count_threshold;
    bool magnitude_auto = false;
    if (cfg.divergence_improvement_threshold) count_threshold = *cfg.divergence_improvement_threshold;
    else if (cfg.mode == EngineMode::TcExact) count_threshold = certified;
    else magnitude_auto = true;
    bool counts_certified =
        cfg.mode == EngineMode::TcExact && count_threshold && *count_threshold >= certified;
    st.threshold = count_threshold ? *count_threshold : Int(0);

    std::vector<std::set<SlotKey>> body_slots(rules.size());
    for (size_t i = 0; i < rules.size(); ++i)
        for (const Literal& l : rules[i].body)
            if (l.kind != Literal::Kind::Compare) body_slots[i].insert(atom_slot(l.atom));

    PseudoInterpretation J;
    st.partials.push_back(J);
    std::set<SlotKey> changed;
    bool first = true;
    while (true) {
        if (st.iterations >= cfg.max_iterations) {
            incomplete = true;
            exact = false;
            for (const Rule& r : rules) tainted.insert(atom_slot(r.head));
            break;
        }
        ++st.iterations;
        PseudoInterpretation next = J;
        std::set<SlotKey> grew;
        for (size_t i = 0; i < rules.size(); ++i) {
            if (!first) {
                bool touched = false;
                for (const SlotKey& s : body_slots[i])
                    if (changed.count(s)) {
                        touched = true;
                        break;
                    }
                if (!touched) continue;
            }
            Derivation d = opt_rule(pos, rules[i], J);
            if (d.kind == Derivation::Kind::Fact) {
                if (next.add_fact(pos, d.fact)) grew.insert(d.fact.slot());
            } else if (d.kind == Derivation::Kind::Limit) {
                if (next.add_limit(pos.kind_of(d.slot.pred), d.slot, d.value)) grew.insert(d.slot);
            }
        }
        first = false;
        if (grew.empty()) {
            st.reached_fixpoint = true;
            break;
        }
        for (const SlotKey& s : grew) {
            const LimitValue* e = next.limit_entry(s);
            if (!e) continue;  // object or ordinary growth
            Int& count = st.improvement_counts[s];
            count += 1;
            if (e->all_ints) continue;
            bool promote = false;
            bool cert = false;
            std::string why;
            if (count_threshold && count > *count_threshold) {
                promote = true;
                cert = counts_certified;
                why = "improved " + count.str() + " times, past the threshold " +
                      count_threshold->str() +
                      (cert ? " that certifies divergence" : " (heuristic cutoff)");
            } else if (magnitude_auto && count >= 2 && int_abs(e->finite) > cfg.magnitude_cap) {
                promote = true;
                why = "entry reached magnitude " + int_abs(e->finite).str() +
                      " past the cap " + cfg.magnitude_cap.str() +
                      " while growing (heuristic cutoff)";
            }
            if (promote) {
                next.limit_entries[s] = LimitValue::all();
                st.promotions.push_back(DivergenceDecision{s, count, cert, why});
                if (!cert) {
                    exact = false;
                    tainted.insert(s);
                }
            }
        }
        st.partials.push_back(next);
        changed = std::move(grew);
        J = std::move(next);
    }

    // Taint flows from body slots to head slots, to a fixpoint.
    bool again = !tainted.empty();
    while (again) {
        again = false;
        for (size_t i = 0; i < rules.size(); ++i) {
            SlotKey h = atom_slot(rules[i].head);
            if (tainted.count(h)) continue;
            for (const SlotKey& s : body_slots[i])
                if (tainted.count(s)) {
                    tainted.insert(h);
                    again = true;
                    break;
                }
        }
    }
    return J;
}

}  // namespace

MaterialisationResult pseudo_materialise_positive(const Program& positive, const EngineConfig& cfg) {
    for (const Rule& r : positive.rules)
        for (const Literal& l : r.body)
            if (l.kind == Literal::Kind::Negative)
                throw ContractViolation("pseudo-materialisation needs a positive program");
    MaterialisationResult out;
    out.trace.mode = cfg.mode;
    StratumTrace st;
    st.stratum = 1;
    st.positive_program = positive;
    out.J = run_positive(positive, cfg, st, out.trace.tainted, out.trace.exact,
                         out.trace.incomplete);
    out.trace.strata.push_back(std::move(st));
    return out;
}

MaterialisationResult materialise_stratified(const Program& p, const Dataset& d,
                                             const EngineConfig& cfg,
                                             const std::map<std::string, int>* stratification_override) {
    Program combined = merge_programs(p, d);
    std::vector<std::string> diags;
    if (cfg.mode == EngineMode::TcExact) {
        if (!check_type_consistent(combined, &diags))
            throw ContractViolation("exact mode needs a type-consistent program: " +
                                    (diags.empty() ? std::string("no diagnostics") : diags.front()));
    } else if (!check_limit_linear(combined, &diags)) {
        throw ContractViolation("materialisation needs a limit-linear program: " +
                                (diags.empty() ? std::string("no diagnostics") : diags.front()));
    }
    Stratification strat = compute_stratification(combined);
    if (!strat.ok) throw ContractViolation("program is not stratifiable: " + strat.message);

    const std::map<std::string, int>* lambda = &strat.lambda;
    int num_strata = strat.num_strata;
    if (stratification_override) {
        lambda = stratification_override;
        num_strata = 0;
        for (const auto& [name, info] : combined.preds) {
            auto it = lambda->find(name);
            if (it == lambda->end())
                throw ContractViolation("stratification override misses predicate " + name);
            if (it->second < 1)
                throw ContractViolation("stratification override gives " + name +
                                        " a stratum below one");
            num_strata = std::max(num_strata, it->second);
        }
        for (const Rule& r : combined.rules) {
            int hs = lambda->at(r.head.pred);
            for (const Literal& l : r.body) {
                if (l.kind == Literal::Kind::Compare) continue;
                int bs = lambda->at(l.atom.pred);
                bool ok = l.kind == Literal::Kind::Negative ? bs < hs : bs <= hs;
                if (!ok)
                    throw ContractViolation("stratification override is invalid for a rule of " +
                                            r.head.pred + " over " + l.atom.pred);
            }
        }
    }

    MaterialisationResult out;
    out.trace.mode = cfg.mode;
    PseudoInterpretation J;
    for (int i = 1; i <= num_strata; ++i) {
        Program layer;
        layer.preds = combined.preds;
        for (const Rule& r : combined.rules)
            if (lambda->at(r.head.pred) == i) layer.rules.push_back(r);
        for (const GroundFact& f : to_facts(J)) layer.rules.push_back(fact_rule(f));
        SemiGroundProgram sg = semi_ground(layer, true);
        SemiGroundProgram red = cfg.mode == EngineMode::TcExact ? tc_rewrite_reduct(sg) : reduct(sg);
        StratumTrace st;
        st.stratum = i;
        st.positive_program = red.as_program();
        J = run_positive(st.positive_program, cfg, st, out.trace.tainted, out.trace.exact,
                         out.trace.incomplete);
        out.trace.strata.push_back(std::move(st));
    }
    out.J = std::move(J);
    return out;
}

QueryVerdict query(const Program& ctx, const MaterialisationResult& m, const GroundFact& phi) {
    bool ent = entails(ctx, m.J, phi);
    if (m.trace.exact) return ent ? QueryVerdict::Entailed : QueryVerdict::NotEntailed;
    bool tainted = m.trace.tainted.count(phi.slot()) > 0;
    if (ent) return tainted ? QueryVerdict::Unknown : QueryVerdict::Entailed;
    // Missing facts can only hide behind a cut-short stratum; promotions alone
    // over-approximate, so a miss stays a miss.
    return tainted && m.trace.incomplete ? QueryVerdict::Unknown : QueryVerdict::NotEntailed;
}

QueryVerdict query(const Program& p, const Dataset& d, const GroundFact& phi,
                   const EngineConfig& cfg) {
    MaterialisationResult m = materialise_stratified(p, d, cfg);
    return query(merge_programs(p, d), m, phi);
}

LubAnswer lub_query(const Program& ctx, const MaterialisationResult& m, const SlotKey& slot) {
    if (!is_limit(ctx.kind_of(slot.pred)))
        throw ContractViolation("least upper bound asked of a non-limit predicate: " + slot.pred);
    LubAnswer out;
    if (!m.trace.exact && m.trace.tainted.count(slot)) {
        out.kind = LubAnswer::Kind::Unknown;
        return out;
    }
    const LimitValue* e = m.J.limit_entry(slot);
    if (!e) {
        out.kind = LubAnswer::Kind::NoValue;
    } else if (e->all_ints) {
        out.kind = LubAnswer::Kind::AllInts;
    } else {
        out.kind = LubAnswer::Kind::Finite;
        out.value = e->finite;
    }
    return out;
}

LubAnswer lub_query(const Program& p, const Dataset& d, const SlotKey& slot,
                    const EngineConfig& cfg) {
    MaterialisationResult m = materialise_stratified(p, d, cfg);
    return lub_query(merge_programs(p, d), m, slot);
}

}  // namespace limitlog
