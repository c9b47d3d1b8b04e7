#pragma once

// Random type-consistent corpus shared by the oracle agreement, transform
// preservation and acceptance suites.  Programs are built to the
// type-consistency discipline by construction: every numeric variable is
// bound bare in exactly one standard body literal, head coefficients follow
// the sign rules for their binders, unguarded variables are only compared in
// their weak direction, and negation appears ground or inside exact-bound
// patterns over strictly lower strata.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "generators.hpp"
#include "limitlog/analysis.hpp"
#include "limitlog/ast.hpp"
#include "limitlog/engine.hpp"
#include "limitlog/oracle.hpp"
#include "limitlog/pseudo.hpp"
#include "limitlog/transform.hpp"

namespace testcorpus {

struct CorpusOptions {
    bool allow_negation = true;  // exact-bound patterns and ground negated gates
    int max_rules = 6;
    int max_strata = 3;
};

struct TcInstance {
    limitlog::Program program;
    limitlog::Dataset dataset;
};

namespace detail {

struct LimitPred {
    std::string name;
    limitlog::PredKind kind = limitlog::PredKind::LimitMax;
    int object_arity = 0;
    int stratum = 1;
};

struct ObjSource {
    limitlog::ObjTerm term;
    bool needs_anchor = false;  // a variable: bind it with a positive o(X)
};

inline ObjSource object_source(testgen::Rng& rng, const std::vector<std::string>& objs) {
    using limitlog::ObjTerm;
    if (testgen::coin(rng, 35)) return ObjSource{ObjTerm::var("X"), true};
    return ObjSource{ObjTerm::constant(testgen::pick(rng, objs)), false};
}

inline limitlog::Int small_coeff(testgen::Rng& rng) {
    static const std::vector<long long> mags = {1, 1, 1, 2, 3, 4};
    return limitlog::Int(testgen::pick(rng, mags));
}

}  // namespace detail

// A random stratified type-consistent program over limit predicates l1..ln,
// an object predicate o/1 and ordinary predicates w0/1, w1/2, with a dataset
// of at most 10 facts whose integers all lie in [-4, 4].
inline TcInstance random_tc_instance(testgen::Rng& rng, const CorpusOptions& opts = {}) {
    using namespace limitlog;
    using detail::LimitPred;
    using testgen::coin;
    using testgen::pick;
    using testgen::uniform;

    TcInstance out;
    Program& p = out.program;

    std::vector<std::string> objs = {"a", "b", "c"};
    objs.resize(size_t(uniform(rng, 2, 3)));

    p.preds["o"] = PredicateInfo{"o", 1, PredKind::Object, false, true};
    p.preds["w0"] = PredicateInfo{"w0", 1, PredKind::Ordinary, false, true};
    p.preds["w1"] = PredicateInfo{"w1", 2, PredKind::Ordinary, false, true};

    std::vector<LimitPred> lps;
    int n_limit = int(uniform(rng, 2, 5));
    int n_strata = int(uniform(rng, 1, std::max(1, opts.max_strata)));
    for (int i = 0; i < n_limit; ++i) {
        LimitPred lp;
        lp.name = "l" + std::to_string(i + 1);
        lp.kind = coin(rng) ? PredKind::LimitMax : PredKind::LimitMin;
        lp.object_arity = coin(rng, 60) ? 1 : 0;
        lp.stratum = int(uniform(rng, 1, n_strata));
        lps.push_back(lp);
        p.preds[lp.name] = PredicateInfo{lp.name, lp.object_arity + 1, lp.kind, true, true};
    }

    auto fill_objects = [&](Atom& a, int arity, bool& uses_x) {
        for (int i = 0; i < arity; ++i) {
            detail::ObjSource src = detail::object_source(rng, objs);
            uses_x = uses_x || src.needs_anchor;
            a.objects.push_back(src.term);
        }
    };

    int n_rules = int(uniform(rng, 1, std::max(1, opts.max_rules)));
    for (int r = 0; r < n_rules; ++r) {
        const LimitPred& H = pick(rng, lps);
        int s = H.stratum;
        Rule rule;
        rule.head.pred = H.name;
        bool uses_x = false;
        fill_objects(rule.head, H.object_arity, uses_x);

        std::vector<Literal> binders, gates, comparisons;
        // name, guarded flag, binder kind for the sign discipline
        struct BoundVar {
            std::string name;
            bool guarded = false;
            PredKind binder = PredKind::Ordinary;
        };
        std::vector<BoundVar> vars;

        std::vector<const LimitPred*> lower, at_or_below;
        for (const LimitPred& lp : lps) {
            if (lp.stratum < s) lower.push_back(&lp);
            if (lp.stratum <= s) at_or_below.push_back(&lp);
        }

        bool pattern = opts.allow_negation && !lower.empty() && coin(rng, 25);
        if (pattern) {
            // P(os, M), not P(os, N), N = M + t: M is the slot's optimal value.
            const LimitPred& P = *pick(rng, lower);
            Int t = P.kind == PredKind::LimitMax ? 1 : -1;
            Atom pos{P.name, {}, Term::variable("M")};
            Atom neg{P.name, {}, Term::variable("N")};
            bool shared_x = false;
            for (int i = 0; i < P.object_arity; ++i) {
                detail::ObjSource src = detail::object_source(rng, objs);
                shared_x = shared_x || src.needs_anchor;
                pos.objects.push_back(src.term);
                neg.objects.push_back(src.term);
            }
            uses_x = uses_x || shared_x;
            binders.push_back(Literal::pos(pos));
            binders.push_back(Literal::neg(neg));
            Term m_plus_t = Term::add(Term::variable("M"), Term::constant(t));
            comparisons.push_back(
                Literal::compare({Comparison::Op::Le, Term::variable("N"), m_plus_t}));
            comparisons.push_back(
                Literal::compare({Comparison::Op::Le, m_plus_t, Term::variable("N")}));
            vars.push_back(BoundVar{"M", true, P.kind});
        } else {
            int nv = int(uniform(rng, 0, 2));
            for (int v = 0; v < nv; ++v) {
                std::string name = v == 0 ? "M" : "N";
                if (coin(rng, 70)) {
                    const LimitPred& P = *pick(rng, at_or_below);
                    Atom a{P.name, {}, Term::variable(name)};
                    fill_objects(a, P.object_arity, uses_x);
                    binders.push_back(Literal::pos(a));
                    vars.push_back(BoundVar{name, false, P.kind});
                } else if (coin(rng)) {
                    binders.push_back(Literal::pos(Atom{"w0", {}, Term::variable(name)}));
                    vars.push_back(BoundVar{name, true, PredKind::Ordinary});
                } else {
                    Atom a{"w1", {}, Term::variable(name)};
                    fill_objects(a, 1, uses_x);
                    binders.push_back(Literal::pos(a));
                    vars.push_back(BoundVar{name, true, PredKind::Ordinary});
                }
            }
        }

        // Head value: k0 plus disciplined multiples of the bound variables.
        Term head_term = Term::constant(Int(uniform(rng, -4, 4)));
        for (const BoundVar& v : vars) {
            if (!coin(rng, 70)) continue;
            Int c = detail::small_coeff(rng);
            if (v.guarded) {
                if (coin(rng)) c = -c;
            } else if (v.binder != H.kind) {
                c = -c;
            }
            Term scaled = c == 1 ? Term::variable(v.name)
                                 : Term::mul(Term::constant(c), Term::variable(v.name));
            head_term = Term::add(std::move(head_term), std::move(scaled));
        }
        rule.head.numeric = std::move(head_term);

        // Weak-direction comparisons on unguarded variables, free ones on
        // guarded variables, and an occasional min-below-max bridge.
        for (const BoundVar& v : vars) {
            if (!coin(rng, 25)) continue;
            Int c(uniform(rng, -4, 4));
            if (v.guarded) {
                if (coin(rng))
                    comparisons.push_back(
                        Literal::compare({Comparison::Op::Le, Term::variable(v.name), Term::constant(c)}));
                else
                    comparisons.push_back(
                        Literal::compare({Comparison::Op::Le, Term::constant(c), Term::variable(v.name)}));
            } else if (v.binder == PredKind::LimitMax) {
                comparisons.push_back(
                    Literal::compare({Comparison::Op::Le, Term::constant(c), Term::variable(v.name)}));
            } else {
                comparisons.push_back(
                    Literal::compare({Comparison::Op::Le, Term::variable(v.name), Term::constant(c)}));
            }
        }
        if (vars.size() == 2 && !vars[0].guarded && !vars[1].guarded &&
            vars[0].binder != vars[1].binder && coin(rng, 40)) {
            const BoundVar& mn = vars[0].binder == PredKind::LimitMin ? vars[0] : vars[1];
            const BoundVar& mx = vars[0].binder == PredKind::LimitMax ? vars[0] : vars[1];
            comparisons.push_back(Literal::compare(
                {Comparison::Op::Le, Term::variable(mn.name), Term::variable(mx.name)}));
        }

        // Ground gates: a positive limit probe, and (below stratum) a negated one.
        if (coin(rng, 15)) {
            const LimitPred& P = *pick(rng, at_or_below);
            Atom a{P.name, {}, Term::constant(Int(uniform(rng, -4, 4)))};
            for (int i = 0; i < P.object_arity; ++i) a.objects.push_back(ObjTerm::constant(pick(rng, objs)));
            gates.push_back(Literal::pos(a));
        }
        if (opts.allow_negation && !lower.empty() && coin(rng, 15)) {
            const LimitPred& P = *pick(rng, lower);
            Atom a{P.name, {}, Term::constant(Int(uniform(rng, -4, 4)))};
            for (int i = 0; i < P.object_arity; ++i) a.objects.push_back(ObjTerm::constant(pick(rng, objs)));
            gates.push_back(Literal::neg(a));
        }

        if (uses_x) rule.body.push_back(Literal::pos(Atom{"o", {ObjTerm::var("X")}, {}}));
        for (Literal& l : binders) rule.body.push_back(std::move(l));
        for (Literal& l : gates) rule.body.push_back(std::move(l));
        for (Literal& l : comparisons) rule.body.push_back(std::move(l));
        p.rules.push_back(std::move(rule));
    }

    for (const Rule& r : p.rules)
        if (!r.body.empty()) p.preds[r.head.pred].edb = false;
    validate_program(p, true);
    std::vector<std::string> diags;
    if (!check_type_consistent(p, &diags))
        throw ContractViolation("corpus generator emitted a non-type-consistent program: " +
                                (diags.empty() ? std::string("no diagnostic") : diags.front()));

    Dataset& d = out.dataset;
    auto declare = [&](const std::string& name) {
        if (!d.preds.count(name)) d.preds[name] = p.preds.at(name);
    };
    int budget = 10;
    auto add_fact = [&](Rule f) {
        if (budget <= 0) return;
        declare(f.head.pred);
        d.rules.push_back(std::move(f));
        --budget;
    };

    Rule anchor;
    anchor.head = Atom{"o", {ObjTerm::constant(objs[0])}, {}};
    add_fact(anchor);
    for (size_t i = 1; i < objs.size(); ++i)
        if (coin(rng, 70)) {
            Rule f;
            f.head = Atom{"o", {ObjTerm::constant(objs[i])}, {}};
            add_fact(f);
        }
    for (int i = int(uniform(rng, 0, 2)); i > 0; --i) {
        Rule f;
        f.head = Atom{"w0", {}, Term::constant(Int(uniform(rng, -4, 4)))};
        add_fact(f);
    }
    for (int i = int(uniform(rng, 0, 2)); i > 0; --i) {
        Rule f;
        f.head = Atom{"w1", {ObjTerm::constant(pick(rng, objs))}, Term::constant(Int(uniform(rng, -4, 4)))};
        add_fact(f);
    }
    for (int i = int(uniform(rng, 1, 4)); i > 0; --i) {
        const LimitPred& P = pick(rng, lps);
        Rule f;
        f.head.pred = P.name;
        for (int k = 0; k < P.object_arity; ++k)
            f.head.objects.push_back(ObjTerm::constant(pick(rng, objs)));
        f.head.numeric = coin(rng, 8) ? Term::star() : Term::constant(Int(uniform(rng, -4, 4)));
        add_fact(f);
    }
    validate_program(d, true);
    return out;
}

// ---------------------------------------------------------------------------
// Query sets and verdict comparison.
// ---------------------------------------------------------------------------

inline std::string show_fact(const limitlog::GroundFact& f) {
    std::string s = f.pred + "(";
    for (size_t i = 0; i < f.objects.size(); ++i) {
        s += f.objects[i];
        if (i + 1 < f.objects.size() || f.has_numeric) s += ",";
    }
    if (f.has_numeric) s += f.all_ints ? "*" : f.value.str();
    return s + ")";
}

// Every slot of the vocabulary over the stores' constants, probed at a
// deterministic spread of values: small anchors plus the neighbourhoods of
// the engine entry and the store frontiers, capped in magnitude.
inline std::vector<limitlog::GroundFact> probe_queries(
    const limitlog::Program& ctx, const std::vector<const limitlog::BoundedUniverse*>& stores,
    const limitlog::PseudoInterpretation* J, const limitlog::Int& value_cap) {
    using namespace limitlog;
    std::vector<GroundFact> out;
    std::set<std::string> cset;
    for (const BoundedUniverse* u : stores) cset.insert(u->constants.begin(), u->constants.end());
    std::vector<std::string> consts(cset.begin(), cset.end());

    for (const auto& [name, pi] : ctx.preds) {
        std::vector<std::vector<std::string>> tuples{{}};
        for (int i = 0; i < pi.object_arity(); ++i) {
            std::vector<std::vector<std::string>> next;
            for (const std::vector<std::string>& t : tuples)
                for (const std::string& c : consts) {
                    next.push_back(t);
                    next.back().push_back(c);
                }
            tuples = std::move(next);
        }
        for (const std::vector<std::string>& t : tuples) {
            SlotKey s{name, t};
            if (!is_numeric(pi.kind)) {
                out.push_back(GroundFact{name, t, false, false, 0});
                continue;
            }
            std::set<Int> values = {0, 1, -1, 2, -2, 4, -4};
            auto widen = [&](const Int& v) {
                values.insert(v - 1);
                values.insert(v);
                values.insert(v + 1);
            };
            if (J) {
                if (const LimitValue* e = J->limit_entry(s); e && !e->all_ints) widen(e->finite);
                if (auto it = J->ordinary_facts.find(s); it != J->ordinary_facts.end())
                    for (const Int& v : it->second) widen(v);
            }
            for (const BoundedUniverse* u : stores)
                if (auto it = u->numeric_facts.find(s);
                    it != u->numeric_facts.end() && !it->second.empty()) {
                    widen(*it->second.begin());
                    widen(*it->second.rbegin());
                }
            for (const Int& v : values) {
                if (v > value_cap || v < -value_cap) continue;
                out.push_back(GroundFact{name, t, true, false, v});
            }
            if (is_limit(pi.kind)) out.push_back(GroundFact{name, t, true, true, 0});
        }
    }
    return out;
}

inline std::vector<limitlog::GroundFact> query_set(const limitlog::Program& ctx,
                                                   const limitlog::PseudoInterpretation& J,
                                                   const limitlog::BoundedUniverse& u,
                                                   const limitlog::Int& value_cap) {
    return probe_queries(ctx, {&u}, &J, value_cap);
}

struct AgreementStats {
    long long compared = 0;
    long long skipped_window = 0;
    long long skipped_unknown = 0;
    long long mismatches = 0;
    std::vector<std::string> examples;

    void mismatch(const std::string& what) {
        ++mismatches;
        if (examples.size() < 5) examples.push_back(what);
    }
};

inline const char* verdict_name(limitlog::QueryVerdict v) {
    switch (v) {
        case limitlog::QueryVerdict::Entailed: return "entailed";
        case limitlog::QueryVerdict::NotEntailed: return "not-entailed";
        default: return "unknown";
    }
}

inline const char* verdict_name(limitlog::OracleVerdict v) {
    switch (v) {
        case limitlog::OracleVerdict::True: return "true";
        case limitlog::OracleVerdict::False: return "false";
        default: return "out-of-window";
    }
}

// Engine-vs-store agreement.  '*' queries are window-relative on the store
// side, so only their refutations bind: a saturated window is consistent
// with both a diverging slot and one that tops out exactly at the bound.
inline void compare_engine_oracle(const limitlog::Program& ctx,
                                  const limitlog::MaterialisationResult& m,
                                  const limitlog::BoundedUniverse& u,
                                  const std::vector<limitlog::GroundFact>& queries,
                                  AgreementStats& st) {
    using limitlog::OracleVerdict;
    using limitlog::QueryVerdict;
    for (const limitlog::GroundFact& phi : queries) {
        OracleVerdict ov = oracle_entails(ctx, u, phi);
        if (ov == OracleVerdict::OutOfWindow) {
            ++st.skipped_window;
            continue;
        }
        QueryVerdict qv = query(ctx, m, phi);
        if (qv == QueryVerdict::Unknown) {
            ++st.skipped_unknown;
            continue;
        }
        ++st.compared;
        bool ok;
        if (phi.all_ints)
            ok = !(qv == QueryVerdict::Entailed && ov != OracleVerdict::True) &&
                 !(ov == OracleVerdict::False && qv == QueryVerdict::Entailed);
        else
            ok = (ov == OracleVerdict::True) == (qv == QueryVerdict::Entailed);
        if (!ok)
            st.mismatch(show_fact(phi) + ": engine " + verdict_name(qv) + ", store " +
                        verdict_name(ov));
    }
}

// Store-vs-store agreement on the queries both windows can answer.
inline void compare_oracles(const limitlog::Program& ctx, const limitlog::BoundedUniverse& a,
                            const limitlog::BoundedUniverse& b,
                            const std::vector<limitlog::GroundFact>& queries, AgreementStats& st) {
    using limitlog::OracleVerdict;
    for (const limitlog::GroundFact& phi : queries) {
        OracleVerdict va = oracle_entails(ctx, a, phi);
        OracleVerdict vb = oracle_entails(ctx, b, phi);
        if (va == OracleVerdict::OutOfWindow || vb == OracleVerdict::OutOfWindow) {
            ++st.skipped_window;
            continue;
        }
        ++st.compared;
        if (phi.all_ints) continue;  // saturation is window-relative
        if (va != vb)
            st.mismatch(show_fact(phi) + ": " + verdict_name(va) + " vs " + verdict_name(vb));
    }
}

// The per-stratum layers exactly as the evaluator builds them: the stratum's
// rules plus fact rules for everything accumulated so far.
inline std::vector<limitlog::Program> stratum_layers(const limitlog::Program& combined,
                                                     const limitlog::MaterialisationResult& m) {
    using namespace limitlog;
    Stratification strat = compute_stratification(combined);
    std::vector<Program> layers;
    PseudoInterpretation J;
    for (size_t i = 0; i < m.trace.strata.size(); ++i) {
        Program layer;
        layer.preds = combined.preds;
        int target = m.trace.strata[i].stratum;
        for (const Rule& r : combined.rules)
            if (strat.lambda.at(r.head.pred) == target) layer.rules.push_back(r);
        for (const GroundFact& f : to_facts(J)) layer.rules.push_back(fact_rule(f));
        layers.push_back(std::move(layer));
        const std::vector<PseudoInterpretation>& partials = m.trace.strata[i].partials;
        if (!partials.empty()) J = partials.back();
    }
    return layers;
}

}  // namespace testcorpus
