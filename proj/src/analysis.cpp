#include "limitlog/analysis.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "limitlog/errors.hpp"
#include "limitlog/poly.hpp"

namespace limitlog {

namespace {

void emit(std::vector<std::string>* diags, std::string msg) {
    if (diags) diags->push_back(std::move(msg));
}

std::string mono_str(const Poly::Monomial& m) {
    std::string s;
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) s += "*";
        s += m[i];
    }
    return s;
}

// BFS path between two nodes of one strongly connected component.
std::vector<int> path_in_component(int from, int to, int cid,
                                   const std::vector<std::vector<std::pair<int, bool>>>& out_edges,
                                   const std::vector<int>& comp) {
    std::vector<int> parent(out_edges.size(), -2);
    std::vector<int> queue{from};
    parent[from] = -1;
    for (size_t qi = 0; qi < queue.size() && parent[to] == -2 && to != from; ++qi) {
        int u = queue[qi];
        for (const auto& [v, neg] : out_edges[u]) {
            (void)neg;
            if (comp[v] != cid || parent[v] != -2) continue;
            parent[v] = u;
            queue.push_back(v);
        }
    }
    std::vector<int> path;
    for (int u = to; u != -1; u = parent[u]) path.push_back(u);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

Stratification compute_stratification(const Program& p) {
    Stratification out;

    std::vector<std::string> names;
    std::map<std::string, int> id;
    for (const auto& [name, info] : p.preds) {
        (void)info;
        id.emplace(name, static_cast<int>(names.size()));
        names.push_back(name);
    }
    int n = static_cast<int>(names.size());

    // Dependency edges run from body predicate to head predicate.
    std::vector<std::vector<std::pair<int, bool>>> out_edges(n);
    for (const Rule& r : p.rules) {
        if (r.body.empty()) continue;
        int h = id.at(r.head.pred);
        for (const Literal& l : r.body) {
            if (!l.is_standard()) continue;
            out_edges[id.at(l.atom.pred)].push_back({h, l.kind == Literal::Kind::Negative});
        }
    }

    // Tarjan's algorithm, iterative.
    std::vector<int> order(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<char> on_stack(n, 0);
    std::vector<std::vector<int>> members;
    int counter = 0;
    struct Frame {
        int u;
        size_t edge;
    };
    for (int s = 0; s < n; ++s) {
        if (order[s] != -1) continue;
        std::vector<Frame> frames{{s, 0}};
        order[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < out_edges[f.u].size()) {
                int v = out_edges[f.u][f.edge++].first;
                if (order[v] == -1) {
                    order[v] = low[v] = counter++;
                    stack.push_back(v);
                    on_stack[v] = 1;
                    frames.push_back({v, 0});
                } else if (on_stack[v]) {
                    low[f.u] = std::min(low[f.u], order[v]);
                }
            } else {
                if (low[f.u] == order[f.u]) {
                    members.emplace_back();
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = static_cast<int>(members.size()) - 1;
                        members.back().push_back(w);
                        if (w == f.u) break;
                    }
                }
                int done = f.u;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().u] = std::min(low[frames.back().u], low[done]);
            }
        }
    }

    // A negative edge inside a component witnesses a cycle through negation.
    for (int u = 0; u < n; ++u) {
        for (const auto& [v, neg] : out_edges[u]) {
            if (!neg || comp[u] != comp[v]) continue;
            std::vector<int> path = path_in_component(v, u, comp[u], out_edges, comp);
            for (int w : path) out.witness.push_back(names[w]);
            out.witness.push_back(names[v]);
            std::string cyc;
            for (size_t i = 0; i < out.witness.size(); ++i) {
                if (i) cyc += " -> ";
                cyc += out.witness[i];
            }
            out.message = "not stratifiable: negated dependency on " + names[u] +
                          " lies on cycle " + cyc;
            return out;
        }
    }

    // Components pop in reverse topological order, so walking the creation
    // order backwards visits every component after all its predecessors.
    int ncomp = static_cast<int>(members.size());
    std::vector<int> clam(ncomp, 1);
    for (int c = ncomp - 1; c >= 0; --c) {
        for (int u : members[c]) {
            for (const auto& [v, neg] : out_edges[u]) {
                if (comp[v] == c) continue;
                clam[comp[v]] = std::max(clam[comp[v]], clam[c] + (neg ? 1 : 0));
            }
        }
    }

    out.ok = true;
    out.num_strata = 0;
    for (int u = 0; u < n; ++u) {
        out.lambda[names[u]] = clam[comp[u]];
        out.num_strata = std::max(out.num_strata, clam[comp[u]]);
    }
    out.strata.assign(static_cast<size_t>(out.num_strata), {});
    for (size_t i = 0; i < p.rules.size(); ++i)
        out.strata[static_cast<size_t>(out.lambda.at(p.rules[i].head.pred)) - 1].push_back(i);
    return out;
}

namespace {

// Variables occurring in ordinary numeric atoms: these are the numeric
// variables that semi-grounding replaces by constants. `pos` keeps the ones
// with a positive body occurrence (usable in additive constant parts).
struct OrdinaryVars {
    std::set<std::string> any;
    std::set<std::string> pos;
};

OrdinaryVars ordinary_vars(const Program& ctx, const Rule& r) {
    OrdinaryVars v;
    auto scan = [&](const Atom& a, bool positive) {
        if (ctx.kind_of(a.pred) != PredKind::Ordinary || !a.numeric) return;
        a.numeric->collect_vars(v.any);
        if (positive) a.numeric->collect_vars(v.pos);
    };
    scan(r.head, false);
    for (const Literal& l : r.body)
        if (l.is_standard()) scan(l.atom, l.kind == Literal::Kind::Positive);
    return v;
}

// One numeric term of a rule, tagged with its location.
struct TermRef {
    enum class Where { Head, BodyAtom, CmpLhs, CmpRhs };
    Where where;
    size_t lit = 0;                   // body index for body locations
    const Term* term = nullptr;
    bool positive = true;             // body atoms only
    PredKind pk = PredKind::Object;   // predicate kind (head or body atom)
};

std::string where_str(TermRef::Where w, size_t lit) {
    switch (w) {
        case TermRef::Where::Head: return "head term";
        case TermRef::Where::BodyAtom: return "body literal " + std::to_string(lit + 1);
        case TermRef::Where::CmpLhs: return "comparison " + std::to_string(lit + 1) + " (left side)";
        default: return "comparison " + std::to_string(lit + 1) + " (right side)";
    }
}

std::vector<TermRef> rule_numeric_terms(const Program& ctx, const Rule& r) {
    std::vector<TermRef> out;
    if (r.head.numeric && !r.head.numeric->is_star())
        out.push_back({TermRef::Where::Head, 0, &*r.head.numeric, true, ctx.kind_of(r.head.pred)});
    for (size_t i = 0; i < r.body.size(); ++i) {
        const Literal& l = r.body[i];
        if (l.is_standard()) {
            if (l.atom.numeric && !l.atom.numeric->is_star())
                out.push_back({TermRef::Where::BodyAtom, i, &*l.atom.numeric,
                               l.kind == Literal::Kind::Positive, ctx.kind_of(l.atom.pred)});
        } else {
            out.push_back({TermRef::Where::CmpLhs, i, &l.cmp.lhs, true, PredKind::Object});
            out.push_back({TermRef::Where::CmpRhs, i, &l.cmp.rhs, true, PredKind::Object});
        }
    }
    return out;
}

}  // namespace

std::set<std::string> guarded_variables(const Program& ctx, const Rule& r) {
    std::set<std::string> g;
    for (const Literal& l : r.body)
        if (l.kind == Literal::Kind::Positive && ctx.kind_of(l.atom.pred) == PredKind::Ordinary &&
            l.atom.numeric && !l.atom.numeric->is_star())
            l.atom.numeric->collect_vars(g);

    std::vector<Poly> cmp;
    for (const Literal& l : r.body)
        if (l.kind == Literal::Kind::Compare && l.cmp.op == Comparison::Op::Le)
            cmp.push_back(Poly::of(l.cmp.lhs) - Poly::of(l.cmp.rhs));
    auto has_cmp = [&](const Poly& q) { return std::find(cmp.begin(), cmp.end(), q) != cmp.end(); };

    // A polynomial that is exactly one variable.
    auto bare = [](const Poly& p) -> std::optional<std::string> {
        if (p.terms.size() == 1) {
            const auto& [m, c] = *p.terms.begin();
            if (m.size() == 1 && c == 1) return m[0];
        }
        return std::nullopt;
    };

    for (const Literal& lp : r.body) {
        if (lp.kind != Literal::Kind::Positive) continue;
        PredKind k = ctx.kind_of(lp.atom.pred);
        if (!is_limit(k) || !lp.atom.numeric || lp.atom.numeric->is_star()) continue;
        std::optional<std::string> n1 = bare(Poly::of(*lp.atom.numeric));
        if (!n1) continue;
        for (const Literal& ln : r.body) {
            if (ln.kind != Literal::Kind::Negative || ln.atom.pred != lp.atom.pred) continue;
            if (ln.atom.objects != lp.atom.objects) continue;
            if (!ln.atom.numeric || ln.atom.numeric->is_star()) continue;
            std::optional<std::string> n2 = bare(Poly::of(*ln.atom.numeric));
            if (!n2 || *n2 == *n1) continue;
            Int t = (k == PredKind::LimitMax) ? 1 : -1;
            Poly q = Poly::variable(*n2) - Poly::variable(*n1) - Poly::constant(t);
            if (has_cmp(q) && has_cmp(q.negated())) {
                g.insert(*n1);
                g.insert(*n2);
            }
        }
    }
    return g;
}

namespace {

// One rule's limit-linearity: every monomial of every numeric term must either
// use only positively-bound ordinary variables, or admit a designated limit
// variable whose removal leaves only guarded factors; designations must be
// distinct per term, decided by bipartite matching.
bool rule_limit_linear(const Program& ctx, const Rule& r, size_t ridx,
                       std::vector<std::string>* diags) {
    if (r.is_fact()) return true;
    const std::string tag = "rule " + std::to_string(ridx + 1) + ": ";
    OrdinaryVars ov = ordinary_vars(ctx, r);
    std::set<std::string> g = guarded_variables(ctx, r);

    bool ok = true;
    for (const TermRef& tr : rule_numeric_terms(ctx, r)) {
        Poly p = Poly::of(*tr.term);

        // Candidate designated variables per monomial that needs one.
        std::vector<const Poly::Monomial*> monos;
        std::vector<std::vector<std::string>> cands;
        bool term_ok = true;
        for (const auto& [m, c] : p.terms) {
            (void)c;
            if (m.empty()) continue;
            bool all_pos_ordinary = true;
            for (const std::string& v : m)
                if (!ov.pos.count(v)) all_pos_ordinary = false;
            if (all_pos_ordinary) continue;

            std::vector<std::string> cand;
            std::set<std::string> seen;
            for (const std::string& v : m) {
                if (!seen.insert(v).second) continue;
                if (ov.any.count(v)) continue;
                bool rest_guarded = true;
                bool skipped = false;
                for (const std::string& u : m) {
                    if (!skipped && u == v) {
                        skipped = true;
                        continue;
                    }
                    if (!g.count(u)) {
                        rest_guarded = false;
                        break;
                    }
                }
                if (rest_guarded) cand.push_back(v);
            }
            if (cand.empty()) {
                emit(diags, tag + where_str(tr.where, tr.lit) + ": monomial " + mono_str(m) +
                                " admits no designated limit variable");
                term_ok = false;
            } else {
                monos.push_back(&m);
                cands.push_back(std::move(cand));
            }
        }
        if (!term_ok) {
            ok = false;
            continue;
        }

        // Kuhn's augmenting paths: monomials on the left, variables on the right.
        std::map<std::string, int> matched;  // variable -> monomial index
        std::function<bool(int, std::set<std::string>&)> augment =
            [&](int i, std::set<std::string>& visited) {
                for (const std::string& v : cands[static_cast<size_t>(i)]) {
                    if (!visited.insert(v).second) continue;
                    auto it = matched.find(v);
                    if (it == matched.end() || augment(it->second, visited)) {
                        matched[v] = i;
                        return true;
                    }
                }
                return false;
            };
        for (size_t i = 0; i < monos.size(); ++i) {
            std::set<std::string> visited;
            if (!augment(static_cast<int>(i), visited)) {
                emit(diags, tag + where_str(tr.where, tr.lit) + ": monomial " +
                                mono_str(*monos[i]) +
                                " competes with another monomial for its designated limit variable");
                ok = false;
                break;
            }
        }
    }
    return ok;
}

}  // namespace

bool check_limit_linear(const Program& p, std::vector<std::string>* diags) {
    bool ok = true;
    for (const std::string& m : safety_violations(p)) {
        emit(diags, m);
        ok = false;
    }
    Stratification s = compute_stratification(p);
    if (!s.ok) {
        emit(diags, s.message);
        ok = false;
    }
    for (size_t i = 0; i < p.rules.size(); ++i)
        if (!rule_limit_linear(p, p.rules[i], i, diags)) ok = false;
    return ok;
}

namespace {

// ---------------------------------------------------------------------------
// Type-consistency, decided without enumerating the semi-grounding.
//
// Semi-grounding substitutes every integer constant of the program for every
// variable of an ordinary numeric atom (and object constants for object
// variables). The checker therefore reasons about which values each
// monomial's coefficient can take over those constants: its sign reachability
// (a product is positive/negative for some substitution depending on the sign
// of its integer part, the available constant signs, and occurrence parity)
// and whether it can or must vanish.
// ---------------------------------------------------------------------------

struct ConstClasses {
    bool pos = false, neg = false, zero = false;
    bool nonzero() const { return pos || neg; }
};

ConstClasses const_classes(const std::set<Int>& cs) {
    ConstClasses c;
    for (const Int& v : cs) {
        if (v > 0) c.pos = true;
        else if (v < 0) c.neg = true;
        else c.zero = true;
    }
    return c;
}

struct SignInfo {
    bool can_pos = false, can_neg = false;
};

// Sign reachability of k * product(ordinary variables with multiplicity).
SignInfo coeff_signs(const Int& k, const std::map<std::string, int>& occ, const ConstClasses& cc) {
    int total = 0;
    bool odd_var = false;
    for (const auto& [v, mult] : occ) {
        (void)v;
        total += mult;
        if (mult % 2 == 1) odd_var = true;
    }
    auto can = [&](bool want_positive) {
        Int kk = want_positive ? k : Int(-k);
        if (total == 0) return kk > 0;
        if (kk > 0 && cc.pos) return true;
        if (kk > 0 && cc.neg && total % 2 == 0) return true;
        if (kk < 0 && cc.neg && total % 2 == 1) return true;
        if (kk < 0 && cc.pos && cc.neg && odd_var) return true;
        return false;
    };
    return {can(true), can(false)};
}

// One occurrence of a surviving numeric variable: the monomial's location,
// its integer coefficient and the ordinary variables multiplying it.
struct TcSite {
    TermRef::Where where;
    size_t lit;
    bool positive;
    PredKind pk;
    std::map<std::string, int> ord;
    Int k;
    bool possible;  // false when the coefficient vanishes in every instance
};

bool has_object_var(const Rule& r) {
    auto any_var = [](const Atom& a) {
        for (const ObjTerm& o : a.objects)
            if (o.is_var) return true;
        return false;
    };
    if (any_var(r.head)) return true;
    for (const Literal& l : r.body)
        if (l.is_standard() && any_var(l.atom)) return true;
    return false;
}

bool tc_core(const Program& p, std::vector<std::string>* diags) {
    const std::set<Int> ints = integer_constants(p);
    const std::set<std::string> objs = object_constants(p);
    const ConstClasses cc = const_classes(ints);

    bool ok = true;
    for (size_t ri = 0; ri < p.rules.size(); ++ri) {
        const Rule& r = p.rules[ri];
        if (r.is_fact()) continue;
        const std::string tag = "rule " + std::to_string(ri + 1) + ": ";
        OrdinaryVars ov = ordinary_vars(p, r);

        // No substitution candidates means no instances, hence nothing to check.
        if ((has_object_var(r) && objs.empty()) || (!ov.any.empty() && ints.empty())) continue;

        std::set<std::string> g = guarded_variables(p, r);
        std::optional<std::string> fail;

        // 1. Every instance term must simplify to integer coefficients on
        //    single variables; collect the occurrence sites along the way.
        std::map<std::string, std::vector<TcSite>> sites;
        for (const TermRef& tr : rule_numeric_terms(p, r)) {
            Poly poly = Poly::of(*tr.term);
            for (const auto& [m, c] : poly.terms) {
                std::map<std::string, int> ord;
                std::map<std::string, int> surv;
                for (const std::string& v : m) (ov.any.count(v) ? ord[v] : surv[v])++;
                int sc = 0;
                for (const auto& [v, mult] : surv) {
                    (void)v;
                    sc += mult;
                }
                if (sc == 0) continue;
                if (sc >= 2) {
                    bool always_zero = !ord.empty() && cc.zero && !cc.nonzero();
                    if (!always_zero)
                        fail = tag + where_str(tr.where, tr.lit) + ": monomial " + mono_str(m) +
                               " does not simplify to an integer times one numeric variable";
                    continue;
                }
                const std::string& v = surv.begin()->first;
                bool possible = ord.empty() || cc.nonzero();
                sites[v].push_back(TcSite{tr.where, tr.lit, tr.positive, tr.pk, std::move(ord), c,
                                          possible});
            }
            if (fail) break;
        }

        // 2. Each variable must occur in exactly one standard body literal in
        //    every instance where it occurs at all. Whether an occurrence
        //    survives an instance depends only on which ordinary variables are
        //    substituted by zero, so case-split on the available constants.
        if (!fail) {
            bool full = !ov.any.empty() && cc.zero && cc.nonzero();
            bool all_zero = !ov.any.empty() && cc.zero && !cc.nonzero();
            auto keys_subset = [](const std::map<std::string, int>& a,
                                  const std::map<std::string, int>& b) {
                for (const auto& [k, mult] : a) {
                    (void)mult;
                    if (!b.count(k)) return false;
                }
                return true;
            };
            for (const auto& [v, ss] : sites) {
                std::vector<const TcSite*> body, rest;
                for (const TcSite& s : ss)
                    (s.where == TermRef::Where::BodyAtom ? body : rest).push_back(&s);
                std::string why;
                if (all_zero) {
                    size_t b0 = 0, c0 = 0;
                    for (const TcSite* s : body)
                        if (s->ord.empty()) ++b0;
                    for (const TcSite* s : rest)
                        if (s->ord.empty()) ++c0;
                    if (b0 >= 2) why = "occurs in " + std::to_string(b0) + " standard body literals";
                    else if (b0 == 0 && c0 >= 1)
                        why = "occurs outside the body but in no standard body literal";
                } else if (body.size() >= 2) {
                    why = "occurs in " + std::to_string(body.size()) + " standard body literals";
                } else if (full) {
                    for (const TcSite* c : rest) {
                        bool covered = false;
                        for (const TcSite* b : body)
                            if (keys_subset(b->ord, c->ord)) covered = true;
                        if (!covered) {
                            why = "can occur in the " + where_str(c->where, c->lit) +
                                  " of an instance without occurring in any standard body literal";
                            break;
                        }
                    }
                } else if (body.empty() && !rest.empty()) {
                    why = "occurs outside the body but in no standard body literal";
                }
                if (!why.empty()) {
                    fail = tag + "variable " + v + " " + why + " (exactly one required)";
                    break;
                }
            }
        }

        // 3. Variables occurring under negation must be guarded.
        if (!fail) {
            for (const auto& [v, ss] : sites) {
                if (g.count(v)) continue;
                for (const TcSite& s : ss) {
                    if (s.where == TermRef::Where::BodyAtom && !s.positive && s.possible) {
                        fail = tag + "variable " + v +
                               " occurs in a negative literal but is not guarded";
                        break;
                    }
                }
                if (fail) break;
            }
        }

        // 4./5. Unguarded head and comparison occurrences must agree in
        //       direction with the (unique) positive limit literal that
        //       introduces the variable, for every sign its coefficient can
        //       take.
        if (!fail) {
            for (const auto& [v, ss] : sites) {
                if (g.count(v)) continue;
                const TcSite* intro = nullptr;
                size_t nintro = 0;
                for (const TcSite& s : ss)
                    if (s.where == TermRef::Where::BodyAtom && s.possible) {
                        intro = &s;
                        ++nintro;
                    }
                for (const TcSite& s : ss) {
                    if (s.where == TermRef::Where::BodyAtom || !s.possible) continue;
                    if (nintro != 1 || !intro->positive || !is_limit(intro->pk)) {
                        fail = tag + "variable " + v +
                               " is not introduced by exactly one positive limit body literal";
                        break;
                    }
                    SignInfo si = coeff_signs(s.k, s.ord, cc);
                    bool bad;
                    const char* bad_sign;
                    if (s.where == TermRef::Where::Head) {
                        bad = (intro->pk == s.pk) ? si.can_neg : si.can_pos;
                        bad_sign = (intro->pk == s.pk) ? "negative" : "positive";
                    } else if (s.where == TermRef::Where::CmpLhs) {
                        bad = (intro->pk == PredKind::LimitMax) ? si.can_pos : si.can_neg;
                        bad_sign = (intro->pk == PredKind::LimitMax) ? "positive" : "negative";
                    } else {
                        bad = (intro->pk == PredKind::LimitMin) ? si.can_pos : si.can_neg;
                        bad_sign = (intro->pk == PredKind::LimitMin) ? "positive" : "negative";
                    }
                    if (bad) {
                        fail = tag + where_str(s.where, s.lit) + ": coefficient of unguarded " +
                               v + " can be " + bad_sign + ", conflicting with the " +
                               (intro->pk == PredKind::LimitMin ? "min" : "max") +
                               " literal that introduces it";
                        break;
                    }
                }
                if (fail) break;
            }
        }

        if (fail) {
            emit(diags, *fail);
            ok = false;
        }
    }
    return ok;
}

}  // namespace

bool check_type_consistent(const Program& p, std::vector<std::string>* diags) {
    if (!check_limit_linear(p, diags)) return false;
    return tc_core(p, diags);
}

bool check_type_consistent_reference(const Program& sg, std::vector<std::string>* diags) {
    auto objects_ground = [](const Atom& a) {
        for (const ObjTerm& o : a.objects)
            if (o.is_var) return false;
        return true;
    };
    for (const Rule& r : sg.rules) {
        auto check_atom = [&](const Atom& a) {
            if (!objects_ground(a))
                throw ContractViolation("reference type-consistency check requires a semi-ground program (object variable in " + a.pred + ")");
            if (sg.kind_of(a.pred) == PredKind::Ordinary && a.numeric &&
                !a.numeric->is_star() && !a.numeric->vars().empty())
                throw ContractViolation("reference type-consistency check requires a semi-ground program (variable in ordinary numeric atom " + a.pred + ")");
        };
        check_atom(r.head);
        for (const Literal& l : r.body)
            if (l.is_standard()) check_atom(l.atom);
    }

    bool ok = true;
    for (size_t ri = 0; ri < sg.rules.size(); ++ri) {
        const Rule& r = sg.rules[ri];
        if (r.is_fact()) continue;
        const std::string tag = "rule " + std::to_string(ri + 1) + ": ";
        std::optional<std::string> fail;

        std::vector<TermRef> trs = rule_numeric_terms(sg, r);
        std::vector<Poly> polys;
        polys.reserve(trs.size());
        for (const TermRef& tr : trs) polys.push_back(Poly::of(*tr.term));

        // 1. linear terms with integer coefficients
        for (size_t i = 0; i < trs.size() && !fail; ++i)
            for (const auto& [m, c] : polys[i].terms) {
                (void)c;
                if (m.size() >= 2) {
                    fail = tag + where_str(trs[i].where, trs[i].lit) + ": monomial " +
                           mono_str(m) + " is not linear";
                    break;
                }
            }

        // 2. exactly one standard body occurrence per variable
        if (!fail) {
            std::set<std::string> rule_vars;
            for (const Poly& p2 : polys)
                for (const std::string& v : p2.vars()) rule_vars.insert(v);
            for (const std::string& v : rule_vars) {
                size_t cnt = 0;
                for (size_t i = 0; i < trs.size(); ++i)
                    if (trs[i].where == TermRef::Where::BodyAtom && polys[i].vars().count(v)) ++cnt;
                if (cnt != 1) {
                    fail = tag + "variable " + v + " occurs in " + std::to_string(cnt) +
                           " standard body literals (exactly one required)";
                    break;
                }
            }
        }

        std::set<std::string> g = guarded_variables(sg, r);

        // 3. negated occurrences guarded
        if (!fail) {
            for (size_t i = 0; i < trs.size() && !fail; ++i) {
                if (trs[i].where != TermRef::Where::BodyAtom || trs[i].positive) continue;
                for (const std::string& v : polys[i].vars())
                    if (!g.count(v)) {
                        fail = tag + "variable " + v +
                               " occurs in a negative literal but is not guarded";
                        break;
                    }
            }
        }

        // 4./5. orientation of unguarded head and comparison occurrences
        if (!fail) {
            for (size_t i = 0; i < trs.size() && !fail; ++i) {
                if (trs[i].where == TermRef::Where::BodyAtom) continue;
                for (const auto& [m, c] : polys[i].terms) {
                    if (m.size() != 1) continue;
                    const std::string& v = m[0];
                    if (g.count(v)) continue;
                    const TermRef* intro = nullptr;
                    const Poly* ipoly = nullptr;
                    for (size_t j = 0; j < trs.size(); ++j)
                        if (trs[j].where == TermRef::Where::BodyAtom && polys[j].vars().count(v)) {
                            intro = &trs[j];
                            ipoly = &polys[j];
                            break;
                        }
                    (void)ipoly;
                    if (!intro || !intro->positive || !is_limit(intro->pk)) {
                        fail = tag + "variable " + v +
                               " is not introduced by exactly one positive limit body literal";
                        break;
                    }
                    PredKind required;
                    if (trs[i].where == TermRef::Where::Head)
                        required = (c > 0) ? trs[i].pk
                                           : (trs[i].pk == PredKind::LimitMin ? PredKind::LimitMax
                                                                              : PredKind::LimitMin);
                    else if (trs[i].where == TermRef::Where::CmpLhs)
                        required = (c > 0) ? PredKind::LimitMin : PredKind::LimitMax;
                    else
                        required = (c > 0) ? PredKind::LimitMax : PredKind::LimitMin;
                    if (intro->pk != required) {
                        fail = tag + where_str(trs[i].where, trs[i].lit) + ": variable " + v +
                               " with " + (c > 0 ? "positive" : "negative") +
                               " coefficient must be introduced by a positive " +
                               (required == PredKind::LimitMin ? "min" : "max") + " literal";
                        break;
                    }
                }
            }
        }

        if (fail) {
            emit(diags, *fail);
            ok = false;
        }
    }
    return ok;
}

Classification classify(const Program& p) {
    Classification c;

    std::vector<std::string> sv = safety_violations(p);
    c.safe = sv.empty();
    for (std::string& m : sv) c.diagnostics.push_back(std::move(m));

    c.strat = compute_stratification(p);
    c.stratified = c.strat.ok;
    if (!c.stratified) c.diagnostics.push_back(c.strat.message);

    c.positive = true;
    c.semi_positive = true;
    for (const Rule& r : p.rules)
        for (const Literal& l : r.body)
            if (l.kind == Literal::Kind::Negative) {
                c.positive = false;
                if (!p.pred_info(l.atom.pred).edb) c.semi_positive = false;
            }

    bool ll_rules = true;
    for (size_t i = 0; i < p.rules.size(); ++i)
        if (!rule_limit_linear(p, p.rules[i], i, &c.diagnostics)) ll_rules = false;
    c.limit_linear = c.safe && c.stratified && ll_rules;

    c.type_consistent = c.limit_linear && tc_core(p, &c.diagnostics);
    return c;
}

}  // namespace limitlog
