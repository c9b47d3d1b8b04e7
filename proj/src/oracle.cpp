#include "limitlog/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "limitlog/analysis.hpp"
#include "limitlog/errors.hpp"
#include "limitlog/pseudo.hpp"

namespace limitlog {

namespace {

Int term_eval(const Term& t, const std::map<std::string, Int>& nums) {
    switch (t.kind) {
        case Term::Kind::Constant: return t.value;
        case Term::Kind::Variable: {
            auto it = nums.find(t.var);
            if (it == nums.end()) throw ContractViolation("unbound numeric variable " + t.var);
            return it->second;
        }
        case Term::Kind::Add: return term_eval(t.kids[0], nums) + term_eval(t.kids[1], nums);
        case Term::Kind::Sub: return term_eval(t.kids[0], nums) - term_eval(t.kids[1], nums);
        case Term::Kind::Mul: return term_eval(t.kids[0], nums) * term_eval(t.kids[1], nums);
        case Term::Kind::Star: break;
    }
    throw ContractViolation("'*' has no integer value");
}

SlotKey ground_slot(const Atom& a, const std::map<std::string, std::string>& objs) {
    SlotKey s{a.pred, {}};
    s.objects.reserve(a.objects.size());
    for (const ObjTerm& o : a.objects) {
        if (!o.is_var) {
            s.objects.push_back(o.name);
            continue;
        }
        auto it = objs.find(o.name);
        if (it == objs.end()) throw ContractViolation("unbound object variable " + o.name);
        s.objects.push_back(it->second);
    }
    return s;
}

// A body literal evaluated once its numeric variables are bound.  Literals
// that feed a variable's candidate values are satisfied by construction and
// are not re-checked.
struct BodyCheck {
    const Literal* lit = nullptr;
    int stage = 0;  // how many numeric variables must be bound first
};

struct CompiledRule {
    const Rule* rule = nullptr;
    std::vector<std::string> ovars;
    std::vector<std::string> nvars;
    // Per numeric variable: index of the positive body literal carrying it as
    // a bare term (its slot feeds the enumeration), or -1 for a window scan.
    std::vector<int> driver;
    std::vector<BodyCheck> checks;  // sorted by stage
    std::set<std::string> body_preds;
    bool head_star = false;
};

int stage_of(const std::set<std::string>& vars, const std::vector<std::string>& nvars) {
    int stage = 0;
    for (size_t i = 0; i < nvars.size(); ++i)
        if (vars.count(nvars[i])) stage = int(i) + 1;
    return stage;
}

CompiledRule compile_rule(const Rule& r) {
    CompiledRule cr;
    cr.rule = &r;
    std::set<std::string> seen_obj, seen_num;
    auto note_objects = [&](const Atom& a) {
        for (const ObjTerm& o : a.objects)
            if (o.is_var && seen_obj.insert(o.name).second) cr.ovars.push_back(o.name);
    };
    auto note_numeric = [&](const Term& t) {
        for (const std::string& v : t.vars())
            if (seen_num.insert(v).second) cr.nvars.push_back(v);
    };
    // Bind variables of positive standard literals first so their slots can
    // drive the enumeration; negated and compared variables follow.
    for (const Literal& l : r.body)
        if (l.kind == Literal::Kind::Positive) {
            note_objects(l.atom);
            if (l.atom.numeric && !l.atom.numeric->is_star()) note_numeric(*l.atom.numeric);
        }
    for (const Literal& l : r.body)
        if (l.kind == Literal::Kind::Negative) {
            note_objects(l.atom);
            if (l.atom.numeric && !l.atom.numeric->is_star()) note_numeric(*l.atom.numeric);
        }
    for (const Literal& l : r.body)
        if (l.kind == Literal::Kind::Compare) {
            note_numeric(l.cmp.lhs);
            note_numeric(l.cmp.rhs);
        }
    note_objects(r.head);
    cr.head_star = r.head.numeric && r.head.numeric->is_star();
    if (r.head.numeric && !cr.head_star) note_numeric(*r.head.numeric);

    std::set<size_t> driving;
    cr.driver.assign(cr.nvars.size(), -1);
    for (size_t vi = 0; vi < cr.nvars.size(); ++vi)
        for (size_t li = 0; li < r.body.size(); ++li) {
            const Literal& l = r.body[li];
            if (l.kind != Literal::Kind::Positive || !l.atom.numeric) continue;
            if (!l.atom.numeric->is_variable() || l.atom.numeric->var != cr.nvars[vi]) continue;
            if (driving.count(li)) continue;
            cr.driver[vi] = int(li);
            driving.insert(li);
            break;
        }

    for (size_t li = 0; li < r.body.size(); ++li) {
        const Literal& l = r.body[li];
        if (l.is_standard()) cr.body_preds.insert(l.atom.pred);
        if (driving.count(li)) continue;
        std::set<std::string> vars;
        if (l.is_standard()) {
            if (l.atom.numeric && !l.atom.numeric->is_star()) vars = l.atom.numeric->vars();
        } else {
            vars = l.cmp.lhs.vars();
            l.cmp.rhs.collect_vars(vars);
        }
        cr.checks.push_back(BodyCheck{&l, stage_of(vars, cr.nvars)});
    }
    std::stable_sort(cr.checks.begin(), cr.checks.end(),
                     [](const BodyCheck& a, const BodyCheck& b) { return a.stage < b.stage; });
    return cr;
}

class BoundedRun {
public:
    BoundedRun(const Program& combined, Int bound) : ctx(combined) {
        u.bound = std::move(bound);
        u.constants = object_constants(combined);
        consts.assign(u.constants.begin(), u.constants.end());
        Int slots = 0;
        for (const auto& [name, pi] : ctx.preds) {
            Int combos = 1;
            for (int i = 0; i < pi.object_arity(); ++i) combos *= Int(std::max<size_t>(consts.size(), 1));
            slots += combos;
        }
        sweep_budget = slots * (2 * u.bound + 2) + slots + 8;
    }

    BoundedUniverse run() {
        Stratification strat = compute_stratification(ctx);
        if (!strat.ok)
            throw ContractViolation("bounded materialisation needs a stratified program: " + strat.message);
        for (const std::vector<size_t>& stratum : strat.strata) {
            std::vector<CompiledRule> rules;
            rules.reserve(stratum.size());
            for (size_t ri : stratum) rules.push_back(compile_rule(ctx.rules[ri]));
            fixpoint(rules);
        }
        return std::move(u);
    }

private:
    const Program& ctx;
    BoundedUniverse u;
    std::vector<std::string> consts;
    Int sweep_budget;

    // Per-sweep bookkeeping.
    bool grew = false;
    std::set<std::string> grown;
    // Strongest limit entry that fell past the weak window edge, per slot.  It
    // covers nothing inside the window, but body probes with computed values
    // beyond the window still need it.
    std::map<SlotKey, Int> shadow;

    // Per-object-assignment evaluation state.
    struct GroundLit {
        const Literal* lit = nullptr;
        SlotKey slot;
        PredKind kind = PredKind::Object;
    };
    const CompiledRule* cur = nullptr;
    SlotKey head_slot;
    std::vector<GroundLit> lits;  // parallel to cur->rule->body
    std::map<std::string, Int> nums;

    void note_grew(const std::string& pred) {
        grew = true;
        grown.insert(pred);
    }

    void clip(const SlotKey& s) {
        if (u.clipped.insert(s).second) note_grew(s.pred);
    }

    // Probing a clipped slot makes the current instance unreliable either
    // way: a fact it derives may be wrong, a fact it fails to derive may be
    // missing.  Both taint the head slot.
    void touch(const SlotKey& s) {
        if (u.is_clipped(s)) clip(head_slot);
    }

    bool covers(const SlotKey& s, PredKind k, const Int& v) const {
        if (u.star_slots.count(s)) return true;
        auto it = u.numeric_facts.find(s);
        if (it != u.numeric_facts.end() && !it->second.empty()) {
            const Int& frontier =
                k == PredKind::LimitMax ? *it->second.rbegin() : *it->second.begin();
            return value_leq(k, v, frontier);
        }
        // An in-window frontier always dominates the shadow, so the shadow
        // only ever answers for otherwise-empty slots.
        auto sh = shadow.find(s);
        return sh != shadow.end() && value_leq(k, v, sh->second);
    }

    void shadow_note(const SlotKey& s, PredKind k, const Int& v) {
        auto it = shadow.find(s);
        if (it == shadow.end()) {
            shadow.emplace(s, v);
            note_grew(s.pred);
        } else if (value_lt(k, it->second, v)) {
            it->second = v;
            note_grew(s.pred);
        }
    }

    // Inserts a limit value with its in-window closure.  The stored set stays
    // contiguous from the weak window edge to the frontier; values past the
    // strong edge saturate the window and clip the slot, values past the weak
    // edge cover nothing in the window and land in the shadow.
    void add_limit(const SlotKey& s, PredKind k, const Int& v) {
        if (u.star_slots.count(s)) return;
        Int lo, hi;
        if (k == PredKind::LimitMax) {
            if (v < -u.bound) {
                shadow_note(s, k, v);
                return;
            }
            hi = v;
            if (hi > u.bound) {
                clip(s);
                hi = u.bound;
            }
            std::set<Int>& vals = u.numeric_facts[s];
            lo = vals.empty() ? Int(-u.bound) : Int(*vals.rbegin() + 1);
            if (lo > hi) return;
            for (Int x = lo; x <= hi; ++x) vals.insert(x);
        } else {
            if (v > u.bound) {
                shadow_note(s, k, v);
                return;
            }
            lo = v;
            if (lo < -u.bound) {
                clip(s);
                lo = -u.bound;
            }
            std::set<Int>& vals = u.numeric_facts[s];
            hi = vals.empty() ? Int(u.bound) : Int(*vals.begin() - 1);
            if (lo > hi) return;
            for (Int x = lo; x <= hi; ++x) vals.insert(x);
        }
        note_grew(s.pred);
    }

    void add_star(const SlotKey& s) {
        bool fresh = u.star_slots.insert(s).second;
        std::set<Int>& vals = u.numeric_facts[s];
        bool any = false;
        for (Int x = -u.bound; x <= u.bound; ++x) any = vals.insert(x).second || any;
        if (fresh || any) note_grew(s.pred);
    }

    bool eval_check(const Literal& l) {
        if (l.kind == Literal::Kind::Compare) {
            Int lhs = term_eval(l.cmp.lhs, nums);
            Int rhs = term_eval(l.cmp.rhs, nums);
            return l.cmp.op == Comparison::Op::Lt ? lhs < rhs : lhs <= rhs;
        }
        const GroundLit& g = lits[size_t(&l - cur->rule->body.data())];
        touch(g.slot);
        bool holds;
        if (!is_numeric(g.kind)) {
            holds = u.has_object(g.slot);
        } else {
            if (l.atom.numeric->is_star()) throw ContractViolation("'*' outside a fact");
            Int v = term_eval(*l.atom.numeric, nums);
            holds = is_limit(g.kind) ? covers(g.slot, g.kind, v) : u.has_numeric(g.slot, v);
        }
        return l.kind == Literal::Kind::Positive ? holds : !holds;
    }

    void derive() {
        const Atom& h = cur->rule->head;
        PredKind hk = ctx.kind_of(h.pred);
        if (!is_numeric(hk)) {
            if (u.object_facts.insert(head_slot).second) note_grew(h.pred);
            return;
        }
        if (cur->head_star) {
            add_star(head_slot);
            return;
        }
        Int v = term_eval(*h.numeric, nums);
        if (!is_limit(hk)) {
            if (u.numeric_facts[head_slot].insert(v).second) note_grew(h.pred);
            return;
        }
        // A variable bound at the window edge stands for a range that really
        // continues outward.  The head is linear in each variable, so one
        // step back inward decides the direction: if the edge binding is the
        // strictly stronger one, the true optimum lies beyond the window.
        for (auto& [var, val] : nums) {
            if (val != u.bound && val != -u.bound) continue;
            Int saved = val;
            val += saved > 0 ? -1 : 1;
            Int inward = term_eval(*h.numeric, nums);
            val = std::move(saved);
            if (value_lt(hk, inward, v)) {
                clip(head_slot);
                break;
            }
        }
        add_limit(head_slot, hk, v);
    }

    void recurse(size_t vi, size_t check_from) {
        size_t c = check_from;
        for (; c < cur->checks.size() && cur->checks[c].stage == int(vi); ++c)
            if (!eval_check(*cur->checks[c].lit)) return;
        if (vi == cur->nvars.size()) {
            derive();
            return;
        }
        int d = cur->driver[vi];
        const std::string& var = cur->nvars[vi];
        if (d < 0) {
            for (Int v = -u.bound; v <= u.bound; ++v) {
                nums[var] = v;
                recurse(vi + 1, c);
            }
        } else {
            const GroundLit& g = lits[size_t(d)];
            touch(g.slot);
            auto it = u.numeric_facts.find(g.slot);
            if (it == u.numeric_facts.end() || it->second.empty()) {
                // A shadow-only slot holds its facts entirely beyond the
                // window; a rule driven by it is blind to all of them.
                if (shadow.count(g.slot)) clip(head_slot);
                nums.erase(var);
                return;
            }
            std::set<Int>& vals = it->second;
            // Live iteration: growth lands strictly beyond the frontier, so a
            // cursor moving in the growth direction picks up values inserted
            // mid-sweep and recursion chains complete in one pass.
            auto visit = [&](const Int& v) {
                nums[var] = v;
                recurse(vi + 1, c);
            };
            if (g.kind == PredKind::LimitMin) {
                for (auto rit = vals.rbegin(); rit != vals.rend(); ++rit) visit(*rit);
            } else {
                for (auto fit = vals.begin(); fit != vals.end(); ++fit) visit(*fit);
            }
        }
        nums.erase(var);
    }

    void eval_with_objects(const std::map<std::string, std::string>& objs) {
        head_slot = ground_slot(cur->rule->head, objs);
        lits.clear();
        lits.resize(cur->rule->body.size());
        for (size_t li = 0; li < cur->rule->body.size(); ++li) {
            const Literal& l = cur->rule->body[li];
            if (!l.is_standard()) continue;
            lits[li].lit = &l;
            lits[li].slot = ground_slot(l.atom, objs);
            lits[li].kind = ctx.kind_of(l.atom.pred);
        }
        nums.clear();
        recurse(0, 0);
    }

    void eval_rule(const CompiledRule& cr) {
        cur = &cr;
        if (cr.ovars.empty()) {
            eval_with_objects({});
            return;
        }
        if (consts.empty()) return;
        std::vector<size_t> idx(cr.ovars.size(), 0);
        std::map<std::string, std::string> objs;
        for (;;) {
            for (size_t i = 0; i < cr.ovars.size(); ++i) objs[cr.ovars[i]] = consts[idx[i]];
            eval_with_objects(objs);
            size_t i = 0;
            while (i < idx.size() && ++idx[i] == consts.size()) idx[i++] = 0;
            if (i == idx.size()) break;
        }
    }

    void fixpoint(const std::vector<CompiledRule>& rules) {
        bool first = true;
        std::set<std::string> grown_last;
        Int sweeps = 0;
        for (;;) {
            if (++sweeps > sweep_budget)
                throw EvalError("bounded materialisation exceeded its sweep budget");
            grew = false;
            grown.clear();
            for (const CompiledRule& cr : rules) {
                if (!first) {
                    bool relevant = false;
                    for (const std::string& p : cr.body_preds)
                        if (grown_last.count(p)) {
                            relevant = true;
                            break;
                        }
                    if (!relevant) continue;
                }
                eval_rule(cr);
            }
            if (!grew) break;
            grown_last = grown;
            first = false;
        }
    }
};

}  // namespace

Int default_oracle_bound() {
    const char* env = std::getenv("LIMITLOG_ORACLE_BOUND");
    if (!env || !*env) return 64;
    Int b;
    try {
        b = Int(std::string(env));
    } catch (const std::exception&) {
        throw ContractViolation("LIMITLOG_ORACLE_BOUND must be a positive integer, got '" +
                                std::string(env) + "'");
    }
    if (b < 1)
        throw ContractViolation("LIMITLOG_ORACLE_BOUND must be a positive integer, got '" +
                                std::string(env) + "'");
    return b;
}

BoundedUniverse brute_force_materialise(const Program& p, const Dataset& d, const Int& bound) {
    if (bound < 1) throw ContractViolation("the window bound must be positive");
    Program combined = merge_programs(p, d);
    for (const Int& c : integer_constants(combined))
        if (c > bound || c < -bound)
            throw ContractViolation("window bound " + bound.str() +
                                    " is smaller than the constant " + c.str());
    return BoundedRun(combined, bound).run();
}

OracleVerdict oracle_entails(const Program& ctx, const BoundedUniverse& u, const GroundFact& phi) {
    const PredicateInfo& pi = ctx.pred_info(phi.pred);
    if (int(phi.objects.size()) != pi.object_arity() || phi.has_numeric != is_numeric(pi.kind))
        throw ContractViolation("query shape does not match predicate " + phi.pred);
    SlotKey s{phi.pred, phi.objects};
    if (!phi.has_numeric)
        return u.is_clipped(s)    ? OracleVerdict::OutOfWindow
               : u.has_object(s) ? OracleVerdict::True
                                 : OracleVerdict::False;
    if (is_limit(pi.kind) && u.star_slots.count(s)) return OracleVerdict::True;
    if (phi.all_ints) {
        if (!is_limit(pi.kind)) throw ContractViolation("'*' query over a non-limit predicate");
        if (u.is_clipped(s)) return OracleVerdict::OutOfWindow;
        return u.saturated(s) ? OracleVerdict::True : OracleVerdict::False;
    }
    if (phi.value > u.bound || phi.value < -u.bound) return OracleVerdict::OutOfWindow;
    if (u.is_clipped(s)) return OracleVerdict::OutOfWindow;
    return u.has_numeric(s, phi.value) ? OracleVerdict::True : OracleVerdict::False;
}

}  // namespace limitlog
