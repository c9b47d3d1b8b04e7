#include "limitlog/linear.hpp"

#include <algorithm>
#include <sstream>

#include "limitlog/errors.hpp"

namespace limitlog {

LinExpr LinExpr::of_poly(const Poly& p) {
    LinExpr e;
    for (const auto& [mono, coeff] : p.terms) {
        if (mono.empty()) {
            e.constant += coeff;
        } else if (mono.size() == 1) {
            Int& c = e.coeffs[mono[0]];
            c += coeff;
            if (c == 0) e.coeffs.erase(mono[0]);
        } else {
            throw ContractViolation("non-linear term: product of variables");
        }
    }
    return e;
}

LinExpr LinExpr::operator+(const LinExpr& o) const {
    LinExpr r = *this;
    r.constant += o.constant;
    for (const auto& [v, c] : o.coeffs) {
        Int& rc = r.coeffs[v];
        rc += c;
        if (rc == 0) r.coeffs.erase(v);
    }
    return r;
}

LinExpr LinExpr::operator-(const LinExpr& o) const { return *this + o.negated(); }

LinExpr LinExpr::scaled(const Int& k) const {
    LinExpr r;
    if (k == 0) return r;
    r.constant = constant * k;
    for (const auto& [v, c] : coeffs) r.coeffs[v] = c * k;
    return r;
}

LinExpr LinExpr::substitute(const std::string& v, const LinExpr& e) const {
    auto it = coeffs.find(v);
    if (it == coeffs.end()) return *this;
    LinExpr r = *this;
    Int c = it->second;
    r.coeffs.erase(v);
    return r + e.scaled(c);
}

Int LinExpr::eval(const std::map<std::string, Int>& assignment) const {
    Int v = constant;
    for (const auto& [var, c] : coeffs) {
        auto it = assignment.find(var);
        if (it != assignment.end()) v += c * it->second;
    }
    return v;
}

std::set<std::string> IntLinSystem::variables() const {
    std::set<std::string> vs;
    for (const auto& e : eqs)
        for (const auto& [v, c] : e.coeffs) vs.insert(v);
    for (const auto& e : ges)
        for (const auto& [v, c] : e.coeffs) vs.insert(v);
    return vs;
}

namespace {

// Per-query state: a work counter guarding against pathological splinter
// blow-up, and a fresh-name counter shared by every nested equality
// elimination so that helper variables never collide across subproblems.
struct Budget {
    long long remaining = 200000;
    int fresh = 0;
    void spend() {
        if (--remaining < 0) throw EvalError("integer feasibility budget exhausted");
    }
};

Int coeff_gcd(const LinExpr& e) {
    Int g = 0;
    for (const auto& [v, c] : e.coeffs) g = int_gcd(g, c);
    return g < 0 ? -g : g;
}

enum class Norm { Keep, Trivial, False };

// Divides out the coefficient gcd.  For an inequality the constant is
// floor-divided, which is the integer-hull tightening; for an equality a
// non-divisible constant is a contradiction.
Norm normalise_ge(LinExpr& e) {
    if (e.coeffs.empty()) return e.constant >= 0 ? Norm::Trivial : Norm::False;
    Int g = coeff_gcd(e);
    if (g > 1) {
        for (auto& [v, c] : e.coeffs) c /= g;
        e.constant = floor_div(e.constant, g);
    }
    return Norm::Keep;
}

Norm normalise_eq(LinExpr& e) {
    if (e.coeffs.empty()) return e.constant == 0 ? Norm::Trivial : Norm::False;
    Int g = coeff_gcd(e);
    if (g > 1) {
        if (e.constant % g != 0) return Norm::False;  // divisibility conflict
        for (auto& [v, c] : e.coeffs) c /= g;
        e.constant /= g;
    }
    return Norm::Keep;
}

std::string expr_key(const LinExpr& e) {
    std::ostringstream os;
    for (const auto& [v, c] : e.coeffs) os << c << "*" << v << "+";
    os << e.constant;
    return os.str();
}

// Symmetric remainder in (-m/2, m/2].
Int mod_hat(const Int& a, const Int& m) {
    Int r = floor_mod(a, m);
    if (r * 2 > m) r -= m;
    return r;
}

void substitute_all(std::vector<LinExpr>& es, const std::string& v, const LinExpr& repl) {
    for (auto& e : es) e = e.substitute(v, repl);
}

// Removes every equality by substitution, rewriting `obj` (when given) along
// the way.  Returns false on a contradiction.  Fresh integer-valued helper
// variables (never clashing with source variables, which cannot start with
// '_') may remain in the inequalities.
bool eliminate_equalities(IntLinSystem& sys, LinExpr* obj, Budget& budget) {
    while (!sys.eqs.empty()) {
        budget.spend();
        LinExpr e = std::move(sys.eqs.back());
        sys.eqs.pop_back();
        switch (normalise_eq(e)) {
            case Norm::False: return false;
            case Norm::Trivial: continue;
            case Norm::Keep: break;
        }
        // Prefer a variable with a unit coefficient: solve and substitute.
        auto unit = std::find_if(e.coeffs.begin(), e.coeffs.end(),
                                 [](const auto& p) { return p.second == 1 || p.second == -1; });
        if (unit != e.coeffs.end()) {
            std::string v = unit->first;
            Int c = unit->second;
            e.coeffs.erase(v);
            // c*v + rest = 0  =>  v = -rest/c.
            LinExpr repl = c == 1 ? e.negated() : e;
            substitute_all(sys.eqs, v, repl);
            substitute_all(sys.ges, v, repl);
            if (obj) *obj = obj->substitute(v, repl);
            continue;
        }
        // No unit coefficient: modulus reduction.  Pick the smallest
        // coefficient c_k, set m = |c_k| + 1 and introduce sigma with
        //   sum mod_hat(c_i, m) x_i + mod_hat(k, m) - m sigma = 0,
        // in which x_k has coefficient -sign(c_k).  Solving that for x_k and
        // substituting shrinks every coefficient of the original equality.
        auto smallest = std::min_element(
            e.coeffs.begin(), e.coeffs.end(), [](const auto& a, const auto& b) {
                return abs(a.second) < abs(b.second);
            });
        std::string xk = smallest->first;
        Int ck = smallest->second;
        Int m = abs(ck) + 1;
        std::string sigma = "_o" + std::to_string(budget.fresh++);
        LinExpr reduced;
        for (const auto& [v, c] : e.coeffs) {
            Int h = mod_hat(c, m);
            if (h != 0) reduced.coeffs[v] = h;
        }
        reduced.constant = mod_hat(e.constant, m);
        reduced.coeffs[sigma] = -m;
        // reduced has coefficient -sign(ck) on xk; solve for xk.
        Int cc = reduced.coeffs[xk];
        reduced.coeffs.erase(xk);
        LinExpr repl = cc == 1 ? reduced.negated() : reduced;
        e = e.substitute(xk, repl);
        sys.eqs.push_back(std::move(e));
        substitute_all(sys.eqs, xk, repl);
        substitute_all(sys.ges, xk, repl);
        if (obj) *obj = obj->substitute(xk, repl);
    }
    return true;
}

bool system_feasible(IntLinSystem sys, Budget& budget);

// Complete integer feasibility for a pure inequality system.
bool ineq_feasible(std::vector<LinExpr> ges, Budget& budget) {
    budget.spend();
    // Normalise, drop trivial constraints, deduplicate.
    std::set<std::string> seen;
    std::vector<LinExpr> work;
    for (auto& e : ges) {
        switch (normalise_ge(e)) {
            case Norm::False: return false;
            case Norm::Trivial: continue;
            case Norm::Keep: break;
        }
        if (seen.insert(expr_key(e)).second) work.push_back(std::move(e));
    }

    // Pick the variable with the fewest upper-lower combinations.
    std::map<std::string, std::pair<long long, long long>> occ;  // var -> (#lower, #upper)
    for (const auto& e : work)
        for (const auto& [v, c] : e.coeffs)
            (c > 0 ? occ[v].first : occ[v].second)++;
    if (occ.empty()) return true;
    std::string x;
    long long best = -1;
    for (const auto& [v, lu] : occ) {
        long long cost = lu.first * lu.second;
        if (best < 0 || cost < best) {
            best = cost;
            x = v;
        }
    }

    std::vector<LinExpr> rest, alphas, betas;  // a x <= alpha, b x >= -beta
    std::vector<Int> as, bs;
    for (const auto& e : work) {  // keep `work` intact for the splinter branches
        Int c = e.coeff(x);
        LinExpr side = e;
        if (c != 0) side.coeffs.erase(x);
        if (c == 0) {
            rest.push_back(std::move(side));
        } else if (c < 0) {
            alphas.push_back(std::move(side));
            as.push_back(-c);
        } else {
            betas.push_back(std::move(side));
            bs.push_back(c);
        }
    }
    // Unbounded on one side: x never blocks the rest.
    if (alphas.empty() || betas.empty()) return ineq_feasible(std::move(rest), budget);

    // Real shadow: b alpha + a beta >= 0 for every pair.  Necessary.
    std::vector<LinExpr> real = rest;
    for (size_t i = 0; i < alphas.size(); ++i)
        for (size_t j = 0; j < betas.size(); ++j)
            real.push_back(alphas[i].scaled(bs[j]) + betas[j].scaled(as[i]));
    if (!ineq_feasible(real, budget)) return false;

    // Dark shadow: b alpha + a beta >= (a-1)(b-1).  Sufficient.
    std::vector<LinExpr> dark = rest;
    for (size_t i = 0; i < alphas.size(); ++i)
        for (size_t j = 0; j < betas.size(); ++j) {
            LinExpr d = alphas[i].scaled(bs[j]) + betas[j].scaled(as[i]);
            d.constant -= (as[i] - 1) * (bs[j] - 1);
            dark.push_back(std::move(d));
        }
    if (ineq_feasible(std::move(dark), budget)) return true;

    // Between the shadows: any integer solution keeps b x + beta within a
    // small band above some lower bound.  Branch on the exact offset.
    Int amax = *std::max_element(as.begin(), as.end());
    for (size_t j = 0; j < betas.size(); ++j) {
        Int imax = floor_div(amax * bs[j] - amax - bs[j], amax);
        for (Int i = 0; i <= imax; ++i) {
            IntLinSystem branch;
            branch.ges = work;
            LinExpr eq = betas[j];  // b x + beta = i
            eq.coeffs[x] = bs[j];
            eq.constant -= i;
            branch.eqs.push_back(std::move(eq));
            if (system_feasible(std::move(branch), budget)) return true;
        }
    }
    return false;
}

bool system_feasible(IntLinSystem sys, Budget& budget) {
    if (!eliminate_equalities(sys, nullptr, budget)) return false;
    return ineq_feasible(std::move(sys.ges), budget);
}

// Least upper bound of `obj` over the rational relaxation (tightened by the
// integer normalisation, which only sharpens the bound), or nullopt when
// unbounded above.  Assumes the system is feasible.
std::optional<Rat> relaxation_sup(const std::vector<LinExpr>& ges, const LinExpr& obj,
                                  Budget& budget) {
    // Encode t <= obj and project out everything except t.
    const std::string t = "_t";
    std::vector<LinExpr> work = ges;
    LinExpr bound = obj;
    Int& tc = bound.coeffs[t];
    tc -= 1;
    if (tc == 0) bound.coeffs.erase(t);
    work.push_back(std::move(bound));

    std::set<std::string> vars;
    for (const auto& e : work)
        for (const auto& [v, c] : e.coeffs)
            if (v != t) vars.insert(v);

    for (const auto& x : vars) {
        budget.spend();
        std::vector<LinExpr> next, alphas, betas;
        std::vector<Int> as, bs;
        std::set<std::string> seen;
        for (auto& e : work) {
            switch (normalise_ge(e)) {
                case Norm::False: throw ContractViolation("relaxation of a feasible system became empty");
                case Norm::Trivial: continue;
                case Norm::Keep: break;
            }
            if (!seen.insert(expr_key(e)).second) continue;
            Int c = e.coeff(x);
            if (c == 0) {
                next.push_back(std::move(e));
            } else if (c < 0) {
                e.coeffs.erase(x);
                alphas.push_back(std::move(e));
                as.push_back(-c);
            } else {
                e.coeffs.erase(x);
                betas.push_back(std::move(e));
                bs.push_back(c);
            }
        }
        for (size_t i = 0; i < alphas.size(); ++i)
            for (size_t j = 0; j < betas.size(); ++j)
                next.push_back(alphas[i].scaled(bs[j]) + betas[j].scaled(as[i]));
        work = std::move(next);
    }

    // Only upper bounds on t can remain: t enters with coefficient -1 only
    // and combinations scale by positive factors.
    std::optional<Rat> sup;
    for (const auto& e : work) {
        Int c = e.coeff(t);
        if (c >= 0) continue;  // constant rows are implied by feasibility
        Rat candidate = Rat(e.constant) / Rat(-c);
        if (!sup || candidate < *sup) sup = candidate;
    }
    return sup;
}

}  // namespace

bool lin_feasible(const IntLinSystem& sys) {
    Budget budget;
    return system_feasible(sys, budget);
}

OptResult lin_optimise(const IntLinSystem& sys, const LinExpr& objective, bool maximise) {
    if (!maximise) {
        OptResult r = lin_optimise(sys, objective.negated(), true);
        if (r.status == OptStatus::Optimum) r.value = -r.value;
        return r;
    }
    Budget budget;
    IntLinSystem work = sys;
    LinExpr obj = objective;
    if (!eliminate_equalities(work, &obj, budget)) return OptResult::infeasible();
    if (!ineq_feasible(work.ges, budget)) return OptResult::infeasible();
    if (obj.is_constant()) return OptResult::optimum(obj.constant);

    while (true) {
        budget.spend();
        std::optional<Rat> sup = relaxation_sup(work.ges, obj, budget);
        if (!sup) return OptResult::unbounded();
        Int target = floor_div(numerator(*sup), denominator(*sup));
        IntLinSystem probe;
        probe.ges = work.ges;
        LinExpr hit = obj;  // obj = target
        hit.constant -= target;
        probe.eqs.push_back(std::move(hit));
        if (system_feasible(std::move(probe), budget)) return OptResult::optimum(target);
        // Cut the unattained bound and try again: obj <= target - 1.
        LinExpr cut = obj.negated();
        cut.constant += target - 1;
        work.ges.push_back(std::move(cut));
    }
}

}  // namespace limitlog
