#include <doctest.h>

#include <map>

#include "generators.hpp"
#include "limitlog/ints.hpp"
#include "limitlog/parser.hpp"
#include "limitlog/poly.hpp"
#include "limitlog/pseudo.hpp"

using namespace limitlog;

namespace {

// Independent reference evaluator: plain recursion over the term tree.
Int eval_tree(const Term& t, const std::map<std::string, Int>& env) {
    switch (t.kind) {
        case Term::Kind::Constant: return t.value;
        case Term::Kind::Variable: return env.at(t.var);
        case Term::Kind::Add: return eval_tree(t.kids[0], env) + eval_tree(t.kids[1], env);
        case Term::Kind::Sub: return eval_tree(t.kids[0], env) - eval_tree(t.kids[1], env);
        case Term::Kind::Mul: return eval_tree(t.kids[0], env) * eval_tree(t.kids[1], env);
        default: throw ContractViolation("star in eval_tree");
    }
}

}  // namespace

TEST_CASE("floor division satisfies the Euclidean identity") {
    for (std::int64_t a = -25; a <= 25; ++a) {
        for (std::int64_t b = -7; b <= 7; ++b) {
            if (b == 0) continue;
            Int q = floor_div(Int(a), Int(b));
            Int r = floor_mod(Int(a), Int(b));
            CHECK(q * Int(b) + r == Int(a));
            // Floor remainder takes the divisor's sign (or is zero).
            if (b > 0) CHECK((r >= 0 && r < Int(b)));
            else CHECK((r <= 0 && r > Int(b)));
            // floor property: q*b <= a < (q+1)*b for b>0, reversed for b<0.
            if (b > 0) {
                CHECK(q * Int(b) <= Int(a));
                CHECK((q + 1) * Int(b) > Int(a));
            } else {
                CHECK(q * Int(b) >= Int(a));
                CHECK((q + 1) * Int(b) < Int(a));
            }
            // ceil_div is the mirror.
            Int c = ceil_div(Int(a), Int(b));
            CHECK(c == -floor_div(Int(-a), Int(b)));
            if (a % b == 0) CHECK(c == q);
        }
    }
}

TEST_CASE("polynomial normal form agrees with direct tree evaluation") {
    testgen::Rng rng(20240801);
    std::vector<std::string> vars = {"X", "Y", "Z"};
    for (int round = 0; round < 400; ++round) {
        Term t = testgen::random_term(rng, vars, 4);
        std::map<std::string, Int> env;
        std::map<std::string, Int> penv;
        for (const std::string& v : vars) {
            Int val(testgen::uniform(rng, -20, 20));
            env[v] = val;
            penv[v] = val;
        }
        Poly p = Poly::of(t);
        CHECK(p.substitute(penv).eval() == eval_tree(t, env));

        // Canonical rebuild is arithmetic-identical and idempotent.
        Term canon = p.to_term();
        Poly p2 = Poly::of(canon);
        CHECK(p2 == p);
        CHECK(eval_tree(canon, env) == eval_tree(t, env));
        CHECK(simplify_term(canon) == canon);
    }
}

TEST_CASE("polynomial substitution matches evaluation order") {
    Term t = Term::mul(Term::add(Term::variable("X"), Term::constant(2)),
                       Term::sub(Term::variable("Y"), Term::variable("X")));
    Poly p = Poly::of(t);
    Poly px = p.substitute("X", 3);
    CHECK(px.vars() == std::set<std::string>{"Y"});
    CHECK(px.substitute("Y", 7).eval() == Int(5 * 4));
    CHECK(p.substitute({{"X", Int(3)}, {"Y", Int(7)}}).eval() == Int(20));
}

TEST_CASE("star is rejected by the polynomial form but passes simplify") {
    CHECK_THROWS_AS(Poly::of(Term::star()), ContractViolation);
    CHECK(simplify_term(Term::star()).is_star());
}

TEST_CASE("limit value order: strength direction per kind") {
    // max: bigger is stronger; min: smaller is stronger; AllInts on top.
    CHECK(value_leq(PredKind::LimitMax, 3, 5));
    CHECK(!value_leq(PredKind::LimitMax, 5, 3));
    CHECK(value_leq(PredKind::LimitMin, 5, 3));
    CHECK(!value_leq(PredKind::LimitMin, 3, 5));
    CHECK(value_leq(PredKind::LimitMax, 4, 4));
    CHECK(!value_lt(PredKind::LimitMax, 4, 4));

    LimitValue top = LimitValue::all();
    for (PredKind k : {PredKind::LimitMax, PredKind::LimitMin}) {
        for (std::int64_t v = -3; v <= 3; ++v) {
            CHECK(entry_covers(k, top, Int(v)));
            CHECK(entry_geq(k, top, LimitValue::of(v)));
            CHECK(!entry_geq(k, LimitValue::of(v), top));
            CHECK(entry_join(k, LimitValue::of(v), top) == top);
        }
    }
}

TEST_CASE("entry_join is the least upper bound on a small grid") {
    for (PredKind k : {PredKind::LimitMax, PredKind::LimitMin}) {
        for (std::int64_t a = -4; a <= 4; ++a) {
            for (std::int64_t b = -4; b <= 4; ++b) {
                LimitValue j = entry_join(k, LimitValue::of(a), LimitValue::of(b));
                CHECK(entry_geq(k, j, LimitValue::of(a)));
                CHECK(entry_geq(k, j, LimitValue::of(b)));
                // Least: any common upper bound dominates the join.
                for (std::int64_t c = -4; c <= 4; ++c) {
                    LimitValue u = LimitValue::of(c);
                    if (entry_geq(k, u, LimitValue::of(a)) && entry_geq(k, u, LimitValue::of(b)))
                        CHECK(entry_geq(k, u, j));
                }
                // Coverage of the join is the union of coverages.
                for (std::int64_t x = -5; x <= 5; ++x) {
                    bool cov = entry_covers(k, LimitValue::of(a), Int(x)) ||
                               entry_covers(k, LimitValue::of(b), Int(x));
                    CHECK(entry_covers(k, j, Int(x)) == cov);
                }
            }
        }
    }
}

namespace {

Program vocab() {
    return parse_program(
        "max hi/2.\n"
        "min lo/2.\n"
        "edge(a,b).\n"
        "cost(a,3).\n"
        "hi(a,1).\n"
        "lo(b,9).\n");
}

}  // namespace

TEST_CASE("pseudo-interpretation growth and entailment") {
    Program ctx = vocab();
    PseudoInterpretation J;

    CHECK(J.add_object(SlotKey{"edge", {"a", "b"}}));
    CHECK(!J.add_object(SlotKey{"edge", {"a", "b"}}));

    CHECK(J.add_ordinary(SlotKey{"cost", {"a"}}, 3));
    CHECK(!J.add_ordinary(SlotKey{"cost", {"a"}}, 3));
    CHECK(J.add_ordinary(SlotKey{"cost", {"a"}}, 4));

    SlotKey h{"hi", {"a"}};
    CHECK(J.add_limit(PredKind::LimitMax, h, LimitValue::of(1)));
    CHECK(!J.add_limit(PredKind::LimitMax, h, LimitValue::of(0)));  // weaker: no growth
    CHECK(J.add_limit(PredKind::LimitMax, h, LimitValue::of(5)));
    CHECK(J.limit_entry(h)->finite == 5);
    CHECK(J.add_limit(PredKind::LimitMax, h, LimitValue::all()));
    CHECK(!J.add_limit(PredKind::LimitMax, h, LimitValue::of(100)));
    CHECK(J.limit_entry(h)->all_ints);

    SlotKey l{"lo", {"b"}};
    CHECK(J.add_limit(PredKind::LimitMin, l, LimitValue::of(9)));
    CHECK(!J.add_limit(PredKind::LimitMin, l, LimitValue::of(12)));
    CHECK(J.add_limit(PredKind::LimitMin, l, LimitValue::of(2)));
    CHECK(J.limit_entry(l)->finite == 2);

    // Entailment follows the entry order.
    GroundFact q;
    q.pred = "lo";
    q.objects = {"b"};
    q.has_numeric = true;
    q.value = 4;
    CHECK(entails(ctx, J, q));  // min entry 2 covers "4 or less"... 4 >= 2
    q.value = 1;
    CHECK(!entails(ctx, J, q));
    q.all_ints = true;
    CHECK(!entails(ctx, J, q));
    GroundFact star;
    star.pred = "hi";
    star.objects = {"a"};
    star.has_numeric = true;
    star.all_ints = true;
    CHECK(entails(ctx, J, star));
}

TEST_CASE("satisfaction of ground literals under the closed world") {
    Program ctx = vocab();
    PseudoInterpretation J;
    J.add_object(SlotKey{"edge", {"a", "b"}});
    J.add_ordinary(SlotKey{"cost", {"a"}}, 3);
    J.add_limit(PredKind::LimitMax, SlotKey{"hi", {"a"}}, LimitValue::of(4));

    Atom e;
    e.pred = "edge";
    e.objects = {ObjTerm::constant("a"), ObjTerm::constant("b")};
    CHECK(satisfies(ctx, J, Literal::pos(e)));
    CHECK(!satisfies(ctx, J, Literal::neg(e)));

    Atom miss = e;
    miss.objects[1] = ObjTerm::constant("c");
    CHECK(!satisfies(ctx, J, Literal::pos(miss)));
    CHECK(satisfies(ctx, J, Literal::neg(miss)));

    Atom hi;
    hi.pred = "hi";
    hi.objects = {ObjTerm::constant("a")};
    hi.numeric = Term::constant(4);
    CHECK(satisfies(ctx, J, Literal::pos(hi)));
    hi.numeric = Term::constant(5);
    CHECK(!satisfies(ctx, J, Literal::pos(hi)));
    CHECK(satisfies(ctx, J, Literal::neg(hi)));
    hi.numeric = Term::constant(-7);
    CHECK(satisfies(ctx, J, Literal::pos(hi)));

    // Comparisons evaluate arithmetically.
    CHECK(satisfies(ctx, J, Literal::compare({Comparison::Op::Lt, Term::constant(2),
                                              Term::constant(3)})));
    CHECK(!satisfies(ctx, J, Literal::compare({Comparison::Op::Lt, Term::constant(3),
                                               Term::constant(3)})));
    CHECK(satisfies(ctx, J, Literal::compare({Comparison::Op::Le, Term::constant(3),
                                              Term::constant(3)})));

    // Non-ground literals are a contract violation.
    Atom open = e;
    open.objects[0] = ObjTerm::var("X");
    CHECK_THROWS_AS(satisfies(ctx, J, Literal::pos(open)), ContractViolation);
}

TEST_CASE("exact least upper bounds") {
    Program ctx = vocab();
    PseudoInterpretation J;
    SlotKey h{"hi", {"a"}};
    CHECK(!satisfies_lub(ctx, J, h, 4));  // no entry, no lub
    J.add_limit(PredKind::LimitMax, h, LimitValue::of(4));
    CHECK(satisfies_lub(ctx, J, h, 4));
    CHECK(!satisfies_lub(ctx, J, h, 3));
    CHECK(!satisfies_lub(ctx, J, h, 5));
    J.add_limit(PredKind::LimitMax, h, LimitValue::all());
    CHECK(!satisfies_lub(ctx, J, h, 4));  // unbounded slot has no finite lub
}

TEST_CASE("subsumption respects the strength order") {
    Program ctx = vocab();
    PseudoInterpretation a, b;
    a.add_limit(PredKind::LimitMax, SlotKey{"hi", {"a"}}, LimitValue::of(3));
    b.add_limit(PredKind::LimitMax, SlotKey{"hi", {"a"}}, LimitValue::of(5));
    CHECK(a.subsumed_by(ctx, b));
    CHECK(!b.subsumed_by(ctx, a));

    b.add_object(SlotKey{"edge", {"a", "b"}});
    CHECK(a.subsumed_by(ctx, b));
    a.add_object(SlotKey{"edge", {"b", "a"}});
    CHECK(!a.subsumed_by(ctx, b));

    PseudoInterpretation c, d;
    c.add_limit(PredKind::LimitMin, SlotKey{"lo", {"b"}}, LimitValue::of(5));
    d.add_limit(PredKind::LimitMin, SlotKey{"lo", {"b"}}, LimitValue::of(3));
    CHECK(c.subsumed_by(ctx, d));
    CHECK(!d.subsumed_by(ctx, c));
    d.limit_entries[SlotKey{"lo", {"b"}}] = LimitValue::all();
    CHECK(c.subsumed_by(ctx, d));
}

TEST_CASE("fact round trip through the interpretation") {
    Program ctx = vocab();
    PseudoInterpretation J;
    for (const GroundFact& f : facts_of(ctx)) CHECK(J.add_fact(ctx, f));
    for (const GroundFact& f : facts_of(ctx)) CHECK(entails(ctx, J, f));

    std::vector<GroundFact> round = to_facts(J);
    PseudoInterpretation J2;
    for (const GroundFact& f : round) J2.add_fact(ctx, f);
    CHECK(J == J2);
}
