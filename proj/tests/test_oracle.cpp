#include "doctest.h"

#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "generators.hpp"
#include "tc_corpus.hpp"
#include "limitlog/analysis.hpp"
#include "limitlog/ast.hpp"
#include "limitlog/engine.hpp"
#include "limitlog/errors.hpp"
#include "limitlog/oracle.hpp"
#include "limitlog/parser.hpp"
#include "limitlog/transform.hpp"

using namespace limitlog;
using testcorpus::AgreementStats;
using testcorpus::CorpusOptions;
using testcorpus::TcInstance;
using testgen::Rng;

namespace {

std::string joined(const std::vector<std::string>& xs) {
    std::string out;
    for (const std::string& x : xs) {
        if (!out.empty()) out += "; ";
        out += x;
    }
    return out;
}

EngineConfig general_mode() {
    EngineConfig cfg;
    cfg.mode = EngineMode::GeneralBounded;
    return cfg;
}

}  // namespace

TEST_CASE("reachability distances fill the window up to the bound") {
    Program p = parse_program(
        "min d/3.\n"
        "e(a, b, 1).\n"
        "d(X, Y, M) :- e(X, Y, M).\n"
        "d(X, Z, M + N) :- d(X, Y, M), e(Y, Z, N).\n");
    BoundedUniverse u = brute_force_materialise(p, Dataset{}, 8);

    SlotKey dab{"d", {"a", "b"}};
    REQUIRE(u.numeric_facts.count(dab) == 1);
    const std::set<Int>& vals = u.numeric_facts.at(dab);
    CHECK(vals.size() == 8);
    CHECK(*vals.begin() == 1);
    CHECK(*vals.rbegin() == 8);
    CHECK(u.clipped.empty());
    CHECK(!u.saturated(dab));

    CHECK(oracle_entails(p, u, parse_query("d(a, b, 3)", p)) == OracleVerdict::True);
    CHECK(oracle_entails(p, u, parse_query("d(a, b, 1)", p)) == OracleVerdict::True);
    CHECK(oracle_entails(p, u, parse_query("d(a, b, 0)", p)) == OracleVerdict::False);
    CHECK(oracle_entails(p, u, parse_query("d(a, b, 9)", p)) == OracleVerdict::OutOfWindow);
    CHECK(oracle_entails(p, u, parse_query("d(a, b, *)", p)) == OracleVerdict::False);
    CHECK(oracle_entails(p, u, parse_query("d(b, a, 1)", p)) == OracleVerdict::False);
    CHECK(oracle_entails(p, u, parse_query("e(a, b, 1)", p)) == OracleVerdict::True);
    CHECK(oracle_entails(p, u, parse_query("e(a, b, 2)", p)) == OracleVerdict::False);
}

TEST_CASE("distances compose along a two-edge chain") {
    Program p = parse_program(
        "min d/3.\n"
        "e(a, b, 1).\n"
        "e(b, c, 2).\n"
        "d(X, Y, M) :- e(X, Y, M).\n"
        "d(X, Z, M + N) :- d(X, Y, M), e(Y, Z, N).\n");
    BoundedUniverse u = brute_force_materialise(p, Dataset{}, 8);
    SlotKey dac{"d", {"a", "c"}};
    REQUIRE(u.numeric_facts.count(dac) == 1);
    CHECK(*u.numeric_facts.at(dac).begin() == 3);
    CHECK(oracle_entails(p, u, parse_query("d(a, c, 3)", p)) == OracleVerdict::True);
    CHECK(oracle_entails(p, u, parse_query("d(a, c, 2)", p)) == OracleVerdict::False);
    CHECK(u.clipped.empty());
}

TEST_CASE("an empty program yields an empty store") {
    Program p = parse_program("min d/3.\n");
    BoundedUniverse u = brute_force_materialise(p, Dataset{}, 8);
    CHECK(u.object_facts.empty());
    CHECK(u.numeric_facts.empty());
    CHECK(u.star_slots.empty());
    CHECK(u.clipped.empty());
}

TEST_CASE("a star fact saturates its slot with certainty") {
    Program p = parse_program("max q/2.\nq(a, *).\n");
    BoundedUniverse u = brute_force_materialise(p, Dataset{}, 8);
    SlotKey qa{"q", {"a"}};
    CHECK(u.star_slots.count(qa) == 1);
    CHECK(u.saturated(qa));
    CHECK(oracle_entails(p, u, parse_query("q(a, *)", p)) == OracleVerdict::True);
    CHECK(oracle_entails(p, u, parse_query("q(a, 5)", p)) == OracleVerdict::True);
    // beyond the window, but a star fact is a syntactic certainty
    CHECK(oracle_entails(p, u, parse_query("q(a, 100)", p)) == OracleVerdict::True);
    CHECK(oracle_entails(p, u, parse_query("q(b, 5)", p)) == OracleVerdict::False);
}

TEST_CASE("window preconditions are enforced") {
    Program p = parse_program("max q/1.\nq(3).\n");
    CHECK_THROWS_AS(brute_force_materialise(p, Dataset{}, 0), ContractViolation);

    Program big = parse_program("max q/1.\nq(9).\n");
    CHECK_THROWS_AS(brute_force_materialise(big, Dataset{}, 8), ContractViolation);

    Program cyc = parse_program(
        "max a/1.\nmax b/1.\n"
        "a(1) :- not b(0).\n"
        "b(1) :- not a(0).\n");
    CHECK_THROWS_AS(brute_force_materialise(cyc, Dataset{}, 8), ContractViolation);
}

TEST_CASE("query shapes are checked against the vocabulary") {
    Program p = parse_program("max q/2.\ne(a, b, 1).\nq(a, 1).\n");
    BoundedUniverse u = brute_force_materialise(p, Dataset{}, 8);
    GroundFact missing_object{"q", {}, true, false, 1};
    CHECK_THROWS_AS(oracle_entails(p, u, missing_object), ContractViolation);
    GroundFact star_over_ordinary{"e", {"a", "b"}, true, true, 0};
    CHECK_THROWS_AS(oracle_entails(p, u, star_over_ordinary), ContractViolation);
    GroundFact no_numeric{"q", {"a"}, false, false, 0};
    CHECK_THROWS_AS(oracle_entails(p, u, no_numeric), ContractViolation);
}

TEST_CASE("the default window bound comes from the environment") {
    const char* old = std::getenv("LIMITLOG_ORACLE_BOUND");
    std::string saved = old ? old : "";
    bool had = old != nullptr;

    unsetenv("LIMITLOG_ORACLE_BOUND");
    CHECK(default_oracle_bound() == 64);
    setenv("LIMITLOG_ORACLE_BOUND", "32", 1);
    CHECK(default_oracle_bound() == 32);
    setenv("LIMITLOG_ORACLE_BOUND", "zebra", 1);
    CHECK_THROWS_AS(default_oracle_bound(), ContractViolation);
    setenv("LIMITLOG_ORACLE_BOUND", "0", 1);
    CHECK_THROWS_AS(default_oracle_bound(), ContractViolation);
    setenv("LIMITLOG_ORACLE_BOUND", "-3", 1);
    CHECK_THROWS_AS(default_oracle_bound(), ContractViolation);

    if (had)
        setenv("LIMITLOG_ORACLE_BOUND", saved.c_str(), 1);
    else
        unsetenv("LIMITLOG_ORACLE_BOUND");
}

TEST_CASE("runaway growth saturates the window and clips itself and its probers") {
    Program p = parse_program(
        "max u/1.\n"
        "max v/1.\n"
        "u(1).\n"
        "u(M * 4) :- u(M).\n"
        "v(M - 60) :- u(M).\n");
    MaterialisationResult m = materialise_stratified(p, Dataset{});
    SlotKey us{"u", {}}, vs{"v", {}};
    REQUIRE(m.J.limit_entry(us) != nullptr);
    CHECK(m.J.limit_entry(us)->all_ints);
    REQUIRE(m.J.limit_entry(vs) != nullptr);
    CHECK(m.J.limit_entry(vs)->all_ints);
    CHECK(m.trace.exact);

    BoundedUniverse u = brute_force_materialise(p, Dataset{}, 64);
    CHECK(u.is_clipped(us));
    CHECK(u.saturated(us));
    CHECK(u.is_clipped(vs));
    CHECK(oracle_entails(p, u, parse_query("u(*)", p)) == OracleVerdict::OutOfWindow);
    CHECK(oracle_entails(p, u, parse_query("v(*)", p)) == OracleVerdict::OutOfWindow);
    CHECK(oracle_entails(p, u, parse_query("u(5)", p)) == OracleVerdict::OutOfWindow);

    AgreementStats st;
    testcorpus::compare_engine_oracle(p, m, u, testcorpus::query_set(p, m.J, u, 48), st);
    CHECK(st.mismatches == 0);
    CHECK(st.skipped_window > 0);
}

TEST_CASE("a frontier reached only at the window edge is reported out of window") {
    Program p = parse_program(
        "max v/1.\n"
        "min w/1.\n"
        "max h/1.\n"
        "v(-10).\n"
        "w(-63).\n"
        "h(M + N) :- v(M), w(N).\n");
    MaterialisationResult m = materialise_stratified(p, Dataset{}, general_mode());
    SlotKey hs{"h", {}};
    REQUIRE(m.J.limit_entry(hs) != nullptr);
    CHECK(m.J.limit_entry(hs)->all_ints);
    CHECK(m.trace.exact);

    BoundedUniverse u = brute_force_materialise(p, Dataset{}, 64);
    CHECK(!u.is_clipped(SlotKey{"v", {}}));
    CHECK(!u.is_clipped(SlotKey{"w", {}}));
    CHECK(u.is_clipped(hs));
    CHECK(oracle_entails(p, u, parse_query("h(*)", p)) == OracleVerdict::OutOfWindow);

    AgreementStats st;
    testcorpus::compare_engine_oracle(p, m, u, testcorpus::query_set(p, m.J, u, 48), st);
    CHECK(st.mismatches == 0);
}

TEST_CASE("ground negation past the frontier answers from the closure") {
    Program p = parse_program(
        "max u/1.\n"
        "min z/1.\n"
        "u(1).\n"
        "u(M + 7) :- u(M), M <= 30.\n"
        "z(5) :- not u(50).\n");
    MaterialisationResult m = materialise_stratified(p, Dataset{}, general_mode());
    BoundedUniverse u = brute_force_materialise(p, Dataset{}, 64);

    SlotKey us{"u", {}}, zs{"z", {}};
    CHECK(!u.is_clipped(us));
    CHECK(!u.is_clipped(zs));
    REQUIRE(u.numeric_facts.count(us) == 1);
    CHECK(*u.numeric_facts.at(us).rbegin() == 37);
    CHECK(oracle_entails(p, u, parse_query("u(50)", p)) == OracleVerdict::False);
    CHECK(oracle_entails(p, u, parse_query("z(5)", p)) == OracleVerdict::True);
    CHECK(oracle_entails(p, u, parse_query("z(4)", p)) == OracleVerdict::False);
    CHECK(query(p, m, parse_query("z(5)", p)) == QueryVerdict::Entailed);

    AgreementStats st;
    testcorpus::compare_engine_oracle(p, m, u, testcorpus::query_set(p, m.J, u, 48), st);
    CHECK(st.mismatches == 0);
}

TEST_CASE("bounded stores stay inside the window and keep limit slots contiguous") {
    Rng rng(4242);
    for (int i = 0; i < 30; ++i) {
        TcInstance inst = testcorpus::random_tc_instance(rng);
        BoundedUniverse u = brute_force_materialise(inst.program, inst.dataset, 64);
        for (const auto& [s, vals] : u.numeric_facts) {
            if (vals.empty()) continue;
            CHECK(*vals.begin() >= -u.bound);
            CHECK(*vals.rbegin() <= u.bound);
            PredKind k = inst.program.kind_of(s.pred);
            if (!is_limit(k)) continue;
            Int span = *vals.rbegin() - *vals.begin() + 1;
            CHECK(Int(vals.size()) == span);
            bool anchored = k == PredKind::LimitMax ? *vals.begin() == -u.bound
                                                    : *vals.rbegin() == u.bound;
            CHECK(anchored);
        }
    }
}

TEST_CASE("engine and bounded store agree wherever the window speaks") {
    Rng rng(20240817);
    AgreementStats st;
    for (int i = 0; i < 50; ++i) {
        TcInstance inst = testcorpus::random_tc_instance(rng);
        MaterialisationResult m = materialise_stratified(inst.program, inst.dataset);
        CHECK(m.trace.exact);
        BoundedUniverse u = brute_force_materialise(inst.program, inst.dataset, 64);
        std::vector<GroundFact> qs = testcorpus::query_set(inst.program, m.J, u, 48);
        testcorpus::compare_engine_oracle(inst.program, m, u, qs, st);
    }
    std::string report = joined(st.examples);
    INFO(report);
    CHECK(st.mismatches == 0);
    CHECK(st.skipped_unknown == 0);  // exact traces never answer Unknown
    CHECK(st.compared > 2000);
}

TEST_CASE("smaller windows embed into larger ones on positive programs") {
    Rng rng(777);
    CorpusOptions opts;
    opts.allow_negation = false;
    long long checked = 0, missing = 0;
    std::string first_bad;
    for (int i = 0; i < 25; ++i) {
        TcInstance inst = testcorpus::random_tc_instance(rng, opts);
        BoundedUniverse small = brute_force_materialise(inst.program, inst.dataset, 32);
        BoundedUniverse large = brute_force_materialise(inst.program, inst.dataset, 64);
        for (const SlotKey& s : small.object_facts)
            if (!large.has_object(s)) {
                ++missing;
                if (first_bad.empty()) first_bad = s.pred;
            }
        for (const auto& [s, vals] : small.numeric_facts)
            for (const Int& v : vals) {
                ++checked;
                if (!large.has_numeric(s, v)) {
                    ++missing;
                    if (first_bad.empty()) first_bad = s.pred + " at " + v.str();
                }
            }
    }
    INFO(first_bad);
    CHECK(missing == 0);
    CHECK(checked > 500);
}

TEST_CASE("semi-grounding preserves window verdicts") {
    Rng rng(90210);
    AgreementStats st;
    for (int i = 0; i < 15; ++i) {
        TcInstance inst = testcorpus::random_tc_instance(rng);
        Program combined = merge_programs(inst.program, inst.dataset);
        BoundedUniverse ua = brute_force_materialise(inst.program, inst.dataset, 64);
        Program sg = semi_ground(inst.program, inst.dataset, true).as_program();
        BoundedUniverse ub = brute_force_materialise(sg, Dataset{}, 64);
        std::vector<GroundFact> qs = testcorpus::probe_queries(combined, {&ua, &ub}, nullptr, 64);
        testcorpus::compare_oracles(combined, ua, ub, qs, st);
    }
    std::string report = joined(st.examples);
    INFO(report);
    CHECK(st.mismatches == 0);
    CHECK(st.compared > 500);
}

TEST_CASE("per-stratum reducts preserve verdicts and the rewrite passes the literal check") {
    Rng rng(60201);
    AgreementStats st;
    int layers_checked = 0;
    for (int i = 0; i < 12; ++i) {
        TcInstance inst = testcorpus::random_tc_instance(rng);
        MaterialisationResult m = materialise_stratified(inst.program, inst.dataset);
        Program combined = merge_programs(inst.program, inst.dataset);
        for (const Program& layer : testcorpus::stratum_layers(combined, m)) {
            Int maxc = 0;
            for (const Int& c : integer_constants(layer)) {
                Int a = c < 0 ? -c : c;
                if (a > maxc) maxc = a;
            }
            Int lb = maxc > 64 ? maxc : Int(64);
            if (lb > 96) continue;  // interpretation outgrew a checkable window

            SemiGroundProgram sg = semi_ground(layer, true);
            SemiGroundProgram red = reduct(sg);
            BoundedUniverse ua = brute_force_materialise(sg.as_program(), Dataset{}, lb);
            BoundedUniverse ub = brute_force_materialise(red.as_program(), Dataset{}, lb);
            std::vector<GroundFact> qs = testcorpus::probe_queries(layer, {&ua, &ub}, nullptr, lb);
            testcorpus::compare_oracles(layer, ua, ub, qs, st);

            SemiGroundProgram tcred = tc_rewrite_reduct(sg);
            std::vector<std::string> diags;
            bool ref_ok = check_type_consistent_reference(tcred.as_program(), &diags);
            std::string first_diag = diags.empty() ? std::string() : diags.front();
            CAPTURE(first_diag);
            CHECK(ref_ok);
            ++layers_checked;
        }
    }
    std::string report = joined(st.examples);
    INFO(report);
    CHECK(st.mismatches == 0);
    CHECK(layers_checked > 10);
}
