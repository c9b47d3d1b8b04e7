#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "limitlog/ast.hpp"
#include "limitlog/linear.hpp"
#include "limitlog/pseudo.hpp"

namespace limitlog {

// ---------------------------------------------------------------------------
// The evaluator: per-rule optimal-value computation over pseudo-
// interpretations, the positive-program fixpoint with divergence detection,
// and the stratified driver on top.
// ---------------------------------------------------------------------------

enum class EngineMode {
    TcExact,         // requires a type-consistent program; results are exact
    GeneralBounded,  // any stratified limit-linear program; may promote heuristically
};

struct EngineConfig {
    EngineMode mode = EngineMode::TcExact;
    // A limit slot whose entry strictly improves more than this many times is
    // promoted to AllInts.  Empty means automatic: in tc-exact mode the
    // slot-count x rule-count + 1 bound that certifies divergence; in
    // general-bounded mode a magnitude cutoff against magnitude_cap instead
    // of a count.
    std::optional<Int> divergence_improvement_threshold;
    long long max_iterations = 100000;
    // General-bounded automatic promotion: a growing entry whose magnitude
    // exceeds this is assumed divergent (and the result flagged heuristic).
    Int magnitude_cap = 4096;
};

// The linear view of one positive semi-ground rule against a fixed
// pseudo-interpretation: what opt_rule optimises.
struct RuleConstraintSystem {
    bool applicable = true;           // every ground body atom holds in J
    std::set<std::string> variables;  // numeric variables of the rule
    IntLinSystem constraints;         // limit-entry bounds and comparisons
    bool head_is_limit = false;
    bool head_all_ints = false;       // head value is '*' (fact rules only)
    LinExpr objective;                // head numeric term, when head_is_limit
    bool maximise = false;            // direction induced by the head's kind
};

RuleConstraintSystem build_rule_constraints(const Program& ctx, const Rule& r,
                                            const PseudoInterpretation& J);

// Result of evaluating one rule: nothing, a ground fact, or the optimal
// derivable entry for a limit slot.
struct Derivation {
    enum class Kind { NotApplicable, Fact, Limit };
    Kind kind = Kind::NotApplicable;
    GroundFact fact;   // Kind::Fact
    SlotKey slot;      // Kind::Limit
    LimitValue value;  // Kind::Limit
};

// Evaluates one positive semi-ground limit-linear rule against J: decides
// body satisfiability and, for a limit head A(a, s), computes the exact
// integer optimum of s (maximum for a max predicate, minimum for min) over
// the rule's constraint system -- AllInts when the objective is unbounded in
// the optimisation direction.  Rules whose variables each come from a single
// bare-variable limit literal and obey the head/comparison sign discipline
// are solved by direct substitution of per-variable extremes; everything
// else goes through the integer optimiser.
Derivation opt_rule(const Program& ctx, const Rule& r, const PseudoInterpretation& J);

// One application of the immediate-consequence operator: the least
// pseudo-interpretation above J that contains every opt_rule derivation of
// the given positive rules, evaluated against the frozen J.  Limit entries
// merge by strength, AllInts absorbing.
PseudoInterpretation step(const Program& ctx, const std::vector<Rule>& rules,
                          const PseudoInterpretation& J);
inline PseudoInterpretation step(const Program& positive, const PseudoInterpretation& J) {
    return step(positive, positive.rules, J);
}

// A promotion of a limit slot to AllInts, with its reason.  `certified` is
// true when the improvement-count bound soundly implies divergence (tc-exact
// mode with a threshold at least the automatic one); uncertified promotions
// make the result heuristic.
struct DivergenceDecision {
    SlotKey slot;
    Int improvements;
    bool certified = false;
    std::string justification;
};

struct StratumTrace {
    int stratum = 1;
    Int threshold;             // resolved improvement threshold (0 = count not used)
    Program positive_program;  // the reduced positive program this stratum ran
    // Partial pseudo-interpretations: the chain from empty to the stratum's
    // fixpoint, one entry per growing iteration.
    std::vector<PseudoInterpretation> partials;
    std::map<SlotKey, Int> improvement_counts;
    std::vector<DivergenceDecision> promotions;
    long long iterations = 0;
    bool reached_fixpoint = false;
};

struct EvaluationTrace {
    EngineMode mode = EngineMode::TcExact;
    std::vector<StratumTrace> strata;
    // Exact: fixpoints everywhere and no uncertified promotion.
    bool exact = true;
    // Some stratum stopped at max_iterations before its fixpoint.
    bool incomplete = false;
    // Slots whose entries may deviate from the true pseudo-materialisation
    // (uncertified promotions, cut-short strata, and everything derived from
    // them).
    std::set<SlotKey> tainted;
};

struct MaterialisationResult {
    PseudoInterpretation J;
    EvaluationTrace trace;
};

// Pseudo-materialisation of a positive semi-ground limit-linear program:
// iterate step to the fixpoint, counting per-slot improvements and promoting
// runaway slots to AllInts per the config.  Stopping at max_iterations
// yields an explicit incomplete result, never a silently wrong one.
MaterialisationResult pseudo_materialise_positive(const Program& positive,
                                                  const EngineConfig& cfg = {});

// Stratified driver: per stratum, the stratum's rules plus the facts of the
// current interpretation are semi-grounded, the reduct (tc-exact mode: the
// type-consistency-preserving rewrite) eliminates negation, and the positive
// fixpoint extends J.  An explicit stratification may be supplied (it is
// checked for validity); by default the minimal one is computed.
MaterialisationResult materialise_stratified(
    const Program& p, const Dataset& d, const EngineConfig& cfg = {},
    const std::map<std::string, int>* stratification_override = nullptr);

enum class QueryVerdict { Entailed, NotEntailed, Unknown };

// Fact entailment against a finished materialisation.  `Unknown` only when
// the trace is non-exact and the answer depends on a tainted slot.
QueryVerdict query(const Program& ctx, const MaterialisationResult& m, const GroundFact& phi);
QueryVerdict query(const Program& p, const Dataset& d, const GroundFact& phi,
                   const EngineConfig& cfg = {});

struct LubAnswer {
    enum class Kind { Finite, AllInts, NoValue, Unknown };
    Kind kind = Kind::NoValue;
    Int value;  // meaningful iff kind == Finite
    bool operator==(const LubAnswer&) const = default;
};

// Least upper bound held for a limit slot: its finite entry, AllInts, or
// NoValue when the slot is empty.  Throws ContractViolation on a non-limit
// predicate.
LubAnswer lub_query(const Program& ctx, const MaterialisationResult& m, const SlotKey& slot);
LubAnswer lub_query(const Program& p, const Dataset& d, const SlotKey& slot,
                    const EngineConfig& cfg = {});

}  // namespace limitlog
