#pragma once

// Redundancy-rule semantics: the closed-form cost condition, the unit
// propagation redundancy condition, witness classification, the blocked
// clause rule over blocking variables, and the flip diagnostic.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

#include "costsr/model.hpp"
#include "costsr/propagate.hpp"

namespace costsr {

// Listed from most specific to most general.
enum class RuleClass { LPR, SPR, PR, SR };

const char* rule_class_name(RuleClass c);

// actual is acceptable when it is at most as general as claimed
inline bool class_within(RuleClass actual, RuleClass claimed) {
    return static_cast<int>(actual) <= static_cast<int>(claimed);
}

// Closed-form evaluation of max over total tau extending the negation of C
// of cost(tau . sigma) - cost(tau): a fixed part V contributed by constant
// images and the domain of the negation, plus one independent max term per
// free variable.
struct CostCheckReport {
    long long fixed_part = 0;
    std::map<Var, long long> free_var_gains; // nonzero terms only
    long long max_delta = 0;
    bool ok = false;
};

CostCheckReport check_cost_condition(const Instance& inst, const Clause& c,
                                     const Substitution& sigma);

// db restricted by the negation of c derives, by unit propagation, every
// clause of (db + c) restricted by sigma.
bool check_redundancy_condition(const Formula& db, const Clause& c,
                                const Substitution& sigma);

// Most specific class the witness belongs to.
RuleClass classify_witness(const Clause& c, const Substitution& sigma);

// Blocked clause on literal l of c: l is not a positive blocking occurrence
// and every resolution partner yields a tautology. Requires l in c.
bool check_cost_bc(const Formula& db, const Clause& c, Lit l, const Instance& inst);

struct FlipResult {
    bool exact = false;
    long long value = 0;
};

// Maximum Hamming distance between tau and tau . sigma over total tau
// extending the negation of c. Exact by enumeration while the number of
// relevant free variables stays within the limit, else the sound upper
// bound given by the number of moved variables.
FlipResult flip_degree(const Clause& c, const Substitution& sigma,
                       const Instance& inst, int exhaustive_limit = 20);

struct StepOutcome {
    bool accepted = false;
    CostCheckReport cost;
    RuleClass actual_class = RuleClass::SR;
    std::string reject_reason;            // set when rejected
    std::optional<Clause> failing_clause; // restricted clause that broke |-1
};

// Full redundant-step check against a formula snapshot.
StepOutcome check_redundant_step(const Formula& db, const Instance& inst,
                                 const Clause& c, const Substitution& sigma,
                                 RuleClass claimed);

// Incremental checker state for a growing clause database: shared watched
// literal engine, distinct-clause index with multiplicities, and the
// bookkeeping the conclusion rules need (which blocking variables have unit
// clauses of each polarity).
class StepChecker {
public:
    explicit StepChecker(const Instance& inst);

    void add_clause(const Clause& c);
    bool root_conflict() const { return engine_.root_conflict(); }

    bool contains(const Clause& c) const;
    size_t db_size() const { return total_; } // with multiplicity
    Formula db_formula() const;

    bool check_inferred(const Clause& c);
    StepOutcome check_redundant(const Clause& c, const Substitution& sigma,
                                RuleClass claimed);

    // distinct blocking variables with a positive / negative unit clause
    const std::vector<char>& positive_units() const { return pos_unit_; }
    const std::vector<char>& negative_units() const { return neg_unit_; }
    int num_positive_blocking_units() const { return npos_; }

    const Instance& instance() const { return inst_; }

private:
    const Instance& inst_;
    Propagator engine_;
    std::vector<Clause> distinct_;
    std::vector<uint32_t> counts_;
    std::unordered_map<Clause, size_t, ClauseHash> index_;
    size_t total_ = 0;
    std::vector<char> pos_unit_, neg_unit_; // by var
    int npos_ = 0;
};

} // namespace costsr
