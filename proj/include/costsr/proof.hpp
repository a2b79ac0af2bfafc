#pragma once

// Proof representation, the calculus checker with its conclusion semantics,
// the MaxSAT-resolution + redundancy checker, the text formats, and the
// pseudo-Boolean export.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "costsr/model.hpp"
#include "costsr/rules.hpp"

namespace costsr {

enum class BoundKind { Geq, Eq };

struct ProofStep {
    enum Kind { Inferred, Redundant, Conclude };
    Kind kind = Inferred;
    Clause clause;          // Inferred, Redundant
    Substitution witness;   // Redundant
    RuleClass claimed = RuleClass::SR;
    BoundKind bound = BoundKind::Geq; // Conclude
    long long k = 0;

    static ProofStep inferred(Clause c);
    static ProofStep redundant(Clause c, Substitution w, RuleClass claimed = RuleClass::SR);
    static ProofStep conclude(BoundKind b, long long k);
};

struct Proof {
    std::vector<ProofStep> steps;
};

struct VerdictStats {
    long long steps = 0;
    long long inferred = 0;
    long long lpr = 0, spr = 0, pr = 0, sr = 0; // accepted redundant steps by actual class
    long long max_width = 0;
    long long max_exact_flip = -1; // -1 when no exact flip was measured
    long long msr_copy = 0, msr_split = 0, msr_merge = 0;

    long long& class_counter(RuleClass c);
};

struct Verdict {
    bool accepted = false;
    std::optional<std::pair<BoundKind, long long>> bound;
    std::optional<long long> failing_step; // 1-based step index
    std::string reason;
    VerdictStats stats;
};

struct CheckOptions {
    // exact flip enumeration cap (free variables) when collecting stats
    int flip_limit = 12;
    bool collect_flip = true;
    // invoked after every accepted redundant step with the database the step
    // was checked against, before the clause joins it
    std::function<void(const Formula& db, const Clause& c, const Substitution& w)>
        on_redundant_accepted;
};

Verdict check_proof(const Instance& inst, const Proof& proof, const CheckOptions& opts = {});

struct MsrStep {
    enum Kind { HardInfer, HardRedundant, CopyToSoft, Split, Merge, ConcludeBot };
    Kind kind = HardInfer;
    Clause clause;
    Substitution witness; // HardRedundant
    RuleClass claimed = RuleClass::SR;
    Var var = 0; // Split, Merge
    long long k = 0;

    static MsrStep hard_infer(Clause c);
    static MsrStep hard_redundant(Clause c, Substitution w, RuleClass claimed = RuleClass::SR);
    static MsrStep copy_to_soft(Clause c);
    static MsrStep split(Clause c, Var v);
    static MsrStep merge(Clause c, Var v);
    static MsrStep conclude_bot(long long k);
};

using MsrProof = std::vector<MsrStep>;

Verdict check_msr_proof(const Instance& inst, const MsrProof& proof,
                        const CheckOptions& opts = {});

// ---------------------------------------------------------------- formats

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, long long line);
    long long line() const { return line_; }

private:
    long long line_;
};

// BCNF: "p bcnf <nvars> <nclauses> <nblocking>", one "b <var>... 0" line,
// then one clause per line; "c" comments anywhere.
Instance parse_instance(std::string_view text);
std::string print_instance(const Instance& inst);

// Proof lines: "<lit>... 0" inferred; "<lit>... 0 w <pairs> 0 [#tag]"
// redundant with pair images t, f or a signed literal; final line
// "conclude geq <k>" or "conclude eq <k>".
Proof parse_proof(std::string_view text);
std::string print_proof(const Proof& proof);

// MSR lines: prefix h / hw / s+ / "sp <var>" / "sm <var>", then the clause;
// final "conclude bot <k>".
MsrProof parse_msr_proof(std::string_view text);
std::string print_msr_proof(const MsrProof& proof);

// plain DIMACS CNF, token-streamed after the "p cnf" header
std::vector<Clause> parse_dimacs_cnf(std::string_view text, int* nvars_out);

// 2022 MaxSAT-Evaluation WCNF: "h <lit>... 0" hard, "<weight> <lit>... 0"
// soft; only unit weights are in scope.
struct Wcnf {
    std::vector<Clause> hard;
    std::vector<Clause> soft;
    int nvars = 0;
};
Wcnf parse_wcnf(std::string_view text);

// ------------------------------------------------- pseudo-Boolean export

// Emits the pseudo-Boolean proof script for an accepted proof: the blocking
// objective, one rup line per inferred step and one redundancy block per
// redundant step carrying the witness and the cost sub-derivation in linear
// form. Throws std::invalid_argument when the proof is not accepted.
std::string export_veripb(const Instance& inst, const Proof& proof);

struct PbLine {
    enum Kind { Rup, Red, Conclude } kind = Rup;
    Clause clause;
    Substitution witness;
    long long cost_constant = 0;                         // c of the linear form
    std::vector<std::pair<Var, long long>> cost_coeffs;  // nonzero c_v terms
    std::vector<std::pair<Var, long long>> cost_var_bounds; // c_v v <= max{c_v,0}
    long long cost_bound = 0;                            // c + sum max{c_v,0}
    BoundKind bound = BoundKind::Geq;
    long long k = 0;
};

struct PbScript {
    std::vector<Var> objective;
    long long num_constraints = 0;
    std::vector<PbLine> lines;
    long long text_lines = 0;
};

PbScript parse_pb_script(std::string_view text);

} // namespace costsr
