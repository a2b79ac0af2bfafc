#include <sstream>
#include <unordered_map>

#include "costsr/proof.hpp"

namespace costsr {

long long& VerdictStats::class_counter(RuleClass c) {
    switch (c) {
    case RuleClass::LPR: return lpr;
    case RuleClass::SPR: return spr;
    case RuleClass::PR: return pr;
    case RuleClass::SR: return sr;
    }
    return sr;
}

namespace {

Verdict rejected(long long step, std::string reason) {
    Verdict v;
    v.accepted = false;
    v.failing_step = step;
    v.reason = std::move(reason);
    return v;
}

bool clause_in_range(const Clause& c, int nvars) {
    for (const Lit& l : c)
        if (l.var() > nvars) return false;
    return true;
}

// Feasibility of the conclusion per the soundness theorem: the positive units
// must cover every blocking variable that lacks a negative unit, there must
// be at least k of them, and at most k variables may lack negative units.
std::string conclusion_problem(const StepChecker& checker, BoundKind bound, long long k) {
    const Instance& inst = checker.instance();
    long long npos = checker.num_positive_blocking_units();
    if (npos < k) {
        std::ostringstream os;
        os << "conclusion needs " << k << " distinct positive blocking units, found " << npos;
        return os.str();
    }
    if (bound == BoundKind::Geq) return {};

    long long without_neg = 0;
    for (Var b : inst.blocking()) {
        if (checker.negative_units()[static_cast<size_t>(b)]) continue;
        ++without_neg;
        if (!checker.positive_units()[static_cast<size_t>(b)]) {
            std::ostringstream os;
            os << "conclusion eq " << k << ": blocking variable " << b
               << " has neither a positive nor a negative unit";
            return os.str();
        }
    }
    if (without_neg > k) {
        std::ostringstream os;
        os << "conclusion eq " << k << ": " << without_neg
           << " blocking variables lack negative units";
        return os.str();
    }
    return {};
}

void note_flip(VerdictStats& stats, const CheckOptions& opts, const Instance& inst,
               const Clause& c, const Substitution& w) {
    if (!opts.collect_flip) return;
    FlipResult f = flip_degree(c, w, inst, opts.flip_limit);
    if (f.exact) stats.max_exact_flip = std::max(stats.max_exact_flip, f.value);
}

} // namespace

Verdict check_proof(const Instance& inst, const Proof& proof, const CheckOptions& opts) {
    StepChecker checker(inst);
    for (const Formula::Entry& e : inst.hard())
        for (uint32_t i = 0; i < e.count; ++i) checker.add_clause(e.clause);
    if (checker.root_conflict()) {
        Verdict v = rejected(0, "hard clauses propagate to conflict; cost is undefined");
        return v;
    }

    Verdict v;
    v.stats.steps = static_cast<long long>(proof.steps.size());
    bool concluded = false;
    for (size_t i = 0; i < proof.steps.size(); ++i) {
        const ProofStep& s = proof.steps[i];
        long long idx = static_cast<long long>(i) + 1;
        if (concluded) return rejected(idx, "steps after the conclusion");
        switch (s.kind) {
        case ProofStep::Inferred: {
            if (!clause_in_range(s.clause, inst.nvars()))
                return rejected(idx, "clause introduces a new variable");
            if (!checker.check_inferred(s.clause))
                return rejected(idx, "inferred clause is not derivable by unit propagation");
            checker.add_clause(s.clause);
            ++v.stats.inferred;
            v.stats.max_width =
                std::max(v.stats.max_width, static_cast<long long>(s.clause.size()));
            break;
        }
        case ProofStep::Redundant: {
            StepOutcome out = checker.check_redundant(s.clause, s.witness, s.claimed);
            if (!out.accepted) return rejected(idx, out.reject_reason);
            if (opts.on_redundant_accepted)
                opts.on_redundant_accepted(checker.db_formula(), s.clause, s.witness);
            checker.add_clause(s.clause);
            ++v.stats.class_counter(out.actual_class);
            v.stats.max_width =
                std::max(v.stats.max_width, static_cast<long long>(s.clause.size()));
            note_flip(v.stats, opts, inst, s.clause, s.witness);
            break;
        }
        case ProofStep::Conclude: {
            std::string problem = conclusion_problem(checker, s.bound, s.k);
            if (!problem.empty()) return rejected(idx, problem);
            v.bound = std::make_pair(s.bound, s.k);
            concluded = true;
            break;
        }
        }
    }
    v.accepted = true;
    return v;
}

Verdict check_msr_proof(const Instance& inst, const MsrProof& proof, const CheckOptions& opts) {
    StepChecker hard(inst);
    for (const Formula::Entry& e : inst.hard())
        for (uint32_t i = 0; i < e.count; ++i) hard.add_clause(e.clause);
    if (hard.root_conflict())
        return rejected(0, "hard clauses propagate to conflict; cost is undefined");

    std::unordered_map<Clause, long long, ClauseHash> soft;
    for (Var b : inst.blocking()) soft[Clause({Lit(b, false)})] += 1;

    auto soft_take = [&](const Clause& c) {
        auto it = soft.find(c);
        if (it == soft.end() || it->second == 0) return false;
        if (--it->second == 0) soft.erase(it);
        return true;
    };

    Verdict v;
    v.stats.steps = static_cast<long long>(proof.size());
    bool concluded = false;
    for (size_t i = 0; i < proof.size(); ++i) {
        const MsrStep& s = proof[i];
        long long idx = static_cast<long long>(i) + 1;
        if (concluded) return rejected(idx, "steps after the conclusion");
        switch (s.kind) {
        case MsrStep::HardInfer: {
            if (!clause_in_range(s.clause, inst.nvars()))
                return rejected(idx, "clause introduces a new variable");
            if (!hard.check_inferred(s.clause))
                return rejected(idx, "inferred clause is not derivable by unit propagation");
            hard.add_clause(s.clause);
            ++v.stats.inferred;
            v.stats.max_width =
                std::max(v.stats.max_width, static_cast<long long>(s.clause.size()));
            break;
        }
        case MsrStep::HardRedundant: {
            StepOutcome out = hard.check_redundant(s.clause, s.witness, s.claimed);
            if (!out.accepted) return rejected(idx, out.reject_reason);
            if (opts.on_redundant_accepted)
                opts.on_redundant_accepted(hard.db_formula(), s.clause, s.witness);
            hard.add_clause(s.clause);
            ++v.stats.class_counter(out.actual_class);
            v.stats.max_width =
                std::max(v.stats.max_width, static_cast<long long>(s.clause.size()));
            note_flip(v.stats, opts, inst, s.clause, s.witness);
            break;
        }
        case MsrStep::CopyToSoft: {
            if (!hard.contains(s.clause))
                return rejected(idx, "clause to copy is not in the hard database");
            soft[s.clause] += 1;
            ++v.stats.msr_copy;
            break;
        }
        case MsrStep::Split: {
            if (s.var < 1 || s.var > inst.nvars())
                return rejected(idx, "split variable out of range");
            if (s.clause.contains_var(s.var))
                return rejected(idx, "split variable already occurs in the clause");
            if (!soft_take(s.clause))
                return rejected(idx, "soft clause to split is missing");
            std::vector<Lit> pos = s.clause.lits(), neg = s.clause.lits();
            pos.push_back(Lit(s.var, true));
            neg.push_back(Lit(s.var, false));
            soft[Clause(std::move(pos))] += 1;
            soft[Clause(std::move(neg))] += 1;
            ++v.stats.msr_split;
            break;
        }
        case MsrStep::Merge: {
            if (s.var < 1 || s.var > inst.nvars())
                return rejected(idx, "merge variable out of range");
            if (s.clause.contains_var(s.var))
                return rejected(idx, "merge variable already occurs in the clause");
            std::vector<Lit> pos = s.clause.lits(), neg = s.clause.lits();
            pos.push_back(Lit(s.var, true));
            neg.push_back(Lit(s.var, false));
            Clause cpos(std::move(pos)), cneg(std::move(neg));
            if (!soft_take(cpos)) return rejected(idx, "merge premise is missing");
            if (!soft_take(cneg)) {
                soft[cpos] += 1; // roll back for a clean failure state
                return rejected(idx, "merge premise is missing");
            }
            soft[s.clause] += 1;
            ++v.stats.msr_merge;
            break;
        }
        case MsrStep::ConcludeBot: {
            auto it = soft.find(Clause());
            long long bots = it == soft.end() ? 0 : it->second;
            if (bots < s.k) {
                std::ostringstream os;
                os << "conclusion needs " << s.k << " empty soft clauses, found " << bots;
                return rejected(idx, os.str());
            }
            v.bound = std::make_pair(BoundKind::Geq, s.k);
            concluded = true;
            break;
        }
        }
    }
    v.accepted = true;
    return v;
}

} // namespace costsr
