#include "costsr/rules.hpp"

#include <algorithm>
#include <sstream>

namespace costsr {

const char* rule_class_name(RuleClass c) {
    switch (c) {
    case RuleClass::LPR: return "lpr";
    case RuleClass::SPR: return "spr";
    case RuleClass::PR: return "pr";
    case RuleClass::SR: return "sr";
    }
    return "?";
}

CostCheckReport check_cost_condition(const Instance& inst, const Clause& c,
                                     const Substitution& sigma) {
    if (c.tautological())
        throw std::invalid_argument("cost condition is undefined for a tautological clause");

    // Occurrence counts over L = <sigma(b_1) ... sigma(b_m)>; R is the
    // blocking sequence itself, so a(R,v,1) = [v blocking], a(R,v,0) = 0.
    std::map<Var, std::pair<long long, long long>> occ; // var -> (#neg, #pos) in L
    long long const_true = 0;
    for (Var b : inst.blocking()) {
        Substitution::Image img = sigma.image_of_var(b);
        if (img.kind == Substitution::Image::True) {
            ++const_true;
        } else if (img.kind == Substitution::Image::Literal) {
            auto& e = occ[img.lit.var()];
            (img.lit.positive() ? e.second : e.first) += 1;
        }
    }

    std::map<Var, bool> neg_c; // variable -> value the negation of c assigns
    for (const Lit& l : c) neg_c[l.var()] = !l.positive();

    CostCheckReport out;
    out.fixed_part = const_true;
    for (const auto& [v, k] : neg_c) {
        long long in_l = 0;
        auto it = occ.find(v);
        if (it != occ.end()) in_l = k ? it->second.second : it->second.first;
        long long in_r = (k && inst.is_blocking(v)) ? 1 : 0;
        out.fixed_part += in_l - in_r;
    }

    out.max_delta = out.fixed_part;
    for (const auto& [v, e] : occ) {
        if (neg_c.count(v)) continue;
        long long gain0 = e.first;                                   // assign v = 0
        long long gain1 = e.second - (inst.is_blocking(v) ? 1 : 0);  // assign v = 1
        long long gain = std::max(gain0, gain1);
        if (gain != 0) out.free_var_gains[v] = gain;
        out.max_delta += gain;
    }
    out.ok = out.max_delta <= 0;
    return out;
}

RuleClass classify_witness(const Clause& c, const Substitution& sigma) {
    if (!sigma.is_assignment()) return RuleClass::SR;
    std::vector<Var> dom = sigma.const_domain();
    std::vector<Var> cvars;
    cvars.reserve(c.size());
    for (const Lit& l : c) cvars.push_back(l.var());
    // canonical clause order keeps cvars sorted; tautologies repeat a var
    cvars.erase(std::unique(cvars.begin(), cvars.end()), cvars.end());
    if (dom != cvars) return RuleClass::PR;
    int diff = 0;
    for (const Lit& l : c) {
        bool neg_c_value = !l.positive();
        if (sigma.image_of_var(l.var()).const_value() != neg_c_value) ++diff;
    }
    return diff == 1 ? RuleClass::LPR : RuleClass::SPR;
}

namespace {

bool union_tautological(const Clause& a, const Clause& b) {
    if (a.tautological() || b.tautological()) return true;
    for (const Lit& l : b)
        if (a.contains(l.negated())) return true;
    return false;
}

std::vector<std::pair<Var, bool>> falsifying_assumptions(const Clause& c) {
    std::vector<std::pair<Var, bool>> out;
    out.reserve(c.size());
    for (const Lit& l : c) out.emplace_back(l.var(), !l.positive());
    return out;
}

// nullopt when the redundancy condition holds; otherwise the first clause of
// (db + c) restricted by sigma that the restricted database fails to derive.
// The engine must already hold exactly the clauses listed in distinct.
std::optional<Clause> redundancy_failure(
    Propagator& engine, const std::vector<Clause>& distinct,
    const std::unordered_map<Clause, size_t, ClauseHash>& index, const Clause& c,
    const Substitution& sigma) {
    Substitution neg_c = negation_of(c);
    bool lhs_conflict = engine.push_assignment(falsifying_assumptions(c));
    std::optional<Clause> failure;
    if (!lhs_conflict) {
        auto rhs_ok = [&](const Clause& e) {
            std::optional<Clause> img = restrict_clause(e, sigma);
            if (!img) return true; // satisfied by the witness
            if (index.count(*img)) {
                // literally present in the left side unless the negation of c
                // satisfies it (then that copy is gone from the restriction)
                bool sat = false;
                for (const Lit& l : *img)
                    if (neg_c.apply(l).kind == Substitution::Image::True) { sat = true; break; }
                if (!sat) return true;
            }
            if (engine.derives(*img)) return true;
            failure = *img;
            return false;
        };
        for (const Clause& e : distinct)
            if (!rhs_ok(e)) break;
        if (!failure) rhs_ok(c);
    }
    engine.pop_frame();
    return failure;
}

} // namespace

bool check_redundancy_condition(const Formula& db, const Clause& c,
                                const Substitution& sigma) {
    if (c.tautological())
        throw std::invalid_argument("redundancy condition is undefined for a tautological clause");
    Var n = std::max(db.max_var(), Var(0));
    for (const Lit& l : c) n = std::max(n, l.var());
    for (const auto& [v, img] : sigma.entries()) {
        n = std::max(n, v);
        if (img.kind == Substitution::Image::Literal) n = std::max(n, img.lit.var());
    }
    Propagator engine(n);
    std::vector<Clause> distinct;
    std::unordered_map<Clause, size_t, ClauseHash> index;
    for (const Formula::Entry& e : db) {
        engine.add_clause(e.clause);
        index.emplace(e.clause, distinct.size());
        distinct.push_back(e.clause);
    }
    return !redundancy_failure(engine, distinct, index, c, sigma).has_value();
}

bool check_cost_bc(const Formula& db, const Clause& c, Lit l, const Instance& inst) {
    if (!c.contains(l))
        throw std::invalid_argument("blocked-clause literal must occur in the clause");
    if (l.positive() && inst.is_blocking(l.var())) return false;
    Clause rest = c.without(l);
    Lit neg = l.negated();
    for (const Formula::Entry& e : db) {
        if (!e.clause.contains(neg)) continue;
        if (!union_tautological(rest, e.clause.without(neg))) return false;
    }
    return true;
}

FlipResult flip_degree(const Clause& c, const Substitution& sigma,
                       const Instance& inst, int exhaustive_limit) {
    (void)inst;
    if (c.tautological())
        throw std::invalid_argument("flip degree is undefined for a tautological clause");

    std::map<Var, bool> fixed; // the negation of c
    for (const Lit& l : c) fixed[l.var()] = !l.positive();

    std::vector<Var> moved = sigma.moved_vars();
    std::vector<Var> free_vars;
    auto note_free = [&](Var v) {
        if (!fixed.count(v)) free_vars.push_back(v);
    };
    for (Var x : moved) {
        note_free(x);
        Substitution::Image img = sigma.image_of_var(x);
        if (img.kind == Substitution::Image::Literal) note_free(img.lit.var());
    }
    std::sort(free_vars.begin(), free_vars.end());
    free_vars.erase(std::unique(free_vars.begin(), free_vars.end()), free_vars.end());

    if (static_cast<int>(free_vars.size()) > exhaustive_limit)
        return FlipResult{false, static_cast<long long>(moved.size())};

    long long best = 0;
    uint64_t space = 1ull << free_vars.size();
    for (uint64_t bits = 0; bits < space; ++bits) {
        auto value_of = [&](Var v) {
            auto it = fixed.find(v);
            if (it != fixed.end()) return it->second;
            size_t i = static_cast<size_t>(
                std::lower_bound(free_vars.begin(), free_vars.end(), v) - free_vars.begin());
            return ((bits >> i) & 1u) != 0;
        };
        long long hd = 0;
        for (Var x : moved) {
            Substitution::Image img = sigma.image_of_var(x);
            bool image_value = img.kind == Substitution::Image::Literal
                                   ? value_of(img.lit.var()) == img.lit.positive()
                                   : img.const_value();
            if (value_of(x) != image_value) ++hd;
        }
        best = std::max(best, hd);
    }
    return FlipResult{true, best};
}

StepChecker::StepChecker(const Instance& inst)
    : inst_(inst), engine_(inst.nvars()),
      pos_unit_(static_cast<size_t>(inst.nvars()) + 1, 0),
      neg_unit_(static_cast<size_t>(inst.nvars()) + 1, 0) {}

void StepChecker::add_clause(const Clause& c) {
    ++total_;
    auto it = index_.find(c);
    if (it != index_.end()) {
        ++counts_[it->second];
        return;
    }
    index_.emplace(c, distinct_.size());
    distinct_.push_back(c);
    counts_.push_back(1);
    engine_.add_clause(c);
    if (c.size() == 1) {
        Lit l = *c.begin();
        if (inst_.is_blocking(l.var())) {
            if (l.positive()) {
                if (!pos_unit_[static_cast<size_t>(l.var())]) ++npos_;
                pos_unit_[static_cast<size_t>(l.var())] = 1;
            } else {
                neg_unit_[static_cast<size_t>(l.var())] = 1;
            }
        }
    }
}

bool StepChecker::contains(const Clause& c) const { return index_.count(c) > 0; }

Formula StepChecker::db_formula() const {
    Formula out;
    for (size_t i = 0; i < distinct_.size(); ++i) out.add(distinct_[i], counts_[i]);
    return out;
}

bool StepChecker::check_inferred(const Clause& c) {
    if (engine_.root_conflict()) return true;
    return engine_.derives(c);
}

StepOutcome StepChecker::check_redundant(const Clause& c, const Substitution& sigma,
                                         RuleClass claimed) {
    StepOutcome out;
    if (c.tautological()) {
        out.reject_reason = "tautological clause cannot be the subject of a redundancy step";
        return out;
    }
    for (const Lit& l : c) {
        if (l.var() > inst_.nvars()) {
            out.reject_reason = "clause introduces a new variable";
            return out;
        }
    }
    for (const auto& [v, img] : sigma.entries()) {
        if (v > inst_.nvars() ||
            (img.kind == Substitution::Image::Literal && img.lit.var() > inst_.nvars())) {
            out.reject_reason = "witness mentions a new variable";
            return out;
        }
    }

    out.cost = check_cost_condition(inst_, c, sigma);
    if (!out.cost.ok) {
        std::ostringstream os;
        os << "cost condition failed (max_delta=" << out.cost.max_delta << ")";
        out.reject_reason = os.str();
        return out;
    }

    out.actual_class = classify_witness(c, sigma);
    if (!class_within(out.actual_class, claimed)) {
        std::ostringstream os;
        os << "witness is " << rule_class_name(out.actual_class) << " but the step claims "
           << rule_class_name(claimed);
        out.reject_reason = os.str();
        return out;
    }

    if (!engine_.root_conflict()) {
        std::optional<Clause> failure =
            redundancy_failure(engine_, distinct_, index_, c, sigma);
        if (failure) {
            std::ostringstream os;
            os << "redundancy condition failed on restricted clause \"" << failure->to_dimacs()
               << "\"";
            out.reject_reason = os.str();
            out.failing_clause = failure;
            return out;
        }
    }

    out.accepted = true;
    return out;
}

StepOutcome check_redundant_step(const Formula& db, const Instance& inst, const Clause& c,
                                 const Substitution& sigma, RuleClass claimed) {
    StepChecker checker(inst);
    for (const Formula::Entry& e : db) checker.add_clause(e.clause);
    return checker.check_redundant(c, sigma, claimed);
}

} // namespace costsr
