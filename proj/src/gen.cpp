#include "costsr/gen.hpp"

#include <algorithm>
#include <unordered_set>

#include "costsr/oracle.hpp"
#include "costsr/propagate.hpp"

namespace costsr {

std::pair<Instance, BlockifyMapping> blockify(const Formula& hard, const Formula& soft) {
    BlockifyMapping mapping;
    mapping.original_nvars = std::max(hard.max_var(), soft.max_var());

    Formula out;
    for (const Formula::Entry& e : hard) out.add(e.clause, e.count);

    std::vector<Var> blocking;
    Var next = mapping.original_nvars;
    for (const Formula::Entry& e : soft) {
        for (uint32_t i = 0; i < e.count; ++i) {
            Var b = ++next;
            std::vector<Lit> lits = e.clause.lits();
            lits.push_back(Lit(b, true));
            out.add(Clause(std::move(lits)));
            blocking.push_back(b);
            mapping.soft_to_blocking.push_back(b);
        }
    }
    mapping.new_nvars = next;
    return {Instance(std::move(out), std::move(blocking), next), std::move(mapping)};
}

namespace {

// variable layout of the blocking pigeonhole family
struct BphpLayout {
    int m, n;

    BphpLayout(int m_, int n_) : m(m_), n(n_) {
        if (m <= n || n < 1)
            throw std::invalid_argument("bphp requires more pigeons than holes and n >= 1");
    }

    Var p(int i, int j) const { return (i - 1) * n + j; }
    Var b(int i) const { return m * n + i; }
    Var bb(int i, int k, int j) const {
        if (i > k) std::swap(i, k);
        // pairs (i,k) with i<k in lexicographic order, n holes each
        int pair_index = (i - 1) * m - (i - 1) * i / 2 + (k - i - 1);
        return m * n + m + pair_index * n + j;
    }
    int nvars() const { return m * n + m + m * (m - 1) / 2 * n; }

    Clause totality(int i, int holes) const {
        std::vector<Lit> lits;
        for (int j = 1; j <= holes; ++j) lits.push_back(Lit(p(i, j), true));
        lits.push_back(Lit(b(i), true));
        return Clause(std::move(lits));
    }
};

Clause unit(Lit l) { return Clause({l}); }

} // namespace

Instance gen_bphp(int m, int n) {
    BphpLayout L(m, n);
    Formula hard;
    for (int i = 1; i <= m; ++i) hard.add(L.totality(i, n));
    for (int i = 1; i < m; ++i)
        for (int k = i + 1; k <= m; ++k)
            for (int j = 1; j <= n; ++j)
                hard.add(Clause({Lit(L.p(i, j), false), Lit(L.p(k, j), false),
                                 Lit(L.bb(i, k, j), true)}));
    std::vector<Var> blocking;
    for (int i = 1; i <= m; ++i) blocking.push_back(L.b(i));
    for (int i = 1; i < m; ++i)
        for (int k = i + 1; k <= m; ++k)
            for (int j = 1; j <= n; ++j) blocking.push_back(L.bb(i, k, j));
    return Instance(std::move(hard), std::move(blocking), L.nvars());
}

Proof gen_bphp_proof(int m, int n) {
    BphpLayout L(m, n);
    Instance inst = gen_bphp(m, n);
    Proof proof;

    auto emit = [&](ProofStep step) { proof.steps.push_back(std::move(step)); };

    // The symmetry steps assert the restriction-inclusion condition against
    // the cleaned-up database of the current round (the clauses the original
    // argument keeps after dropping subsumed material); the checker verifies
    // the full database by unit propagation, which the cleaned view implies.
    auto cleaned_view = [&](int mm, int nn) {
        Formula f;
        for (int i = 1; i <= mm; ++i) f.add(L.totality(i, nn));
        for (int i = 1; i <= mm; ++i)
            for (int j = 1; j <= nn; ++j)
                f.add(Clause({Lit(L.p(i, j), false), Lit(L.b(i), false)}));
        for (int i = 1; i < mm; ++i)
            for (int k = i + 1; k <= mm; ++k)
                for (int j = 1; j <= nn; ++j)
                    f.add(Clause({Lit(L.p(i, j), false), Lit(L.p(k, j), false)}));
        return f;
    };

    // make every b_i an extension variable for its totality clause
    Formula db = inst.hard();
    for (int i = 1; i <= m; ++i) {
        std::vector<Lit> body;
        for (int j = 1; j <= n; ++j) body.push_back(Lit(L.p(i, j), true));
        for (ProofStep& s :
             derive_extension_clauses(db, inst, L.b(i), Clause(std::move(body)))) {
            db.add(s.clause);
            emit(std::move(s));
        }
    }

    // enforce injectivity: collision blockers all go to zero, paying instead
    // with the larger pigeon of the pair
    for (int i = 1; i < m; ++i)
        for (int k = i + 1; k <= m; ++k)
            for (int j = 1; j <= n; ++j) {
                Substitution w;
                w.set_constant(L.bb(i, k, j), false);
                w.set_constant(L.b(k), true);
                for (int jj = 1; jj <= n; ++jj) w.set_constant(L.p(k, jj), false);
                emit(ProofStep::redundant(unit(Lit(L.bb(i, k, j), false)), std::move(w),
                                          RuleClass::PR));
            }
    for (int i = 1; i < m; ++i)
        for (int k = i + 1; k <= m; ++k)
            for (int j = 1; j <= n; ++j)
                emit(ProofStep::inferred(
                    Clause({Lit(L.p(i, j), false), Lit(L.p(k, j), false)})));

    // peel one pigeon and one hole per round
    for (int mm = m, nn = n; nn >= 1; --mm, --nn) {
        Formula cleaned = cleaned_view(mm, nn);
        // if a pigeon flies, pigeon mm does
        for (int i = 1; i < mm; ++i) {
            Clause c({Lit(L.b(mm), false), Lit(L.b(i), true)});
            PermutationWitness pi;
            pi.swap(L.b(mm), L.b(i));
            for (int j = 1; j <= n; ++j) pi.swap(L.p(mm, j), L.p(i, j));
            ProofStep step = make_symmetry_step(cleaned, inst, c, pi);
            cleaned.add(c);
            emit(std::move(step));
        }
        // if pigeon mm flies somewhere, it flies to hole nn
        for (int j = 1; j < nn; ++j) {
            Clause c({Lit(L.p(mm, j), false), Lit(L.p(mm, nn), true)});
            PermutationWitness pi;
            for (int i = 1; i <= m; ++i) pi.swap(L.p(i, j), L.p(i, nn));
            ProofStep step = make_symmetry_step(cleaned, inst, c, pi);
            cleaned.add(c);
            emit(std::move(step));
        }
        // hole nn is now reserved for pigeon mm
        for (int k = 1; k < mm; ++k)
            emit(ProofStep::inferred(unit(Lit(L.p(k, nn), false))));
        // assign pigeon mm to hole nn
        {
            Substitution w;
            w.set_constant(L.p(mm, nn), true);
            w.set_constant(L.b(mm), false);
            emit(ProofStep::redundant(unit(Lit(L.p(mm, nn), true)), std::move(w),
                                      RuleClass::PR));
        }
        emit(ProofStep::inferred(unit(Lit(L.b(mm), false))));
        // pigeon mm sits nowhere else
        for (int j = 1; j < nn; ++j) {
            Substitution w;
            w.set_constant(L.p(mm, nn), true);
            for (int jj = 1; jj < nn; ++jj) w.set_constant(L.p(mm, jj), false);
            w.set_constant(L.b(mm), false);
            emit(ProofStep::redundant(unit(Lit(L.p(mm, j), false)), std::move(w),
                                      RuleClass::PR));
        }
        // totality clauses of the reduced formula
        for (int i = 1; i < mm; ++i) emit(ProofStep::inferred(L.totality(i, nn - 1)));
    }

    proof.steps.push_back(ProofStep::conclude(BoundKind::Eq, m - n));
    return proof;
}

ProofStep make_symmetry_step(const Formula& db, const Instance& inst, const Clause& c,
                             const PermutationWitness& pi) {
    // bijectivity on the support
    {
        std::vector<Var> keys, vals;
        for (const auto& [k, v] : pi.perm) {
            if (k < 1 || v < 1) throw std::invalid_argument("permutation variable out of range");
            keys.push_back(k);
            vals.push_back(v);
        }
        std::sort(vals.begin(), vals.end());
        if (keys != vals) throw std::invalid_argument("witness map is not a permutation");
    }
    for (Var b : inst.blocking())
        if (!inst.is_blocking(pi.apply(b)))
            throw std::invalid_argument("permutation moves a blocking variable outside the set");

    Substitution pi_sub;
    for (const auto& [k, v] : pi.perm) pi_sub.set_literal(k, Lit(v, true));
    Substitution sigma = compose(negation_of(c), pi_sub);

    if (restrict_clause(c, sigma).has_value())
        throw std::invalid_argument("composed substitution does not satisfy the clause");

    Formula lhs = restrict_formula(db, negation_of(c));
    Formula rhs = restrict_formula(db, sigma);
    std::unordered_set<Clause, ClauseHash> lhs_set;
    for (const Formula::Entry& e : lhs) lhs_set.insert(e.clause);
    for (const Formula::Entry& e : rhs)
        if (!lhs_set.count(e.clause))
            throw std::invalid_argument(
                "restriction inclusion violated on clause \"" + e.clause.to_dimacs() + "\"");

    return ProofStep::redundant(c, std::move(sigma), RuleClass::SR);
}

std::vector<ProofStep> derive_negative_units(const Instance& inst,
                                             const TotalAssignment& alpha_opt,
                                             const std::vector<Var>& positives) {
    if (alpha_opt.nvars() != inst.nvars())
        throw std::invalid_argument("witness is not total over the instance");
    if (inst.cost_of(alpha_opt) != static_cast<long long>(positives.size()))
        throw std::invalid_argument("witness cost does not match the positive unit count");
    for (Var p : positives) {
        if (!inst.is_blocking(p)) throw std::invalid_argument("positive unit is not blocking");
        if (!alpha_opt.value(p))
            throw std::invalid_argument("witness falsifies a derived positive unit");
    }

    Substitution sigma = alpha_opt.to_substitution();
    std::vector<Lit> prefix;
    for (Var p : positives) prefix.push_back(Lit(p, false));

    std::vector<ProofStep> out;
    for (Var j : inst.blocking()) {
        if (std::find(positives.begin(), positives.end(), j) != positives.end()) continue;
        std::vector<Lit> lits = prefix;
        lits.push_back(Lit(j, false));
        out.push_back(ProofStep::redundant(Clause(std::move(lits)), sigma, RuleClass::PR));
        out.push_back(ProofStep::inferred(unit(Lit(j, false))));
    }
    return out;
}

std::vector<ProofStep> derive_extension_clauses(const Formula& db, const Instance& inst, Var b,
                                                const Clause& c) {
    if (!inst.is_blocking(b)) throw std::invalid_argument("extension variable must be blocking");
    if (c.contains_var(b))
        throw std::invalid_argument("clause body must not mention the blocking variable");
    std::vector<Lit> lits = c.lits();
    lits.push_back(Lit(b, true));
    Clause with_b(std::move(lits));
    if (db.count(with_b) != 1)
        throw std::invalid_argument("clause plus blocking variable must occur exactly once");
    for (const Formula::Entry& e : db)
        if (e.clause != with_b && e.clause.contains_var(b))
            throw std::invalid_argument("blocking variable occurs outside its clause");

    std::vector<ProofStep> out;
    for (const Lit& l : c) {
        Substitution w;
        w.set_constant(l.var(), l.positive());
        w.set_constant(b, false);
        out.push_back(ProofStep::redundant(Clause({l.negated(), Lit(b, false)}), std::move(w),
                                           RuleClass::LPR));
    }
    return out;
}

namespace {

// Post-order DPLL emitter: each closed node contributes the negation of its
// decision literals as a clause that is RUP against everything emitted so
// far. Returns false when a model survives (the formula is satisfiable
// under the current decisions).
bool emit_dpll_tree(Propagator& engine, int nvars, std::vector<Lit>& decisions,
                    const std::function<void(Clause)>& emit) {
    std::vector<std::pair<Var, bool>> assumps;
    assumps.reserve(decisions.size());
    for (const Lit& d : decisions) assumps.emplace_back(d.var(), d.positive());
    bool conflict = engine.push_assignment(assumps);
    Var branch = 0;
    if (!conflict) {
        for (Var v = 1; v <= nvars; ++v) {
            if (!engine.value_is_assigned(v)) {
                branch = v;
                break;
            }
        }
    }
    engine.pop_frame();

    if (conflict) {
        std::vector<Lit> lits;
        for (const Lit& d : decisions) lits.push_back(d.negated());
        Clause learned(std::move(lits));
        engine.add_clause(learned);
        emit(std::move(learned));
        return true;
    }
    if (branch == 0) return false; // total model, nothing to refute

    for (int phase = 0; phase < 2; ++phase) {
        decisions.push_back(Lit(branch, phase == 1));
        bool closed = emit_dpll_tree(engine, nvars, decisions, emit);
        decisions.pop_back();
        if (!closed) return false;
    }
    std::vector<Lit> lits;
    for (const Lit& d : decisions) lits.push_back(d.negated());
    Clause learned(std::move(lits));
    engine.add_clause(learned);
    emit(std::move(learned));
    return true;
}

} // namespace

Proof certify_by_enumeration(const Instance& inst, int limit) {
    if (inst.nvars() > limit)
        throw ResourceLimitError("certification limit exceeded");
    int n = inst.nvars();

    // every satisfying assignment, in ascending bit order
    std::vector<TotalAssignment> models;
    long long best = -1;
    size_t best_idx = 0;
    for (uint64_t bits = 0; bits < (1ull << n); ++bits) {
        TotalAssignment a = TotalAssignment::from_bits(bits, n);
        if (!a.satisfies(inst.hard())) continue;
        long long cost = inst.cost_of(a);
        if (best < 0 || cost < best) {
            best = cost;
            best_idx = models.size();
        }
        models.push_back(std::move(a));
    }
    if (best < 0) throw std::invalid_argument("hard clauses are unsatisfiable");

    const TotalAssignment& alpha_opt = models[best_idx];
    Substitution sigma_opt = alpha_opt.to_substitution();

    Proof proof;
    Propagator engine(n);
    for (const Formula::Entry& e : inst.hard()) engine.add_clause(e.clause);

    // forbid every other satisfying assignment
    for (size_t i = 0; i < models.size(); ++i) {
        if (i == best_idx) continue;
        std::vector<Lit> lits;
        for (Var v = 1; v <= n; ++v) lits.push_back(Lit(v, !models[i].value(v)));
        Clause barred(std::move(lits));
        engine.add_clause(barred);
        proof.steps.push_back(ProofStep::redundant(std::move(barred), sigma_opt,
                                                   RuleClass::SPR));
    }

    // derive the optimum literal by literal; intermediate tree clauses are
    // plain inferences
    for (Var v = 1; v <= n; ++v) {
        std::vector<Lit> decisions{Lit(v, !alpha_opt.value(v))};
        bool closed = emit_dpll_tree(engine, n, decisions, [&](Clause c) {
            proof.steps.push_back(ProofStep::inferred(std::move(c)));
        });
        if (!closed)
            throw std::logic_error("optimum literal not derivable after enumeration");
    }

    proof.steps.push_back(ProofStep::conclude(BoundKind::Eq, best));
    return proof;
}

Instance gen_hamming_family(int n) {
    if (n < 1) throw std::invalid_argument("the family needs n >= 1");
    auto x = [&](int i) { return Var(1 + i); };          // i in 0..n
    auto y = [&](int i) { return Var(n + 2 + i); };      // i in 0..n
    auto b = [&](int i) { return Var(2 * n + 2 + i); };  // i in 1..2n

    Formula hard;
    hard.add(Clause({Lit(x(0), true), Lit(y(0), true)}));
    hard.add(Clause({Lit(x(0), false), Lit(y(0), false)}));
    for (int i = 1; i <= n; ++i) {
        hard.add(Clause({Lit(x(0), false), Lit(x(i), true)}));
        hard.add(Clause({Lit(x(0), true), Lit(x(i), false)}));
    }
    for (int i = 1; i <= n; ++i) {
        hard.add(Clause({Lit(y(0), false), Lit(y(i), true)}));
        hard.add(Clause({Lit(y(0), true), Lit(y(i), false)}));
    }
    for (int i = 1; i <= n; ++i) hard.add(Clause({Lit(x(i), false), Lit(b(i), true)}));
    for (int i = 1; i <= n; ++i) hard.add(Clause({Lit(y(i), false), Lit(b(i + n), true)}));

    std::vector<Var> blocking;
    for (int i = 1; i <= 2 * n; ++i) blocking.push_back(b(i));
    return Instance(std::move(hard), std::move(blocking), 4 * n + 2);
}

std::vector<Clause> gen_php_cnf(int m, int n, int* nvars_out) {
    BphpLayout L(m, n);
    std::vector<Clause> out;
    for (int i = 1; i <= m; ++i) {
        std::vector<Lit> lits;
        for (int j = 1; j <= n; ++j) lits.push_back(Lit(L.p(i, j), true));
        out.push_back(Clause(std::move(lits)));
    }
    for (int i = 1; i < m; ++i)
        for (int k = i + 1; k <= m; ++k)
            for (int j = 1; j <= n; ++j)
                out.push_back(Clause({Lit(L.p(i, j), false), Lit(L.p(k, j), false)}));
    if (nvars_out) *nvars_out = m * n;
    return out;
}

Proof rup_refutation(const std::vector<Clause>& clauses, int nvars) {
    Propagator engine(nvars);
    for (const Clause& c : clauses) engine.add_clause(c);
    Proof proof;
    if (engine.root_conflict()) {
        proof.steps.push_back(ProofStep::inferred(Clause()));
        return proof;
    }
    std::vector<Lit> decisions;
    bool closed = emit_dpll_tree(engine, nvars, decisions, [&](Clause c) {
        proof.steps.push_back(ProofStep::inferred(std::move(c)));
    });
    if (!closed) throw std::invalid_argument("formula is satisfiable, no refutation exists");
    return proof;
}

TotalAssignment default_lift_witness(const std::vector<Clause>& f, int f_nvars) {
    if (f.empty()) throw std::invalid_argument("empty formula has no lifting witness");
    Formula without_last;
    for (size_t i = 0; i + 1 < f.size(); ++i) without_last.add(f[i]);
    std::optional<TotalAssignment> model = sat_solve(without_last, f_nvars);
    if (!model)
        throw std::invalid_argument(
            "formula is not minimally unsatisfiable: it stays unsatisfiable without its "
            "last clause");
    int m = static_cast<int>(f.size());
    TotalAssignment out(f_nvars + m);
    for (Var v = 1; v <= f_nvars; ++v) out.set(v, model->value(v));
    out.set(f_nvars + m, true);
    return out;
}

std::pair<Instance, Proof> lift_min_unsat(const std::vector<Clause>& f, int f_nvars,
                                          const Proof& refutation,
                                          const TotalAssignment& alpha_opt) {
    for (const Clause& c : f)
        if (!c.empty() && c.lits().back().var() > f_nvars)
            throw std::invalid_argument("formula variable beyond the declared universe");

    // The refutation must stand on its own over f. This is the plain
    // satisfiability game: a database that already propagates to conflict is
    // fine here, every step holds vacuously then.
    {
        Formula base;
        for (const Clause& c : f) base.add(c);
        Instance plain(std::move(base), {}, f_nvars);
        bool derived_bottom = false;
        for (const ProofStep& s : refutation.steps) {
            if (s.kind == ProofStep::Conclude)
                throw std::invalid_argument("refutation must not carry a bound conclusion");
            if (s.clause.empty()) derived_bottom = true;
        }
        if (!derived_bottom)
            throw std::invalid_argument("refutation does not derive the empty clause");
        StepChecker checker(plain);
        for (const Formula::Entry& e : plain.hard())
            for (uint32_t i = 0; i < e.count; ++i) checker.add_clause(e.clause);
        long long idx = 0;
        for (const ProofStep& s : refutation.steps) {
            ++idx;
            if (s.kind == ProofStep::Inferred) {
                if (!checker.check_inferred(s.clause))
                    throw std::invalid_argument("refutation step " + std::to_string(idx) +
                                                " is not derivable by unit propagation");
            } else {
                StepOutcome out = checker.check_redundant(s.clause, s.witness, s.claimed);
                if (!out.accepted)
                    throw std::invalid_argument("refutation step " + std::to_string(idx) +
                                                " rejected: " + out.reject_reason);
            }
            checker.add_clause(s.clause);
        }
    }

    int m = static_cast<int>(f.size());
    int nvars = f_nvars + m;
    Formula hard;
    std::vector<Var> blocking;
    std::vector<Lit> block_lits;
    for (int i = 1; i <= m; ++i) {
        Var b = f_nvars + i;
        blocking.push_back(b);
        block_lits.push_back(Lit(b, true));
        std::vector<Lit> lits = f[static_cast<size_t>(i - 1)].lits();
        lits.push_back(Lit(b, true));
        hard.add(Clause(std::move(lits)));
    }
    Instance inst(std::move(hard), blocking, nvars);

    if (alpha_opt.nvars() != nvars)
        throw std::invalid_argument("lifting witness is not total over the blockified instance");
    if (!alpha_opt.satisfies(inst.hard()))
        throw std::invalid_argument("lifting witness does not satisfy the blockified instance");
    if (inst.cost_of(alpha_opt) != 1 || !alpha_opt.value(blocking.back()))
        throw std::invalid_argument("lifting witness must pay exactly the last blocking variable");

    Proof out;
    for (const ProofStep& s : refutation.steps) {
        std::vector<Lit> lits = s.clause.lits();
        lits.insert(lits.end(), block_lits.begin(), block_lits.end());
        Clause lifted(std::move(lits));
        if (s.kind == ProofStep::Inferred) {
            out.steps.push_back(ProofStep::inferred(std::move(lifted)));
        } else {
            Substitution w = s.witness;
            for (Var b : blocking) w.set_constant(b, false);
            RuleClass claimed = class_within(s.claimed, RuleClass::PR) ? RuleClass::PR
                                                                       : s.claimed;
            out.steps.push_back(ProofStep::redundant(std::move(lifted), std::move(w), claimed));
        }
    }

    Substitution sigma_opt = alpha_opt.to_substitution();
    for (int i = 1; i < m; ++i)
        out.steps.push_back(ProofStep::redundant(
            Clause({Lit(blocking[static_cast<size_t>(i - 1)], false), block_lits.back()}),
            sigma_opt, RuleClass::PR));
    out.steps.push_back(ProofStep::inferred(unit(block_lits.back())));

    for (ProofStep& s : derive_negative_units(inst, alpha_opt, {blocking.back()}))
        out.steps.push_back(std::move(s));
    out.steps.push_back(ProofStep::conclude(BoundKind::Eq, 1));
    return {std::move(inst), std::move(out)};
}

} // namespace costsr
