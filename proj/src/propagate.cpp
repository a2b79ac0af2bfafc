#include "costsr/propagate.hpp"

#include <algorithm>
#include <cassert>

namespace costsr {

PropagationResult unit_propagate(const Formula& gamma) {
    Var n = gamma.max_var();
    std::vector<int8_t> value(static_cast<size_t>(n) + 1, 0);
    auto lit_value = [&](Lit l) -> int {
        int v = value[static_cast<size_t>(l.var())];
        return l.positive() ? v : -v;
    };

    PropagationResult out;
    bool again = true;
    while (again) {
        again = false;
        for (const Formula::Entry& e : gamma) {
            if (e.clause.tautological()) continue;
            Lit unassigned;
            int num_unassigned = 0;
            bool satisfied = false;
            for (const Lit& l : e.clause) {
                int v = lit_value(l);
                if (v > 0) { satisfied = true; break; }
                if (v == 0) { ++num_unassigned; unassigned = l; }
            }
            if (satisfied || num_unassigned != 1) continue;
            value[static_cast<size_t>(unassigned.var())] = unassigned.positive() ? 1 : -1;
            out.implied_units.push_back(unassigned);
            again = true;
        }
    }

    Substitution assigned;
    for (Var v = 1; v <= n; ++v)
        if (value[static_cast<size_t>(v)] != 0)
            assigned.set_constant(v, value[static_cast<size_t>(v)] > 0);
    out.residual = restrict_formula(gamma, assigned);
    out.status = out.residual.contains(Clause()) ? PropagationResult::Conflict
                                                 : PropagationResult::Fixpoint;
    return out;
}

bool derives_by_up(const Formula& gamma, const Clause& c) {
    if (c.tautological()) return true;
    Var n = gamma.max_var();
    for (const Lit& l : c) n = std::max(n, l.var());
    Propagator p(n);
    for (const Formula::Entry& e : gamma) p.add_clause(e.clause);
    return p.derives(c);
}

DerivesAllResult derives_all(const Formula& gamma, const Formula& delta) {
    Var n = std::max(gamma.max_var(), delta.max_var());
    Propagator p(n);
    for (const Formula::Entry& e : gamma) p.add_clause(e.clause);
    for (const Formula::Entry& e : delta) {
        if (!p.derives(e.clause)) return DerivesAllResult{false, e.clause};
    }
    return DerivesAllResult{};
}

Propagator::Propagator(int nvars)
    : nvars_(nvars), watches_(2 * static_cast<size_t>(nvars) + 2),
      value_(static_cast<size_t>(nvars) + 1, 0) {
    trail_.reserve(static_cast<size_t>(nvars));
}

void Propagator::add_clause(const Clause& c) {
    assert(frames_.empty() && "clauses are added between queries, not inside them");
    if (c.tautological()) return;
    if (root_conflict_) return;

    std::vector<Lit> lits;
    lits.reserve(c.size());
    size_t nonfalse = 0;
    for (const Lit& l : c) {
        if (l.var() > nvars_) throw std::invalid_argument("clause variable beyond engine range");
        int v = lit_value(l);
        if (v > 0) return; // satisfied at root forever
        lits.push_back(l);
        if (v == 0) {
            std::swap(lits[nonfalse], lits.back());
            ++nonfalse;
        }
    }
    if (nonfalse == 0) {
        root_conflict_ = true;
        return;
    }
    if (nonfalse == 1) {
        assign(lits[0]);
        if (propagate()) root_conflict_ = true;
        return;
    }
    int idx = static_cast<int>(clauses_.size());
    clauses_.push_back(std::move(lits));
    const std::vector<Lit>& stored = clauses_.back();
    watches_[static_cast<size_t>(stored[0].code())].push_back(Watch{idx, stored[1]});
    watches_[static_cast<size_t>(stored[1].code())].push_back(Watch{idx, stored[0]});
}

bool Propagator::enqueue(Lit l) {
    int v = lit_value(l);
    if (v < 0) return true;
    if (v == 0) assign(l);
    return false;
}

bool Propagator::propagate() {
    while (qhead_ < trail_.size()) {
        Var v = trail_[qhead_++];
        Lit false_lit(v, value_[static_cast<size_t>(v)] < 0);
        std::vector<Watch>& wl = watches_[static_cast<size_t>(false_lit.code())];
        size_t i = 0, j = 0;
        while (i < wl.size()) {
            Watch w = wl[i];
            if (lit_value(w.blocker) > 0) {
                wl[j++] = wl[i++];
                continue;
            }
            std::vector<Lit>& c = clauses_[static_cast<size_t>(w.clause_idx)];
            if (c[0] == false_lit) std::swap(c[0], c[1]);
            if (lit_value(c[0]) > 0) {
                wl[j++] = Watch{w.clause_idx, c[0]};
                ++i;
                continue;
            }
            bool moved = false;
            for (size_t k = 2; k < c.size(); ++k) {
                if (lit_value(c[k]) >= 0) {
                    std::swap(c[1], c[k]);
                    watches_[static_cast<size_t>(c[1].code())].push_back(Watch{w.clause_idx, c[0]});
                    moved = true;
                    break;
                }
            }
            if (moved) {
                ++i; // watch moved to another list
                continue;
            }
            if (lit_value(c[0]) < 0) {
                while (i < wl.size()) wl[j++] = wl[i++];
                wl.resize(j);
                return true; // conflict
            }
            assign(c[0]);
            wl[j++] = wl[i++];
        }
        wl.resize(j);
    }
    return false;
}

bool Propagator::push_assignment(const std::vector<std::pair<Var, bool>>& assumptions) {
    for (const auto& [v, val] : assumptions) {
        (void)val;
        if (v < 1 || v > nvars_)
            throw std::invalid_argument("assumption variable beyond engine range");
    }
    frames_.push_back(trail_.size());
    for (const auto& [v, val] : assumptions) {
        int cur = value_[static_cast<size_t>(v)];
        if (cur == 0) {
            assign(Lit(v, val));
        } else if ((cur > 0) != val) {
            return true; // contradicts an existing assignment
        }
    }
    return propagate();
}

void Propagator::pop_frame() {
    assert(!frames_.empty());
    size_t mark = frames_.back();
    frames_.pop_back();
    while (trail_.size() > mark) {
        value_[static_cast<size_t>(trail_.back())] = 0;
        trail_.pop_back();
    }
    qhead_ = mark;
}

bool Propagator::derives(const Clause& target) {
    if (target.tautological()) return true;
    if (root_conflict_) return true;
    std::vector<std::pair<Var, bool>> assumps;
    assumps.reserve(target.size());
    for (const Lit& l : target) assumps.emplace_back(l.var(), !l.positive());
    bool conflict = push_assignment(assumps);
    pop_frame();
    return conflict;
}

} // namespace costsr
