#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "costsr/proof.hpp"
#include "text_lines.hpp"

namespace costsr {

ProofStep ProofStep::inferred(Clause c) {
    ProofStep s;
    s.kind = Inferred;
    s.clause = std::move(c);
    return s;
}

ProofStep ProofStep::redundant(Clause c, Substitution w, RuleClass claimed) {
    ProofStep s;
    s.kind = Redundant;
    s.clause = std::move(c);
    s.witness = std::move(w);
    s.claimed = claimed;
    return s;
}

ProofStep ProofStep::conclude(BoundKind b, long long k) {
    ProofStep s;
    s.kind = Conclude;
    s.bound = b;
    s.k = k;
    return s;
}

MsrStep MsrStep::hard_infer(Clause c) {
    MsrStep s;
    s.kind = HardInfer;
    s.clause = std::move(c);
    return s;
}

MsrStep MsrStep::hard_redundant(Clause c, Substitution w, RuleClass claimed) {
    MsrStep s;
    s.kind = HardRedundant;
    s.clause = std::move(c);
    s.witness = std::move(w);
    s.claimed = claimed;
    return s;
}

MsrStep MsrStep::copy_to_soft(Clause c) {
    MsrStep s;
    s.kind = CopyToSoft;
    s.clause = std::move(c);
    return s;
}

MsrStep MsrStep::split(Clause c, Var v) {
    MsrStep s;
    s.kind = Split;
    s.clause = std::move(c);
    s.var = v;
    return s;
}

MsrStep MsrStep::merge(Clause c, Var v) {
    MsrStep s;
    s.kind = Merge;
    s.clause = std::move(c);
    s.var = v;
    return s;
}

MsrStep MsrStep::conclude_bot(long long k) {
    MsrStep s;
    s.kind = ConcludeBot;
    s.k = k;
    return s;
}

ParseError::ParseError(const std::string& msg, long long line)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

namespace {

using detail::Lines;
using detail::parse_int;

// lits up to the closing 0 starting at toks[from]; returns index after the 0
size_t parse_clause_tokens(const std::vector<std::string_view>& toks, size_t from,
                           long long lineno, std::vector<int>& lits) {
    for (size_t i = from; i < toks.size(); ++i) {
        long long v = parse_int(toks[i], lineno, "a literal");
        if (v == 0) return i + 1;
        if (v < -1000000000 || v > 1000000000)
            throw ParseError("literal out of range", lineno);
        lits.push_back(static_cast<int>(v));
    }
    throw ParseError("clause line is not terminated by 0", lineno);
}

// witness pairs "<var> <img>"... terminated by 0; returns index after the 0
size_t parse_witness_tokens(const std::vector<std::string_view>& toks, size_t from,
                            long long lineno, Substitution& w) {
    size_t i = from;
    std::vector<Var> seen;
    while (true) {
        if (i >= toks.size()) throw ParseError("witness is not terminated by 0", lineno);
        long long v = parse_int(toks[i], lineno, "a witness variable");
        if (v == 0) return i + 1;
        if (v < 0) throw ParseError("witness variable must be positive", lineno);
        if (i + 1 >= toks.size()) throw ParseError("witness pair is missing its image", lineno);
        std::string_view img = toks[i + 1];
        Var var = static_cast<Var>(v);
        if (std::find(seen.begin(), seen.end(), var) != seen.end())
            throw ParseError("duplicate witness entry for variable " + std::to_string(v), lineno);
        seen.push_back(var);
        if (img == "t") {
            w.set_constant(var, true);
        } else if (img == "f") {
            w.set_constant(var, false);
        } else {
            long long lv = parse_int(img, lineno, "a witness image");
            if (lv == 0) throw ParseError("witness image references variable 0", lineno);
            w.set_literal(var, Lit::from_dimacs(static_cast<int>(lv)));
        }
        i += 2;
    }
}

RuleClass parse_class_tag(std::string_view tok, long long lineno) {
    if (tok == "#lpr") return RuleClass::LPR;
    if (tok == "#spr") return RuleClass::SPR;
    if (tok == "#pr") return RuleClass::PR;
    if (tok == "#sr") return RuleClass::SR;
    throw ParseError("unknown rule tag \"" + std::string(tok) + "\"", lineno);
}

} // namespace

Instance parse_instance(std::string_view text) {
    Lines in{text};
    std::vector<std::string_view> toks = in.next();
    if (toks.empty()) throw ParseError("missing header", in.lineno);
    if (toks.size() != 5 || toks[0] != "p" || toks[1] != "bcnf")
        throw ParseError("malformed header, expected \"p bcnf <nvars> <nclauses> <nblocking>\"",
                         in.lineno);
    long long nvars = parse_int(toks[2], in.lineno, "a variable count");
    long long nclauses = parse_int(toks[3], in.lineno, "a clause count");
    long long nblocking = parse_int(toks[4], in.lineno, "a blocking count");
    if (nvars < 0 || nclauses < 0 || nblocking < 0 || nvars > 1000000)
        throw ParseError("malformed header counts", in.lineno);

    toks = in.next();
    std::vector<Var> blocking;
    if (!toks.empty() && toks[0] == "b") {
        bool terminated = false;
        for (size_t i = 1; i < toks.size(); ++i) {
            long long v = parse_int(toks[i], in.lineno, "a blocking variable");
            if (v == 0) {
                if (i + 1 != toks.size())
                    throw ParseError("tokens after the terminating 0", in.lineno);
                terminated = true;
                break;
            }
            if (v < 1 || v > nvars)
                throw ParseError("blocking variable out of range", in.lineno);
            blocking.push_back(static_cast<Var>(v));
        }
        if (!terminated)
            throw ParseError("blocking line is not terminated by 0", in.lineno);
        toks = in.next();
    }
    if (static_cast<long long>(blocking.size()) != nblocking)
        throw ParseError("blocking declaration does not match the header", in.lineno);

    Formula hard;
    long long seen = 0;
    while (!toks.empty()) {
        std::vector<int> lits;
        size_t after = parse_clause_tokens(toks, 0, in.lineno, lits);
        if (after != toks.size()) throw ParseError("tokens after the terminating 0", in.lineno);
        for (int l : lits)
            if (std::abs(l) > nvars) throw ParseError("variable out of range", in.lineno);
        hard.add(Clause::from_dimacs(lits));
        ++seen;
        toks = in.next();
    }
    if (seen != nclauses)
        throw ParseError("clause count does not match the header", in.lineno);

    try {
        return Instance(std::move(hard), std::move(blocking), static_cast<int>(nvars));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), in.lineno);
    }
}

std::string print_instance(const Instance& inst) {
    std::ostringstream os;
    os << "p bcnf " << inst.nvars() << ' ' << inst.hard().size() << ' ' << inst.num_blocking()
       << '\n';
    os << 'b';
    for (Var b : inst.blocking()) os << ' ' << b;
    os << " 0\n";
    for (const Formula::Entry& e : inst.hard())
        for (uint32_t i = 0; i < e.count; ++i) os << e.clause.to_dimacs() << '\n';
    return os.str();
}

Proof parse_proof(std::string_view text) {
    Lines in{text};
    Proof proof;
    bool concluded = false;
    for (std::vector<std::string_view> toks = in.next(); !toks.empty(); toks = in.next()) {
        if (concluded) throw ParseError("conclusion must be the last line", in.lineno);
        if (toks[0] == "conclude") {
            if (toks.size() != 3 || (toks[1] != "geq" && toks[1] != "eq"))
                throw ParseError("expected \"conclude geq <k>\" or \"conclude eq <k>\"",
                                 in.lineno);
            long long k = parse_int(toks[2], in.lineno, "a bound");
            if (k < 0) throw ParseError("bound must be nonnegative", in.lineno);
            proof.steps.push_back(ProofStep::conclude(
                toks[1] == "eq" ? BoundKind::Eq : BoundKind::Geq, k));
            concluded = true;
            continue;
        }
        std::vector<int> lits;
        size_t after = parse_clause_tokens(toks, 0, in.lineno, lits);
        Clause clause = Clause::from_dimacs(lits);
        if (after == toks.size()) {
            proof.steps.push_back(ProofStep::inferred(std::move(clause)));
            continue;
        }
        if (toks[after] != "w")
            throw ParseError("unexpected token \"" + std::string(toks[after]) + "\"", in.lineno);
        Substitution w;
        size_t after_w = parse_witness_tokens(toks, after + 1, in.lineno, w);
        RuleClass claimed = RuleClass::SR;
        if (after_w < toks.size()) {
            claimed = parse_class_tag(toks[after_w], in.lineno);
            if (after_w + 1 != toks.size())
                throw ParseError("tokens after the rule tag", in.lineno);
        }
        proof.steps.push_back(ProofStep::redundant(std::move(clause), std::move(w), claimed));
    }
    return proof;
}

namespace {

void print_witness(std::ostringstream& os, const Substitution& w) {
    os << "w";
    for (const auto& [v, img] : w.entries()) {
        os << ' ' << v << ' ';
        switch (img.kind) {
        case Substitution::Image::False: os << 'f'; break;
        case Substitution::Image::True: os << 't'; break;
        case Substitution::Image::Literal: os << img.lit.to_dimacs(); break;
        }
    }
    os << " 0";
}

} // namespace

std::string print_proof(const Proof& proof) {
    std::ostringstream os;
    for (const ProofStep& s : proof.steps) {
        switch (s.kind) {
        case ProofStep::Inferred:
            os << s.clause.to_dimacs() << '\n';
            break;
        case ProofStep::Redundant:
            os << s.clause.to_dimacs() << ' ';
            print_witness(os, s.witness);
            if (s.claimed != RuleClass::SR) os << " #" << rule_class_name(s.claimed);
            os << '\n';
            break;
        case ProofStep::Conclude:
            os << "conclude " << (s.bound == BoundKind::Eq ? "eq" : "geq") << ' ' << s.k << '\n';
            break;
        }
    }
    return os.str();
}

MsrProof parse_msr_proof(std::string_view text) {
    Lines in{text};
    MsrProof proof;
    bool concluded = false;
    for (std::vector<std::string_view> toks = in.next(); !toks.empty(); toks = in.next()) {
        if (concluded) throw ParseError("conclusion must be the last line", in.lineno);
        std::string_view tag = toks[0];
        if (tag == "conclude") {
            if (toks.size() != 3 || toks[1] != "bot")
                throw ParseError("expected \"conclude bot <k>\"", in.lineno);
            long long k = parse_int(toks[2], in.lineno, "a bound");
            if (k < 0) throw ParseError("bound must be nonnegative", in.lineno);
            proof.push_back(MsrStep::conclude_bot(k));
            concluded = true;
            continue;
        }
        if (tag == "h" || tag == "s+") {
            std::vector<int> lits;
            size_t after = parse_clause_tokens(toks, 1, in.lineno, lits);
            if (after != toks.size())
                throw ParseError("tokens after the terminating 0", in.lineno);
            Clause c = Clause::from_dimacs(lits);
            proof.push_back(tag == "h" ? MsrStep::hard_infer(std::move(c))
                                       : MsrStep::copy_to_soft(std::move(c)));
            continue;
        }
        if (tag == "hw") {
            std::vector<int> lits;
            size_t after = parse_clause_tokens(toks, 1, in.lineno, lits);
            if (after >= toks.size() || toks[after] != "w")
                throw ParseError("hw step is missing its witness", in.lineno);
            Substitution w;
            size_t after_w = parse_witness_tokens(toks, after + 1, in.lineno, w);
            RuleClass claimed = RuleClass::SR;
            if (after_w < toks.size()) {
                claimed = parse_class_tag(toks[after_w], in.lineno);
                if (after_w + 1 != toks.size())
                    throw ParseError("tokens after the rule tag", in.lineno);
            }
            proof.push_back(
                MsrStep::hard_redundant(Clause::from_dimacs(lits), std::move(w), claimed));
            continue;
        }
        if (tag == "sp" || tag == "sm") {
            if (toks.size() < 2) throw ParseError("missing split/merge variable", in.lineno);
            long long v = parse_int(toks[1], in.lineno, "a variable");
            if (v < 1) throw ParseError("split/merge variable must be positive", in.lineno);
            std::vector<int> lits;
            size_t after = parse_clause_tokens(toks, 2, in.lineno, lits);
            if (after != toks.size())
                throw ParseError("tokens after the terminating 0", in.lineno);
            Clause c = Clause::from_dimacs(lits);
            proof.push_back(tag == "sp" ? MsrStep::split(std::move(c), static_cast<Var>(v))
                                        : MsrStep::merge(std::move(c), static_cast<Var>(v)));
            continue;
        }
        throw ParseError("unknown step tag \"" + std::string(tag) + "\"", in.lineno);
    }
    return proof;
}

std::string print_msr_proof(const MsrProof& proof) {
    std::ostringstream os;
    for (const MsrStep& s : proof) {
        switch (s.kind) {
        case MsrStep::HardInfer:
            os << "h " << s.clause.to_dimacs() << '\n';
            break;
        case MsrStep::HardRedundant:
            os << "hw " << s.clause.to_dimacs() << ' ';
            print_witness(os, s.witness);
            if (s.claimed != RuleClass::SR) os << " #" << rule_class_name(s.claimed);
            os << '\n';
            break;
        case MsrStep::CopyToSoft:
            os << "s+ " << s.clause.to_dimacs() << '\n';
            break;
        case MsrStep::Split:
            os << "sp " << s.var << ' ' << s.clause.to_dimacs() << '\n';
            break;
        case MsrStep::Merge:
            os << "sm " << s.var << ' ' << s.clause.to_dimacs() << '\n';
            break;
        case MsrStep::ConcludeBot:
            os << "conclude bot " << s.k << '\n';
            break;
        }
    }
    return os.str();
}

std::vector<Clause> parse_dimacs_cnf(std::string_view text, int* nvars_out) {
    Lines in{text};
    std::vector<std::string_view> toks = in.next();
    if (toks.empty() || toks.size() != 4 || toks[0] != "p" || toks[1] != "cnf")
        throw ParseError("malformed header, expected \"p cnf <nvars> <nclauses>\"", in.lineno);
    long long nvars = parse_int(toks[2], in.lineno, "a variable count");
    long long nclauses = parse_int(toks[3], in.lineno, "a clause count");
    if (nvars < 0 || nclauses < 0) throw ParseError("malformed header counts", in.lineno);

    std::vector<Clause> out;
    std::vector<int> lits;
    for (toks = in.next(); !toks.empty(); toks = in.next()) {
        for (std::string_view t : toks) {
            long long v = parse_int(t, in.lineno, "a literal");
            if (v == 0) {
                out.push_back(Clause::from_dimacs(lits));
                lits.clear();
            } else {
                if (std::abs(v) > nvars) throw ParseError("variable out of range", in.lineno);
                lits.push_back(static_cast<int>(v));
            }
        }
    }
    if (!lits.empty()) throw ParseError("last clause is not terminated by 0", in.lineno);
    if (static_cast<long long>(out.size()) != nclauses)
        throw ParseError("clause count does not match the header", in.lineno);
    if (nvars_out) *nvars_out = static_cast<int>(nvars);
    return out;
}

Wcnf parse_wcnf(std::string_view text) {
    Lines in{text};
    Wcnf out;
    for (std::vector<std::string_view> toks = in.next(); !toks.empty(); toks = in.next()) {
        if (toks[0] == "p")
            throw ParseError("legacy wcnf headers are not supported; use the 2022 format",
                             in.lineno);
        bool hard = toks[0] == "h";
        size_t from = 1;
        if (!hard) {
            long long weight = parse_int(toks[0], in.lineno, "a soft-clause weight");
            if (weight != 1)
                throw ParseError("weighted soft clauses are out of scope (weight must be 1)",
                                 in.lineno);
        }
        std::vector<int> lits;
        size_t after = parse_clause_tokens(toks, from, in.lineno, lits);
        if (after != toks.size()) throw ParseError("tokens after the terminating 0", in.lineno);
        for (int l : lits) out.nvars = std::max(out.nvars, std::abs(l));
        (hard ? out.hard : out.soft).push_back(Clause::from_dimacs(lits));
    }
    return out;
}

} // namespace costsr
