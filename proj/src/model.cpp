#include "costsr/model.hpp"

#include <algorithm>
#include <sstream>

namespace costsr {

Clause::Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {
    for (const Lit& l : lits_) {
        if (l.var() < 1) throw std::invalid_argument("clause literal with variable < 1");
    }
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
    for (size_t i = 0; i + 1 < lits_.size(); ++i) {
        if (lits_[i].var() == lits_[i + 1].var()) {
            tautological_ = true;
            break;
        }
    }
}

Clause Clause::from_dimacs(const std::vector<int>& lits) {
    std::vector<Lit> out;
    out.reserve(lits.size());
    for (int n : lits) out.push_back(Lit::from_dimacs(n));
    return Clause(std::move(out));
}

bool Clause::contains(Lit l) const {
    return std::binary_search(lits_.begin(), lits_.end(), l);
}

bool Clause::contains_var(Var v) const {
    return contains(Lit(v, true)) || contains(Lit(v, false));
}

Clause Clause::without(Lit l) const {
    std::vector<Lit> out;
    out.reserve(lits_.size());
    for (const Lit& x : lits_)
        if (x != l) out.push_back(x);
    return Clause(std::move(out));
}

size_t Clause::hash() const {
    // FNV-1a over literal codes
    uint64_t h = 1469598103934665603ull;
    for (const Lit& l : lits_) {
        h ^= static_cast<uint64_t>(l.code());
        h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
}

std::string Clause::to_dimacs() const {
    std::ostringstream os;
    for (const Lit& l : lits_) os << l.to_dimacs() << ' ';
    os << '0';
    return os.str();
}

void Formula::add(const Clause& c, uint32_t count) {
    if (count == 0) return;
    auto it = index_.find(c);
    if (it != index_.end()) {
        entries_[it->second].count += count;
    } else {
        index_.emplace(c, entries_.size());
        entries_.push_back(Entry{c, count});
    }
    total_ += count;
}

uint32_t Formula::count(const Clause& c) const {
    auto it = index_.find(c);
    return it == index_.end() ? 0 : entries_[it->second].count;
}

Var Formula::max_var() const {
    Var m = 0;
    for (const Entry& e : entries_)
        for (const Lit& l : e.clause)
            m = std::max(m, l.var());
    return m;
}

std::vector<Var> Formula::vars() const {
    std::vector<Var> out;
    for (const Entry& e : entries_)
        for (const Lit& l : e.clause)
            out.push_back(l.var());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Formula::operator==(const Formula& o) const {
    if (total_ != o.total_ || entries_.size() != o.entries_.size()) return false;
    for (const Entry& e : entries_)
        if (o.count(e.clause) != e.count) return false;
    return true;
}

void Substitution::set_constant(Var v, bool value) {
    if (v < 1) throw std::invalid_argument("substitution variable must be >= 1");
    map_[v] = Image{value ? Image::True : Image::False, Lit()};
}

void Substitution::set_literal(Var v, Lit image) {
    if (v < 1) throw std::invalid_argument("substitution variable must be >= 1");
    if (image == Lit(v, true)) {
        map_.erase(v);
    } else {
        map_[v] = Image{Image::Literal, image};
    }
}

Substitution::Image Substitution::image_of_var(Var v) const {
    auto it = map_.find(v);
    if (it == map_.end()) return Image{Image::Literal, Lit(v, true)};
    return it->second;
}

Substitution::Image Substitution::apply(Lit l) const {
    Image img = image_of_var(l.var());
    if (l.positive()) return img;
    switch (img.kind) {
    case Image::False: return Image{Image::True, Lit()};
    case Image::True: return Image{Image::False, Lit()};
    case Image::Literal: return Image{Image::Literal, img.lit.negated()};
    }
    return img; // unreachable
}

bool Substitution::is_assignment() const {
    for (const auto& [v, img] : map_)
        if (img.kind == Image::Literal) return false;
    return true;
}

std::vector<Var> Substitution::const_domain() const {
    std::vector<Var> out;
    for (const auto& [v, img] : map_)
        if (img.kind != Image::Literal) out.push_back(v);
    return out;
}

std::vector<Var> Substitution::moved_vars() const {
    std::vector<Var> out;
    out.reserve(map_.size());
    for (const auto& [v, img] : map_) out.push_back(v);
    return out;
}

Substitution compose(const Substitution& sigma, const Substitution& tau) {
    Substitution out;
    // vars explicitly moved by tau
    for (const auto& [v, img] : tau.entries()) {
        switch (img.kind) {
        case Substitution::Image::False: out.set_constant(v, false); break;
        case Substitution::Image::True: out.set_constant(v, true); break;
        case Substitution::Image::Literal: {
            Substitution::Image img2 = sigma.apply(img.lit);
            if (img2.kind == Substitution::Image::Literal)
                out.set_literal(v, img2.lit);
            else
                out.set_constant(v, img2.kind == Substitution::Image::True);
            break;
        }
        }
    }
    // fixed points of tau that sigma moves
    for (const auto& [v, img] : sigma.entries()) {
        if (tau.maps(v)) continue;
        if (img.kind == Substitution::Image::Literal)
            out.set_literal(v, img.lit);
        else
            out.set_constant(v, img.kind == Substitution::Image::True);
    }
    return out;
}

Substitution negation_of(const Clause& c) {
    if (c.tautological())
        throw std::invalid_argument("negation of a tautological clause is contradictory");
    Substitution out;
    for (const Lit& l : c) out.set_constant(l.var(), !l.positive());
    return out;
}

std::optional<Clause> restrict_clause(const Clause& c, const Substitution& s) {
    std::vector<Lit> image;
    image.reserve(c.size());
    for (const Lit& l : c) {
        Substitution::Image img = s.apply(l);
        if (img.kind == Substitution::Image::True) return std::nullopt;
        if (img.kind == Substitution::Image::False) continue;
        image.push_back(img.lit);
    }
    Clause out(std::move(image));
    if (out.tautological()) return std::nullopt;
    return out;
}

Formula restrict_formula(const Formula& f, const Substitution& s) {
    Formula out;
    for (const Formula::Entry& e : f) {
        std::optional<Clause> img = restrict_clause(e.clause, s);
        if (img) out.add(*img, e.count);
    }
    return out;
}

TotalAssignment TotalAssignment::from_bits(uint64_t bits, int nvars) {
    if (nvars > 64) throw std::invalid_argument("from_bits covers at most 64 variables");
    TotalAssignment a(nvars);
    for (Var v = 1; v <= nvars; ++v)
        a.set(v, (bits >> (v - 1)) & 1u);
    return a;
}

bool TotalAssignment::satisfies(const Clause& c) const {
    for (const Lit& l : c)
        if (satisfies(l)) return true;
    return false;
}

bool TotalAssignment::satisfies(const Formula& f) const {
    for (const Formula::Entry& e : f)
        if (!satisfies(e.clause)) return false;
    return true;
}

Substitution TotalAssignment::to_substitution() const {
    Substitution s;
    for (Var v = 1; v <= nvars(); ++v) s.set_constant(v, value(v));
    return s;
}

std::string TotalAssignment::to_bitstring() const {
    std::string out;
    out.reserve(static_cast<size_t>(nvars()));
    for (Var v = 1; v <= nvars(); ++v) out.push_back(value(v) ? '1' : '0');
    return out;
}

int TotalAssignment::hamming_distance(const TotalAssignment& o) const {
    if (nvars() != o.nvars())
        throw std::invalid_argument("hamming distance over mixed variable universes");
    int d = 0;
    for (Var v = 1; v <= nvars(); ++v)
        if (value(v) != o.value(v)) ++d;
    return d;
}

Instance::Instance(Formula hard, std::vector<Var> blocking, int nvars)
    : hard_(std::move(hard)), blocking_(std::move(blocking)), nvars_(nvars),
      is_blocking_(static_cast<size_t>(nvars) + 1, 0) {
    if (nvars_ < 0) throw std::invalid_argument("negative variable count");
    if (hard_.max_var() > nvars_)
        throw std::invalid_argument("clause variable out of range");
    for (Var b : blocking_) {
        if (b < 1 || b > nvars_)
            throw std::invalid_argument("blocking variable out of range");
        if (is_blocking_[static_cast<size_t>(b)])
            throw std::invalid_argument("duplicate blocking variable");
        is_blocking_[static_cast<size_t>(b)] = 1;
    }
}

long long Instance::cost_of(const TotalAssignment& alpha) const {
    if (alpha.nvars() != nvars_)
        throw std::invalid_argument("cost_of requires a total assignment over the instance");
    long long c = 0;
    for (Var b : blocking_)
        if (alpha.value(b)) ++c;
    return c;
}

} // namespace costsr
