#pragma once

/*
 * Free graded-commutative algebras over Q and their quotients by homogeneous
 * ideals, with a derivation differential.
 *
 * Generators are graded by non-negative degrees; odd generators square to
 * zero, even ones are polynomial.  A monomial keeps its factors sorted by
 * generator index, so multiplication is a merge that counts the odd-odd
 * transpositions for the Koszul sign.
 *
 * Quotients never use Groebner machinery: inside the fixed degree window the
 * relation ideal is spanned degree by degree by monomial multiples of the
 * relations, and exact elimination picks coset representatives.  The monomial
 * order everywhere is degree, then word length, then lexicographic on the
 * factor list, so every basis and every reduction is reproducible.
 *
 * Degree-0 generators (they arise in acyclic closures over degree-1
 * generators) make degreewise bases infinite; the word-length cap bounds
 * their total exponent.  Such generators may not appear in relations, which
 * keeps the ideal span band-homogeneous.
 */

#include "gorlab/errors.hpp"
#include "gorlab/linalg.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gorlab {

struct Generator {
    std::string name;
    int degree = 0;
    int stage = -1;  // -1: unspecified; the declaration index is used instead
    enum class Block { none, base, fiber };
    Block block = Block::none;
};

struct Monomial {
    // (generator index, exponent), indices strictly increasing, exponents >= 1
    std::vector<std::pair<int, int>> factors;
    int degree = 0;       // cached
    int length = 0;       // sum of exponents
    int zero_length = 0;  // exponent mass sitting on degree-0 generators

    bool is_unit() const { return factors.empty(); }

    bool operator==(const Monomial& o) const { return factors == o.factors; }

    bool operator<(const Monomial& o) const {
        if (degree != o.degree) return degree < o.degree;
        if (length != o.length) return length < o.length;
        return factors < o.factors;
    }
};

using TermMap = std::map<Monomial, Rational>;

struct CdgaCore;
class Cdga;
class Element;

namespace alg {

inline bool is_odd(const Generator& g) { return g.degree % 2 != 0; }

// merge product with Koszul sign; false when an odd generator repeats
inline bool mul_monomials(const CdgaCore& core, const Monomial& a, const Monomial& b,
                          Monomial& out, int& sign);

inline TermMap mul(const CdgaCore& core, const TermMap& x, const TermMap& y);
inline TermMap apply_d_free(const CdgaCore& core, const TermMap& x);
inline TermMap reduce(const CdgaCore& core, TermMap x);

}  // namespace alg

struct CdgaCore {
    std::vector<Generator> gens;
    std::map<std::string, int> index_of;
    std::vector<TermMap> dgen;      // differential of each generator
    std::vector<TermMap> relations;
    int window = 12;
    int cap = 6;
    bool allow_zero = false;        // degree-0 generators permitted
    bool zero_diff = true;
    int growth = 0;                 // band growth of the differential
    // degrees are served up to window + slack so that d-images and ideal
    // reductions one step past the window stay exact
    static constexpr int slack = 2;

    mutable std::map<std::pair<int, int>, std::vector<Monomial>> exact_cache;
    mutable std::map<std::pair<int, int>, Subspace> ideal_cache;
    mutable std::map<std::pair<int, int>, std::vector<Monomial>> coset_cache;

    int limit() const { return window + slack; }

    int effective_stage(int i) const {
        return gens[i].stage >= 0 ? gens[i].stage : i;
    }

    bool has_zero_gens() const {
        for (const auto& g : gens)
            if (g.degree == 0) return true;
        return false;
    }

    // all monomials of the given degree with exactly `band` exponent mass on
    // degree-0 generators, sorted by the canonical monomial order
    const std::vector<Monomial>& exact_monomials(int degree, int band) const;

    // ideal span at (degree, exact band) in coordinates of exact_monomials
    const Subspace& ideal_span(int degree, int band) const;

    // coset representatives: the non-pivot monomials
    const std::vector<Monomial>& coset_monomials(int degree, int band) const;
};

namespace alg {

inline bool mul_monomials(const CdgaCore& core, const Monomial& a, const Monomial& b,
                          Monomial& out, int& sign) {
    out.factors.clear();
    out.factors.reserve(a.factors.size() + b.factors.size());
    sign = 1;
    std::size_t i = 0, j = 0;
    // odd factors of a not yet passed over by factors of b
    int odd_tail = 0;
    for (const auto& [g, e] : a.factors)
        if (is_odd(core.gens[g])) ++odd_tail;
    while (i < a.factors.size() || j < b.factors.size()) {
        bool take_a = j >= b.factors.size() ||
                      (i < a.factors.size() && a.factors[i].first <= b.factors[j].first);
        if (take_a) {
            auto [g, e] = a.factors[i++];
            if (is_odd(core.gens[g])) --odd_tail;
            if (j < b.factors.size() && g == b.factors[j].first) {
                if (is_odd(core.gens[g])) return false;  // odd square
                e += b.factors[j++].second;
            }
            out.factors.emplace_back(g, e);
        } else {
            auto [g, e] = b.factors[j++];
            // g jumps over the remaining odd factors of a
            if (is_odd(core.gens[g]) && (odd_tail % 2)) sign = -sign;
            out.factors.emplace_back(g, e);
        }
    }
    out.degree = a.degree + b.degree;
    out.length = a.length + b.length;
    out.zero_length = a.zero_length + b.zero_length;
    return true;
}

inline TermMap mul(const CdgaCore& core, const TermMap& x, const TermMap& y) {
    TermMap out;
    for (const auto& [ma, ca] : x)
        for (const auto& [mb, cb] : y) {
            Monomial m;
            int sign;
            if (!mul_monomials(core, ma, mb, m, sign)) continue;
            Rational c = ca * cb * sign;
            auto it = out.find(m);
            if (it == out.end()) {
                out.emplace(std::move(m), std::move(c));
            } else {
                it->second += c;
                if (it->second == 0) out.erase(it);
            }
        }
    return out;
}

inline Monomial monomial_of_gen(const CdgaCore& core, int g, int e = 1) {
    Monomial m;
    m.factors = {{g, e}};
    m.degree = core.gens[g].degree * e;
    m.length = e;
    m.zero_length = core.gens[g].degree == 0 ? e : 0;
    return m;
}

inline TermMap apply_d_free(const CdgaCore& core, const TermMap& x) {
    TermMap out;
    for (const auto& [m, c] : x) {
        int prefix_deg = 0;
        for (std::size_t i = 0; i < m.factors.size(); ++i) {
            auto [g, e] = m.factors[i];
            const TermMap& dg = core.dgen[g];
            if (!dg.empty()) {
                // prefix * g^(e-1) keeps its sorted shape
                Monomial left;
                left.factors.assign(m.factors.begin(), m.factors.begin() + i);
                if (e > 1) left.factors.emplace_back(g, e - 1);
                Monomial right;
                right.factors.assign(m.factors.begin() + i + 1, m.factors.end());
                for (Monomial* part : {&left, &right}) {
                    part->degree = part->length = part->zero_length = 0;
                    for (auto [pg, pe] : part->factors) {
                        part->degree += core.gens[pg].degree * pe;
                        part->length += pe;
                        if (core.gens[pg].degree == 0) part->zero_length += pe;
                    }
                }
                Rational coef = c * e * ((prefix_deg % 2) ? -1 : 1);
                TermMap piece = mul(core, TermMap{{left, coef}}, dg);
                piece = mul(core, piece, TermMap{{right, Rational(1)}});
                for (auto& [pm, pc] : piece) {
                    auto it = out.find(pm);
                    if (it == out.end()) {
                        out.emplace(pm, pc);
                    } else {
                        it->second += pc;
                        if (it->second == 0) out.erase(it);
                    }
                }
            }
            prefix_deg += core.gens[g].degree * e;
        }
    }
    return out;
}

inline TermMap reduce(const CdgaCore& core, TermMap x) {
    if (core.relations.empty() || x.empty()) return x;
    // split into (degree, band) homogeneous parts and reduce each
    std::map<std::pair<int, int>, TermMap> parts;
    for (auto& [m, c] : x) parts[{m.degree, m.zero_length}].emplace(m, c);
    TermMap out;
    for (auto& [key, part] : parts) {
        auto [deg, band] = key;
        if (deg > core.limit())
            throw WindowExceeded("reduction needs degree " + std::to_string(deg) +
                                 " beyond window " + std::to_string(core.window));
        const auto& basis = core.exact_monomials(deg, band);
        const Subspace& ideal = core.ideal_span(deg, band);
        Vec v;
        std::map<Monomial, int> pos;
        for (int k = 0; k < static_cast<int>(basis.size()); ++k) pos[basis[k]] = k;
        for (const auto& [m, c] : part) {
            auto it = pos.find(m);
            if (it == pos.end()) throw AssertionError("monomial missing from its own basis");
            v[it->second] = c;
        }
        Vec rem = ideal.reduce(v);
        for (const auto& [k, c] : rem) out[basis[k]] = c;
    }
    return out;
}

}  // namespace alg

inline const std::vector<Monomial>& CdgaCore::exact_monomials(int degree, int band) const {
    auto key = std::make_pair(degree, band);
    auto it = exact_cache.find(key);
    if (it != exact_cache.end()) return it->second;
    std::vector<Monomial> out;
    if (degree >= 0 && band >= 0 && (band == 0 || allow_zero)) {
        // positive-degree part recursively, then exact-band words on the
        // degree-0 generators
        std::vector<Monomial> zero_words{Monomial{}};
        {
            std::vector<Monomial> acc;
            std::vector<std::pair<int, int>> word;
            auto rec = [&](auto&& self, int from, int remaining) -> void {
                if (remaining == 0) {
                    Monomial m;
                    m.factors = word;
                    for (auto [g, e] : word) {
                        m.length += e;
                        m.zero_length += e;
                    }
                    acc.push_back(std::move(m));
                    return;
                }
                for (int g = from; g < static_cast<int>(gens.size()); ++g) {
                    if (gens[g].degree != 0) continue;
                    for (int e = 1; e <= remaining; ++e) {
                        word.emplace_back(g, e);
                        self(self, g + 1, remaining - e);
                        word.pop_back();
                    }
                }
            };
            if (band == 0) {
                acc.push_back(Monomial{});
            } else {
                rec(rec, 0, band);
            }
            zero_words = std::move(acc);
        }
        std::vector<Monomial> positive;
        {
            std::vector<std::pair<int, int>> word;
            auto rec = [&](auto&& self, int from, int remaining) -> void {
                if (remaining == 0) {
                    Monomial m;
                    m.factors = word;
                    m.degree = degree;
                    for (auto [g, e] : word) m.length += e;
                    positive.push_back(std::move(m));
                    return;
                }
                for (int g = from; g < static_cast<int>(gens.size()); ++g) {
                    int d = gens[g].degree;
                    if (d == 0 || d > remaining) continue;
                    int top = alg::is_odd(gens[g]) ? 1 : remaining / d;
                    for (int e = 1; e <= top; ++e) {
                        word.emplace_back(g, e);
                        self(self, g + 1, remaining - e * d);
                        word.pop_back();
                    }
                }
            };
            rec(rec, 0, degree);
        }
        for (const auto& p : positive)
            for (const auto& z : zero_words) {
                Monomial m;
                int sign;
                if (!alg::mul_monomials(*this, p, z, m, sign)) continue;
                out.push_back(std::move(m));
            }
        std::sort(out.begin(), out.end());
    }
    return exact_cache.emplace(key, std::move(out)).first->second;
}

inline const Subspace& CdgaCore::ideal_span(int degree, int band) const {
    auto key = std::make_pair(degree, band);
    auto it = ideal_cache.find(key);
    if (it != ideal_cache.end()) return it->second;
    const auto& basis = exact_monomials(degree, band);
    Subspace span(static_cast<int>(basis.size()));
    if (!relations.empty()) {
        std::map<Monomial, int> pos;
        for (int k = 0; k < static_cast<int>(basis.size()); ++k) pos[basis[k]] = k;
        for (const auto& rel : relations) {
            if (rel.empty()) continue;
            int rdeg = rel.begin()->first.degree;
            if (rdeg > degree) continue;
            for (const auto& mult : exact_monomials(degree - rdeg, band)) {
                TermMap prod = alg::mul(*this, TermMap{{mult, Rational(1)}}, rel);
                Vec v;
                for (const auto& [m, c] : prod) {
                    auto p = pos.find(m);
                    if (p == pos.end()) throw AssertionError("ideal span left its band");
                    v[p->second] = c;
                }
                span.insert(std::move(v));
            }
        }
    }
    return ideal_cache.emplace(key, std::move(span)).first->second;
}

inline const std::vector<Monomial>& CdgaCore::coset_monomials(int degree, int band) const {
    auto key = std::make_pair(degree, band);
    auto it = coset_cache.find(key);
    if (it != coset_cache.end()) return it->second;
    const auto& basis = exact_monomials(degree, band);
    std::vector<Monomial> out;
    if (relations.empty()) {
        out = basis;
    } else {
        const Subspace& ideal = ideal_span(degree, band);
        std::vector<bool> is_pivot(basis.size(), false);
        for (int p : ideal.pivots()) is_pivot[p] = true;
        for (int k = 0; k < static_cast<int>(basis.size()); ++k)
            if (!is_pivot[k]) out.push_back(basis[k]);
    }
    return coset_cache.emplace(key, std::move(out)).first->second;
}

// Immutable handle; Elements hold the same shared core, and algebra identity
// is core identity.
class Cdga {
  public:
    Cdga() = default;
    explicit Cdga(std::shared_ptr<const CdgaCore> core) : core_(std::move(core)) {}

    bool valid() const { return static_cast<bool>(core_); }
    const CdgaCore& core() const { return *core_; }
    std::shared_ptr<const CdgaCore> core_ptr() const { return core_; }
    bool same(const Cdga& o) const { return core_ == o.core_; }

    int window() const { return core_->window; }
    int cap() const { return core_->cap; }
    int size() const { return static_cast<int>(core_->gens.size()); }
    const Generator& generator(int i) const { return core_->gens.at(i); }
    int find(const std::string& name) const {
        auto it = core_->index_of.find(name);
        return it == core_->index_of.end() ? -1 : it->second;
    }
    bool is_free() const { return core_->relations.empty(); }
    bool zero_diff() const { return core_->zero_diff; }
    bool has_zero_gens() const { return core_->has_zero_gens(); }
    int diff_growth() const { return core_->growth; }
    const std::vector<TermMap>& relations() const { return core_->relations; }
    const TermMap& d_of_gen(int i) const { return core_->dgen.at(i); }

    inline Element zero() const;
    inline Element one() const;
    inline Element scalar(const Rational& c) const;
    inline Element gen(int i) const;
    inline Element gen(const std::string& name) const;
    inline Element from_terms(TermMap t) const;

    // quotient basis at band <= cap (everything if no degree-0 generators)
    std::vector<Monomial> basis(int degree) const {
        return basis_banded(degree, has_zero_gens() ? cap() : 0);
    }

    std::vector<Monomial> basis_banded(int degree, int band) const {
        if (degree > core_->limit())
            throw WindowExceeded("basis at degree " + std::to_string(degree) +
                                 " beyond window " + std::to_string(window()));
        std::vector<Monomial> out;
        for (int b = 0; b <= band; ++b) {
            const auto& part = core_->coset_monomials(degree, b);
            out.insert(out.end(), part.begin(), part.end());
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /*
     * Certificate that the quotient vanishes above some degree.  If the basis
     * is empty on (top, window] and the gap is at least the largest generator
     * degree, any monomial beyond the window splits off a generator whose
     * cofactor already reduces to zero, so emptiness propagates upward.
     * Returns the top degree, or -1 when finiteness cannot be certified.
     */
    int certified_finite_top() const {
        if (has_zero_gens()) return -1;
        int maxg = 1;
        for (int i = 0; i < size(); ++i) maxg = std::max(maxg, generator(i).degree);
        int top = 0;
        for (int n = window(); n >= 1; --n)
            if (!basis(n).empty()) { top = n; break; }
        return (window() - top >= maxg) ? top : -1;
    }

    std::string monomial_str(const Monomial& m) const {
        if (m.is_unit()) return "1";
        std::string s;
        for (const auto& [g, e] : m.factors) {
            if (!s.empty()) s += "*";
            s += core_->gens[g].name;
            if (e > 1) s += "^" + std::to_string(e);
        }
        return s;
    }

  private:
    std::shared_ptr<const CdgaCore> core_;
};

class Element {
  public:
    Element() = default;
    Element(Cdga alg, TermMap terms) : alg_(std::move(alg)), terms_(std::move(terms)) {}

    const Cdga& algebra() const { return alg_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // homogeneous degree; -1 for zero, error when mixed
    int degree() const {
        if (terms_.empty()) return -1;
        int d = terms_.begin()->first.degree;
        for (const auto& [m, c] : terms_)
            if (m.degree != d) throw InputError("element is not homogeneous");
        return d;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        int d = terms_.begin()->first.degree;
        for (const auto& [m, c] : terms_)
            if (m.degree != d) return false;
        return true;
    }

    Element operator+(const Element& o) const {
        check(o);
        TermMap out = terms_;
        for (const auto& [m, c] : o.terms_) {
            auto it = out.find(m);
            if (it == out.end()) {
                out.emplace(m, c);
            } else {
                it->second += c;
                if (it->second == 0) out.erase(it);
            }
        }
        return Element(pick(o), std::move(out));
    }

    Element operator-(const Element& o) const { return *this + (o * Rational(-1)); }

    Element operator*(const Element& o) const {
        check(o);
        const Cdga& a = pick(o);
        TermMap prod = alg::mul(a.core(), terms_, o.terms_);
        return Element(a, alg::reduce(a.core(), std::move(prod)));
    }

    Element operator*(const Rational& c) const {
        TermMap out;
        if (c != 0)
            for (const auto& [m, x] : terms_) out.emplace(m, x * c);
        return Element(alg_, std::move(out));
    }

    Element pow(int k) const {
        if (k < 0) throw InputError("negative power");
        Element out = alg_.one();
        for (int i = 0; i < k; ++i) out = out * *this;
        return out;
    }

    Element d() const {
        if (!alg_.valid()) return *this;
        TermMap free = alg::apply_d_free(alg_.core(), terms_);
        return Element(alg_, alg::reduce(alg_.core(), std::move(free)));
    }

    bool operator==(const Element& o) const {
        if (alg_.valid() && o.alg_.valid() && !alg_.same(o.alg_))
            throw MixedAlgebras("comparing elements of different algebras");
        return terms_ == o.terms_;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            Rational a = c;
            if (s.empty()) {
                if (a < 0) { s += "-"; a = -a; }
            } else {
                s += (a < 0) ? " - " : " + ";
                if (a < 0) a = -a;
            }
            std::string mono = alg_.monomial_str(m);
            if (a != 1 || mono == "1") {
                s += rational_to_string(a);
                if (mono != "1") s += "*";
            }
            if (mono != "1") s += mono;
        }
        return s;
    }

  private:
    void check(const Element& o) const {
        if (alg_.valid() && o.alg_.valid() && !alg_.same(o.alg_))
            throw MixedAlgebras("elements of different algebras");
    }
    const Cdga& pick(const Element& o) const { return alg_.valid() ? alg_ : o.alg_; }

    Cdga alg_;
    TermMap terms_;
};

inline Element operator*(const Rational& c, const Element& e) { return e * c; }

inline Element Cdga::zero() const { return Element(*this, TermMap{}); }

inline Element Cdga::scalar(const Rational& c) const {
    TermMap t;
    if (c != 0) t.emplace(Monomial{}, c);
    return Element(*this, std::move(t));
}

inline Element Cdga::one() const { return scalar(Rational(1)); }

inline Element Cdga::gen(int i) const {
    if (i < 0 || i >= size()) throw InputError("generator index out of range");
    TermMap t{{alg::monomial_of_gen(*core_, i), Rational(1)}};
    return Element(*this, alg::reduce(*core_, std::move(t)));
}

inline Element Cdga::gen(const std::string& name) const {
    int i = find(name);
    if (i < 0) throw InputError("unknown generator: " + name);
    return gen(i);
}

inline Element Cdga::from_terms(TermMap t) const {
    return Element(*this, alg::reduce(*core_, std::move(t)));
}

// Accumulates generators, differentials and relations, then validates and
// freezes a Cdga.  Differential expressions may only mention generators that
// are already declared.
class CdgaBuilder {
  public:
    explicit CdgaBuilder(int window = 12, int cap = 6, bool allow_zero = false) {
        core_ = std::make_shared<CdgaCore>();
        core_->window = window;
        core_->cap = cap;
        core_->allow_zero = allow_zero;
    }

    int add_generator(const std::string& name, int degree, int stage = -1,
                      Generator::Block block = Generator::Block::none) {
        if (core_->index_of.count(name)) throw InputError("duplicate generator: " + name);
        if (degree < 0) throw InputError("negative generator degree: " + name);
        if (degree == 0 && !core_->allow_zero)
            throw InputError("degree-0 generator not permitted here: " + name);
        Generator g{name, degree, stage, block};
        core_->gens.push_back(g);
        core_->dgen.emplace_back();
        core_->index_of[name] = static_cast<int>(core_->gens.size()) - 1;
        invalidate();
        return core_->index_of[name];
    }

    // a working handle over the partial data; used to build expressions
    Cdga partial() const { return Cdga(core_); }

    void set_differential(const std::string& name, const Element& value) {
        auto it = core_->index_of.find(name);
        if (it == core_->index_of.end()) throw InputError("unknown generator: " + name);
        if (!value.is_zero()) {
            if (!value.is_homogeneous() ||
                value.degree() != core_->gens[it->second].degree + 1)
                throw InputError("d(" + name + ") must be homogeneous of degree +1");
        }
        core_->dgen[it->second] = value.terms();
    }

    void add_relation(const Element& value) {
        if (value.is_zero()) return;
        if (!value.is_homogeneous()) throw InputError("relations must be homogeneous");
        for (const auto& [m, c] : value.terms())
            for (auto [g, e] : m.factors)
                if (core_->gens[g].degree == 0)
                    throw InputError("relations may not involve degree-0 generators");
        core_->relations.push_back(value.terms());
        invalidate();
    }

    // validate and freeze; the builder must not be reused afterwards
    Cdga finish() {
        finalize_flags();
        Cdga a(core_);
        validate(a);
        core_.reset();
        return a;
    }

  private:
    // the lazy caches key on generator and relation lists, which are still
    // growing while the builder runs
    void invalidate() {
        core_->exact_cache.clear();
        core_->ideal_cache.clear();
        core_->coset_cache.clear();
    }

    void finalize_flags() {
        core_->zero_diff = true;
        core_->growth = 0;
        for (std::size_t i = 0; i < core_->dgen.size(); ++i) {
            if (core_->dgen[i].empty()) continue;
            core_->zero_diff = false;
            int own = core_->gens[i].degree == 0 ? 1 : 0;
            for (const auto& [m, c] : core_->dgen[i])
                core_->growth = std::max(core_->growth, m.zero_length - own);
        }
    }

    static void validate(const Cdga& a) {
        const CdgaCore& core = a.core();
        for (std::size_t i = 0; i < core.gens.size(); ++i) {
            // Sullivan condition: d(g) sits on strictly earlier stages
            for (const auto& [m, c] : core.dgen[i])
                for (auto [g, e] : m.factors)
                    if (core.effective_stage(g) >= core.effective_stage(static_cast<int>(i)))
                        throw InputError("stage condition violated at d(" +
                                         core.gens[i].name + ")");
            // d^2 = 0 on generators, inside the window
            if (core.gens[i].degree + 2 <= core.limit()) {
                TermMap dd = alg::apply_d_free(core, core.dgen[i]);
                if (!alg::reduce(core, std::move(dd)).empty())
                    throw InputError("d^2 != 0 at generator " + core.gens[i].name);
            }
        }
        for (const auto& rel : core.relations) {
            if (rel.empty()) continue;
            int deg = rel.begin()->first.degree;
            for (const auto& [m, c] : rel)
                if (m.degree != deg) throw InputError("relations must be homogeneous");
            if (deg + 1 <= core.limit()) {
                TermMap dr = alg::apply_d_free(core, rel);
                if (!alg::reduce(core, std::move(dr)).empty())
                    throw InputError("relation ideal is not d-stable");
            }
        }
    }

    std::shared_ptr<CdgaCore> core_;
};

}  // namespace gorlab
