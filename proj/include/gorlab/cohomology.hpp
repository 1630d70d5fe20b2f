#pragma once

/*
 * Cohomology of a presented algebra, extraction of the finite cohomology ring
 * as a structure-constant table, and the inverse move: presenting such a
 * table as a quotient algebra with zero differential.
 *
 * For a presented algebra nothing is truncated: generators, relations and the
 * differential are all closed-form data, so H^n is exact at every degree the
 * window serves.  Degrees can still be uncertified when degree-0 generators
 * force a word-length cap that does not stabilize.
 */

#include "gorlab/algebra.hpp"
#include "gorlab/complex.hpp"
#include "gorlab/graded_dims.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace gorlab {

namespace detail {

inline Monomial monomial_of_label(const Cdga& A, const std::string& label) {
    Monomial m;
    if (label == "1") return m;
    std::size_t i = 0;
    while (i < label.size()) {
        std::size_t star = label.find('*', i);
        std::string factor = label.substr(i, star == std::string::npos ? star : star - i);
        i = star == std::string::npos ? label.size() : star + 1;
        int e = 1;
        std::size_t caret = factor.find('^');
        if (caret != std::string::npos) {
            e = std::stoi(factor.substr(caret + 1));
            factor = factor.substr(0, caret);
        }
        int g = A.find(factor);
        if (g < 0) throw AssertionError("label mentions unknown generator " + factor);
        m.factors.emplace_back(g, e);
        m.degree += A.generator(g).degree * e;
        m.length += e;
        if (A.generator(g).degree == 0) m.zero_length += e;
    }
    return m;
}

inline Element element_of_vec(const Cdga& A, const Vec& v,
                              const std::vector<std::string>& labels) {
    TermMap t;
    for (const auto& [i, c] : v) t.emplace(monomial_of_label(A, labels.at(i)), c);
    return A.from_terms(std::move(t));
}

}  // namespace detail

// the cochain complex of a presented algebra, as a band-filtered complex
inline BandedComplex algebra_complex(const Cdga& A) {
    BandedComplex cx;
    cx.growth = A.diff_growth();
    cx.basis = [A](int deg, int band) {
        std::vector<std::string> out;
        if (deg < 0) return out;
        for (const auto& m : A.basis_banded(deg, band)) out.push_back(A.monomial_str(m));
        return out;
    };
    cx.d = [A](int deg, const std::string& label) {
        Monomial m = detail::monomial_of_label(A, label);
        Element de = Element(A, TermMap{{m, Rational(1)}}).d();
        std::map<std::string, Rational> out;
        for (const auto& [mm, c] : de.terms()) out.emplace(A.monomial_str(mm), c);
        return out;
    };
    return cx;
}

struct CohomologyResult {
    GradedDims dims;
    // representatives per degree, aligned with the counted classes; present
    // also for uncertified degrees (they are the band-capped candidates)
    std::map<int, std::vector<Element>> reps;
};

inline CohomologyResult cohomology(const Cdga& A, int lo = 0, int hi = -1,
                                   bool with_reps = true) {
    if (hi < 0) hi = A.window();
    if (hi > A.window())
        throw WindowExceeded("cohomology range beyond the algebra window");
    BandedComplex cx = algebra_complex(A);
    int band = A.has_zero_gens() ? A.cap() : 0;
    CohomologyResult out;
    out.dims.lo = lo;
    out.dims.hi = hi;
    for (int n = lo; n <= hi; ++n) {
        HomologySlice s = banded_homology_at(cx, n, band, with_reps);
        out.dims.set(n, s.count);
        if (!s.stable) out.dims.uncertified.insert(n);
        if (with_reps) {
            auto& dst = out.reps[n];
            for (const auto& r : s.reps)
                dst.push_back(detail::element_of_vec(A, r, s.rep_labels));
        }
    }
    return out;
}

/*
 * A finite graded-commutative algebra over Q given by basis labels per
 * positive degree and a full multiplication table.  Degree 0 is the implicit
 * one-dimensional span of the unit.  Products landing beyond `top` are zero.
 */
struct FiniteGradedAlgebra {
    int top = 0;
    std::map<int, std::vector<std::string>> labels;
    // {p, i, q, j} -> coordinates over labels[p+q], for p, q >= 1
    std::map<std::array<int, 4>, Vec> mult;

    int dim(int n) const {
        if (n == 0) return 1;
        if (n < 0 || n > top) return 0;
        auto it = labels.find(n);
        return it == labels.end() ? 0 : static_cast<int>(it->second.size());
    }

    Vec mul(int p, int i, int q, int j) const {
        if (i < 0 || i >= dim(p) || j < 0 || j >= dim(q))
            throw InputError("multiplication index out of range");
        if (p == 0 || q == 0)
            throw InputError("unit products are implicit");
        auto it = mult.find({p, i, q, j});
        return it == mult.end() ? Vec{} : it->second;
    }
};

/*
 * Extract H(A) as a FiniteGradedAlgebra.  Requires an algebra without
 * degree-0 generators, connected (dim H^0 = 1), with cohomology certified
 * bounded: the top two degrees of the window must vanish, otherwise the ring
 * is not known to be finite and NotFiniteDimensional is thrown.
 */
struct CohomologyRing {
    FiniteGradedAlgebra table;
    std::map<int, std::vector<Element>> reps;  // cocycle representative per label
};

inline CohomologyRing cohomology_ring(const Cdga& A) {
    if (A.has_zero_gens())
        throw InputError("cohomology ring extraction needs an algebra without degree-0 generators");
    CohomologyResult H = cohomology(A);
    int D = A.window();
    if (H.dims.at(D - 1) != 0 || H.dims.at(D) != 0)
        throw NotFiniteDimensional(
            "cohomology does not vanish in the top two window degrees; "
            "raise --max-degree or accept an unbounded ring");
    if (H.dims.at(0) != 1) throw NotConnected("dim H^0 != 1");

    CohomologyRing out;
    for (int n = 1; n <= D; ++n) {
        int d = H.dims.at(n);
        if (d == 0) continue;
        out.table.top = n;
        auto& lab = out.table.labels[n];
        for (int i = 0; i < d; ++i) lab.push_back("h" + std::to_string(n) + "_" + std::to_string(i));
        out.reps[n] = H.reps[n];
    }

    // class coordinates of a cocycle: solve over [reps | boundaries]
    BandedComplex cx = algebra_complex(A);
    std::map<int, detail::Indexed> ambients;
    std::map<int, SparseMatrix> systems;
    auto express = [&](const Element& z, int n) -> Vec {
        if (z.is_zero()) return {};
        auto ita = ambients.find(n);
        if (ita == ambients.end()) {
            detail::Indexed amb(cx.basis(n, 0));
            std::vector<Vec> cols;
            for (const auto& e : out.reps[n]) {
                std::map<std::string, Rational> terms;
                for (const auto& [m, c] : e.terms()) terms.emplace(A.monomial_str(m), c);
                cols.push_back(amb.to_vec(terms));
            }
            Subspace b = detail::boundaries(cx, n, 0, amb);
            for (const auto& r : b.rows()) cols.push_back(r);
            systems.emplace(n, SparseMatrix::from_columns(static_cast<int>(amb.labels.size()), cols));
            ita = ambients.emplace(n, std::move(amb)).first;
        }
        std::map<std::string, Rational> terms;
        for (const auto& [m, c] : z.terms()) terms.emplace(A.monomial_str(m), c);
        Vec rhs = ita->second.to_vec(terms);
        auto sol = solve(systems.at(n), rhs);
        if (!sol) throw AssertionError("product of cocycles is not a cocycle class");
        Vec coords;
        int k = static_cast<int>(out.reps[n].size());
        for (const auto& [i, c] : *sol)
            if (i < k) set_entry(coords, i, c);
        return coords;
    };

    for (const auto& [p, plabs] : out.table.labels)
        for (const auto& [q, qlabs] : out.table.labels) {
            if (p + q > out.table.top) continue;
            for (int i = 0; i < static_cast<int>(plabs.size()); ++i)
                for (int j = 0; j < static_cast<int>(qlabs.size()); ++j) {
                    Element prod = out.reps[p][i] * out.reps[q][j];
                    Vec c = express(prod, p + q);
                    if (!c.empty()) out.table.mult[{p, i, q, j}] = std::move(c);
                }
        }
    return out;
}

/*
 * Present a finite graded algebra as a quotient CDGA with zero differential:
 * one generator per basis label in positive degrees, and one relation per
 * product rewriting it into the table value (zero beyond `top`).  The
 * result's degreewise dimensions are asserted against the table.
 */
inline Cdga table_presentation(const FiniteGradedAlgebra& F, int window) {
    if (window < F.top + 2)
        throw InputError("window too small to present the table");
    CdgaBuilder b(window, 0, false);
    for (const auto& [n, labs] : F.labels)
        for (const auto& lab : labs) b.add_generator(lab, n);
    Cdga part = b.partial();
    for (const auto& [p, plabs] : F.labels)
        for (const auto& [q, qlabs] : F.labels) {
            if (q < p) continue;
            for (int i = 0; i < static_cast<int>(plabs.size()); ++i)
                for (int j = 0; j < static_cast<int>(qlabs.size()); ++j) {
                    if (p == q && j < i) continue;
                    if (p == q && i == j && p % 2 != 0) continue;  // odd squares vanish anyway
                    Element rel = part.gen(plabs[i]) * part.gen(qlabs[j]);
                    if (p + q <= F.top) {
                        Vec c = F.mul(p, i, q, j);
                        if (!c.empty()) {
                            const auto& tlabs = F.labels.at(p + q);
                            for (const auto& [k, ck] : c)
                                rel = rel - ck * part.gen(tlabs.at(k));
                        }
                    }
                    b.add_relation(rel);
                }
        }
    Cdga A = b.finish();
    for (int n = 1; n <= std::min(F.top + CdgaCore::slack, window); ++n)
        if (static_cast<int>(A.basis(n).size()) != F.dim(n))
            throw AssertionError("table presentation dimension mismatch at degree " +
                                 std::to_string(n));
    return A;
}

}  // namespace gorlab
