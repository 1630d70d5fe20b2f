#pragma once

/*
 * Differential graded modules over a presented algebra, with finite bases per
 * degree inside an explicit window.  Everything is matrices: the differential
 * raises degree by one, and each algebra generator acts by a matrix per
 * degree.  Monomials act by folding generator actions right to left,
 *
 *     (f1 f2 ... fr) . x = f1 . (f2 . ( ... (fr . x))),
 *
 * which fixes all Koszul signs once the generator matrices are fixed.
 *
 * The linear dual reverses degrees.  With the conventions
 *
 *     (d f)(m) = -(-1)^{|f|} f(d m)        (f a functional)
 *     (a . f)(m) = (-1)^{|a||f|} f(a . m)  (left action from the right one)
 *
 * the dual of a DG module is again one, and the canonical map into the
 * double dual is m -> (-1)^{|m|} m''.
 *
 * Degree-0 algebra generators are not supported here; modules over such
 * algebras are handled by the band-filtered complexes directly.
 */

#include "gorlab/algebra.hpp"
#include "gorlab/complex.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gorlab {

struct DgModule {
    Cdga A;
    int lo = 0;
    int hi = -1;  // inclusive window; queries outside throw
    // set when the module provably vanishes outside its label range, so a
    // degree beyond the window really is zero rather than merely unknown
    bool complete = false;
    std::map<int, std::vector<std::string>> labels;
    // dmat[n]: columns indexed by labels[n], values over labels[n+1];
    // absent entries mean zero.  act[{g, n}]: labels[n] -> labels[n + |g|].
    std::map<int, SparseMatrix> dmat;
    std::map<std::pair<int, int>, SparseMatrix> act;

    bool in_window(int n) const { return lo <= n && n <= hi; }

    void check_window(int n) const {
        if (!in_window(n))
            throw WindowExceeded("module degree " + std::to_string(n) + " outside [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

    int dim(int n) const {
        check_window(n);
        auto it = labels.find(n);
        return it == labels.end() ? 0 : static_cast<int>(it->second.size());
    }

    const std::string& label(int n, int i) const {
        check_window(n);
        return labels.at(n).at(i);
    }

    // d of basis element (n, i), over labels[n+1]; zero when n+1 leaves the window
    Vec d_col(int n, int i) const {
        check_window(n);
        auto it = dmat.find(n);
        if (it == dmat.end()) return {};
        return it->second.column(i);
    }

    Vec d_apply(int n, const Vec& v) const {
        check_window(n);
        auto it = dmat.find(n);
        if (it == dmat.end()) return {};
        return it->second.apply(v);
    }

    // generator action; the target degree must stay inside the window
    Vec act_apply(int g, int n, const Vec& v) const {
        check_window(n);
        check_window(n + A.generator(g).degree);
        auto it = act.find({g, n});
        if (it == act.end()) return {};
        return it->second.apply(v);
    }

    Vec act_monomial(const Monomial& m, int n, const Vec& v) const {
        Vec out = v;
        int at = n;
        for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it)
            for (int e = 0; e < it->second; ++e) {
                out = act_apply(it->first, at, out);
                at += A.generator(it->first).degree;
            }
        return out;
    }

    // action of a possibly inhomogeneous algebra element on a homogeneous vector
    Vec act_element(const Element& a, int n, const Vec& v, int target) const {
        Vec out;
        for (const auto& [m, c] : a.terms()) {
            if (n + m.degree != target)
                throw InputError("module action target degree mismatch");
            add_scaled(out, c, act_monomial(m, n, v));
        }
        return out;
    }
};

using ModulePtr = std::shared_ptr<const DgModule>;

namespace modules {

// the algebra as a module over itself, degrees [0, hi]
inline ModulePtr free_module(const Cdga& A, int hi = -1) {
    if (A.has_zero_gens())
        throw InputError("modules over algebras with degree-0 generators are not supported");
    if (hi < 0) hi = A.window();
    auto M = std::make_shared<DgModule>();
    M->A = A;
    M->lo = 0;
    M->hi = hi;
    int top = A.certified_finite_top();
    M->complete = (top >= 0 && top <= hi);
    std::map<int, std::map<std::string, int>> pos;
    for (int n = 0; n <= hi; ++n) {
        auto basis = A.basis(n);
        auto& lab = M->labels[n];
        for (const auto& m : basis) {
            pos[n][A.monomial_str(m)] = static_cast<int>(lab.size());
            lab.push_back(A.monomial_str(m));
        }
        if (lab.empty()) M->labels.erase(n);
    }
    auto to_vec = [&](const Element& e, int n) {
        Vec v;
        for (const auto& [m, c] : e.terms()) set_entry(v, pos.at(n).at(A.monomial_str(m)), c);
        return v;
    };
    for (int n = 0; n <= hi; ++n) {
        auto basis = A.basis(n);
        if (basis.empty()) continue;
        if (n + 1 <= hi) {
            std::vector<Vec> cols;
            for (const auto& m : basis)
                cols.push_back(to_vec(Element(A, TermMap{{m, Rational(1)}}).d(), n + 1));
            M->dmat[n] = SparseMatrix::from_columns(M->dim(n + 1), cols);
        }
        for (int g = 0; g < A.size(); ++g) {
            int t = n + A.generator(g).degree;
            if (t > hi) continue;
            std::vector<Vec> cols;
            for (const auto& m : basis)
                cols.push_back(to_vec(A.gen(g) * Element(A, TermMap{{m, Rational(1)}}), t));
            M->act[{g, n}] = SparseMatrix::from_columns(M->dim(t), cols);
        }
    }
    return M;
}

// the ground field in degree 0; every generator acts by zero
inline ModulePtr ground_module(const Cdga& A) {
    if (A.has_zero_gens())
        throw InputError("modules over algebras with degree-0 generators are not supported");
    auto M = std::make_shared<DgModule>();
    M->A = A;
    M->lo = 0;
    M->hi = A.window();
    M->complete = true;
    M->labels[0] = {"1"};
    return M;
}

// same module, wider window, zeros outside the original one
inline ModulePtr extend_window(const ModulePtr& M, int lo, int hi) {
    if (lo > M->lo || hi < M->hi) throw InputError("extend_window only widens");
    auto N = std::make_shared<DgModule>(*M);
    N->lo = lo;
    N->hi = hi;
    return N;
}

// linear dual with reversed grading; label of m-dual is the label of m
// with a trailing apostrophe
inline ModulePtr dual_module(const ModulePtr& M) {
    auto N = std::make_shared<DgModule>();
    N->A = M->A;
    N->lo = -M->hi;
    N->hi = -M->lo;
    N->complete = M->complete;
    for (const auto& [n, lab] : M->labels) {
        auto& dst = N->labels[-n];
        for (const auto& l : lab) dst.push_back(l + "'");
    }
    // (d f)(m) = -(-1)^{|f|} f(dm): the dual of column j at degree p picks up
    // every m_i at p-1 whose differential contains m_j
    for (const auto& [p, lab] : M->labels) {
        int rows = static_cast<int>(lab.size());
        if (!M->in_window(p - 1) || M->dim(p - 1) == 0) continue;
        std::vector<Vec> cols;
        cols.resize(rows);
        int sgn = (p % 2 == 0) ? -1 : 1;  // -(-1)^{|f|}, |f| = -p
        for (int i = 0; i < M->dim(p - 1); ++i) {
            Vec di = M->d_col(p - 1, i);
            for (const auto& [j, c] : di) set_entry(cols[j], i, sgn * c);
        }
        N->dmat[-p] = SparseMatrix::from_columns(M->dim(p - 1), cols);
    }
    // (g . f)(m) = (-1)^{|g||f|} f(g . m)
    for (int g = 0; g < N->A.size(); ++g) {
        int dg = N->A.generator(g).degree;
        for (const auto& [p, lab] : M->labels) {
            // dual of degree -p maps to -p + dg, i.e. transports from p - dg
            int src = p - dg;
            if (!M->in_window(src) || M->dim(src) == 0) continue;
            int rows = static_cast<int>(lab.size());
            std::vector<Vec> cols;
            cols.resize(rows);
            int sgn = (dg % 2 != 0 && p % 2 != 0) ? -1 : 1;  // (-1)^{|g| p}
            auto it = M->act.find({g, src});
            if (it != M->act.end()) {
                for (int i = 0; i < M->dim(src); ++i) {
                    Vec gi = it->second.column(i);
                    for (const auto& [j, c] : gi) set_entry(cols[j], i, sgn * c);
                }
            }
            N->act[{g, -p}] = SparseMatrix::from_columns(M->dim(src), cols);
        }
    }
    return N;
}

// module axioms over the interior of the window; throws AssertionError
inline void validate_module(const DgModule& M) {
    const Cdga& A = M.A;
    for (int n = M.lo; n <= M.hi; ++n) {
        for (int i = 0; i < M.dim(n); ++i) {
            Vec x;
            set_entry(x, i, Rational(1));
            if (n + 2 <= M.hi) {
                Vec dd = M.d_apply(n + 1, M.d_apply(n, x));
                if (!is_zero(dd)) throw AssertionError("module differential does not square to zero");
            }
            for (int g = 0; g < A.size(); ++g) {
                int dg = A.generator(g).degree;
                if (n + dg + 1 > M.hi || n + dg < M.lo) continue;
                // d(g.x) = dg.x + (-1)^{|g|} g.dx
                Vec lhs = M.d_apply(n + dg, M.act_apply(g, n, x));
                Vec rhs;
                if (!A.d_of_gen(g).empty())
                    rhs = M.act_element(Element(A, A.d_of_gen(g)), n, x, n + dg + 1);
                if (n + 1 <= M.hi) {
                    Vec gdx = M.act_apply(g, n + 1, M.d_apply(n, x));
                    add_scaled(rhs, Rational(dg % 2 ? -1 : 1), gdx);
                }
                if (!is_zero(sum(lhs, scaled(Rational(-1), rhs))))
                    throw AssertionError("module action violates the Leibniz rule");
                // associativity against every second generator
                for (int h = 0; h < A.size(); ++h) {
                    int dh = A.generator(h).degree;
                    if (n + dg + dh > M.hi) continue;
                    Vec one_by_one = M.act_apply(h, n + dg, M.act_apply(g, n, x));
                    Element prod = A.gen(h) * A.gen(g);
                    Vec together = M.act_element(prod, n, x, n + dg + dh);
                    if (!is_zero(sum(together, scaled(Rational(-1), one_by_one))))
                        throw AssertionError("module action is not associative");
                }
            }
        }
    }
}

}  // namespace modules

// a module as a band-free complex, for the homology machinery
inline BandedComplex module_complex(const ModulePtr& M) {
    BandedComplex cx;
    cx.growth = 0;
    cx.basis = [M](int deg, int) {
        std::vector<std::string> out;
        if (M->in_window(deg))
            for (int i = 0; i < M->dim(deg); ++i) out.push_back(M->label(deg, i));
        return out;
    };
    cx.d = [M](int deg, const std::string& label) {
        std::map<std::string, Rational> out;
        if (!M->in_window(deg) || !M->in_window(deg + 1)) return out;
        const auto& lab = M->labels.at(deg);
        int i = -1;
        for (int k = 0; k < static_cast<int>(lab.size()); ++k)
            if (lab[k] == label) { i = k; break; }
        if (i < 0) throw AssertionError("unknown module label " + label);
        for (const auto& [j, c] : M->d_col(deg, i)) out.emplace(M->label(deg + 1, j), c);
        return out;
    };
    return cx;
}

// homology over the interior degrees [lo+1, hi-1] of the window
inline GradedDims module_homology(const ModulePtr& M) {
    BandedComplex cx = module_complex(M);
    return banded_homology(cx, M->lo + 1, M->hi - 1, 0);
}

}  // namespace gorlab
