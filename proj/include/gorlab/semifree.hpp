#pragma once

/*
 * Minimal semifree resolutions of DG modules.
 *
 * A resolution is a free extension F = A (x) span(w_1, w_2, ...) with a
 * comparison map phi: F -> M.  It is built degree by degree from the bottom
 * of M: at stage n, first adjoin cycles hitting the cokernel of H^n(phi),
 * then kill the kernel of H^{n+1}(phi) with degree-n generators whose
 * differential is the offending cycle.  Generators of a later stage never
 * appear in earlier differentials, and since no generator of degree n+1
 * exists when a kernel cycle at n+1 is killed, the differential lands in
 * A^+ . F automatically: minimality is by construction and re-verified.
 *
 * When the algebra has degree-1 elements, fresh generators can feed new
 * kernel classes at the same stage, so each stage loops to a fixed point
 * (with a hard guard against runaways).
 *
 * The generator count per degree of a minimal resolution is the invariant
 * the callers want; it is certified for every degree up to the last
 * completed stage, and requires module data two degrees further up.
 */

#include "gorlab/algebra.hpp"
#include "gorlab/complex.hpp"
#include "gorlab/dg_module.hpp"
#include "gorlab/graded_dims.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gorlab {

struct Resolution {
    struct Gen {
        std::string name;
        int degree = 0;
        std::map<int, Element> dval;  // generator index -> coefficient in A
        Vec phi;                      // image over M.labels[degree]
    };

    Cdga A;
    ModulePtr M;
    int top_stage = 0;  // stages completed through this degree
    std::vector<Gen> gens;

    // free basis of F at degree n: algebra monomial tensor generator
    std::vector<std::pair<Monomial, int>> basis(int n) const {
        std::vector<std::pair<Monomial, int>> out;
        for (int k = 0; k < static_cast<int>(gens.size()); ++k) {
            int rest = n - gens[k].degree;
            if (rest < 0) continue;
            for (const auto& m : A.basis(rest)) out.emplace_back(m, k);
        }
        return out;
    }

    std::string label(const std::pair<Monomial, int>& b) const {
        return A.monomial_str(b.first) + "|" + gens[b.second].name;
    }

    // d(m (x) w) = dm (x) w + (-1)^{|m|} sum (m a_i) (x) w_i
    std::map<std::string, Rational> d_of(const std::pair<Monomial, int>& b) const {
        std::map<std::string, Rational> out;
        const auto& [m, k] = b;
        Element me(A, TermMap{{m, Rational(1)}});
        Element dm = me.d();
        for (const auto& [mm, c] : dm.terms()) {
            std::string l = A.monomial_str(mm) + "|" + gens[k].name;
            out[l] += c;
            if (out[l] == 0) out.erase(l);
        }
        Rational sgn = (m.degree % 2) ? -1 : 1;
        for (const auto& [i, a] : gens[k].dval) {
            Element prod = me * a;
            for (const auto& [mm, c] : prod.terms()) {
                std::string l = A.monomial_str(mm) + "|" + gens[i].name;
                out[l] += sgn * c;
                if (out[l] == 0) out.erase(l);
            }
        }
        return out;
    }

    // phi(m (x) w) = m . phi(w), a vector over M.labels[n]
    Vec phi_of(const std::pair<Monomial, int>& b) const {
        const auto& [m, k] = b;
        return M->act_monomial(m, gens[k].degree, gens[k].phi);
    }

    BandedComplex complex() const {
        auto copy = std::make_shared<Resolution>(*this);
        BandedComplex cx;
        cx.growth = 0;
        cx.basis = [copy](int deg, int) {
            std::vector<std::string> out;
            for (const auto& b : copy->basis(deg)) out.push_back(copy->label(b));
            return out;
        };
        cx.d = [copy](int deg, const std::string& label) {
            for (const auto& b : copy->basis(deg))
                if (copy->label(b) == label) return copy->d_of(b);
            throw AssertionError("unknown resolution label " + label);
        };
        return cx;
    }

    // phi on a coordinate vector over basis(n), as a vector over M.labels[n]
    Vec phi_apply(int n, const Vec& v) const {
        auto bs = basis(n);
        Vec out;
        for (const auto& [i, c] : v) add_scaled(out, c, phi_of(bs.at(i)));
        return out;
    }

    // generator count per degree; exact for degrees <= top_stage
    GradedDims generator_dims() const {
        GradedDims out;
        out.lo = M->lo;
        out.hi = top_stage;
        std::map<int, int> hist;
        for (const auto& g : gens) ++hist[g.degree];
        for (const auto& [n, c] : hist) out.set(n, c);
        return out;
    }
};

namespace detail {

// express an ambient vector of F at degree n as generator coefficients
inline std::map<int, Element> decompose_over_gens(const Resolution& F, int n, const Vec& v) {
    auto bs = F.basis(n);
    std::map<int, TermMap> parts;
    for (const auto& [i, c] : v) {
        const auto& [m, k] = bs.at(i);
        parts[k].emplace(m, c);
    }
    std::map<int, Element> out;
    for (auto& [k, t] : parts) out.emplace(k, Element(F.A, std::move(t)));
    return out;
}

}  // namespace detail

/*
 * Build the minimal semifree resolution of M through the given stage.
 * Requires module data at least two degrees above the top stage.
 * `reverse_ties` flips the representative choice inside every homology
 * computation; generator counts must come out the same either way.
 */
inline Resolution resolve_module(const ModulePtr& M, int top_stage, bool reverse_ties = false) {
    if (M->A.has_zero_gens())
        throw InputError("resolutions need an algebra without degree-0 generators");
    if (M->hi < top_stage + 2)
        throw InputError("module window too small: resolving through stage " +
                         std::to_string(top_stage) + " needs degrees up to " +
                         std::to_string(top_stage + 2));
    Resolution F;
    F.A = M->A;
    F.M = M;
    F.top_stage = top_stage;

    BandedComplex cxM = module_complex(M);
    int counter = 0;
    for (int dd = M->lo; dd <= top_stage; ++dd) {
        for (int guard = 0;; ++guard) {
            if (guard > 60)
                throw AssertionError("resolution stage " + std::to_string(dd) +
                                     " does not stabilize");
            bool added = false;

            // cokernel of H^dd(phi): adjoin cycle generators
            {
                ClassSpace HM(cxM, dd, reverse_ties);
                if (HM.dim() > 0) {
                    BandedComplex cxF = F.complex();
                    ClassSpace HF(cxF, dd, reverse_ties);
                    Subspace image(HM.dim());
                    for (const auto& r : HF.reps.rows())
                        image.insert(HM.coords(F.phi_apply(dd, r)));
                    Subspace full(HM.dim());
                    for (int j = 0; j < HM.dim(); ++j) {
                        Vec e;
                        set_entry(e, j, Rational(1));
                        full.insert(std::move(e));
                    }
                    Subspace missing = coset_basis(image, full);
                    for (const auto& mv : missing.rows()) {
                        Resolution::Gen g;
                        g.degree = dd;
                        g.name = "g" + std::to_string(counter++);
                        auto hreps = HM.reps.rows();
                        for (const auto& [j, c] : mv) add_scaled(g.phi, c, hreps.at(j));
                        F.gens.push_back(std::move(g));
                        added = true;
                    }
                }
            }

            // kernel of H^{dd+1}(phi): kill with degree-dd generators
            {
                BandedComplex cxF = F.complex();
                ClassSpace HF(cxF, dd + 1, reverse_ties);
                if (HF.dim() > 0) {
                    ClassSpace HM1(cxM, dd + 1, reverse_ties);
                    auto freps = HF.reps.rows();
                    std::vector<Vec> cols;
                    for (const auto& r : freps) cols.push_back(HM1.coords(F.phi_apply(dd + 1, r)));
                    SparseMatrix T =
                        SparseMatrix::from_columns(HM1.dim(), cols);
                    EchelonResult e = echelonize(T);
                    for (const auto& kv : e.kernel.rows()) {
                        Vec z;
                        for (const auto& [r, c] : kv) add_scaled(z, c, freps.at(r));
                        Resolution::Gen g;
                        g.degree = dd;
                        g.name = "g" + std::to_string(counter++);
                        g.dval = detail::decompose_over_gens(F, dd + 1, z);
                        Vec fz = F.phi_apply(dd + 1, z);
                        if (!is_zero(fz)) {
                            auto it = M->dmat.find(dd);
                            if (it == M->dmat.end())
                                throw AssertionError("kernel image has no preimage space");
                            auto y = solve(it->second, fz);
                            if (!y)
                                throw AssertionError("kernel class image is not a boundary");
                            g.phi = *y;
                        }
                        F.gens.push_back(std::move(g));
                        added = true;
                    }
                }
            }

            if (!added) break;
        }
    }
    return F;
}

/*
 * Postcondition check: phi is a chain map, H(phi) is an isomorphism for all
 * degrees through the top stage, and the resolution is minimal (differential
 * coefficients without constant term).  Throws AssertionError.
 */
inline void verify_resolution(const Resolution& F) {
    for (const auto& g : F.gens)
        for (const auto& [i, a] : g.dval)
            for (const auto& [m, c] : a.terms())
                if (m.is_unit())
                    throw AssertionError("resolution is not minimal at " + g.name);

    BandedComplex cxF = F.complex();
    BandedComplex cxM = module_complex(F.M);
    for (int n = F.M->lo; n <= F.top_stage + 1; ++n) {
        // chain map: phi(d x) = d(phi x)
        auto bs = F.basis(n);
        detail::Indexed next(cxF.basis(n + 1, 0));
        for (const auto& b : bs) {
            Vec dx = next.to_vec(F.d_of(b));
            Vec lhs = F.phi_apply(n + 1, dx);
            Vec rhs = F.M->d_apply(n, F.phi_of(b));
            if (!is_zero(sum(lhs, scaled(Rational(-1), rhs))))
                throw AssertionError("comparison map is not a chain map at degree " +
                                     std::to_string(n));
        }
    }
    for (int n = F.M->lo; n <= F.top_stage; ++n) {
        ClassSpace HM(cxM, n);
        ClassSpace HF(cxF, n);
        if (HF.dim() != HM.dim())
            throw AssertionError("H(phi) dimension mismatch at degree " + std::to_string(n));
        Subspace image(HM.dim());
        for (const auto& r : HF.reps.rows()) image.insert(HM.coords(F.phi_apply(n, r)));
        if (image.dim() != HM.dim())
            throw AssertionError("H(phi) is not surjective at degree " + std::to_string(n));
    }
}

/*
 * H(Hom_A(F, N)) from a resolution of M: the derived Hom of (M, N).  A basis
 * element of Hom degree n sends one generator w to one basis vector of
 * N^{n+|w|}; the differential is
 *
 *     (d psi)(w) = d_N(psi(w)) - (-1)^{|psi|} psi(d w),
 *
 * with psi(a x) = (-1)^{|psi||a|} a psi(x) for the A-linearity of graded
 * maps.  An incomplete target silently zeroes functional components beyond
 * its window, so the complex is only the true one through degree
 * N.hi - max generator degree; requests past that margin are refused.
 */
inline GradedDims hom_dims(const Resolution& F, const ModulePtr& N, int lo, int hi) {
    if (!N->A.same(F.A)) throw MixedAlgebras("Hom over different algebras");
    if (!N->complete) {
        int maxw = 0;
        for (const auto& g : F.gens) maxw = std::max(maxw, g.degree);
        if (hi > N->hi - maxw - 2)
            throw InputError("derived Hom against an incomplete target is exact only up to "
                             "degree " + std::to_string(N->hi - maxw - 2) +
                             "; widen the module window");
    }

    auto copy = std::make_shared<Resolution>(F);
    BandedComplex cx;
    cx.growth = 0;
    auto list = [copy, N](int deg) {
        // pairs (generator k, N-label j at deg + |w_k|)
        std::vector<std::pair<int, int>> out;
        for (int k = 0; k < static_cast<int>(copy->gens.size()); ++k) {
            int t = deg + copy->gens[k].degree;
            if (!N->in_window(t)) continue;
            for (int j = 0; j < N->dim(t); ++j) out.emplace_back(k, j);
        }
        return out;
    };
    cx.basis = [copy, N, list](int deg, int) {
        std::vector<std::string> out;
        for (const auto& [k, j] : list(deg))
            out.push_back(copy->gens[k].name + "|" +
                          N->label(deg + copy->gens[k].degree, j));
        return out;
    };
    cx.d = [copy, N, list](int deg, const std::string& label) {
        auto entries = list(deg);
        int found = -1;
        auto labels_here = [&](int idx) {
            const auto& [k, j] = entries[idx];
            return copy->gens[k].name + "|" + N->label(deg + copy->gens[k].degree, j);
        };
        for (int idx = 0; idx < static_cast<int>(entries.size()); ++idx)
            if (labels_here(idx) == label) { found = idx; break; }
        if (found < 0) throw AssertionError("unknown Hom label " + label);
        auto [k0, j0] = entries[found];
        int t0 = deg + copy->gens[k0].degree;

        std::map<std::pair<int, int>, Rational> acc;
        // d_N(psi(w_k0))
        if (N->in_window(t0 + 1)) {
            Vec e;
            set_entry(e, j0, Rational(1));
            for (const auto& [j, c] : N->d_apply(t0, e)) acc[{k0, j}] += c;
        }
        // -(-1)^{|psi|} psi(d w_k), nonzero when d w_k involves w_k0
        Rational outer = (deg % 2) ? 1 : -1;
        for (int k = 0; k < static_cast<int>(copy->gens.size()); ++k) {
            auto it = copy->gens[k].dval.find(k0);
            if (it == copy->gens[k].dval.end()) continue;
            const Element& a = it->second;
            int ta = copy->gens[k].degree + 1 + deg;  // = t0 + |a|
            if (!N->in_window(ta)) continue;
            Vec e;
            set_entry(e, j0, Rational(1));
            // psi(a w_k0) = (-1)^{|psi||a|} a psi(w_k0)
            for (const auto& [m, c] : a.terms()) {
                Rational inner = (deg % 2 && m.degree % 2) ? -1 : 1;
                Vec av = N->act_monomial(m, t0, e);
                for (const auto& [j, cv] : av) acc[{k, j}] += outer * inner * c * cv;
            }
        }
        std::map<std::string, Rational> out;
        for (const auto& [kj, c] : acc) {
            if (c == 0) continue;
            out[copy->gens[kj.first].name + "|" +
                N->label(deg + 1 + copy->gens[kj.first].degree, kj.second)] = c;
        }
        return out;
    };
    return banded_homology(cx, lo, hi, 0);
}

}  // namespace gorlab
