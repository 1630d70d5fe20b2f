#pragma once

/*
 * Sullivan-style constructions over a free or presented CDGA:
 *
 *  - Lambda-extensions R -> R (x) ΛZ with validated triangularity, and the
 *    fiber algebra ΛZ obtained by killing the base;
 *  - acyclic closures R (x) ΛU with one closure generator per algebra
 *    generator and verified H = Q;
 *  - the complexes M (x)_R Rbar and Hom_R(Rbar, N) those closures induce;
 *  - minimal models of simply connected algebras;
 *  - the fiber decomposition ΛZ = C + dC + E and the contraction
 *    eta: R (x) ΛZ -> (R (x) E, delta) it produces;
 *  - the ΛV^1 splitting of a minimal algebra.
 *
 * Generator indices are the load-bearing convention: a base algebra always
 * occupies the leading indices of its total algebra, so base monomials mean
 * the same thing in both, and splitting a total monomial into base and fiber
 * parts never costs a Koszul sign.  Whenever generators are permuted or
 * projected, terms are re-multiplied factor by factor in their original
 * order, which re-derives every sign from scratch.
 */

#include "gorlab/algebra.hpp"
#include "gorlab/cohomology.hpp"
#include "gorlab/complex.hpp"
#include "gorlab/dg_module.hpp"
#include "gorlab/graded_dims.hpp"
#include "gorlab/linalg.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace gorlab {

/*
 * Push a term map through a generator substitution: factor g becomes
 * gen_map[g] in dst, and each term is re-multiplied in its original factor
 * order so Koszul signs are re-derived.  A negative image kills the whole
 * term (projection).
 */
inline Element map_terms(const Cdga& dst, const TermMap& terms,
                         const std::vector<int>& gen_map) {
    Element out = dst.zero();
    for (const auto& [m, c] : terms) {
        Element prod = dst.scalar(c);
        bool dropped = false;
        for (const auto& [g, e] : m.factors) {
            int img = gen_map.at(g);
            if (img < 0) { dropped = true; break; }
            prod = prod * dst.gen(img).pow(e);
        }
        if (!dropped) out = out + prod;
    }
    return out;
}

struct LambdaExtension {
    Cdga base;
    Cdga total;   // base generators lead at identical indices
    int n_base = 0;

    int fiber_count() const { return total.size() - n_base; }
};

namespace detail {

// total monomial = (base part) * (fiber part) with no sign: base indices
// lead.  The base part keeps total indices (valid in the base algebra too);
// the fiber part is reindexed from zero.
inline std::pair<Monomial, Monomial> split_monomial(const Cdga& total, int n_base,
                                                    const Monomial& m) {
    Monomial a, f;
    for (const auto& [g, e] : m.factors) {
        const Generator& gen = total.generator(g);
        Monomial& part = (g < n_base) ? a : f;
        part.factors.emplace_back(g < n_base ? g : g - n_base, e);
        part.degree += gen.degree * e;
        part.length += e;
        if (gen.degree == 0) part.zero_length += e;
    }
    return {a, f};
}

}  // namespace detail

/*
 * Bundle base and total into a validated extension.  The leading generators
 * of the total algebra must replicate the base generators, names, degrees
 * and differentials alike, and no relation term may live purely on the base,
 * otherwise the base would not embed.
 */
inline LambdaExtension make_extension(const Cdga& base, const Cdga& total) {
    if (!base.is_free()) throw InputError("extension bases must be free algebras");
    int n = base.size();
    if (total.size() < n) throw InputError("total algebra is missing base generators");
    std::vector<int> incl(n);
    std::iota(incl.begin(), incl.end(), 0);
    for (int i = 0; i < n; ++i) {
        const Generator& gb = base.generator(i);
        const Generator& gt = total.generator(i);
        if (gb.name != gt.name || gb.degree != gt.degree)
            throw InputError("base generator " + gb.name +
                             " does not lead the total algebra");
        for (const auto& [m, c] : total.d_of_gen(i))
            for (const auto& [g, e] : m.factors)
                if (g >= n)
                    throw InputError("d(" + gb.name + ") leaves the base");
        Element want = map_terms(total, base.d_of_gen(i), incl);
        Element have = total.from_terms(total.d_of_gen(i));
        if (!(want == have))
            throw InputError("d(" + gb.name + ") differs between base and total");
    }
    for (const auto& rel : total.relations())
        for (const auto& [m, c] : rel) {
            bool touches_fiber = false;
            for (const auto& [g, e] : m.factors)
                if (g >= n) touches_fiber = true;
            if (!touches_fiber)
                throw InputError("relation term " + total.monomial_str(m) +
                                 " lives purely on the base");
        }
    return LambdaExtension{base, total, n};
}

/*
 * The fiber algebra ΛZ: kill every base generator inside the total one.
 * Fiber generators are reindexed from zero; stages are preserved explicitly
 * so the triangular filtration survives the reindexing.  d-squared and the
 * projected relation ideal are re-validated by the builder.
 */
inline Cdga extension_fiber(const LambdaExtension& ext) {
    int n = ext.n_base;
    const Cdga& T = ext.total;
    bool zero = false;
    for (int i = n; i < T.size(); ++i)
        if (T.generator(i).degree == 0) zero = true;
    CdgaBuilder b(T.window(), T.cap(), zero);
    for (int i = n; i < T.size(); ++i) {
        const Generator& g = T.generator(i);
        b.add_generator(g.name, g.degree, T.core().effective_stage(i), g.block);
    }
    Cdga part = b.partial();
    std::vector<int> proj(T.size(), -1);
    for (int i = n; i < T.size(); ++i) proj[i] = i - n;
    for (int i = n; i < T.size(); ++i)
        b.set_differential(T.generator(i).name, map_terms(part, T.d_of_gen(i), proj));
    for (const auto& rel : T.relations()) {
        Element r = map_terms(part, rel, proj);
        if (!r.is_zero()) b.add_relation(r);
    }
    return b.finish();
}

struct AcyclicClosure {
    LambdaExtension ext;       // base R, total R (x) ΛU
    int cap = 6;               // word-length band used for verification
    int verified_through = 0;  // H(total) = Q checked up to this degree
};

/*
 * Acyclic closure of a free Sullivan algebra: one generator vbar per
 * generator v, |vbar| = |v| - 1, d(vbar) = v - Phi where Phi solves
 * d(Phi) = d(v) over the monomials on strictly earlier stages and the
 * closure generators already present.  The solver returns echelon-minimal
 * corrections, so the closure is deterministic.  H(R (x) ΛU) = Q is then
 * verified degreewise with a word-cap stability check.
 */
inline AcyclicClosure acyclic_closure(const Cdga& R, int cap = -1) {
    if (!R.is_free())
        throw InputError("acyclic closures are built over free Sullivan algebras; "
                         "quotient algebras go through the resolution route");
    if (R.has_zero_gens())
        throw InputError("acyclic closures need generators in positive degrees");
    int n = R.size();
    if (cap < 0) cap = std::max(R.cap(), 6);
    int maxstage = -1;
    bool zero = false;
    for (int i = 0; i < n; ++i) {
        maxstage = std::max(maxstage, R.core().effective_stage(i));
        if (R.generator(i).degree == 1) zero = true;
        if (R.generator(i).degree + 1 > R.window())
            throw InputError("window too small for generator " + R.generator(i).name);
    }

    CdgaBuilder b(R.window(), cap, zero);
    std::vector<int> incl(n);
    std::iota(incl.begin(), incl.end(), 0);
    for (int i = 0; i < n; ++i) {
        const Generator& g = R.generator(i);
        b.add_generator(g.name, g.degree, R.core().effective_stage(i),
                        Generator::Block::base);
    }
    {
        Cdga part = b.partial();
        for (int i = 0; i < n; ++i)
            b.set_differential(R.generator(i).name, part.from_terms(R.d_of_gen(i)));
    }

    for (int i = 0; i < n; ++i) {
        const Generator& v = R.generator(i);
        int stage_i = R.core().effective_stage(i);
        b.add_generator(v.name + "~", v.degree - 1, maxstage + 1 + i,
                        Generator::Block::fiber);
        Cdga part = b.partial();
        Element dv = part.from_terms(R.d_of_gen(i));
        if (dv.is_zero()) {
            b.set_differential(v.name + "~", part.gen(i));
            continue;
        }
        // candidate monomials for Phi: factors on earlier stages or earlier
        // closure generators only.  v itself must be excluded, otherwise the
        // solver would happily return Phi = v.
        std::vector<Monomial> cand;
        for (const auto& m : part.basis_banded(v.degree, cap)) {
            bool ok = true;
            for (const auto& [g, e] : m.factors) {
                bool earlier = (g < n) ? R.core().effective_stage(g) < stage_i
                                       : (g - n) < i;
                if (!earlier) { ok = false; break; }
            }
            if (ok) cand.push_back(m);
        }
        std::set<std::string> label_set;
        std::map<std::string, Rational> rhs;
        for (const auto& [m, c] : dv.terms()) {
            rhs[part.monomial_str(m)] = c;
            label_set.insert(part.monomial_str(m));
        }
        std::vector<std::map<std::string, Rational>> dcols;
        for (const auto& m : cand) {
            Element dm = Element(part, TermMap{{m, Rational(1)}}).d();
            auto& col = dcols.emplace_back();
            for (const auto& [mm, c] : dm.terms()) {
                col[part.monomial_str(mm)] = c;
                label_set.insert(part.monomial_str(mm));
            }
        }
        detail::Indexed ix(std::vector<std::string>(label_set.begin(), label_set.end()));
        std::vector<Vec> cols;
        for (const auto& col : dcols) cols.push_back(ix.to_vec(col));
        auto sol = solve(SparseMatrix::from_columns(static_cast<int>(ix.labels.size()), cols),
                         ix.to_vec(rhs));
        if (!sol)
            throw SolveFailed("no correction term for " + v.name +
                              " at word cap " + std::to_string(cap));
        Element phi = part.zero();
        for (const auto& [j, c] : *sol)
            phi = phi + c * Element(part, TermMap{{cand[j], Rational(1)}});
        b.set_differential(v.name + "~", part.gen(i) - phi);
    }

    Cdga total = b.finish();
    BandedComplex cx = algebra_complex(total);
    int hi = R.window() - 2;
    int band = total.has_zero_gens() ? cap : 0;
    for (int deg = 0; deg <= hi; ++deg) {
        HomologySlice s = banded_homology_at(cx, deg, band);
        if (!s.stable)
            throw StabilityFailed("closure cohomology at degree " + std::to_string(deg) +
                                  " does not stabilize; raise the word cap");
        if (s.count != (deg == 0 ? 1 : 0))
            throw AssertionError("closure has residual cohomology at degree " +
                                 std::to_string(deg));
    }
    return AcyclicClosure{LambdaExtension{R, total, n}, cap, hi};
}

/*
 * M (x)_R (R (x) ΛU) as a banded complex: basis pairs "m-label|mu", graded
 * by total degree, band = word mass of the fiber monomial.  Writing
 * d(mu) = sum c_t a_t mu_t with base monomials a_t pulled in front (no sign,
 * base indices lead), the tensor differential is
 *
 *   d(m (x) mu) = dm (x) mu
 *               + sum_t (-1)^{|m|(1+|a_t|)} c_t (a_t . m) (x) mu_t,
 *
 * the inner sign converting the left action on M into the right one the
 * balanced product needs.  Module degrees outside M's window are treated as
 * zero; the caller owns that soundness (complete M, or a stability check).
 */
inline BandedComplex closure_tensor_complex(const ModulePtr& M, const AcyclicClosure& cl) {
    if (!M->A.same(cl.ext.base)) throw MixedAlgebras("module is not over the closure base");
    Cdga total = cl.ext.total;
    Cdga fiber = extension_fiber(cl.ext);
    int n_base = cl.ext.n_base;
    std::vector<int> lift(fiber.size());
    for (int i = 0; i < fiber.size(); ++i) lift[i] = n_base + i;

    BandedComplex cx;
    cx.growth = total.diff_growth();
    int fiber_limit = fiber.window() + CdgaCore::slack;
    cx.basis = [M, fiber, fiber_limit](int deg, int band) {
        std::vector<std::string> out;
        int qmax = std::min(deg - M->lo, fiber_limit);
        for (int q = 0; q <= qmax; ++q) {
            int p = deg - q;
            if (!M->in_window(p) || M->dim(p) == 0) continue;
            for (const auto& mu : fiber.basis_banded(q, band))
                for (int i = 0; i < M->dim(p); ++i)
                    out.push_back(M->label(p, i) + "|" + fiber.monomial_str(mu));
        }
        return out;
    };
    cx.d = [M, total, fiber, n_base, lift](int deg, const std::string& label) {
        std::size_t bar = label.rfind('|');
        if (bar == std::string::npos) throw AssertionError("malformed tensor label " + label);
        std::string mlab = label.substr(0, bar);
        Monomial mu = detail::monomial_of_label(fiber, label.substr(bar + 1));
        int p = deg - mu.degree;
        int i = -1;
        const auto& labs = M->labels.at(p);
        for (int k = 0; k < static_cast<int>(labs.size()); ++k)
            if (labs[k] == mlab) { i = k; break; }
        if (i < 0) throw AssertionError("unknown module label " + mlab);

        std::map<std::string, Rational> out;
        auto put = [&](const std::string& l, const Rational& c) {
            out[l] += c;
            if (out[l] == 0) out.erase(l);
        };
        std::string fstr = fiber.monomial_str(mu);
        if (M->in_window(p + 1))
            for (const auto& [j, c] : M->d_col(p, i))
                put(M->label(p + 1, j) + "|" + fstr, c);

        Element dmu = map_terms(total, TermMap{{mu, Rational(1)}}, lift).d();
        Vec unit;
        set_entry(unit, i, Rational(1));
        for (const auto& [mm, c] : dmu.terms()) {
            auto [a, f] = detail::split_monomial(total, n_base, mm);
            int target = p + a.degree;
            if (!M->in_window(target)) continue;
            Rational sgn = ((p % 2) != 0 && a.degree % 2 == 0) ? -1 : 1;
            Vec am = M->act_monomial(a, p, unit);
            for (const auto& [j, cv] : am)
                put(M->label(target, j) + "|" + fiber.monomial_str(f), sgn * c * cv);
        }
        return out;
    };
    return cx;
}

/*
 * Hom_R(R (x) ΛU, N) as a banded complex.  A graded R-linear functional is
 * pinned by its values on the free basis {1 (x) mu}: basis pairs "mu|m-label"
 * of degree |m| - |mu|, band = word mass of mu.  From
 * d(psi) = d_N psi - (-1)^{|psi|} psi d and psi(a x) = (-1)^{|psi||a|} a psi(x),
 *
 *   (d e_{mu,m})(nu) = [nu == mu] d_N(m)
 *       - sum over terms c a mu of d(nu) of (-1)^{|psi|(1+|a|)} c (a . m).
 *
 * Candidate nu run over fiber degrees |mu|-1 .. |mu|-1+max base degree and
 * word mass at most band+1: one Leibniz step frees at most one degree-0
 * exponent.  Functional components beyond N's window are dropped; that is
 * only the true complex when N is complete.
 */
inline BandedComplex closure_hom_complex(const AcyclicClosure& cl, const ModulePtr& N) {
    if (!N->A.same(cl.ext.base)) throw MixedAlgebras("module is not over the closure base");
    Cdga total = cl.ext.total;
    Cdga fiber = extension_fiber(cl.ext);
    int n_base = cl.ext.n_base;
    std::vector<int> lift(fiber.size());
    for (int i = 0; i < fiber.size(); ++i) lift[i] = n_base + i;
    int maxA = 0;
    for (int i = 0; i < n_base; ++i)
        maxA = std::max(maxA, total.generator(i).degree);

    BandedComplex cx;
    cx.growth = fiber.has_zero_gens() ? 1 : 0;
    int fiber_limit = fiber.window() + CdgaCore::slack;
    cx.basis = [N, fiber, fiber_limit](int deg, int band) {
        std::vector<std::string> out;
        int qmax = std::min(N->hi - deg, fiber_limit);
        for (int q = std::max(0, N->lo - deg); q <= qmax; ++q) {
            int t = deg + q;
            if (N->dim(t) == 0) continue;
            for (const auto& mu : fiber.basis_banded(q, band))
                for (int j = 0; j < N->dim(t); ++j)
                    out.push_back(fiber.monomial_str(mu) + "|" + N->label(t, j));
        }
        return out;
    };
    cx.d = [N, total, fiber, n_base, lift, maxA, fiber_limit](int deg,
                                                             const std::string& label) {
        // split at the first bar: the fiber string never holds one, the
        // target label might
        std::size_t bar = label.find('|');
        if (bar == std::string::npos) throw AssertionError("malformed Hom label " + label);
        Monomial mu = detail::monomial_of_label(fiber, label.substr(0, bar));
        std::string mlab = label.substr(bar + 1);
        int t0 = deg + mu.degree;
        int j0 = -1;
        const auto& labs = N->labels.at(t0);
        for (int k = 0; k < static_cast<int>(labs.size()); ++k)
            if (labs[k] == mlab) { j0 = k; break; }
        if (j0 < 0) throw AssertionError("unknown module label " + mlab);

        std::map<std::string, Rational> out;
        auto put = [&](const std::string& l, const Rational& c) {
            out[l] += c;
            if (out[l] == 0) out.erase(l);
        };
        std::string fstr = fiber.monomial_str(mu);
        Vec unit;
        set_entry(unit, j0, Rational(1));
        if (N->in_window(t0 + 1))
            for (const auto& [j, c] : N->d_col(t0, j0))
                put(fstr + "|" + N->label(t0 + 1, j), c);

        bool psi_odd = (deg % 2) != 0;
        for (int q = std::max(0, mu.degree - 1);
             q <= std::min(mu.degree - 1 + maxA, fiber_limit); ++q) {
            for (const auto& nu : fiber.basis_banded(q, mu.zero_length + 1)) {
                Element dnu = map_terms(total, TermMap{{nu, Rational(1)}}, lift).d();
                for (const auto& [mm, c] : dnu.terms()) {
                    auto [a, f] = detail::split_monomial(total, n_base, mm);
                    if (!(f == mu)) continue;
                    int ta = t0 + a.degree;
                    if (!N->in_window(ta)) continue;
                    Rational sgn = (psi_odd && a.degree % 2 == 0) ? 1 : -1;
                    Vec am = N->act_monomial(a, t0, unit);
                    for (const auto& [j, cv] : am)
                        put(fiber.monomial_str(nu) + "|" + N->label(ta, j), sgn * c * cv);
                }
            }
        }
        return out;
    };
    return cx;
}

struct MinimalModel {
    Cdga model;
    std::vector<Element> images;  // target cocycle per model generator
    Cdga target;

    // extend generator images multiplicatively; signs come out of the
    // target's own multiplication
    Element eval(const Element& x) const {
        Element out = target.zero();
        for (const auto& [m, c] : x.terms()) {
            Element prod = target.scalar(c);
            for (const auto& [g, e] : m.factors) prod = prod * images.at(g).pow(e);
            out = out + prod;
        }
        return out;
    }
};

namespace detail {

inline Vec vec_of_element(const Cdga& A, const Element& e, const Indexed& ix) {
    std::map<std::string, Rational> terms;
    for (const auto& [m, c] : e.terms()) terms.emplace(A.monomial_str(m), c);
    return ix.to_vec(terms);
}

}  // namespace detail

/*
 * Minimal model of a simply connected presented algebra, built degree by
 * degree: at degree n, first adjoin closed generators hitting the cokernel
 * of H^n, then generators whose differentials kill the kernel of H^{n+1}.
 * No generator of degree n+1 exists when a kernel class at n+1 is killed, so
 * every differential lands in words of length two or more: minimality is by
 * construction.  Degree-n generators never feed new classes at n or n+1
 * (their products start at 2n), so one pass per degree suffices.  The
 * morphism is verified to be an H-isomorphism through window - 2.
 */
inline MinimalModel minimal_model(const Cdga& A, int window = -1) {
    if (A.has_zero_gens())
        throw InputError("minimal models need algebras without degree-0 generators");
    if (window < 0) window = A.window();
    if (window > A.window())
        throw WindowExceeded("model window beyond the algebra window");
    CohomologyResult H = cohomology(A, 0, std::min(window, A.window()), false);
    if (H.dims.at(0) != 1) throw NotConnected("dim H^0 != 1");
    if (window >= 1 && H.dims.at(1) != 0)
        throw NotSimplyConnected("H^1 does not vanish; supply a hand-built Sullivan algebra");

    BandedComplex cxA = algebra_complex(A);
    CdgaBuilder b(window);
    std::vector<Element> images;

    auto eval_on = [&images, &A](const Element& x) {
        Element out = A.zero();
        for (const auto& [m, c] : x.terms()) {
            Element prod = A.scalar(c);
            for (const auto& [g, e] : m.factors) prod = prod * images.at(g).pow(e);
            out = out + prod;
        }
        return out;
    };

    for (int deg = 2; deg <= window - 2; ++deg) {
        // cokernel of H^deg: adjoin closed generators for the missing classes
        {
            Cdga part = b.partial();
            ClassSpace HA(cxA, deg);
            if (HA.dim() > 0) {
                ClassSpace Hm(algebra_complex(part), deg);
                Subspace image(HA.dim());
                for (const auto& r : Hm.reps.rows()) {
                    Element z = detail::element_of_vec(part, r, Hm.ambient.labels);
                    image.insert(HA.coords(detail::vec_of_element(A, eval_on(z), HA.ambient)));
                }
                Subspace full(HA.dim());
                for (int j = 0; j < HA.dim(); ++j) {
                    Vec e;
                    set_entry(e, j, Rational(1));
                    full.insert(std::move(e));
                }
                Subspace missing = coset_basis(image, full);
                int idx = 0;
                auto hreps = HA.reps.rows();
                for (const auto& mv : missing.rows()) {
                    Vec amb;
                    for (const auto& [j, c] : mv) add_scaled(amb, c, hreps.at(j));
                    b.add_generator("w" + std::to_string(deg) + "_" + std::to_string(idx++),
                                    deg);
                    images.push_back(detail::element_of_vec(A, amb, HA.ambient.labels));
                }
            }
        }
        // kernel of H^{deg+1}: kill with generators one degree below
        {
            Cdga part = b.partial();
            ClassSpace Hm1(algebra_complex(part), deg + 1);
            if (Hm1.dim() > 0) {
                ClassSpace HA1(cxA, deg + 1);
                auto mreps = Hm1.reps.rows();
                std::vector<Vec> cols;
                for (const auto& r : mreps) {
                    Element z = detail::element_of_vec(part, r, Hm1.ambient.labels);
                    cols.push_back(HA1.coords(detail::vec_of_element(A, eval_on(z), HA1.ambient)));
                }
                EchelonResult e = echelonize(SparseMatrix::from_columns(HA1.dim(), cols));
                int idx = 0;
                for (const auto& kv : e.kernel.rows()) {
                    Vec amb;
                    for (const auto& [r, c] : kv) add_scaled(amb, c, mreps.at(r));
                    Element zeta = detail::element_of_vec(part, amb, Hm1.ambient.labels);
                    // its image is exact in A by construction; find a primitive
                    detail::Indexed up(cxA.basis(deg + 1, 0));
                    std::vector<Vec> dcols;
                    for (const auto& l : cxA.basis(deg, 0)) dcols.push_back(up.to_vec(cxA.d(deg, l)));
                    auto beta = solve(SparseMatrix::from_columns(
                                          static_cast<int>(up.labels.size()), dcols),
                                      detail::vec_of_element(A, eval_on(zeta), up));
                    if (!beta)
                        throw AssertionError("kernel class image is not exact at degree " +
                                             std::to_string(deg + 1));
                    std::string name = "k" + std::to_string(deg) + "_" + std::to_string(idx++);
                    b.add_generator(name, deg);
                    b.set_differential(name, zeta);
                    images.push_back(detail::element_of_vec(A, *beta, cxA.basis(deg, 0)));
                }
            }
        }
    }

    MinimalModel out{b.finish(), std::move(images), A};
    for (int deg = 0; deg <= window - 2; ++deg) {
        ClassSpace HA(cxA, deg);
        ClassSpace Hm(algebra_complex(out.model), deg);
        if (Hm.dim() != HA.dim())
            throw AssertionError("model H dimension mismatch at degree " + std::to_string(deg));
        Subspace image(HA.dim());
        for (const auto& r : Hm.reps.rows()) {
            Element z = detail::element_of_vec(out.model, r, Hm.ambient.labels);
            image.insert(HA.coords(detail::vec_of_element(A, out.eval(z), HA.ambient)));
        }
        if (image.dim() != HA.dim())
            throw AssertionError("model H is not surjective at degree " + std::to_string(deg));
    }
    return out;
}

inline MinimalModel minimal_model(const FiniteGradedAlgebra& F, int window) {
    return minimal_model(table_presentation(F, window), window);
}

struct FiberDecomposition {
    Cdga fiber;
    std::map<int, std::vector<Monomial>> basis;       // monomial basis per degree
    std::map<int, std::vector<std::string>> labels;
    struct Slice {
        std::vector<Vec> C;   // complement of the cycles: pivot-column monomials
        std::vector<Vec> dC;  // dbar of the previous degree's C, index-aligned
        std::vector<Vec> E;   // homology representatives inside the cycles
    };
    std::map<int, Slice> slices;

    GradedDims e_dims() const {
        GradedDims out;
        out.lo = 0;
        out.hi = fiber.window();
        for (const auto& [q, s] : slices)
            if (!s.E.empty()) out.set(q, static_cast<int>(s.E.size()));
        return out;
    }
};

/*
 * Degreewise splitting ΛZ = C + dC + E: C a complement of the cycles (the
 * pivot columns of dbar, so dbar: C -> dC is bijective by construction), dC
 * the boundaries, E homology representatives.  Requires a finite fiber
 * cohomology certificate: no degree-0 fiber generators, and H(ΛZ) vanishing
 * in the top two window degrees.
 */
inline FiberDecomposition fiber_decomposition(const LambdaExtension& ext) {
    Cdga F = extension_fiber(ext);
    if (F.has_zero_gens())
        throw NotFiniteFiberCohomology("fiber has degree-0 generators");
    int W = F.window();
    CohomologyResult H = cohomology(F, 0, W, false);
    if (H.dims.at(W) != 0 || H.dims.at(W - 1) != 0)
        throw NotFiniteFiberCohomology(
            "fiber cohomology does not vanish in the top window degrees; raise --max-degree");

    FiberDecomposition out;
    out.fiber = F;
    std::map<int, std::vector<int>> pivots;  // pivot columns of dbar per degree
    for (int q = 0; q <= W; ++q) {
        auto basis = F.basis(q);
        auto& labs = out.labels[q];
        for (const auto& m : basis) labs.push_back(F.monomial_str(m));
        out.basis[q] = basis;

        std::vector<std::string> up_labels;
        for (const auto& m : F.basis(q + 1)) up_labels.push_back(F.monomial_str(m));
        detail::Indexed up(std::move(up_labels));
        std::vector<Vec> dcols;
        for (const auto& m : basis) {
            Element dm = Element(F, TermMap{{m, Rational(1)}}).d();
            std::map<std::string, Rational> terms;
            for (const auto& [mm, c] : dm.terms()) terms.emplace(F.monomial_str(mm), c);
            dcols.push_back(up.to_vec(terms));
        }
        SparseMatrix dmat = SparseMatrix::from_columns(
            static_cast<int>(up.labels.size()), dcols);
        EchelonResult ech = echelonize(dmat);

        FiberDecomposition::Slice s;
        for (int c : ech.pivot_cols) {
            Vec v;
            set_entry(v, c, Rational(1));
            s.C.push_back(std::move(v));
        }
        if (q >= 1) {
            detail::Indexed here(out.labels[q]);
            const auto& prev_basis = out.basis[q - 1];
            for (int c : pivots[q - 1]) {
                Element dm = Element(F, TermMap{{prev_basis[c], Rational(1)}}).d();
                std::map<std::string, Rational> terms;
                for (const auto& [mm, cc] : dm.terms()) terms.emplace(F.monomial_str(mm), cc);
                s.dC.push_back(here.to_vec(terms));
            }
        }
        Subspace bound(static_cast<int>(basis.size()));
        for (const auto& v : s.dC) bound.insert(v);
        Subspace reps = coset_basis(bound, ech.kernel);
        for (const auto& r : reps.rows()) s.E.push_back(r);

        if (static_cast<int>(s.C.size() + s.dC.size() + s.E.size()) !=
            static_cast<int>(basis.size()))
            throw AssertionError("fiber decomposition does not fill degree " +
                                 std::to_string(q));
        if (static_cast<int>(s.E.size()) != H.dims.at(q))
            throw AssertionError("fiber decomposition misses homology at degree " +
                                 std::to_string(q));
        pivots[q] = ech.pivot_cols;
        out.slices[q] = std::move(s);
    }
    return out;
}

/*
 * The contraction eta: (R (x) ΛZ, d) -> (R (x) E, delta).  Per fiber degree,
 * the automorphism sigma sends the decomposition basis [C | dC | E] to
 * [C | d_total(C partners) | E]; extending R-linearly over the splitting
 * S = R . ΛZ gives a unipotent alpha (sigma only adds terms of higher base
 * degree).  delta(e) is the E-projection of alpha^{-1}(d(e)); its
 * coefficients stay in R^{>= 1} because dbar(E) = 0.  eta = project after
 * alpha^{-1}.  Chain-map identity, degreewise surjectivity and H(eta)
 * isomorphism are verified through window - 2.
 */
struct EtaContraction {
    LambdaExtension ext;
    FiberDecomposition dec;
    ModulePtr small;  // R (x) E with the induced differential
    // delta per E label, as R-coefficients against target E labels
    std::map<std::string, std::map<std::string, Element>> delta;
    std::map<int, SparseMatrix> eta;  // total basis at n -> small labels at n
};

inline EtaContraction eta_map(const LambdaExtension& ext, const FiberDecomposition& dec) {
    const Cdga& total = ext.total;
    const Cdga& base = ext.base;
    if (!total.is_free())
        throw InputError("the contraction needs a free total algebra; the splitting "
                         "S = R . ΛZ fails for quotients");
    if (total.has_zero_gens())
        throw InputError("the contraction needs a total algebra without degree-0 generators");
    int W = total.window();
    int n_base = ext.n_base;
    const Cdga& F = dec.fiber;
    std::vector<int> lift(F.size());
    for (int i = 0; i < F.size(); ++i) lift[i] = n_base + i;

    // change of basis [C | dC | E] per fiber degree, and its inverse
    std::map<int, SparseMatrix> Tinv;
    std::map<int, std::vector<Element>> sigma;  // images in S, group order
    std::map<int, detail::Indexed> fpos;
    std::map<int, std::pair<int, int>> group_sizes;  // (|C|, |dC|) per degree
    for (const auto& [q, s] : dec.slices) {
        int dim = static_cast<int>(dec.basis.at(q).size());
        std::vector<Vec> cols;
        for (const auto& v : s.C) cols.push_back(v);
        for (const auto& v : s.dC) cols.push_back(v);
        for (const auto& v : s.E) cols.push_back(v);
        Tinv.emplace(q, invert(SparseMatrix::from_columns(dim, cols)));
        fpos.emplace(q, detail::Indexed(dec.labels.at(q)));
        group_sizes[q] = {static_cast<int>(s.C.size()), static_cast<int>(s.dC.size())};

        auto lift_vec = [&](const Vec& v) {
            Element out = total.zero();
            for (const auto& [i, c] : v)
                out = out + c * map_terms(total, TermMap{{dec.basis.at(q)[i], Rational(1)}},
                                          lift);
            return out;
        };
        auto& imgs = sigma[q];
        for (const auto& v : s.C) imgs.push_back(lift_vec(v));
        if (q >= 1) {
            const auto& prev = dec.slices.at(q - 1);
            for (const auto& v : prev.C) {
                Element out = total.zero();
                for (const auto& [i, c] : v)
                    out = out + c * map_terms(total,
                                              TermMap{{dec.basis.at(q - 1)[i], Rational(1)}},
                                              lift);
                imgs.push_back(out.d());
            }
        }
        for (const auto& v : s.E) imgs.push_back(lift_vec(v));
    }

    // sigma on an arbitrary fiber monomial, through the T coordinates
    auto sigma_of = [&](const Monomial& mu) {
        int q = mu.degree;
        Vec x;
        set_entry(x, fpos.at(q).pos.at(F.monomial_str(mu)), Rational(1));
        Vec y = Tinv.at(q).apply(x);
        Element out = total.zero();
        for (const auto& [g, c] : y) out = out + c * sigma.at(q)[g];
        return out;
    };

    // alpha per total degree, and its inverse; past W the fiber degrees
    // would outrun the decomposition, so nothing is built there
    std::map<int, detail::Indexed> tpos;
    std::map<int, std::vector<Monomial>> tbasis;
    std::map<int, SparseMatrix> Ainv;
    for (int deg = 0; deg <= W; ++deg) {
        auto basis = total.basis(deg);
        std::vector<std::string> labs;
        for (const auto& m : basis) labs.push_back(total.monomial_str(m));
        detail::Indexed ix(labs);
        std::vector<Vec> cols;
        for (const auto& m : basis) {
            auto [a, f] = detail::split_monomial(total, n_base, m);
            Element img = Element(total, TermMap{{a, Rational(1)}}) * sigma_of(f);
            cols.push_back(detail::vec_of_element(total, img, ix));
        }
        Ainv.emplace(deg, invert(SparseMatrix::from_columns(
                              static_cast<int>(basis.size()), cols)));
        tbasis.emplace(deg, std::move(basis));
        tpos.emplace(deg, std::move(ix));
    }

    // project a total vector onto R (x) E, as (base monomial, e-label) terms
    auto project = [&](int deg, const Vec& v) {
        std::map<std::pair<std::string, std::string>, Rational> out;
        for (const auto& [i, c] : v) {
            const Monomial& m = tbasis.at(deg)[i];
            auto [a, f] = detail::split_monomial(total, n_base, m);
            int q = f.degree;
            Vec x;
            set_entry(x, fpos.at(q).pos.at(F.monomial_str(f)), Rational(1));
            Vec y = Tinv.at(q).apply(x);
            auto [nc, ndc] = group_sizes.at(q);
            for (const auto& [g, tc] : y) {
                if (g < nc + ndc) continue;
                std::string elab = "e" + std::to_string(q) + "_" + std::to_string(g - nc - ndc);
                auto key = std::make_pair(base.monomial_str(a), elab);
                out[key] += c * tc;
                if (out[key] == 0) out.erase(key);
            }
        }
        return out;
    };

    EtaContraction out;
    out.ext = ext;
    out.dec = dec;

    // delta: E-projection of alpha^{-1} d on each representative.  Top-degree
    // representatives get none; their differentials leave the window, and no
    // in-window source ever needs them.
    for (const auto& [q, s] : dec.slices) {
        if (q + 1 > W) continue;
        auto [nc, ndc] = group_sizes.at(q);
        for (int j = 0; j < static_cast<int>(s.E.size()); ++j) {
            std::string elab = "e" + std::to_string(q) + "_" + std::to_string(j);
            Element de = sigma.at(q)[nc + ndc + j].d();
            auto& slot = out.delta[elab];
            if (de.is_zero()) continue;
            Vec z = Ainv.at(q + 1).apply(
                detail::vec_of_element(total, de, tpos.at(q + 1)));
            for (const auto& [key, c] : project(q + 1, z)) {
                Monomial am = detail::monomial_of_label(base, key.first);
                if (am.degree == 0)
                    throw AssertionError("delta has a unit coefficient at " + elab);
                Element& acc = slot.try_emplace(key.second, base.zero()).first->second;
                acc = acc + c * Element(base, TermMap{{am, Rational(1)}});
            }
        }
    }

    // the small module R (x) E over the base
    auto M = std::make_shared<DgModule>();
    M->A = base;
    M->lo = 0;
    M->hi = W;
    {
        int btop = base.certified_finite_top();
        int etop = -1;
        for (const auto& [q, s] : dec.slices)
            if (!s.E.empty()) etop = q;
        M->complete = (btop >= 0 && etop >= 0 && btop + etop <= W &&
                       F.certified_finite_top() >= 0);
    }
    std::map<int, std::vector<std::pair<Monomial, std::string>>> small_basis;
    for (int deg = 0; deg <= W; ++deg) {
        auto& lab = M->labels[deg];
        auto& sb = small_basis[deg];
        for (const auto& [q, s] : dec.slices) {
            if (s.E.empty() || q > deg) continue;
            for (int j = 0; j < static_cast<int>(s.E.size()); ++j) {
                std::string elab = "e" + std::to_string(q) + "_" + std::to_string(j);
                for (const auto& a : base.basis(deg - q)) {
                    lab.push_back(base.monomial_str(a) + "|" + elab);
                    sb.emplace_back(a, elab);
                }
            }
        }
        if (lab.empty()) M->labels.erase(deg);
    }
    std::map<int, std::map<std::string, int>> spos;
    for (const auto& [deg, lab] : M->labels)
        for (int i = 0; i < static_cast<int>(lab.size()); ++i) spos[deg][lab[i]] = i;
    auto small_vec = [&](int deg, const Element& a, const std::string& elab) {
        Vec v;
        for (const auto& [m, c] : a.terms())
            set_entry(v, spos.at(deg).at(base.monomial_str(m) + "|" + elab), c);
        return v;
    };
    for (const auto& [deg, sb] : small_basis) {
        if (deg + 1 <= W) {
            std::vector<Vec> cols;
            for (const auto& [a, elab] : sb) {
                Element ae(base, TermMap{{a, Rational(1)}});
                Vec col;
                if (M->labels.count(deg + 1)) {
                    add_scaled(col, Rational(1), small_vec(deg + 1, ae.d(), elab));
                    Rational sgn = (a.degree % 2) ? -1 : 1;
                    auto it = out.delta.find(elab);
                    if (it != out.delta.end())
                        for (const auto& [target, coef] : it->second)
                            add_scaled(col, sgn, small_vec(deg + 1, ae * coef, target));
                }
                cols.push_back(std::move(col));
            }
            M->dmat[deg] = SparseMatrix::from_columns(
                M->labels.count(deg + 1) ? M->dim(deg + 1) : 0, cols);
        }
        for (int g = 0; g < base.size(); ++g) {
            int t = deg + base.generator(g).degree;
            if (t > W) continue;
            std::vector<Vec> cols;
            for (const auto& [a, elab] : sb) {
                Element ga = base.gen(g) * Element(base, TermMap{{a, Rational(1)}});
                cols.push_back(M->labels.count(t) ? small_vec(t, ga, elab) : Vec{});
            }
            M->act[{g, deg}] = SparseMatrix::from_columns(
                M->labels.count(t) ? M->dim(t) : 0, cols);
        }
    }
    out.small = M;

    // eta matrices, with the three verification passes
    for (int deg = 0; deg <= W - 1; ++deg) {
        std::vector<Vec> cols;
        for (int i = 0; i < static_cast<int>(tbasis.at(deg).size()); ++i) {
            Vec unit;
            set_entry(unit, i, Rational(1));
            Vec z = Ainv.at(deg).apply(unit);
            Vec col;
            for (const auto& [key, c] : project(deg, z))
                set_entry(col, spos.at(deg).at(key.first + "|" + key.second), c);
            cols.push_back(std::move(col));
        }
        out.eta[deg] = SparseMatrix::from_columns(
            M->labels.count(deg) ? M->dim(deg) : 0, cols);
    }
    BandedComplex cxS = algebra_complex(total);
    BandedComplex cxE = module_complex(M);
    for (int deg = 0; deg <= W - 2; ++deg) {
        const auto& basis = tbasis.at(deg);
        for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
            Vec unit;
            set_entry(unit, i, Rational(1));
            Element dm = Element(total, TermMap{{basis[i], Rational(1)}}).d();
            Vec lhs = out.eta.at(deg + 1).apply(
                detail::vec_of_element(total, dm, tpos.at(deg + 1)));
            Vec rhs = M->d_apply(deg, out.eta.at(deg).apply(unit));
            if (!is_zero(sum(lhs, scaled(Rational(-1), rhs))))
                throw AssertionError("eta is not a chain map at degree " +
                                     std::to_string(deg));
        }
        if (echelonize(out.eta.at(deg)).rank != M->dim(deg))
            throw AssertionError("eta is not surjective at degree " + std::to_string(deg));
        ClassSpace HS(cxS, deg);
        ClassSpace HE(cxE, deg);
        if (HS.dim() != HE.dim())
            throw AssertionError("H(eta) dimension mismatch at degree " + std::to_string(deg));
        Subspace image(HE.dim());
        for (const auto& r : HS.reps.rows())
            image.insert(HE.coords(out.eta.at(deg).apply(r)));
        if (image.dim() != HE.dim())
            throw AssertionError("H(eta) is not onto at degree " + std::to_string(deg));
    }
    return out;
}

// the total algebra as a module over the base, with the full monomial basis
inline ModulePtr extension_module(const LambdaExtension& ext) {
    const Cdga& T = ext.total;
    const Cdga& base = ext.base;
    if (T.has_zero_gens())
        throw InputError("extension modules need a total algebra without degree-0 generators");
    int hi = T.window();
    auto M = std::make_shared<DgModule>();
    M->A = base;
    M->lo = 0;
    M->hi = hi;
    int top = T.certified_finite_top();
    M->complete = (top >= 0 && top <= hi);
    std::map<int, std::map<std::string, int>> pos;
    for (int deg = 0; deg <= hi; ++deg) {
        auto& lab = M->labels[deg];
        for (const auto& m : T.basis(deg)) {
            pos[deg][T.monomial_str(m)] = static_cast<int>(lab.size());
            lab.push_back(T.monomial_str(m));
        }
        if (lab.empty()) M->labels.erase(deg);
    }
    auto to_vec = [&](const Element& e, int deg) {
        Vec v;
        for (const auto& [m, c] : e.terms()) set_entry(v, pos.at(deg).at(T.monomial_str(m)), c);
        return v;
    };
    for (int deg = 0; deg <= hi; ++deg) {
        auto basis = T.basis(deg);
        if (basis.empty()) continue;
        if (deg + 1 <= hi) {
            std::vector<Vec> cols;
            for (const auto& m : basis)
                cols.push_back(to_vec(Element(T, TermMap{{m, Rational(1)}}).d(), deg + 1));
            M->dmat[deg] = SparseMatrix::from_columns(M->dim(deg + 1), cols);
        }
        for (int g = 0; g < ext.n_base; ++g) {
            int t = deg + base.generator(g).degree;
            if (t > hi) continue;
            std::vector<Vec> cols;
            for (const auto& m : basis)
                cols.push_back(to_vec(T.gen(g) * Element(T, TermMap{{m, Rational(1)}}), t));
            M->act[{g, deg}] = SparseMatrix::from_columns(M->dim(t), cols);
        }
    }
    return M;
}

/*
 * Split a minimal Sullivan algebra as ΛV^1 -> ΛV -> ΛV^{>= 2}.  Minimality
 * makes the degree-1 part closed under d for degree reasons: a degree-2
 * differential without linear terms is a product of two degree-1 generators.
 * Stages are preserved explicitly so the reordering cannot disturb the
 * triangular filtration.
 */
inline LambdaExtension degree_one_subalgebra(const Cdga& A) {
    if (!A.is_free()) throw InputError("degree-one splitting needs a free algebra");
    if (A.has_zero_gens()) throw InputError("degree-one splitting needs positive degrees");
    for (int i = 0; i < A.size(); ++i)
        for (const auto& [m, c] : A.d_of_gen(i))
            if (m.length < 2)
                throw NotMinimal("d(" + A.generator(i).name + ") has a linear term");

    std::vector<int> order;
    for (int i = 0; i < A.size(); ++i)
        if (A.generator(i).degree == 1) order.push_back(i);
    int ones = static_cast<int>(order.size());
    for (int i = 0; i < A.size(); ++i)
        if (A.generator(i).degree != 1) order.push_back(i);
    std::vector<int> perm(A.size());
    for (int i = 0; i < A.size(); ++i) perm[order[i]] = i;

    CdgaBuilder bb(A.window(), A.cap(), false);
    for (int k = 0; k < ones; ++k) {
        const Generator& g = A.generator(order[k]);
        bb.add_generator(g.name, g.degree, A.core().effective_stage(order[k]));
    }
    {
        Cdga part = bb.partial();
        for (int k = 0; k < ones; ++k)
            bb.set_differential(A.generator(order[k]).name,
                                map_terms(part, A.d_of_gen(order[k]), perm));
    }
    Cdga new_base = bb.finish();

    CdgaBuilder bt(A.window(), A.cap(), false);
    for (int k = 0; k < A.size(); ++k) {
        const Generator& g = A.generator(order[k]);
        bt.add_generator(g.name, g.degree, A.core().effective_stage(order[k]));
    }
    {
        Cdga part = bt.partial();
        for (int k = 0; k < A.size(); ++k)
            bt.set_differential(A.generator(order[k]).name,
                                map_terms(part, A.d_of_gen(order[k]), perm));
    }
    return make_extension(new_base, bt.finish());
}

}  // namespace gorlab
