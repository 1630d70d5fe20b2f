#include <catch2/catch_amalgamated.hpp>

#include "gorlab/invariants.hpp"
#include "helpers.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

using namespace gorlab;
using modules::free_module;
using modules::ground_module;
using fixtures::ab_model;
using fixtures::circle;
using fixtures::example_algebra;
using fixtures::heisenberg;
using fixtures::sphere3;
using fixtures::truncated_poly;
using fixtures::wedge33;

namespace {

using DimMap = std::map<int, int>;

// nonzero entries the window actually vouches for
DimMap certified_support(const GradedDims& g) {
    DimMap out;
    for (const auto& [n, d] : g.dims)
        if (d != 0 && g.certified(n)) out[n] = d;
    return out;
}

Cdga two_spheres(int window = 12) {  // Lambda(e3, f3)
    CdgaBuilder b(window);
    b.add_generator("e", 3);
    b.add_generator("f", 3);
    return b.finish();
}

Cdga circle_times_sphere(int window = 12) {  // Lambda(u1, e3)
    CdgaBuilder b(window);
    b.add_generator("u", 1);
    b.add_generator("e", 3);
    return b.finish();
}

Cdga odd_pair(int window = 12) {  // Lambda(e3, f5), duality in dimension 8
    CdgaBuilder b(window);
    b.add_generator("e", 3);
    b.add_generator("f", 5);
    return b.finish();
}

Cdga poly(int window = 12) {  // Q[x2], unbounded cohomology
    CdgaBuilder b(window);
    b.add_generator("x", 2);
    return b.finish();
}

Cdga twisted_base(int window = 18) {
    CdgaBuilder b(window);
    b.add_generator("w", 3);
    b.add_generator("wp", 3);
    return b.finish();
}

Cdga twisted18(int window = 18) {  // d(z) lands in the square of the base
    CdgaBuilder b(window);
    b.add_generator("w", 3);
    b.add_generator("wp", 3);
    b.add_generator("z", 5);
    Cdga p = b.partial();
    b.set_differential("z", p.gen("w") * p.gen("wp"));
    return b.finish();
}

Cdga wedge_total(int window = 12) {  // Lambda(e3) (x) wedge of two 3-spheres
    CdgaBuilder b(window);
    b.add_generator("e", 3);
    b.add_generator("x", 3);
    b.add_generator("y", 3);
    Cdga p = b.partial();
    b.add_relation(p.gen("x") * p.gen("y"));
    return b.finish();
}

Cdga free_fiber_poly(int window = 12) {  // Lambda(w3) (x) Q[x2]
    CdgaBuilder b(window);
    b.add_generator("w", 3);
    b.add_generator("x", 2);
    return b.finish();
}

// symmetric dimensions {1, 0, 1, 1} but x * y = 0: duality fails on rank
Cdga flat_pairing(int window = 12) {
    CdgaBuilder b(window);
    b.add_generator("x", 2);
    b.add_generator("y", 3);
    Cdga p = b.partial();
    b.add_relation(p.gen("x") * p.gen("x"));
    b.add_relation(p.gen("x") * p.gen("y"));
    return b.finish();
}

Cdga infinite_quotient(int window = 12) {  // Q[x2, y2]/(x y): no route applies
    CdgaBuilder b(window);
    b.add_generator("x", 2);
    b.add_generator("y", 2);
    Cdga p = b.partial();
    b.add_relation(p.gen("x") * p.gen("y"));
    return b.finish();
}

/*
 * An R-linear homotopy of degree -1 with random values on the fiber factors,
 * assembled into phi = s id + d h + h d.  Setting h(a (x) f) =
 * (-1)^|a| a . h(1 (x) f) off a value cache keyed by the fiber monomial is
 * exactly what makes h a module map.  The top window degree of phi misses its
 * h d term, so callers validate strictly below it.
 */
ModuleMorphism homotopy_perturbation(const AcyclicClosure& cl, const ModulePtr& M,
                                     const Rational& s, std::mt19937& rng) {
    const Cdga& T = cl.ext.total;
    Cdga fiber = extension_fiber(cl.ext);
    std::map<std::string, Vec> cache;
    std::uniform_int_distribution<int> coin(-2, 2);
    auto value = [&](const Monomial& f) -> Vec {
        std::string key = fiber.monomial_str(f);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        Vec v;
        int target = f.degree - 1;
        if (target >= M->lo && target <= M->hi)
            for (int j = 0; j < M->dim(target); ++j) {
                int c = coin(rng);
                if (c != 0) set_entry(v, j, Rational(c));
            }
        return cache.emplace(key, std::move(v)).first->second;
    };

    std::map<int, SparseMatrix> hmat;
    for (int n = M->lo + 1; n <= M->hi; ++n) {
        if (M->dim(n) == 0) continue;
        std::vector<Vec> cols;
        for (int i = 0; i < M->dim(n); ++i) {
            Monomial m = detail::monomial_of_label(T, M->label(n, i));
            auto [a, f] = detail::split_monomial(T, cl.ext.n_base, m);
            Vec hv = value(f);
            if (is_zero(hv)) {
                cols.push_back({});
                continue;
            }
            Vec out = M->act_monomial(a, f.degree - 1, hv);
            if (a.degree % 2) out = scaled(Rational(-1), out);
            cols.push_back(std::move(out));
        }
        hmat.emplace(n, SparseMatrix::from_columns(M->dim(n - 1), cols));
    }
    auto h = [&](int n, const Vec& v) -> Vec {
        auto it = hmat.find(n);
        return it == hmat.end() ? Vec{} : it->second.apply(v);
    };

    ModuleMorphism f;
    f.src = f.dst = M;
    for (int n = M->lo; n <= M->hi; ++n) {
        if (M->dim(n) == 0) continue;
        std::vector<Vec> cols;
        for (int i = 0; i < M->dim(n); ++i) {
            Vec e;
            set_entry(e, i, Rational(1));
            Vec out = scaled(s, e);
            if (n > M->lo) add_scaled(out, Rational(1), M->d_apply(n - 1, h(n, e)));
            if (n < M->hi) add_scaled(out, Rational(1), h(n + 1, M->d_apply(n, e)));
            cols.push_back(std::move(out));
        }
        f.mats.emplace(n, SparseMatrix::from_columns(M->dim(n), cols));
    }
    return f;
}

}  // namespace

TEST_CASE("duality check on finite cohomology tables") {
    SECTION("odd sphere") {
        PDReport rep = pd_check(cohomology_ring(sphere3()));
        REQUIRE(rep.verdict);
        REQUIRE(rep.formal_dim == 3);
        REQUIRE(rep.fundamental_class == "e");
        REQUIRE(rep.pairing_ranks.at(0) == 1);
        REQUIRE(rep.pairing_ranks.at(3) == 1);
        REQUIRE(rep.pairing_ranks.at(1) == 0);
    }

    SECTION("six-dimensional quotient") {
        PDReport rep = pd_check(cohomology_ring(example_algebra()));
        REQUIRE(rep.verdict);
        REQUIRE(rep.formal_dim == 6);
        REQUIRE(rep.fundamental_class == "x*y");
        // middle pairing H^3 x H^3 is the full hyperbolic plane
        REQUIRE(rep.pairing_ranks.at(3) == 2);
        REQUIRE(rep.pairing_ranks.at(1) == 1);
        REQUIRE(rep.pairing_ranks.at(5) == 1);
    }

    SECTION("product of odd spheres") {
        PDReport rep = pd_check(cohomology_ring(odd_pair()));
        REQUIRE(rep.verdict);
        REQUIRE(rep.formal_dim == 8);
        REQUIRE(rep.pairing_ranks.at(3) == 1);
        REQUIRE(rep.pairing_ranks.at(5) == 1);
    }

    SECTION("wedge fails on the top line") {
        PDReport rep = pd_check(cohomology_ring(wedge33()));
        REQUIRE_FALSE(rep.verdict);
        REQUIRE(rep.formal_dim == 3);
        REQUIRE(rep.fundamental_class.empty());
        REQUIRE(rep.pairing_ranks.empty());
    }

    SECTION("symmetric dimensions with a degenerate pairing") {
        PDReport rep = pd_check(cohomology_ring(flat_pairing()));
        REQUIRE_FALSE(rep.verdict);
        REQUIRE(rep.formal_dim == 3);
        REQUIRE(rep.pairing_ranks.at(2) == 0);
    }

    SECTION("tables with degree-0 labels are rejected") {
        FiniteGradedAlgebra bad;
        bad.top = 2;
        bad.labels[0] = {"w"};
        REQUIRE_THROWS_AS(pd_check(bad), NotConnected);
    }
}

TEST_CASE("torsion dimensions along both routes") {
    SECTION("odd sphere") {
        TorRoutes tr = t_routes(sphere3());
        REQUIRE(tr.closure.has_value());
        REQUIRE(tr.resolution.has_value());
        DimMap want = {{-3, 1}};
        REQUIRE(certified_support(tr.agreed) == want);
        REQUIRE(tr.agreed.fully_certified());
    }

    SECTION("circle") {
        TorRoutes tr = t_routes(circle());
        REQUIRE(tr.closure.has_value());
        REQUIRE(tr.resolution.has_value());
        DimMap want = {{-1, 1}};
        REQUIRE(certified_support(tr.agreed) == want);
    }

    SECTION("nilmanifold model") {
        TorRoutes tr = t_routes(heisenberg());
        REQUIRE(tr.closure.has_value());
        REQUIRE(tr.resolution.has_value());
        DimMap want = {{-3, 1}};
        REQUIRE(certified_support(tr.agreed) == want);
    }

    SECTION("twisted three-generator algebra, both routes at a wide window") {
        TorRoutes tr = t_routes(twisted18());
        REQUIRE(tr.closure.has_value());
        REQUIRE(tr.resolution.has_value());
        DimMap want = {{-11, 1}};
        REQUIRE(certified_support(tr.agreed) == want);
    }

    SECTION("infinite free algebra goes through the closure only") {
        TorRoutes tr = t_routes(ab_model());
        REQUIRE(tr.closure.has_value());
        REQUIRE_FALSE(tr.resolution.has_value());
        const GradedDims& t = tr.agreed;
        REQUIRE(t.at(-2) == 1);
        for (int n : {-6, -5, -4, -3, -1, 0}) REQUIRE(t.at(n) == 0);
    }

    SECTION("finite quotient goes through the resolution only") {
        TorRoutes tr = t_routes(example_algebra());
        REQUIRE_FALSE(tr.closure.has_value());
        REQUIRE(tr.resolution.has_value());
        DimMap want = {{-6, 1}};
        REQUIRE(certified_support(tr.agreed) == want);
        REQUIRE(tr.agreed.fully_certified());
    }

    SECTION("truncated polynomial algebra") {
        DimMap want = {{-4, 1}};
        REQUIRE(certified_support(t_invariant(truncated_poly(2, 3))) == want);
    }

    SECTION("wedge is not one-dimensional") {
        GradedDims t = t_invariant(wedge33());
        REQUIRE(t.certified_total() > 1);
    }

    SECTION("ground field") {
        DimMap want = {{0, 1}};
        REQUIRE(certified_support(t_invariant(CdgaBuilder(12).finish())) == want);
    }

    SECTION("infinite quotient has no route") {
        REQUIRE_THROWS_AS(t_invariant(infinite_quotient()), InputError);
    }
}

TEST_CASE("ext dimensions mirror the torsion dimensions") {
    SECTION("anchors") {
        DimMap s3 = {{3, 1}};
        REQUIRE(certified_support(g_invariant(sphere3())) == s3);
        DimMap s1 = {{1, 1}};
        REQUIRE(certified_support(g_invariant(circle())) == s1);
        DimMap h = {{3, 1}};
        REQUIRE(certified_support(g_invariant(heisenberg())) == h);
        DimMap ex = {{6, 1}};
        REQUIRE(certified_support(g_invariant(example_algebra())) == ex);
    }

    SECTION("twisted three-generator algebra") {
        DimMap want = {{11, 1}};
        REQUIRE(certified_support(g_invariant(twisted18())) == want);
    }

    SECTION("wedge, degree by degree") {
        GradedDims g = g_invariant(wedge33());
        GradedDims t = t_invariant(wedge33());
        REQUIRE(g.certified_total() > 1);
        for (int n = 0; n <= 6; ++n)
            if (g.certified(n) && t.certified(-n)) REQUIRE(g.at(n) == t.at(-n));
    }

    SECTION("both ext routes report on a free finite algebra") {
        ExtRoutes er = g_routes(sphere3());
        REQUIRE(er.closure.has_value());
        REQUIRE(er.resolution.has_value());
        REQUIRE_FALSE(er.reflected);
    }

    SECTION("a quotient with a degree-1 generator falls back to the duality") {
        ExtRoutes er = g_routes(example_algebra());
        REQUIRE(er.reflected);
        REQUIRE_FALSE(er.closure.has_value());
        REQUIRE_FALSE(er.resolution.has_value());
    }

    SECTION("a quotient in degrees two and up keeps the hom route") {
        ExtRoutes er = g_routes(wedge33());
        REQUIRE(er.resolution.has_value());
        REQUIRE_FALSE(er.reflected);
    }

    SECTION("infinite free algebra, closure route") {
        GradedDims g = g_invariant(ab_model());
        REQUIRE(g.at(2) == 1);
        for (int n : {0, 1, 3, 4, 5, 6}) REQUIRE(g.at(n) == 0);
    }
}

TEST_CASE("one-dimensionality reports") {
    struct Case {
        Cdga algebra;
        bool gorenstein;
        int degree;
    };
    std::vector<Case> cases;
    cases.push_back({sphere3(), true, 3});
    cases.push_back({circle(), true, 1});
    cases.push_back({example_algebra(), true, 6});
    cases.push_back({heisenberg(), true, 3});
    cases.push_back({ab_model(), true, 2});
    cases.push_back({truncated_poly(2, 3), true, 4});
    cases.push_back({CdgaBuilder(12).finish(), true, 0});
    for (const auto& c : cases) {
        GorensteinReport rep = gorenstein_report(c.algebra);
        REQUIRE(rep.gorenstein.has_value());
        REQUIRE(*rep.gorenstein == c.gorenstein);
        REQUIRE(rep.degree.has_value());
        REQUIRE(*rep.degree == c.degree);
    }

    GorensteinReport w = gorenstein_report(wedge33());
    REQUIRE(w.gorenstein.has_value());
    REQUIRE_FALSE(*w.gorenstein);
    REQUIRE_FALSE(w.degree.has_value());
}

TEST_CASE("one-dimensionality matches duality of the cohomology ring") {
    SECTION("positives, including a non-formal algebra") {
        for (Cdga A : {sphere3(), circle(), ab_model(), heisenberg(), example_algebra()}) {
            EquivalenceReport rep = equivalence_report(A);
            REQUIRE(rep.gorenstein);
            REQUIRE(rep.pd.verdict);
        }
    }

    SECTION("dimensions of both torsion computations on the infinite model") {
        EquivalenceReport rep = equivalence_report(ab_model());
        REQUIRE(rep.pd.formal_dim == 2);
        DimMap want = {{-2, 1}};
        REQUIRE(certified_support(rep.t_homology) == want);
        REQUIRE(rep.t_algebra.at(-2) == 1);
    }

    SECTION("wedge fails all three characterizations together") {
        EquivalenceReport rep = equivalence_report(wedge33());
        REQUIRE_FALSE(rep.gorenstein);
        REQUIRE_FALSE(rep.pd.verdict);
        REQUIRE(rep.t_algebra.certified_total() > 1);
        REQUIRE(rep.t_homology.certified_total() > 1);
    }

    SECTION("unbounded cohomology is refused, not guessed") {
        REQUIRE_THROWS_AS(equivalence_report(poly()), HypothesisUnverifiable);
    }
}

TEST_CASE("torsion dimensions of an extension multiply") {
    SECTION("product of equal odd spheres") {
        ProductReport rep = product_report(make_extension(sphere3(), two_spheres()));
        DimMap want = {{-6, 1}};
        REQUIRE(certified_support(rep.t_total) == want);
        REQUIRE(rep.convolution);
        REQUIRE(rep.base_gorenstein.has_value());
        REQUIRE(*rep.base_gorenstein);
        REQUIRE(*rep.fiber_gorenstein);
        REQUIRE(*rep.total_gorenstein);
    }

    SECTION("circle times sphere") {
        ProductReport rep = product_report(make_extension(circle(), circle_times_sphere()));
        DimMap want = {{-4, 1}};
        REQUIRE(certified_support(rep.t_total) == want);
        REQUIRE(rep.convolution);
        REQUIRE(*rep.total_gorenstein);
    }

    SECTION("twisted extension") {
        ProductReport rep = product_report(make_extension(twisted_base(), twisted18()));
        DimMap base = {{-6, 1}};
        DimMap fib = {{-5, 1}};
        DimMap tot = {{-11, 1}};
        REQUIRE(certified_support(rep.t_base) == base);
        REQUIRE(certified_support(rep.t_fiber) == fib);
        REQUIRE(certified_support(rep.t_total) == tot);
        REQUIRE(rep.convolution);
        REQUIRE(*rep.base_gorenstein);
        REQUIRE(*rep.fiber_gorenstein);
        REQUIRE(*rep.total_gorenstein);
    }

    SECTION("wedge fiber breaks one-dimensionality but not the product rule") {
        ProductReport rep = product_report(make_extension(sphere3(), wedge_total()));
        // the fiber fails duality and its syzygies climb into positive
        // degrees; the factor windows reach up far enough to close the sum
        DimMap base = {{-3, 1}};
        DimMap fib = {{-3, 2}, {-1, 3}, {1, 6}, {3, 12}};
        DimMap tot = {{-6, 2}, {-4, 3}, {-2, 6}, {0, 12}};
        REQUIRE(certified_support(rep.t_base) == base);
        REQUIRE(certified_support(rep.t_fiber) == fib);
        REQUIRE(certified_support(rep.t_total) == tot);
        REQUIRE(rep.convolution);
        REQUIRE(*rep.base_gorenstein);
        REQUIRE_FALSE(*rep.fiber_gorenstein);
        REQUIRE_FALSE(*rep.total_gorenstein);
    }

    SECTION("polynomial fiber is refused") {
        CdgaBuilder bb(12);
        bb.add_generator("w", 3);
        REQUIRE_THROWS_AS(product_report(make_extension(bb.finish(), free_fiber_poly())),
                          NotFiniteFiberCohomology);
    }
}

TEST_CASE("window widening preserves the presentation") {
    Cdga wide = rewindow(example_algebra(), 16);
    REQUIRE(wide.window() == 16);
    REQUIRE(wide.size() == 4);
    CohomologyResult H = cohomology(wide, 0, 8);
    for (int n = 0; n <= 8; ++n) {
        int want = (n == 0 || n == 1 || n == 5 || n == 6) ? 1 : (n == 3 ? 2 : 0);
        REQUIRE(H.dims.at(n) == want);
    }

    Cdga h = rewindow(heisenberg(), 14);
    Element dw = h.gen("w").d();
    REQUIRE(dw == h.gen("u") * h.gen("v"));

    REQUIRE_THROWS_AS(rewindow(sphere3(), 10), InputError);
}

TEST_CASE("fiber model homology counts") {
    SECTION("tight cap") {
        FiberHomologyReport rep = example_fiber_homology(0);
        REQUIRE(rep.word_cap == 0);
        DimMap want = {{0, 1}, {3, 2}, {5, 1}};
        REQUIRE(certified_support(rep.dims) == want);
        std::vector<std::string> deg3 = rep.classes.at(3);
        std::sort(deg3.begin(), deg3.end());
        std::vector<std::string> expect = {"x", "y"};
        REQUIRE(deg3 == expect);
        std::vector<std::string> deg5 = {"z"};
        REQUIRE(rep.classes.at(5) == deg5);
        REQUIRE(rep.warnings.size() == 2);
    }

    SECTION("the band in degree 3 widens with the cap") {
        FiberHomologyReport rep = example_fiber_homology(1);
        REQUIRE(rep.dims.at(3) == 4);
        std::vector<std::string> deg3 = rep.classes.at(3);
        std::sort(deg3.begin(), deg3.end());
        std::vector<std::string> expect = {"x", "x*ub", "y", "y*ub"};
        REQUIRE(deg3 == expect);
        REQUIRE(example_fiber_homology(2).dims.at(3) == 6);
    }

    SECTION("degree 6 dies at every cap") {
        for (int cap : {0, 1, 2}) REQUIRE(example_fiber_homology(cap).dims.at(6) == 0);
    }

    SECTION("window floor") {
        REQUIRE_THROWS_AS(example_fiber_homology(0, 6), InputError);
    }
}

TEST_CASE("homology isomorphisms match induced torsion isomorphisms") {
    std::mt19937 rng(7);
    for (Cdga R : {sphere3(), ab_model()}) {
        AcyclicClosure cl = acyclic_closure(R);
        ModulePtr M = extension_module(cl.ext);

        ModuleMorphism id = identity_morphism(M);
        validate_morphism(id);
        REQUIRE(homology_iso(id, 0, 8));
        REQUIRE(tor_iso(id, cl, 0, 8));

        ModuleMorphism zero;
        zero.src = zero.dst = M;
        validate_morphism(zero);
        REQUIRE_FALSE(homology_iso(zero, 0, 8));
        REQUIRE_FALSE(tor_iso(zero, cl, 0, 8));

        // augmentation to the ground module: a homology isomorphism whose
        // induced map on torsion is the interesting direction
        ModuleMorphism eps;
        eps.src = M;
        eps.dst = ground_module(R);
        Vec e0;
        set_entry(e0, 0, Rational(1));
        eps.mats.emplace(0, SparseMatrix::from_columns(1, {e0}));
        validate_morphism(eps);
        REQUIRE(homology_iso(eps, 0, 8));
        REQUIRE(tor_iso(eps, cl, 0, 8));

        ModuleMorphism phi = homotopy_perturbation(cl, M, Rational(2), rng);
        validate_morphism(phi, 0, M->hi - 1);
        REQUIRE(homology_iso(phi, 0, 8));
        REQUIRE(tor_iso(phi, cl, 0, 8));

        ModuleMorphism null = homotopy_perturbation(cl, M, Rational(0), rng);
        validate_morphism(null, 0, M->hi - 1);
        REQUIRE_FALSE(homology_iso(null, 0, 8));
        REQUIRE_FALSE(tor_iso(null, cl, 0, 8));
    }
}

TEST_CASE("certified cohomology bounds") {
    REQUIRE(certified_h_top(sphere3()) == std::optional<int>(3));
    REQUIRE(certified_h_top(ab_model()) == std::optional<int>(2));
    REQUIRE(certified_h_top(heisenberg()) == std::optional<int>(3));
    REQUIRE(certified_h_top(example_algebra()) == std::optional<int>(6));
    REQUIRE_FALSE(certified_h_top(poly()).has_value());
}
