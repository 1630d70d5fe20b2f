#include "gorlab/dg_module.hpp"

#include "helpers.hpp"
#include "catch2/catch_amalgamated.hpp"

using namespace gorlab;
using modules::dual_module;
using modules::extend_window;
using modules::free_module;
using modules::ground_module;
using modules::validate_module;

TEST_CASE("module axioms hold for free modules and their duals") {
    for (const Cdga& A : {fixtures::sphere3(8), fixtures::ab_model(8),
                          fixtures::example_algebra(8), fixtures::wedge33(8)}) {
        ModulePtr F = free_module(A);
        validate_module(*F);
        ModulePtr D = dual_module(F);
        validate_module(*D);
        validate_module(*ground_module(A));
    }
}

TEST_CASE("free module matrices mirror the algebra") {
    Cdga A = fixtures::ab_model(10);
    ModulePtr F = free_module(A);
    REQUIRE(F->dim(0) == 1);
    REQUIRE(F->dim(2) == 1);   // a
    REQUIRE(F->dim(5) == 1);   // ab
    REQUIRE(F->dim(1) == 0);
    REQUIRE(F->complete == false);  // polynomial part grows forever

    // d(b) = a^2
    int b3 = 0;
    Vec e;
    set_entry(e, b3, Rational(1));
    Vec db = F->d_apply(3, e);
    REQUIRE(db.size() == 1);
    REQUIRE(entry(db, 0) == 1);

    ModulePtr Fin = free_module(fixtures::example_algebra());
    REQUIRE(Fin->complete);
}

TEST_CASE("dual module differential and action carry the right signs") {
    Cdga A = fixtures::ab_model(8);
    ModulePtr D = dual_module(free_module(A));

    // labels reverse degree and gain an apostrophe
    REQUIRE(D->dim(-3) == 1);
    REQUIRE(D->label(-3, 0) == "b'");
    REQUIRE(D->dim(-4) == 1);
    REQUIRE(D->label(-4, 0) == "a^2'");

    // (d f)(m) = -(-1)^{|f|} f(dm): d of (a^2)-dual is minus b-dual
    Vec e;
    set_entry(e, 0, Rational(1));
    Vec d = D->d_apply(-4, e);
    REQUIRE(d.size() == 1);
    REQUIRE(entry(d, 0) == -1);

    // (e . e-dual) = -1-dual over the exterior algebra
    Cdga S = fixtures::sphere3(8);
    ModulePtr DS = dual_module(free_module(S));
    Vec edual;
    set_entry(edual, 0, Rational(1));
    Vec r = DS->act_apply(S.find("e"), -3, edual);
    REQUIRE(r.size() == 1);
    REQUIRE(entry(r, 0) == -1);
}

TEST_CASE("double dual is the original up to the sign (-1)^degree") {
    for (const Cdga& A : {fixtures::ab_model(8), fixtures::example_algebra(8)}) {
        ModulePtr M = free_module(A);
        ModulePtr DD = dual_module(dual_module(M));
        for (int n = M->lo; n <= M->hi; ++n) {
            REQUIRE(DD->dim(n) == M->dim(n));
            for (int i = 0; i < M->dim(n); ++i) {
                Vec e;
                set_entry(e, i, Rational(1));
                // d'' = -d under the identification m -> (-1)^{|m|} m''
                if (n + 1 <= M->hi) {
                    Vec want = scaled(Rational(-1), M->d_apply(n, e));
                    REQUIRE(DD->d_apply(n, e) == want);
                }
                // g . '' = (-1)^{|g|} (g . )
                for (int g = 0; g < A.size(); ++g) {
                    int t = n + A.generator(g).degree;
                    if (t > M->hi) continue;
                    Rational s(A.generator(g).degree % 2 ? -1 : 1);
                    Vec want = scaled(s, M->act_apply(g, n, e));
                    REQUIRE(DD->act_apply(g, n, e) == want);
                }
            }
        }
    }
}

TEST_CASE("monomials act by folding generator actions") {
    Cdga A = fixtures::example_algebra(10);
    ModulePtr F = free_module(A);
    // (u z) acting on 1 lands on the canonical top representative x*y
    Vec one;
    set_entry(one, 0, Rational(1));
    Element uz = A.gen("u") * A.gen("z");
    Vec got = F->act_element(uz, 0, one, 6);
    detail::Indexed top(std::vector<std::string>(F->labels.at(6)));
    REQUIRE(got == top.to_vec({{"x*y", Rational(1)}}));

    // mismatched target degree is an error
    REQUIRE_THROWS_AS(F->act_element(uz, 0, one, 5), InputError);
}

TEST_CASE("window extension pads with explicit zeros") {
    ModulePtr D = dual_module(free_module(fixtures::sphere3(8)));
    REQUIRE(D->lo == -8);
    REQUIRE(D->hi == 0);
    ModulePtr E = extend_window(D, -8, 2);
    REQUIRE(E->dim(2) == 0);
    REQUIRE(E->dim(-3) == 1);
    REQUIRE_THROWS_AS(D->dim(2), WindowExceeded);
    REQUIRE_THROWS_AS(extend_window(D, -7, 2), InputError);
}
