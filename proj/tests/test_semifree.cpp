#include "gorlab/semifree.hpp"

#include "helpers.hpp"
#include "catch2/catch_amalgamated.hpp"

#include <map>

using namespace gorlab;
using modules::dual_module;
using modules::extend_window;
using modules::free_module;
using modules::ground_module;

namespace {

// the dual of the algebra as a module over itself, padded for resolving to 0
ModulePtr algebra_dual(const Cdga& A) {
    ModulePtr D = dual_module(free_module(A));
    return extend_window(D, D->lo, 2);
}

std::map<int, int> gen_histogram(const Resolution& F) {
    std::map<int, int> h;
    for (const auto& g : F.gens) ++h[g.degree];
    return h;
}

}  // namespace

TEST_CASE("resolution of the ground field over an exterior algebra") {
    Cdga A = fixtures::sphere3(12);
    Resolution F = resolve_module(ground_module(A), 10);
    verify_resolution(F);

    std::map<int, int> want = {{0, 1}, {2, 1}, {4, 1}, {6, 1}, {8, 1}, {10, 1}};
    REQUIRE(gen_histogram(F) == want);

    // minimality: every differential coefficient is decomposable
    for (const auto& g : F.gens)
        for (const auto& [i, a] : g.dval)
            for (const auto& [m, c] : a.terms()) REQUIRE(!m.is_unit());
}

TEST_CASE("resolving the dual recovers the one-generator duality pattern") {
    SECTION("odd sphere") {
        Resolution F = resolve_module(algebra_dual(fixtures::sphere3()), 0);
        verify_resolution(F);
        std::map<int, int> want = {{-3, 1}};
        REQUIRE(gen_histogram(F) == want);
    }
    SECTION("circle") {
        CdgaBuilder b(12);
        b.add_generator("u", 1);
        Cdga A = b.finish();
        Resolution F = resolve_module(algebra_dual(A), 0);
        verify_resolution(F);
        std::map<int, int> want = {{-1, 1}};
        REQUIRE(gen_histogram(F) == want);
    }
    SECTION("torus-like product of a circle and a 3-sphere") {
        CdgaBuilder b(12);
        b.add_generator("u", 1);
        b.add_generator("e", 3);
        Cdga A = b.finish();
        Resolution F = resolve_module(algebra_dual(A), 0);
        verify_resolution(F);
        std::map<int, int> want = {{-4, 1}};
        REQUIRE(gen_histogram(F) == want);
    }
    SECTION("truncated polynomial algebra") {
        Resolution F = resolve_module(algebra_dual(fixtures::truncated_poly(2, 3)), 0);
        verify_resolution(F);
        std::map<int, int> want = {{-4, 1}};
        REQUIRE(gen_histogram(F) == want);
    }
    SECTION("six-dimensional duality algebra with a degree-1 class") {
        Resolution F = resolve_module(algebra_dual(fixtures::example_algebra()), 0);
        verify_resolution(F);
        std::map<int, int> want = {{-6, 1}};
        REQUIRE(gen_histogram(F) == want);
    }
}

TEST_CASE("the wedge dual needs several generators") {
    Resolution F = resolve_module(algebra_dual(fixtures::wedge33()), 0);
    verify_resolution(F);
    // cokernel at -3 needs the two sphere classes; the kernel at -1 has
    // three independent classes: x (x) x' - y (x) y', x (x) y', y (x) x'
    std::map<int, int> want = {{-3, 2}, {-1, 3}};
    REQUIRE(gen_histogram(F) == want);
}

TEST_CASE("derived Hom from a resolution") {
    Cdga A = fixtures::sphere3(12);
    Resolution F = resolve_module(ground_module(A), 10);
    GradedDims ext = hom_dims(F, free_module(A), 0, 8);
    for (int n = 0; n <= 8; ++n) {
        REQUIRE(ext.certified(n));
        REQUIRE(ext.at(n) == (n == 3 ? 1 : 0));
    }
}

TEST_CASE("resolution refuses impossible windows") {
    Cdga A = fixtures::sphere3(12);
    ModulePtr D = dual_module(free_module(A));
    // without padding, stage 0 would need module degrees up to 2
    REQUIRE_THROWS_AS(resolve_module(D, 0), InputError);
}
