#include <catch2/catch_amalgamated.hpp>

#include "gorlab/invariants.hpp"
#include "gorlab/parser.hpp"
#include "helpers.hpp"

using namespace gorlab;
using Catch::Matchers::ContainsSubstring;

namespace {

const char* example_text =
    "# six-dimensional duality algebra with a degree-1 class\n"
    "gen u : 1\n"
    "gen z : 5\n"
    "gen x : 3\n"
    "gen y : 3\n"
    "rel u*z - x*y\n"
    "rel u*x\n"
    "rel u*y\n"
    "rel z*x\n"
    "rel z*y\n";

const char* twisted_text =
    "gen w : 3 block base\n"
    "gen wp : 3 block base\n"
    "gen z : 5 block fiber\n"
    "d z = w*wp\n";

}  // namespace

TEST_CASE("single algebra files parse") {
    SECTION("sphere") {
        ParsedInput in = parse_algebra("gen e : 3\nd e = 0\n");
        REQUIRE_FALSE(in.extension.has_value());
        REQUIRE(in.algebra.size() == 1);
        REQUIRE(in.algebra.generator(0).name == "e");
        REQUIRE(in.algebra.generator(0).degree == 3);
        REQUIRE(in.algebra.is_free());
        REQUIRE(in.algebra.d_of_gen(0).empty());
    }

    SECTION("two-sphere model prints canonically") {
        ParsedInput in = parse_algebra("gen a:2\ngen b : 3\nd b = a ^ 2\n");
        REQUIRE(print_presentation(in.algebra) == "gen a : 2\ngen b : 3\nd b = a^2\n");
    }

    SECTION("comments, blank lines and spacing are free") {
        ParsedInput in = parse_algebra(
            "  # heading\n\n gen  u :  1   # inline\n gen v : 1\ngen w : 1\n"
            "d w =  u * v \n");
        REQUIRE(in.algebra.size() == 3);
        Element dw = in.algebra.gen("w").d();
        REQUIRE(dw == in.algebra.gen("u") * in.algebra.gen("v"));
    }

    SECTION("rational coefficients") {
        ParsedInput in = parse_algebra("gen a : 2\ngen b : 3\nd b = 3/2*a^2 - 2*a*a\n");
        Element want = in.algebra.scalar(Rational(-1, 2)) * in.algebra.gen("a").pow(2);
        REQUIRE(in.algebra.gen("b").d() == want);
    }

    SECTION("window is the caller's") {
        REQUIRE(parse_algebra("gen e : 3\n", 16).algebra.window() == 16);
    }

    SECTION("duality example") {
        ParsedInput in = parse_algebra(example_text);
        REQUIRE(in.algebra.size() == 4);
        REQUIRE(in.algebra.relations().size() == 5);
        PDReport pd = pd_check(cohomology_ring(in.algebra));
        REQUIRE(pd.verdict);
        REQUIRE(pd.formal_dim == 6);
    }
}

TEST_CASE("extension files parse") {
    SECTION("product of spheres") {
        ParsedInput in =
            parse_algebra("gen e : 3 block base\ngen f : 3 block fiber\n");
        REQUIRE(in.extension.has_value());
        REQUIRE(in.extension->n_base == 1);
        REQUIRE(in.extension->fiber_count() == 1);
        REQUIRE(in.extension->base.size() == 1);
    }

    SECTION("twisted differential stays on the base") {
        ParsedInput in = parse_algebra(twisted_text, 18);
        REQUIRE(in.extension.has_value());
        REQUIRE(in.extension->n_base == 2);
        Element dz = in.algebra.gen("z").d();
        REQUIRE(dz == in.algebra.gen("w") * in.algebra.gen("wp"));
    }

    SECTION("every generator needs a tag once one is tagged") {
        REQUIRE_THROWS_MATCHES(
            parse_algebra("gen e : 3 block base\ngen f : 3\n"), ParseError,
            Catch::Matchers::MessageMatches(ContainsSubstring("line 2") &&
                                            ContainsSubstring("block tag")));
    }

    SECTION("base generators come first") {
        REQUIRE_THROWS_MATCHES(
            parse_algebra("gen f : 3 block fiber\ngen e : 3 block base\n"), ParseError,
            Catch::Matchers::MessageMatches(ContainsSubstring("precede")));
    }

    SECTION("base differential may not use fiber generators") {
        // stages keep the total triangular so the block check is what fires
        REQUIRE_THROWS_MATCHES(
            parse_algebra("gen w : 3 stage 2 block base\ngen z : 2 stage 0 block fiber\n"
                          "d w = z^2\n"),
            ParseError,
            Catch::Matchers::MessageMatches(ContainsSubstring("leaves the base block")));
    }

    SECTION("a relation purely on the base is rejected") {
        REQUIRE_THROWS_AS(
            parse_algebra("gen w : 3 block base\ngen f : 3 block fiber\nrel w\n"),
            InputError);
    }
}

TEST_CASE("parse errors carry positions") {
    SECTION("unknown declaration") {
        REQUIRE_THROWS_MATCHES(
            parse_algebra("gen e : 3\nlaunch e\n"), ParseError,
            Catch::Matchers::MessageMatches(ContainsSubstring("line 2")));
    }
    SECTION("duplicate generator") {
        REQUIRE_THROWS_MATCHES(
            parse_algebra("gen e : 3\ngen e : 5\n"), ParseError,
            Catch::Matchers::MessageMatches(ContainsSubstring("line 2") &&
                                            ContainsSubstring("duplicate")));
    }
    SECTION("unknown generator in an expression") {
        REQUIRE_THROWS_MATCHES(
            parse_algebra("gen x : 2\nd x = y\n"), ParseError,
            Catch::Matchers::MessageMatches(ContainsSubstring("'y'")));
    }
    SECTION("odd generators reject high exponents") {
        REQUIRE_THROWS_MATCHES(
            parse_algebra("gen e : 3\nrel e^2\n"), ParseError,
            Catch::Matchers::MessageMatches(ContainsSubstring("odd generator 'e'")));
    }
    SECTION("malformed rational") {
        REQUIRE_THROWS_MATCHES(
            parse_algebra("gen a : 2\nd a = 1/0*a\n"), ParseError,
            Catch::Matchers::MessageMatches(ContainsSubstring("malformed rational")));
    }
    SECTION("degree-0 generators are refused") {
        REQUIRE_THROWS_AS(parse_algebra("gen u : 0\n"), ParseError);
    }
    SECTION("assigning a differential twice") {
        REQUIRE_THROWS_MATCHES(
            parse_algebra("gen a : 2\ngen b : 3\nd b = a^2\nd b = 0\n"), ParseError,
            Catch::Matchers::MessageMatches(ContainsSubstring("assigned twice")));
    }
}

TEST_CASE("semantic errors name the offending generator") {
    // d^2(c) = d(b) = a^2 != 0
    REQUIRE_THROWS_MATCHES(
        parse_algebra("gen a : 2\ngen c : 2\ngen b : 3\nd b = a^2\nd c = b\n"),
        InputError, Catch::Matchers::MessageMatches(ContainsSubstring("c")));
    // inhomogeneous relation
    REQUIRE_THROWS_AS(parse_algebra("gen a : 2\ngen b : 4\nrel a + b\n"), InputError);
}

TEST_CASE("printing and reparsing is the identity") {
    std::vector<std::string> corpus = {
        "gen e : 3\n",
        "gen a : 2\ngen b : 3\nd b = a^2\n",
        "gen a : 2 stage 1\ngen b : 3 stage 5\nd b = a^2\n",
        "gen u : 1\ngen v : 1\ngen w : 1\nd w = u*v\n",
        "gen a : 2\ngen b : 3\nd b = 3/2*a^2\nrel a^3\n",
        example_text,
        twisted_text,
        "gen e : 3 block base\ngen f : 3 block fiber\n",
    };
    for (const std::string& text : corpus) {
        INFO(text);
        ParsedInput once = parse_algebra(text, 18);
        std::string printed = once.extension ? print_presentation(*once.extension)
                                             : print_presentation(once.algebra);
        ParsedInput twice = parse_algebra(printed, 18);
        std::string again = twice.extension ? print_presentation(*twice.extension)
                                            : print_presentation(twice.algebra);
        REQUIRE(printed == again);
        REQUIRE(once.extension.has_value() == twice.extension.has_value());
    }
}

TEST_CASE("printed extensions keep their block split") {
    ParsedInput in = parse_algebra(twisted_text, 18);
    std::string printed = print_presentation(*in.extension);
    REQUIRE_THAT(printed, ContainsSubstring("gen w : 3 block base"));
    REQUIRE_THAT(printed, ContainsSubstring("gen z : 5 block fiber"));
    REQUIRE_THAT(printed, ContainsSubstring("d z = w*wp"));
}
