#pragma once

// Shared example algebras used across the test suite.

#include "gorlab/algebra.hpp"
#include "gorlab/presets.hpp"

namespace fixtures {

using namespace gorlab;

// exterior algebra on one degree-3 generator, zero differential
inline Cdga sphere3(int window = 12) {
    CdgaBuilder b(window);
    b.add_generator("e", 3);
    return b.finish();
}

// exterior algebra on one degree-1 generator, zero differential
inline Cdga circle(int window = 12) {
    CdgaBuilder b(window);
    b.add_generator("u", 1);
    return b.finish();
}

// Lambda(u1, v1, w1; dw = uv): the rational Heisenberg nilmanifold
inline Cdga heisenberg(int window = 12) {
    CdgaBuilder b(window);
    b.add_generator("u", 1);
    b.add_generator("v", 1);
    b.add_generator("w", 1);
    Cdga p = b.partial();
    b.set_differential("w", p.gen("u") * p.gen("v"));
    return b.finish();
}

// Lambda(w2, y3; dy = w^2)
inline Cdga s2_model(int window = 12) {
    CdgaBuilder b(window);
    b.add_generator("w", 2);
    b.add_generator("y", 3);
    Cdga p = b.partial();
    b.set_differential("y", p.gen("w") * p.gen("w"));
    return b.finish();
}

// Lambda(a2, b3; db = a^2), quasi-isomorphic to the s2 model
inline Cdga ab_model(int window = 12) {
    CdgaBuilder b(window);
    b.add_generator("a", 2);
    b.add_generator("b", 3);
    Cdga p = b.partial();
    b.set_differential("b", p.gen("a") * p.gen("a"));
    return b.finish();
}

// Lambda(a2, b3; db = a^2) / (a^k)
inline Cdga ab_trunc(int k, int window = 12) {
    CdgaBuilder b(window);
    b.add_generator("a", 2);
    b.add_generator("b", 3);
    Cdga p = b.partial();
    b.set_differential("b", p.gen("a") * p.gen("a"));
    b.add_relation(p.gen("a").pow(k));
    return b.finish();
}

// truncated polynomial algebra Q[x_deg] / (x^r), zero differential
inline Cdga truncated_poly(int deg, int r, int window = 12) {
    CdgaBuilder b(window);
    b.add_generator("x", deg);
    Cdga p = b.partial();
    b.add_relation(p.gen("x").pow(r));
    return b.finish();
}

// Lambda(x3, y3) / (x y): two 3-spheres glued at a point
inline Cdga wedge33(int window = 12) {
    CdgaBuilder b(window);
    b.add_generator("x", 3);
    b.add_generator("y", 3);
    Cdga p = b.partial();
    b.add_relation(p.gen("x") * p.gen("y"));
    return b.finish();
}

// six-dimensional Poincare duality algebra with a degree-1 class:
// Lambda(u1, x3, y3, z5) / (ux, uy, xy - uz, xz, yz)
inline Cdga example_algebra(int window = 12) {
    return presets::example_algebra(window);
}

// the example algebra with a degree-0 variable killing u:
// basis gets a word-length cap; H^3 never stabilizes
inline Cdga example_fiber_core(int window = 12, int cap = 6) {
    return presets::example_fiber_model(window, cap);
}

}  // namespace fixtures
