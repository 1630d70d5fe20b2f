#pragma once

// Built-in inputs shared by the library, the command line tool and the test
// suite.  The six-dimensional quotient below is the show piece: a Poincare
// duality algebra with a degree-1 generator, so minimal Sullivan models are
// unavailable and its invariants have to come out of the resolution routes.

#include "gorlab/algebra.hpp"

namespace gorlab::presets {

// Lambda(u1, x3, y3, z5) / (ux, uy, xy - uz, xz, yz), zero differential: a
// Poincare duality algebra of formal dimension 6, fundamental class [xy] = [uz]
inline Cdga example_algebra(int window = 12) {
    CdgaBuilder b(window);
    b.add_generator("u", 1);
    b.add_generator("x", 3);
    b.add_generator("y", 3);
    b.add_generator("z", 5);
    Cdga p = b.partial();
    Element u = p.gen("u"), x = p.gen("x"), y = p.gen("y"), z = p.gen("z");
    b.add_relation(u * x);
    b.add_relation(u * y);
    b.add_relation(x * y - u * z);
    b.add_relation(x * z);
    b.add_relation(y * z);
    return b.finish();
}

// the example algebra with a degree-0 generator ub, d(ub) = u: the fiber
// model of the circle fibration the degree-1 generator defines.  Basis
// queries carry a word-length cap on ub; degree-3 homology grows with the
// cap, degrees 0, 5, 6 are stable.
inline Cdga example_fiber_model(int window = 12, int cap = 6) {
    CdgaBuilder b(window, cap, true);
    b.add_generator("u", 1);
    b.add_generator("x", 3);
    b.add_generator("y", 3);
    b.add_generator("z", 5);
    b.add_generator("ub", 0);
    Cdga p = b.partial();
    Element u = p.gen("u"), x = p.gen("x"), y = p.gen("y"), z = p.gen("z");
    b.add_relation(u * x);
    b.add_relation(u * y);
    b.add_relation(x * y - u * z);
    b.add_relation(x * z);
    b.add_relation(y * z);
    b.set_differential("ub", u);
    return b.finish();
}

}  // namespace gorlab::presets
