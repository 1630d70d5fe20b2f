#pragma once

/*
 * Homology of a degreewise chain complex carrying a word-length band
 * filtration in its degree-zero directions.
 *
 * A provider exposes, per degree, the cumulative basis at band <= l (labels,
 * stable across bands) and the exact differential of each basis element.  The
 * differential of a band-l element may stick out up to band l + growth.
 *
 * A class at band l is counted only if it survives into band l + 1, i.e. the
 * reported dimension at (degree, band l) is
 *
 *     rank( Z_l / (Z_l cap B_{l+1}) )
 *
 * where Z_l are cycles of band <= l and B_{l+1} boundaries of chains of band
 * <= l+1.  Cap artifacts (cycles whose bounding chain needs one more band)
 * die under this count.  A degree is flagged stable when recomputing with the
 * cap raised by one returns the same count; for complexes with no band
 * directions every degree is stable and the count is the exact dimension.
 */

#include "gorlab/graded_dims.hpp"
#include "gorlab/linalg.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace gorlab {

struct BandedComplex {
    int growth = 0;
    std::function<std::vector<std::string>(int deg, int band)> basis;
    std::function<std::map<std::string, Rational>(int deg, const std::string&)> d;
};

struct HomologySlice {
    int count = 0;    // classes at the requested band that persist one band up
    bool stable = false;
    std::vector<Vec> reps;                // coordinates over rep_labels
    std::vector<std::string> rep_labels;  // ambient basis the reps refer to
};

namespace detail {

struct Indexed {
    std::vector<std::string> labels;
    std::map<std::string, int> pos;

    explicit Indexed(std::vector<std::string> l) : labels(std::move(l)) {
        for (int i = 0; i < static_cast<int>(labels.size()); ++i) pos[labels[i]] = i;
    }

    Vec to_vec(const std::map<std::string, Rational>& terms) const {
        Vec v;
        for (const auto& [label, c] : terms) {
            auto it = pos.find(label);
            if (it == pos.end())
                throw AssertionError("complex basis is missing label " + label);
            set_entry(v, it->second, c);
        }
        return v;
    }
};

// cycles of band <= band_z at degree n, as a subspace over ambient
inline Subspace cycles(const BandedComplex& cx, int n, int band_z, const Indexed& ambient) {
    auto domain = cx.basis(n, band_z);
    Indexed target(cx.basis(n + 1, band_z + cx.growth));
    std::vector<Vec> cols;
    cols.reserve(domain.size());
    for (const auto& label : domain) cols.push_back(target.to_vec(cx.d(n, label)));
    SparseMatrix m = SparseMatrix::from_columns(static_cast<int>(target.labels.size()), cols);
    EchelonResult e = echelonize(m);
    Subspace out(static_cast<int>(ambient.labels.size()));
    Indexed dom_ix(domain);
    for (const auto& k : e.kernel.rows()) {
        Vec v;
        for (const auto& [j, c] : k) set_entry(v, ambient.pos.at(domain[j]), c);
        out.insert(std::move(v));
    }
    return out;
}

// boundaries from chains of band <= band_b at degree n-1, over ambient
inline Subspace boundaries(const BandedComplex& cx, int n, int band_b, const Indexed& ambient) {
    Subspace out(static_cast<int>(ambient.labels.size()));
    for (const auto& label : cx.basis(n - 1, band_b))
        out.insert(ambient.to_vec(cx.d(n - 1, label)));
    return out;
}

}  // namespace detail

// homology at a single degree; band < 0 means "no band directions" (use 0)
inline HomologySlice banded_homology_at(const BandedComplex& cx, int n, int band,
                                        bool with_reps = false) {
    using detail::Indexed;
    // ambient must hold cycles at band+2 and boundaries from band+2
    Indexed ambient(cx.basis(n, band + 2 + cx.growth));
    Subspace z0 = detail::cycles(cx, n, band, ambient);
    Subspace z1 = detail::cycles(cx, n, band + 1, ambient);
    Subspace b1 = detail::boundaries(cx, n, band + 1, ambient);
    Subspace b2 = detail::boundaries(cx, n, band + 2, ambient);

    HomologySlice out;
    out.count = z0.dim() - intersect(z0, b1).dim();
    int next = z1.dim() - intersect(z1, b2).dim();
    out.stable = (out.count == next);
    if (with_reps) {
        out.rep_labels = ambient.labels;
        Subspace dead = intersect(z0, b1);
        Subspace reps = coset_basis(dead, z0);
        for (const auto& r : reps.rows()) out.reps.push_back(r);
    }
    return out;
}

/*
 * Homology at one degree of a band-free complex, with coordinates: picks
 * coset representatives and can express any cycle in terms of them.  Only
 * meaningful when the provider is exact at this degree and its neighbours.
 *
 * All vectors are in the provider's own basis order.  With `reversed`, the
 * representative choice runs its pivot search from the other end of the
 * basis; downstream invariants must not depend on which complement is taken.
 */
struct ClassSpace {
    detail::Indexed ambient;
    Subspace cycles;
    Subspace boundaries;
    Subspace reps;  // rows represent a basis of H

    ClassSpace(const BandedComplex& cx, int n, bool reversed = false)
        : ambient(cx.basis(n, 0)),
          cycles(detail::cycles(cx, n, 0, ambient)),
          boundaries(detail::boundaries(cx, n, 0, ambient)),
          reps(pick_reps(boundaries, cycles, reversed)) {
        std::vector<Vec> cols;
        for (const auto& r : reps.rows()) cols.push_back(r);
        for (const auto& r : boundaries.rows()) cols.push_back(r);
        sys_ = SparseMatrix::from_columns(static_cast<int>(ambient.labels.size()), cols);
    }

    int dim() const { return reps.dim(); }

    bool is_cycle(const Vec& v) const { return cycles.contains(v); }

    // class coordinates over the chosen representatives
    Vec coords(const Vec& v) const {
        if (is_zero(v)) return {};
        auto sol = solve(sys_, v);
        if (!sol) throw AssertionError("vector is not a cycle of this degree");
        Vec out;
        for (const auto& [i, c] : *sol)
            if (i < reps.dim()) set_entry(out, i, c);
        return out;
    }

  private:
    static Subspace pick_reps(const Subspace& bound, const Subspace& cyc, bool reversed) {
        if (!reversed) return coset_basis(bound, cyc);
        int n = cyc.ambient_dim();
        auto flip = [n](const Vec& v) {
            Vec out;
            for (const auto& [i, c] : v) out[n - 1 - i] = c;
            return out;
        };
        Subspace fb(n), fz(n);
        for (const auto& r : bound.rows()) fb.insert(flip(r));
        for (const auto& r : cyc.rows()) fz.insert(flip(r));
        Subspace flipped = coset_basis(fb, fz);
        Subspace out(n);
        for (const auto& r : flipped.rows()) out.insert(flip(r));
        return out;
    }

    SparseMatrix sys_;
};

// dims over a degree range; degrees outside [lo_valid+1, hi_valid-1] of the
// provider are the caller's responsibility
inline GradedDims banded_homology(const BandedComplex& cx, int lo, int hi, int band) {
    GradedDims out;
    out.lo = lo;
    out.hi = hi;
    for (int n = lo; n <= hi; ++n) {
        HomologySlice s = banded_homology_at(cx, n, band);
        out.set(n, s.count);
        if (!s.stable) out.uncertified.insert(n);
    }
    return out;
}

}  // namespace gorlab
