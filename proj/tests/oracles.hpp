#pragma once

/*
 * Independent brute-force reference implementations used only by tests.
 * Deliberately naive: dense storage, textbook algorithms, no sharing with the
 * library code paths they check.
 */

#include "gorlab/rational.hpp"

#include <map>
#include <vector>

namespace oracle {

using gorlab::Rational;
using Dense = std::vector<std::vector<Rational>>;

// rank by plain dense Gaussian elimination
inline int dense_rank(Dense a) {
    if (a.empty()) return 0;
    int rows = static_cast<int>(a.size());
    int cols = static_cast<int>(a[0].size());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][c] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(a[rank], a[pivot]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            Rational f = a[r][c] / a[rank][c];
            for (int k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

// brute force: does v lie in the row span of rows?  (rank comparison)
inline bool dense_in_span(const Dense& rows, const std::vector<Rational>& v) {
    Dense with = rows;
    with.push_back(v);
    return dense_rank(with) == dense_rank(rows);
}

inline std::vector<Rational> dense_apply(const Dense& a, const std::vector<Rational>& x) {
    std::vector<Rational> out(a.size(), Rational(0));
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) out[r] += a[r][c] * x[c];
    return out;
}

}  // namespace oracle
