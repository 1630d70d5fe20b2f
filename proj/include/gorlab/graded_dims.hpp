#pragma once

/*
 * Dimension-per-degree bookkeeping with an explicit trust window.
 *
 * Finite windows are the price of exactness: outside [lo, hi] nothing was
 * computed, and inside the window a degree can still be uncertified when the
 * word-length cap could not be stabilized.  Queries never silently return 0
 * for something unknown.
 */

#include "gorlab/errors.hpp"

#include <map>
#include <set>
#include <string>

namespace gorlab {

struct GradedDims {
    std::map<int, int> dims;      // absent degree inside the window means 0
    int lo = 0;
    int hi = -1;                  // inclusive; lo > hi marks an empty window
    std::set<int> uncertified;    // degrees in the window without a stable value

    bool in_window(int n) const { return lo <= n && n <= hi; }
    bool certified(int n) const { return in_window(n) && !uncertified.count(n); }

    int at(int n) const {
        if (!in_window(n))
            throw WindowExceeded("degree " + std::to_string(n) + " outside [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
        if (uncertified.count(n))
            throw StabilityFailed("degree " + std::to_string(n) + " is uncertified");
        auto it = dims.find(n);
        return it == dims.end() ? 0 : it->second;
    }

    void set(int n, int dim) {
        if (dim != 0) dims[n] = dim; else dims.erase(n);
    }

    // total over certified degrees only
    int certified_total() const {
        int t = 0;
        for (const auto& [n, d] : dims)
            if (certified(n)) t += d;
        return t;
    }

    bool fully_certified() const { return uncertified.empty(); }

    // highest certified degree carrying dimension; lo-1 if none
    int top_degree() const {
        int top = lo - 1;
        for (const auto& [n, d] : dims)
            if (d != 0 && certified(n)) top = n;
        return top;
    }
};

}  // namespace gorlab
