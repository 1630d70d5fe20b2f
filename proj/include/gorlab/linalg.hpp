#pragma once

/*
 * Exact sparse linear algebra over Q.
 *
 * Everything downstream (cohomology, resolutions, the invariants) reduces to
 * three operations: reduced echelon form, solving against pivot columns, and
 * completing a subspace to an ambient one.  All of them are deterministic:
 * pivots are always chosen at the smallest available index, so two runs over
 * the same input produce identical bases.
 */

#include "gorlab/errors.hpp"
#include "gorlab/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace gorlab {

// sparse vector: index -> nonzero coefficient
using Vec = std::map<int, Rational>;

inline bool is_zero(const Vec& v) { return v.empty(); }

inline void set_entry(Vec& v, int i, const Rational& c) {
    if (c == 0) v.erase(i); else v[i] = c;
}

inline Rational entry(const Vec& v, int i) {
    auto it = v.find(i);
    return it == v.end() ? Rational(0) : it->second;
}

// target += c * src
inline void add_scaled(Vec& target, const Rational& c, const Vec& src) {
    if (c == 0) return;
    for (const auto& [i, x] : src) {
        auto it = target.find(i);
        if (it == target.end()) {
            target.emplace(i, c * x);
        } else {
            it->second += c * x;
            if (it->second == 0) target.erase(it);
        }
    }
}

inline Vec scaled(const Rational& c, const Vec& v) {
    Vec out;
    add_scaled(out, c, v);
    return out;
}

inline Vec sum(const Vec& a, const Vec& b) {
    Vec out = a;
    add_scaled(out, Rational(1), b);
    return out;
}

inline int leading_index(const Vec& v) {
    return v.empty() ? -1 : v.begin()->first;
}

struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::map<std::pair<int, int>, Rational> entries;  // zeros omitted

    SparseMatrix() = default;
    SparseMatrix(int r, int c) : rows(r), cols(c) {}

    void set(int r, int c, const Rational& v) {
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw InputError("matrix index out of range");
        if (v == 0) entries.erase({r, c}); else entries[{r, c}] = v;
    }

    Rational at(int r, int c) const {
        auto it = entries.find({r, c});
        return it == entries.end() ? Rational(0) : it->second;
    }

    // column c as a sparse vector over row indices
    Vec column(int c) const {
        Vec out;
        for (auto it = entries.lower_bound({0, 0}); it != entries.end(); ++it)
            if (it->first.second == c) out[it->first.first] = it->second;
        return out;
    }

    // matrix * x, x over column indices
    Vec apply(const Vec& x) const {
        Vec out;
        for (const auto& [rc, v] : entries) {
            auto it = x.find(rc.second);
            if (it == x.end()) continue;
            auto slot = out.find(rc.first);
            if (slot == out.end()) {
                out.emplace(rc.first, v * it->second);
            } else {
                slot->second += v * it->second;
                if (slot->second == 0) out.erase(slot);
            }
        }
        return out;
    }

    static SparseMatrix from_columns(int rows, const std::vector<Vec>& columns) {
        SparseMatrix m(rows, static_cast<int>(columns.size()));
        for (int c = 0; c < m.cols; ++c)
            for (const auto& [r, v] : columns[c]) {
                if (r < 0 || r >= rows) throw InputError("column entry out of range");
                m.entries[{r, c}] = v;
            }
        return m;
    }

    std::vector<Vec> row_list() const {
        std::vector<Vec> out(rows);
        for (const auto& [rc, v] : entries) out[rc.first][rc.second] = v;
        return out;
    }
};

// Row space in reduced echelon form: each row leads with coefficient 1 at its
// pivot, pivots strictly increase, and no row has support at another's pivot.
class Subspace {
  public:
    Subspace() = default;
    explicit Subspace(int ambient) : ambient_(ambient) {}

    int ambient_dim() const { return ambient_; }
    int dim() const { return static_cast<int>(rows_.size()); }
    const std::vector<Vec>& rows() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }

    // remainder of v after subtracting its projection onto the span
    Vec reduce(Vec v) const {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            auto it = v.find(pivots_[k]);
            if (it == v.end()) continue;
            add_scaled(v, -it->second, rows_[k]);
        }
        return v;
    }

    bool contains(const Vec& v) const { return reduce(v).empty(); }

    // coefficients of v in terms of rows(); nullopt if v is outside the span
    std::optional<std::vector<Rational>> coordinates(const Vec& v) const {
        std::vector<Rational> coeff(rows_.size(), Rational(0));
        Vec rem = v;
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            auto it = rem.find(pivots_[k]);
            if (it == rem.end()) continue;
            coeff[k] = it->second;
            add_scaled(rem, -coeff[k], rows_[k]);
        }
        if (!rem.empty()) return std::nullopt;
        return coeff;
    }

    // insert v into the span, keeping reduced echelon form; returns true if
    // the dimension grew
    bool insert(Vec v) {
        check_range(v);
        v = reduce(std::move(v));
        if (v.empty()) return false;
        int p = leading_index(v);
        Rational lead = v.begin()->second;
        if (lead != 1) {
            Rational inv = Rational(1) / lead;
            for (auto& [i, c] : v) c *= inv;
        }
        // back-substitute into the existing rows
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            auto it = rows_[k].find(p);
            if (it != rows_[k].end()) add_scaled(rows_[k], -it->second, v);
        }
        auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p);
        std::size_t idx = pos - pivots_.begin();
        pivots_.insert(pos, p);
        rows_.insert(rows_.begin() + idx, std::move(v));
        return true;
    }

    static Subspace span(int ambient, const std::vector<Vec>& vectors) {
        Subspace s(ambient);
        for (const auto& v : vectors) s.insert(v);
        return s;
    }

  private:
    void check_range(const Vec& v) const {
        if (!v.empty() && (v.begin()->first < 0 || v.rbegin()->first >= ambient_))
            throw InputError("vector exceeds ambient dimension");
    }

    int ambient_ = 0;
    std::vector<Vec> rows_;
    std::vector<int> pivots_;
};

struct EchelonResult {
    int rank = 0;
    Subspace kernel;            // subspace of the column-index space
    Subspace image;             // subspace of the row-index space
    std::vector<int> pivot_cols;
};

// Reduced echelon form of m; kernel from the free columns, image as the
// echelonized column span.  rank + dim kernel == cols always holds.
inline EchelonResult echelonize(const SparseMatrix& m) {
    // eliminate over the rows of m
    std::vector<Vec> work = m.row_list();
    Subspace rowspace(m.cols);
    for (auto& r : work) rowspace.insert(std::move(r));

    EchelonResult out;
    out.rank = rowspace.dim();
    out.pivot_cols = rowspace.pivots();

    out.kernel = Subspace(m.cols);
    {
        std::vector<bool> is_pivot(m.cols, false);
        for (int p : out.pivot_cols) is_pivot[p] = true;
        for (int c = 0; c < m.cols; ++c) {
            if (is_pivot[c]) continue;
            Vec v;
            v[c] = 1;
            const auto& rows = rowspace.rows();
            for (std::size_t k = 0; k < rows.size(); ++k) {
                Rational coef = entry(rows[k], c);
                if (coef != 0) v[out.pivot_cols[k]] = -coef;
            }
            out.kernel.insert(std::move(v));
        }
    }

    out.image = Subspace(m.rows);
    for (int c : out.pivot_cols) out.image.insert(m.column(c));
    if (out.image.dim() != out.rank || out.rank + out.kernel.dim() != m.cols)
        throw AssertionError("rank bookkeeping failed");
    return out;
}

// Solve m x = rhs.  The solution is echelon-minimal: free variables are zero,
// so the answer is supported on pivot columns only.  nullopt if inconsistent.
inline std::optional<Vec> solve(const SparseMatrix& m, const Vec& rhs) {
    // eliminate the augmented rows [row | rhs_r] with the extra index ncols
    if (!rhs.empty() && (rhs.begin()->first < 0 || rhs.rbegin()->first >= m.rows))
        throw InputError("rhs exceeds row count");
    int n = m.cols;
    Subspace aug(n + 1);
    std::vector<Vec> rows = m.row_list();
    for (int r = 0; r < m.rows; ++r) {
        Vec v = std::move(rows[r]);
        Rational b = entry(rhs, r);
        if (b != 0) v[n] = b;
        aug.insert(std::move(v));
    }

    Vec x;
    // Each augmented row reads: x[pivot] + sum(coeff * x[free]) = value.
    // With free variables pinned to zero, x[pivot] is the trailing value.
    const auto& rrows = aug.rows();
    const auto& piv = aug.pivots();
    for (std::size_t k = 0; k < rrows.size(); ++k) {
        if (piv[k] == n) return std::nullopt;  // 0 = 1 row: inconsistent
        Rational v = entry(rrows[k], n);
        if (v != 0) x[piv[k]] = v;
    }
    // pinned free variables make this a genuine solution iff consistent;
    // verify to catch rows eliminated into the augmented column
    Vec check = m.apply(x);
    add_scaled(check, Rational(-1), rhs);
    if (!check.empty()) return std::nullopt;
    return x;
}

// Inverse of a square matrix by elimination on [m | I]; AssertionError when
// singular.  Reduced rows with pivots 0..n-1 read off as [I | inverse].
inline SparseMatrix invert(const SparseMatrix& m) {
    if (m.rows != m.cols) throw InputError("invert needs a square matrix");
    int n = m.rows;
    Subspace aug(2 * n);
    std::vector<Vec> rows = m.row_list();
    for (int r = 0; r < n; ++r) {
        Vec v = std::move(rows[r]);
        v[n + r] = 1;
        aug.insert(std::move(v));
    }
    SparseMatrix inv(n, n);
    const auto& rws = aug.rows();
    const auto& piv = aug.pivots();
    for (int k = 0; k < n; ++k) {
        if (k >= aug.dim() || piv[k] != k) throw AssertionError("matrix is singular");
        for (const auto& [j, c] : rws[k])
            if (j >= n) inv.set(k, j - n, c);
    }
    return inv;
}

// span(sub) + span(result rows) == ambient, direct; NotASubspace if sub is not
// contained in ambient.  Representatives complete sub to an echelon basis.
inline Subspace coset_basis(const Subspace& sub, const Subspace& ambient) {
    if (sub.ambient_dim() != ambient.ambient_dim())
        throw InputError("coset_basis: ambient dimensions differ");
    for (const auto& r : sub.rows())
        if (!ambient.contains(r)) throw NotASubspace("coset_basis: not contained in ambient");
    Subspace reps(sub.ambient_dim());
    Subspace accum = sub;
    for (const auto& r : ambient.rows()) {
        Vec rem = accum.reduce(r);
        if (!rem.empty()) {
            accum.insert(rem);
            reps.insert(std::move(rem));
        }
    }
    if (reps.dim() + sub.dim() != ambient.dim())
        throw AssertionError("coset dimension bookkeeping failed");
    return reps;
}

// intersection via the kernel of the stacked column matrix [A | -B]
inline Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw InputError("intersect: ambient dimensions differ");
    std::vector<Vec> cols;
    cols.reserve(a.dim() + b.dim());
    for (const auto& r : a.rows()) cols.push_back(r);
    for (const auto& r : b.rows()) cols.push_back(scaled(Rational(-1), r));
    SparseMatrix m = SparseMatrix::from_columns(a.ambient_dim(), cols);
    EchelonResult ech = echelonize(m);
    Subspace out(a.ambient_dim());
    for (const auto& k : ech.kernel.rows()) {
        Vec v;
        for (const auto& [i, c] : k) {
            if (i < a.dim()) add_scaled(v, c, a.rows()[i]);
        }
        out.insert(std::move(v));
    }
    return out;
}

}  // namespace gorlab
