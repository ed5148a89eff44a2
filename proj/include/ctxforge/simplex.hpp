#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include "ctxforge/errors.hpp"
#include "ctxforge/rational.hpp"

namespace ctxforge {

// max c^T x  s.t.  A x <= b,  x >= 0,  with b >= 0 so the slack basis is
// feasible from the start.
template <typename T>
struct LinearProgram {
    std::vector<std::vector<T>> a;  // rows
    std::vector<T> b;
    std::vector<T> c;
};

template <typename T>
struct LPResult {
    T optimum{};
    std::vector<T> primal;  // x
    std::vector<T> dual;    // y >= 0 with A^T y >= c and b^T y = optimum
    std::size_t pivots = 0;
};

using RationalLPResult = LPResult<Rational>;

namespace detail {

template <typename T> struct LPTolerance {
    static bool negative(const T& x) { return x < 0; }
    static bool positive(const T& x) { return x > 0; }
};
template <> struct LPTolerance<double> {
    static bool negative(double x) { return x < -1e-11; }
    static bool positive(double x) { return x > 1e-11; }
};

}  // namespace detail

// Compact-tableau primal simplex with Bland's rule. Variable labels 0..n-1
// are structural, n..n+m-1 are slacks.
template <typename T>
LPResult<T> solve_lp(const LinearProgram<T>& lp, std::size_t max_pivots = 1000000) {
    using Tol = detail::LPTolerance<T>;
    const std::size_t m = lp.a.size();
    const std::size_t n = lp.c.size();
    if (lp.b.size() != m) throw DimensionMismatch("LP right-hand side has wrong length");
    for (const auto& row : lp.a)
        if (row.size() != n) throw DimensionMismatch("LP constraint row has wrong length");
    for (const auto& bi : lp.b)
        if (bi < 0) throw Error("LP right-hand side must be nonnegative");

    std::vector<std::vector<T>> d(m + 1, std::vector<T>(n + 1));
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) d[r][j] = lp.a[r][j];
        d[r][n] = lp.b[r];
    }
    for (std::size_t j = 0; j < n; ++j) d[m][j] = -lp.c[j];
    std::vector<std::size_t> basic(m), nonbasic(n);
    for (std::size_t r = 0; r < m; ++r) basic[r] = n + r;
    for (std::size_t j = 0; j < n; ++j) nonbasic[j] = j;

    LPResult<T> res;
    for (;;) {
        std::size_t s = n;
        for (std::size_t j = 0; j < n; ++j)
            if (Tol::negative(d[m][j]) && (s == n || nonbasic[j] < nonbasic[s])) s = j;
        if (s == n) break;

        std::size_t r = m;
        T best{};
        for (std::size_t i = 0; i < m; ++i) {
            if (!Tol::positive(d[i][s])) continue;
            T ratio = d[i][n] / d[i][s];
            if (r == m || ratio < best || (ratio == best && basic[i] < basic[r])) {
                r = i;
                best = ratio;
            }
        }
        if (r == m) throw Error("linear program is unbounded");
        if (++res.pivots > max_pivots) throw ConvergenceFailure("simplex pivot limit reached");

        const T p = d[r][s];
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == r) continue;
            const T f = d[i][s] / p;
            if (f == T{}) continue;
            for (std::size_t j = 0; j <= n; ++j) {
                if (j == s) continue;
                if (d[r][j] == T{}) continue;
                d[i][j] -= f * d[r][j];
            }
            d[i][s] = -f;
        }
        for (std::size_t j = 0; j <= n; ++j)
            if (j != s) d[r][j] /= p;
        d[r][s] = T{1} / p;
        std::swap(basic[r], nonbasic[s]);
    }

    res.optimum = d[m][n];
    res.primal.assign(n, T{});
    res.dual.assign(m, T{});
    for (std::size_t r = 0; r < m; ++r)
        if (basic[r] < n) res.primal[basic[r]] = d[r][n];
    for (std::size_t j = 0; j < n; ++j)
        if (nonbasic[j] >= n) res.dual[nonbasic[j] - n] = d[m][j];
    if constexpr (std::is_same_v<T, double>) {
        for (auto& x : res.primal) x = std::max(x, 0.0);
        for (auto& y : res.dual) y = std::max(y, 0.0);
    }
    return res;
}

// Exact re-check of a rational LP result: primal and dual feasibility and
// equal objectives.
inline bool verify_lp_certificate(const LinearProgram<Rational>& lp, const RationalLPResult& r) {
    const std::size_t m = lp.a.size(), n = lp.c.size();
    if (r.primal.size() != n || r.dual.size() != m) return false;
    Rational primal_obj = 0, dual_obj = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (r.primal[j] < 0) return false;
        primal_obj += lp.c[j] * r.primal[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (r.dual[i] < 0) return false;
        Rational lhs = 0;
        for (std::size_t j = 0; j < n; ++j) lhs += lp.a[i][j] * r.primal[j];
        if (lhs > lp.b[i]) return false;
        dual_obj += lp.b[i] * r.dual[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
        Rational col = 0;
        for (std::size_t i = 0; i < m; ++i) col += lp.a[i][j] * r.dual[i];
        if (col < lp.c[j]) return false;
    }
    return primal_obj == dual_obj && primal_obj == r.optimum;
}

}  // namespace ctxforge
