#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "ctxforge/errors.hpp"
#include "ctxforge/graph.hpp"
#include "ctxforge/linalg.hpp"

namespace ctxforge {

struct ThetaResult {
    double value = 0.0;  // midpoint of [lower, upper]
    double lower = 0.0;  // <J, X> for a feasible X
    double upper = 0.0;  // lambda_max(J + Y) for an edge-supported Y
    double tolerance = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

struct ThetaOptions {
    int max_iterations = 20000;
    double target_gap = 1e-6;
    double rho = 1.0;
};

namespace detail {

inline RMatrix project_psd(const RMatrix& m) {
    const auto es = eigh(m);
    const std::size_t n = m.rows();
    RMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = es.values[k];
        if (lam <= 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i, j) += lam * es.vectors(i, k) * es.vectors(j, k);
    }
    return out;
}

// Nearest point of {X symmetric : tr X = 1, X_ij = 0 on edges}.
inline void project_affine(RMatrix& x, const WeightedGraph& g) {
    const std::size_t n = x.rows();
    for (auto [u, v] : g.edges()) x(u, v) = x(v, u) = 0.0;
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += x(i, i);
    const double shift = (1.0 - tr) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) x(i, i) += shift;
}

inline double total_mass(const RMatrix& x) {
    double s = 0.0;
    for (double v : x.data()) s += v;
    return s;
}

// Feasible point from an approximately feasible PSD matrix: zero the edge
// entries, shift by the most negative eigenvalue, renormalize the trace.
inline double feasible_lower_bound(RMatrix z, const WeightedGraph& g) {
    const std::size_t n = z.rows();
    for (auto [u, v] : g.edges()) z(u, v) = z(v, u) = 0.0;
    const double lmin = eigh(z).values.front();
    const double eps = std::max(0.0, -lmin);
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += z(i, i);
    const double denom = tr + static_cast<double>(n) * eps;
    if (denom <= 0.0) return 0.0;
    return (total_mass(z) + static_cast<double>(n) * eps) / denom;
}

// lambda_max(J + Y) where Y is read off the edge entries of a dual estimate S
// via Y_ij = -1 - S_ij.
inline double dual_upper_bound(const RMatrix& s, const WeightedGraph& g) {
    const std::size_t n = s.rows();
    RMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = 1.0;
    for (auto [u, v] : g.edges()) {
        const double y = -1.0 - 0.5 * (s(u, v) + s(v, u));
        m(u, v) += y;
        m(v, u) += y;
    }
    return eigh(m).values.back();
}

}  // namespace detail

// Lovasz theta: max <J, X> over PSD X with unit trace and zeros on edges,
// solved by ADMM on the split X (affine) = Z (PSD cone).
inline ThetaResult lovasz_theta(const WeightedGraph& g, const ThetaOptions& opt = {}) {
    const std::size_t n = g.size();
    if (n > 32) throw TooLarge("lovasz_theta supports at most 32 vertices");
    ThetaResult res;
    if (n == 0) return res;
    if (g.edge_count() == 0) {
        res.value = res.lower = res.upper = static_cast<double>(n);
        return res;
    }

    RMatrix j(n, n);
    for (double& v : j.data()) v = 1.0;
    RMatrix z = RMatrix::identity(n) * (1.0 / static_cast<double>(n));
    RMatrix u(n, n);
    const double rho = opt.rho;
    res.lower = 0.0;
    res.upper = static_cast<double>(n);
    for (int it = 1; it <= opt.max_iterations; ++it) {
        RMatrix x = z - u + j * (1.0 / rho);
        detail::project_affine(x, g);
        RMatrix z_prev = z;
        z = detail::project_psd(x + u);
        u += x - z;
        res.iterations = it;
        const double primal_res = (x - z).max_abs();
        const double dual_res = rho * (z - z_prev).max_abs();
        res.residual = std::max(primal_res, dual_res);
        if (it % 25 == 0 || res.residual < 1e-9) {
            res.lower = std::max(res.lower, detail::feasible_lower_bound(z, g));
            const RMatrix s = u * rho;
            res.upper = std::min({res.upper, detail::dual_upper_bound(s, g), detail::dual_upper_bound(s * -1.0, g)});
            if (res.upper - res.lower <= opt.target_gap) break;
        }
    }
    res.value = 0.5 * (res.lower + res.upper);
    res.tolerance = 0.5 * (res.upper - res.lower);
    if (res.tolerance > 1e-4)
        throw ConvergenceFailure("theta bracket [" + std::to_string(res.lower) + ", " + std::to_string(res.upper) +
                                 "] did not close; residual " + std::to_string(res.residual));
    return res;
}

}  // namespace ctxforge
