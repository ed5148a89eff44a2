#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctxforge/catalog.hpp"
#include "ctxforge/gadget.hpp"
#include "ctxforge/sic.hpp"

namespace ctxforge {

struct CatalogMatch {
    std::string dataset;
    std::vector<std::size_t> map;  // input index -> catalog index
    CMatrix unitary;               // U c_{map[i]} is parallel to s_i
};

namespace detail {

// Phases theta_k so that e^{-i theta_j} e^{i theta_k} <s_j|s_k> = <c_j|c_k>,
// propagated along nonorthogonal pairs. Empty if the Gram data disagree.
inline std::optional<std::vector<Complex>> align_phases(const std::vector<Ket>& s, const std::vector<Ket>& c) {
    const std::size_t m = s.size();
    std::vector<Complex> phase(m, Complex{});
    std::vector<char> done(m, 0);
    for (std::size_t root = 0; root < m; ++root) {
        if (done[root]) continue;
        done[root] = 1;
        phase[root] = 1;
        std::vector<std::size_t> stack{root};
        while (!stack.empty()) {
            const std::size_t j = stack.back();
            stack.pop_back();
            for (std::size_t k = 0; k < m; ++k) {
                if (done[k]) continue;
                const Complex gs = inner(s[j], s[k]);
                if (std::abs(gs) < 1e-6) continue;
                // phase_k chosen so conj(phase_j) phase_k gs = gc.
                phase[k] = phase[j] * inner(c[j], c[k]) / gs;
                phase[k] /= std::abs(phase[k]);
                done[k] = 1;
                stack.push_back(k);
            }
        }
    }
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
            if (std::abs(std::conj(phase[j]) * phase[k] * inner(s[j], s[k]) - inner(c[j], c[k])) > 1e-8)
                return std::nullopt;
    return phase;
}

// Unitary U with U c_k = phase_k s_k, given matching Gram matrices.
inline CMatrix fit_unitary(const std::vector<Ket>& s, const std::vector<Ket>& c, const std::vector<Complex>& phase,
                           std::size_t d) {
    std::vector<std::vector<Complex>> qc, qs;
    for (std::size_t k = 0; k < c.size() && qc.size() < d; ++k) {
        auto rc = c[k].amplitudes();
        auto rs = s[k].amplitudes();
        for (auto& x : rs) x *= phase[k];
        for (std::size_t j = 0; j < qc.size(); ++j) {
            const Complex p = inner(qc[j], rc);  // identical coefficients on both sides
            for (std::size_t r = 0; r < d; ++r) {
                rc[r] -= p * qc[j][r];
                rs[r] -= p * qs[j][r];
            }
        }
        const double nc = norm_of(rc);
        if (nc < 1e-6) continue;
        for (auto& x : rc) x /= nc;
        for (auto& x : rs) x /= nc;
        qc.push_back(rc);
        qs.push_back(rs);
    }
    // Complete both orthonormal systems with the same deterministic recipe.
    auto complete = [d](std::vector<std::vector<Complex>>& q) {
        for (std::size_t e = 0; e < d && q.size() < d; ++e) {
            std::vector<Complex> v(d, Complex{});
            v[e] = 1;
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& b : q) {
                    const Complex p = inner(b, v);
                    for (std::size_t r = 0; r < d; ++r) v[r] -= p * b[r];
                }
            const double nv = norm_of(v);
            if (nv < 1e-6) continue;
            for (auto& x : v) x /= nv;
            q.push_back(v);
        }
    };
    complete(qc);
    complete(qs);
    CMatrix u(d, d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t col = 0; col < d; ++col) u(r, col) += qs[k][r] * std::conj(qc[k][col]);
    return u;
}

inline Ket apply(const CMatrix& u, const Ket& v) {
    std::vector<Complex> out(v.dim(), Complex{});
    for (std::size_t r = 0; r < v.dim(); ++r)
        for (std::size_t c = 0; c < v.dim(); ++c) out[r] += u(r, c) * v[c];
    return Ket::normalized(out);
}

}  // namespace detail

// Finds an injective relabeling of s into a catalog set together with a
// global unitary carrying the catalog vectors onto s (up to phases).
inline std::optional<CatalogMatch> match_catalog_subset(const ProjectorSet& s, const std::string& dataset) {
    const auto cat = load_dataset(dataset);
    if (cat.dim != s.dim || s.size() > cat.size() || s.size() == 0) return std::nullopt;
    const std::size_t n = s.size();
    std::vector<std::size_t> map;
    std::vector<char> used(cat.size(), 0);
    std::optional<CatalogMatch> found;

    auto consistent = [&](std::size_t i, std::size_t c) {
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(overlap(s.vectors[i], s.vectors[j]) - overlap(cat.vectors[c], cat.vectors[map[j]])) > 1e-8)
                return false;
        return true;
    };
    auto search = [&](auto&& self, std::size_t i) -> bool {
        if (i == n) {
            std::vector<Ket> sv(s.vectors.begin(), s.vectors.end()), cv;
            for (auto c : map) cv.push_back(cat.vectors[c]);
            auto phase = detail::align_phases(sv, cv);
            if (!phase) return false;
            CMatrix u = detail::fit_unitary(sv, cv, *phase, s.dim);
            for (std::size_t k = 0; k < n; ++k)
                if (overlap(detail::apply(u, cv[k]), sv[k]) < 1.0 - 1e-9) return false;
            found = CatalogMatch{dataset, map, u};
            return true;
        }
        for (std::size_t c = 0; c < cat.size(); ++c) {
            if (used[c] || !consistent(i, c)) continue;
            used[c] = 1;
            map.push_back(c);
            if (self(self, i + 1)) return true;
            map.pop_back();
            used[c] = 0;
        }
        return false;
    };
    search(search, 0);
    return found;
}

struct SICExtensionResult {
    ProjectorSet set;
    std::optional<CatalogMatch> catalog;
    std::optional<ExtensionResult> ks;  // when built through the KS route
    CriticalSICResult verification;
};

inline SICExtensionResult extend_to_critical_sic(const ProjectorSet& s, const ExtensionOptions& opt = {}) {
    if (!has_odd_hole_or_antihole(orthogonality_graph(s)))
        throw NotSDC("orthogonality graph has no odd hole or odd antihole");
    for (const auto& name : catalog::critical_sic_names()) {
        auto match = match_catalog_subset(s, name);
        if (!match) continue;
        const auto cat = load_dataset(name);
        SICExtensionResult r;
        r.set = s;
        std::vector<char> hit(cat.size(), 0);
        for (auto c : match->map) hit[c] = 1;
        for (std::size_t c = 0; c < cat.size(); ++c)
            if (!hit[c]) r.set.add(detail::apply(match->unitary, cat.vectors[c]), cat.labels[c]);
        r.verification = is_critical_sic(r.set);
        if (r.verification.verdict != Verdict::Yes)
            throw ConstructionFailed("catalog match with " + name + " did not verify as critical SI-C");
        r.catalog = std::move(match);
        return r;
    }

    for (std::size_t attempt = 0; attempt < opt.retry_budget; ++attempt) {
        ExtensionOptions inner = opt;
        inner.seed = opt.seed + 0x2545F4914F6CDD1DULL * attempt;
        inner.retry_budget = 1;
        SICExtensionResult r;
        try {
            r.ks = extend_to_critical_ks(s, inner);
        } catch (const ConstructionFailed&) {
            continue;
        }
        try {
            r.verification = is_critical_sic(r.ks->set);
        } catch (const TooLarge& e) {
            throw ConstructionFailed("critical KS extension has " + std::to_string(r.ks->set.size()) +
                                     " vectors; SI-C criticality cannot be certified: " + e.what());
        } catch (const OutputBudgetExceeded& e) {
            throw ConstructionFailed("critical KS extension has " + std::to_string(r.ks->set.size()) +
                                     " vectors; SI-C criticality cannot be certified: " + e.what());
        }
        if (r.verification.verdict == Verdict::Yes) {
            r.set = r.ks->set;
            return r;
        }
    }
    throw ConstructionFailed("no critical SI-C extension within " + std::to_string(opt.retry_budget) + " attempts");
}

}  // namespace ctxforge
