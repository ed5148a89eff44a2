#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ctxforge/cliques.hpp"
#include "ctxforge/errors.hpp"
#include "ctxforge/graph.hpp"
#include "ctxforge/invariants.hpp"
#include "ctxforge/ks.hpp"
#include "ctxforge/linalg.hpp"
#include "ctxforge/projector_set.hpp"
#include "ctxforge/rational.hpp"
#include "ctxforge/simplex.hpp"

namespace ctxforge {

inline constexpr double kInconclusiveBand = 1e-6;

struct SICCertificate {
    std::vector<Rational> weights;  // normalized: every independent set sums to at most y
    Rational y;
    double lambda_min = 0.0;  // of sum_i w_i Pi_i, at least 1 - 1e-9
    bool normalized = true;   // false when the input weights were rescaled
    Rational scale{1};        // weights = scale * input weights
};

struct SICCheck {
    std::optional<SICCertificate> certificate;
    std::string reason;  // set on rejection
    bool accepted() const { return certificate.has_value(); }
};

inline std::vector<double> to_doubles(const std::vector<Rational>& w) {
    std::vector<double> out;
    out.reserve(w.size());
    for (const auto& x : w) out.push_back(to_double(x));
    return out;
}

inline SICCheck check_sic_certificate(const ProjectorSet& s, const std::vector<Rational>& w) {
    if (w.size() != s.size()) throw WeightArityMismatch("expected " + std::to_string(s.size()) + " weights");
    for (const auto& x : w)
        if (x < 0) throw Error("weights must be nonnegative");
    const auto g = orthogonality_graph(s);
    const Rational a = alpha_value(g, w);
    const double lam = min_eigenvalue(s.weighted_sum(to_doubles(w)));
    SICCheck out;
    if (a == 0 || lam <= 1e-12) {
        out.reason = "lambda_min is " + std::to_string(lam) + ", no rescaling reaches the identity";
        return out;
    }
    SICCertificate c;
    if (a < 1 && lam >= 1.0 - 1e-9) {
        c.weights = w;
        c.y = a;
        c.lambda_min = lam;
        out.certificate = c;
        return out;
    }
    // Rescale so that the operator's smallest eigenvalue becomes one.
    c.normalized = false;
    c.scale = Rational{1} / rationalize(lam, 1000000);
    for (const auto& x : w) c.weights.push_back(x * c.scale);
    c.y = a * c.scale;
    c.lambda_min = min_eigenvalue(s.weighted_sum(to_doubles(c.weights)));
    if (c.lambda_min < 1.0 - 1e-9) {
        // The rational approximation of lambda overshot; shrink by a hair.
        c.scale *= make_rational(999999999, 1000000000);
        for (std::size_t k = 0; k < w.size(); ++k) c.weights[k] = w[k] * c.scale;
        c.y = a * c.scale;
        c.lambda_min = min_eigenvalue(s.weighted_sum(to_doubles(c.weights)));
    }
    if (c.y >= 1 || c.lambda_min < 1.0 - 1e-9) {
        out.reason = "independent sets reach " + to_string(a) + " while lambda_min is only " + std::to_string(lam);
        return out;
    }
    out.certificate = c;
    return out;
}

// Independent re-check of a certificate against the set.
inline bool verify_sic_certificate(const ProjectorSet& s, const SICCertificate& c) {
    if (c.weights.size() != s.size() || c.y >= 1) return false;
    for (const auto& x : c.weights)
        if (x < 0) return false;
    if (alpha_value(orthogonality_graph(s), c.weights) > c.y) return false;
    return min_eigenvalue(s.weighted_sum(to_doubles(c.weights))) >= 1.0 - 1e-9;
}

// A state rho and a fractional independent-set cover y with
// sum_{I contains i} y_I >= tr(rho Pi_i) for all i. Any weights with
// independent-set sums <= 1 then have lambda_min <= tr(rho sum w Pi) <= sum y.
struct SICUpperBound {
    CMatrix rho;
    std::vector<VertexSet> sets;
    std::vector<double> y;
    double bound = 0.0;
};

inline bool verify_sic_upper_bound(const ProjectorSet& s, const SICUpperBound& u, double tol = 1e-9) {
    if (u.sets.size() != u.y.size() || u.rho.rows() != s.dim) return false;
    if (hermiticity_defect(u.rho) > 1e-9) return false;
    if (std::abs(u.rho.trace() - Complex(1, 0)) > 1e-9 || min_eigenvalue(u.rho) < -1e-9) return false;
    const auto g = orthogonality_graph(s);
    std::vector<double> cover(s.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < u.sets.size(); ++k) {
        if (u.y[k] < 0 || !is_independent(g, u.sets[k])) return false;
        total += u.y[k];
        for (auto v : u.sets[k]) cover[v] += u.y[k];
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        if (cover[i] + tol < expectation(u.rho, s.projector(i).matrix())) return false;
    return std::abs(total - u.bound) <= tol;
}

struct GapReport {
    std::vector<double> weights;   // independent-set sums at most 1
    std::vector<Rational> rational_weights;
    Rational classical;            // alpha(G, rational_weights)
    double quantum_floor = 0.0;    // lambda_min(sum w_i Pi_i)
    double ratio = 0.0;            // quantum_floor / classical
    double upper_bound = 0.0;      // from the cutting-plane LP
    SICUpperBound dual;
    std::size_t iterations = 0;
};

struct SICOptions {
    std::size_t max_iterations = 2000;
    double gap_tolerance = 1e-9;
    std::size_t enumeration_budget = kDefaultEnumerationBudget;
};

// Maximizes lambda_min(sum w_i Pi_i) over w >= 0 with every maximal
// independent set summing to at most 1. Kelley's cutting planes: each cut
// t <= sum_i w_i <u|Pi_i|u> comes from an eigenvector u of the current
// operator; the LP optimum bounds the true optimum from above and its dual
// yields a state plus independent-set cover certifying that bound.
inline GapReport optimize_sic_weights(const ProjectorSet& s, const SICOptions& opt = {}) {
    const std::size_t n = s.size(), d = s.dim;
    if (n == 0) throw Error("empty projector set");
    const auto g = orthogonality_graph(s);
    const auto sets = enumerate_maximal_independent_sets(g, opt.enumeration_budget);

    std::vector<CMatrix> proj;
    for (std::size_t i = 0; i < n; ++i) proj.push_back(s.projector(i).matrix());
    std::vector<std::vector<Complex>> cuts;
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<Complex> e(d, Complex{});
        e[k] = 1;
        cuts.push_back(e);
    }
    for (const auto& v : s.vectors) cuts.push_back(v.amplitudes());

    auto cut_row = [&](const std::vector<Complex>& u) {
        std::vector<double> row(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) row[i] = -std::norm(inner(s.vectors[i].amplitudes(), u));
        row[n] = 1.0;
        return row;
    };

    LinearProgram<double> lp;
    lp.c.assign(n + 1, 0.0);
    lp.c[n] = 1.0;
    for (const auto& set : sets) {
        std::vector<double> row(n + 1, 0.0);
        for (auto v : set) row[v] = 1.0;
        lp.a.push_back(row);
        lp.b.push_back(1.0);
    }
    for (const auto& u : cuts) {
        lp.a.push_back(cut_row(u));
        lp.b.push_back(0.0);
    }

    GapReport rep;
    double best = -1.0;
    std::vector<double> best_w;
    LPResult<double> last;
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        last = solve_lp(lp);
        rep.iterations = it + 1;
        rep.upper_bound = last.optimum;
        std::vector<double> w(last.primal.begin(), last.primal.begin() + static_cast<long>(n));
        CMatrix m(d, d);
        for (std::size_t i = 0; i < n; ++i)
            if (w[i] != 0.0) {
                CMatrix p = proj[i];
                p *= Complex(w[i], 0);
                m += p;
            }
        const auto es = eigh(m);
        if (es.values.front() > best) {
            best = es.values.front();
            best_w = w;
        }
        if (last.optimum - best <= opt.gap_tolerance) break;
        bool added = false;
        for (std::size_t k = 0; k < d; ++k) {
            if (es.values[k] > last.optimum - opt.gap_tolerance) break;
            std::vector<Complex> u(d);
            for (std::size_t r = 0; r < d; ++r) u[r] = es.vectors(r, k);
            lp.a.push_back(cut_row(u));
            lp.b.push_back(0.0);
            cuts.push_back(u);
            added = true;
        }
        if (!added) break;
    }
    if (last.optimum - best > 1e-6)
        throw ConvergenceFailure("cutting planes stalled with gap " + std::to_string(last.optimum - best));

    // Dual certificate: rows 0..|sets|-1 are independent sets, the rest cuts.
    SICUpperBound ub;
    ub.rho = CMatrix(d, d);
    double zsum = 0.0;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        const double z = last.dual[sets.size() + k];
        if (z <= 0) continue;
        zsum += z;
        const Ket u = Ket::normalized(cuts[k]);
        CMatrix o = outer(u, u);
        o *= Complex(z, 0);
        ub.rho += o;
    }
    if (zsum > 0) ub.rho *= Complex(1.0 / zsum, 0);
    if (zsum <= 0) throw ConvergenceFailure("cutting-plane LP has no active cut");
    for (std::size_t k = 0; k < sets.size(); ++k) {
        const double y = last.dual[k];
        if (y <= 0) continue;
        ub.sets.push_back(sets[k]);
        ub.y.push_back(y / zsum);
        ub.bound += y / zsum;
    }
    rep.dual = ub;

    rep.weights = best_w;
    for (auto x : best_w) rep.rational_weights.push_back(rationalize(std::max(x, 0.0), 1000000));
    rep.classical = alpha_value(g, rep.rational_weights);
    rep.quantum_floor = min_eigenvalue(s.weighted_sum(to_doubles(rep.rational_weights)));
    rep.ratio = rep.classical > 0 ? rep.quantum_floor / to_double(rep.classical) : 0.0;
    return rep;
}

enum class Verdict { Yes, No, Inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        default: return "inconclusive";
    }
}

struct SICRefutation {
    std::string kind;  // "chi_f" or "upper_bound"
    Rational chi_f;
    std::optional<NCModelCertificate> nc_model;
    std::optional<SICUpperBound> upper_bound;
};

struct SICResult {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<SICCertificate> certificate;
    std::optional<SICRefutation> refutation;
    std::optional<GapReport> gap;
};

inline SICResult is_sic(const ProjectorSet& s, const SICOptions& opt = {}) {
    SICResult r;
    const auto g = orthogonality_graph(s);
    if (s.size() == 0) {
        r.verdict = Verdict::No;
        r.refutation = SICRefutation{"chi_f", Rational{0}, NCModelCertificate{{VertexSet{}}, {Rational{1}}}, {}};
        return r;
    }
    auto nc = maxmixed_nc_model(g, s.dim, opt.enumeration_budget);
    if (nc.feasible) {
        r.verdict = Verdict::No;
        r.refutation = SICRefutation{"chi_f", nc.chi_f, nc.model, {}};
        return r;
    }
    auto gap = optimize_sic_weights(s, opt);
    r.gap = gap;
    if (gap.ratio > 1.0 + kInconclusiveBand) {
        auto chk = check_sic_certificate(s, gap.rational_weights);
        if (chk.accepted() && verify_sic_certificate(s, *chk.certificate)) {
            r.verdict = Verdict::Yes;
            r.certificate = chk.certificate;
        }
        return r;
    }
    if (gap.upper_bound < 1.0 - kInconclusiveBand && verify_sic_upper_bound(s, gap.dual, 1e-7) &&
        gap.dual.bound < 1.0 - kInconclusiveBand) {
        r.verdict = Verdict::No;
        r.refutation = SICRefutation{"upper_bound", nc.chi_f, std::nullopt, gap.dual};
    }
    return r;
}

struct CriticalSICResult {
    Verdict verdict = Verdict::Inconclusive;  // Yes: critical, No: not critical
    SICResult whole;
    std::vector<SICResult> deletions;
};

inline CriticalSICResult is_critical_sic(const ProjectorSet& s, const SICOptions& opt = {}) {
    CriticalSICResult r;
    r.whole = is_sic(s, opt);
    if (r.whole.verdict != Verdict::Yes) {
        r.verdict = r.whole.verdict == Verdict::No ? Verdict::No : Verdict::Inconclusive;
        return r;
    }
    bool inconclusive = false, critical = true;
    for (std::size_t v = 0; v < s.size(); ++v) {
        r.deletions.push_back(is_sic(s.without({v}), opt));
        const auto verdict = r.deletions.back().verdict;
        if (verdict == Verdict::Yes) critical = false;
        if (verdict == Verdict::Inconclusive) inconclusive = true;
    }
    r.verdict = !critical ? Verdict::No : inconclusive ? Verdict::Inconclusive : Verdict::Yes;
    return r;
}

struct EgalitarianResult {
    bool egalitarian = false;
    double lambda = 0.0;
    double spread = 0.0;
    std::vector<double> spectrum;
};

inline EgalitarianResult is_egalitarian(const ProjectorSet& s, const std::vector<Rational>& w) {
    if (w.size() != s.size()) throw WeightArityMismatch("expected " + std::to_string(s.size()) + " weights");
    const auto es = eigh(s.weighted_sum(to_doubles(w)));
    EgalitarianResult r;
    r.spectrum = es.values;
    r.spread = es.values.back() - es.values.front();
    r.egalitarian = r.spread <= 1e-9;
    double sum = 0.0;
    for (auto x : es.values) sum += x;
    r.lambda = sum / static_cast<double>(es.values.size());
    return r;
}

}  // namespace ctxforge
