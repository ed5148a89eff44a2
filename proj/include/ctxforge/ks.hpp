#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctxforge/cliques.hpp"
#include "ctxforge/errors.hpp"
#include "ctxforge/graph.hpp"
#include "ctxforge/invariants.hpp"
#include "ctxforge/projector_set.hpp"

namespace ctxforge {

struct KSInstance {
    WeightedGraph graph;
    std::vector<VertexSet> bases;  // designated complete bases
    std::size_t d = 0;

    std::size_t size() const { return graph.size(); }

    void validate() const {
        for (const auto& b : bases) {
            if (b.size() != d) throw DimensionMismatch("basis size differs from dimension");
            if (!is_clique(graph, b)) throw Error("designated basis is not a clique");
        }
    }
};

using KSAssignment = std::vector<std::uint8_t>;

inline std::string to_bitstring(const KSAssignment& a) {
    std::string s;
    for (auto x : a) s.push_back(x ? '1' : '0');
    return s;
}

inline bool is_ks_assignment(const KSInstance& inst, const KSAssignment& a) {
    if (a.size() != inst.size()) return false;
    for (auto [u, v] : inst.graph.edges())
        if (a[u] && a[v]) return false;
    for (const auto& b : inst.bases) {
        int ones = 0;
        for (auto v : b) ones += a[v];
        if (ones != 1) return false;
    }
    return true;
}

inline KSInstance find_complete_bases(const ProjectorSet& s, double tol = 1e-8) {
    KSInstance inst;
    inst.graph = orthogonality_graph(s);
    inst.d = s.dim;
    for (auto& clique : enumerate_k_cliques(inst.graph, s.dim)) {
        std::vector<double> w(s.size(), 0.0);
        for (auto v : clique) w[v] = 1.0;
        if ((s.weighted_sum(w) - CMatrix::identity(s.dim)).max_abs() <= tol) inst.bases.push_back(std::move(clique));
    }
    return inst;
}

// Instance without the given vertices. Bases that lose a member stop being
// complete bases; their surviving members keep their orthogonality edges.
inline KSInstance delete_from_instance(const KSInstance& inst, const std::vector<std::size_t>& drop) {
    const auto keep = remaining_vertices(inst.size(), drop);
    std::vector<long> index(inst.size(), -1);
    for (std::size_t k = 0; k < keep.size(); ++k) index[keep[k]] = static_cast<long>(k);
    KSInstance out;
    out.graph = induced_subgraph(inst.graph, keep);
    out.d = inst.d;
    for (const auto& b : inst.bases) {
        VertexSet nb;
        for (auto v : b)
            if (index[v] >= 0) nb.push_back(static_cast<std::size_t>(index[v]));
        if (nb.size() == b.size()) out.bases.push_back(nb);
    }
    return out;
}

enum class KSMode { Exists, Enumerate, Count };

struct KSResult {
    bool exists = false;
    std::optional<KSAssignment> first;
    std::vector<KSAssignment> all;  // Enumerate mode, lexicographic order
    std::uint64_t count = 0;        // Count and Enumerate modes
    std::uint64_t nodes = 0;
};

struct KSOptions {
    KSMode mode = KSMode::Exists;
    std::vector<int> fixed;  // -1 free, 0 or 1 fixed; empty means all free
    std::size_t enumerate_budget = 1000000;
    bool probing = true;
};

namespace detail {

class KSSolver {
public:
    explicit KSSolver(const KSInstance& inst) : inst_(inst), n_(inst.size()) {
        nbrs_.resize(n_);
        for (auto [u, v] : inst.graph.edges()) {
            nbrs_[u].push_back(v);
            nbrs_[v].push_back(u);
        }
        member_of_.resize(n_);
        for (std::size_t b = 0; b < inst.bases.size(); ++b)
            for (auto v : inst.bases[b]) member_of_[v].push_back(b);
    }

    KSResult run(const KSOptions& opt) {
        opt_ = opt;
        result_ = {};
        std::vector<std::int8_t> a(n_, -1);
        if (!opt.fixed.empty()) {
            if (opt.fixed.size() != n_) throw DimensionMismatch("fixed assignment has wrong length");
            for (std::size_t v = 0; v < n_; ++v) {
                const int f = opt.fixed[v];
                if (f < 0) continue;
                if (a[v] >= 0 && a[v] != f) return result_;
                if (a[v] < 0 && !assign(a, v, static_cast<std::int8_t>(f))) return result_;
            }
        }
        search(a);
        return result_;
    }

private:
    // Sets v and propagates to a fixpoint. Returns false on conflict.
    bool assign(std::vector<std::int8_t>& a, std::size_t v, std::int8_t val) {
        std::vector<std::pair<std::size_t, std::int8_t>> queue{{v, val}};
        for (std::size_t h = 0; h < queue.size(); ++h) {
            auto [x, xv] = queue[h];
            if (a[x] >= 0) {
                if (a[x] != xv) return false;
                continue;
            }
            a[x] = xv;
            if (xv == 1)
                for (auto y : nbrs_[x]) {
                    if (a[y] == 1) return false;
                    if (a[y] < 0) queue.emplace_back(y, 0);
                }
            for (auto b : member_of_[x]) {
                int ones = 0, free = 0;
                std::size_t last_free = 0;
                for (auto y : inst_.bases[b]) {
                    if (a[y] == 1) ++ones;
                    else if (a[y] < 0) {
                        ++free;
                        last_free = y;
                    }
                }
                if (ones > 1) return false;
                if (ones == 0 && free == 0) return false;
                if (ones == 0 && free == 1) queue.emplace_back(last_free, 1);
                if (ones == 1)
                    for (auto y : inst_.bases[b])
                        if (a[y] < 0) queue.emplace_back(y, 0);
            }
        }
        return true;
    }

    // Failed-literal probing: a value whose propagation conflicts forces the
    // opposite value. Repeats until nothing changes.
    bool probe(std::vector<std::int8_t>& a) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t v = 0; v < n_; ++v) {
                if (a[v] >= 0 || member_of_[v].empty()) continue;
                for (std::int8_t val : {std::int8_t{1}, std::int8_t{0}}) {
                    auto trial = a;
                    if (assign(trial, v, val)) continue;
                    if (!assign(a, v, static_cast<std::int8_t>(1 - val))) return false;
                    changed = true;
                    break;
                }
            }
        }
        return true;
    }

    bool basis_open(std::size_t b, const std::vector<std::int8_t>& a) const {
        for (auto y : inst_.bases[b])
            if (a[y] == 1) return false;
        return true;
    }

    // Returns true to stop the search.
    bool search(std::vector<std::int8_t> a) {
        ++result_.nodes;
        if (opt_.probing && !probe(a)) return false;

        if (opt_.mode == KSMode::Exists) {
            // Branch on the open basis with the fewest free members.
            std::size_t best_basis = inst_.bases.size(), best_free = SIZE_MAX;
            for (std::size_t b = 0; b < inst_.bases.size(); ++b) {
                if (!basis_open(b, a)) continue;
                std::size_t free = 0;
                for (auto y : inst_.bases[b]) free += a[y] < 0;
                if (free < best_free) {
                    best_free = free;
                    best_basis = b;
                }
            }
            if (best_basis == inst_.bases.size()) {
                KSAssignment out(n_);
                for (std::size_t v = 0; v < n_; ++v) out[v] = a[v] == 1;
                result_.exists = true;
                result_.first = out;
                result_.count = 1;
                return true;
            }
            std::size_t y = 0;
            for (auto m : inst_.bases[best_basis])
                if (a[m] < 0) {
                    y = m;
                    break;
                }
            auto next = a;
            if (assign(next, y, 1) && search(next)) return true;
            if (!assign(a, y, 0)) return false;
            return search(std::move(a));
        }

        std::size_t v = 0;
        while (v < n_ && a[v] >= 0) ++v;
        if (v == n_) {
            KSAssignment out(n_);
            for (std::size_t k = 0; k < n_; ++k) out[k] = a[k] == 1;
            result_.exists = true;
            if (!result_.first) result_.first = out;
            ++result_.count;
            if (opt_.mode == KSMode::Enumerate) {
                if (result_.all.size() >= opt_.enumerate_budget)
                    throw OutputBudgetExceeded("more than " + std::to_string(opt_.enumerate_budget) + " assignments");
                result_.all.push_back(out);
            }
            return false;
        }
        for (std::int8_t val : {std::int8_t{0}, std::int8_t{1}}) {
            auto next = a;
            if (assign(next, v, val) && search(next)) return true;
        }
        return false;
    }

    const KSInstance& inst_;
    std::size_t n_;
    std::vector<std::vector<std::size_t>> nbrs_;
    std::vector<std::vector<std::size_t>> member_of_;
    KSOptions opt_;
    KSResult result_;
};

}  // namespace detail

inline KSResult ks_solve(const KSInstance& inst, const KSOptions& opt = {}) {
    if (opt.mode != KSMode::Exists && inst.size() > 64)
        throw TooLarge("enumeration and counting support at most 64 vertices");
    inst.validate();
    return detail::KSSolver(inst).run(opt);
}

inline bool is_ks_set(const KSInstance& inst) { return !ks_solve(inst).exists; }

struct CriticalityReport {
    bool ks_set = false;
    bool critical = false;
    std::vector<std::size_t> non_critical_vertices;  // deletions that still leave a KS set
};

inline CriticalityReport critical_ks_report(const KSInstance& inst) {
    CriticalityReport r;
    r.ks_set = is_ks_set(inst);
    if (!r.ks_set) return r;
    for (std::size_t v = 0; v < inst.size(); ++v)
        if (!ks_solve(delete_from_instance(inst, {v})).exists) r.non_critical_vertices.push_back(v);
    r.critical = r.non_critical_vertices.empty();
    return r;
}

inline bool is_critical_ks(const KSInstance& inst) { return critical_ks_report(inst).critical; }

// True iff no KS assignment gives value 1 to both a and b.
inline bool verify_tifs(const KSInstance& inst, std::size_t a, std::size_t b) {
    if (a >= inst.size() || b >= inst.size()) throw IndexOutOfRange("endpoint out of range");
    if (a == b || inst.graph.adjacent(a, b)) throw AdjacentEndpoints("TIFS endpoints must be distinct and nonadjacent");
    KSOptions opt;
    opt.fixed.assign(inst.size(), -1);
    opt.fixed[a] = 1;
    opt.fixed[b] = 1;
    return !ks_solve(inst, opt).exists;
}

// ---------------------------------------------------------------------------
// Noncontextual model for the maximally mixed state

struct NCModelCertificate {
    std::vector<VertexSet> support;  // independent sets (may include the empty set)
    std::vector<Rational> mu;
};

struct NCModelResult {
    bool feasible = false;
    Rational chi_f;
    std::optional<NCModelCertificate> model;
    std::vector<Rational> dual_weights;  // when infeasible: sum w / d > alpha(G, w)
};

inline NCModelResult maxmixed_nc_model(const WeightedGraph& g, std::size_t d,
                                       std::size_t budget = kDefaultEnumerationBudget) {
    if (d == 0) throw DimensionMismatch("dimension must be positive");
    NCModelResult res;
    if (g.size() == 0) {
        res.feasible = true;
        res.model = NCModelCertificate{{VertexSet{}}, {Rational{1}}};
        return res;
    }
    auto frac = fractional_chromatic(g, budget);
    res.chi_f = frac.value;
    const Rational dd{static_cast<long>(d)};
    if (frac.value > dd) {
        res.dual_weights = frac.vertex_weights;
        return res;
    }
    res.feasible = true;
    // Scale the fractional cover by 1/d, then trim each vertex's excess
    // coverage by moving mass from I to I \ {v}.
    std::map<VertexSet, Rational> mu;
    for (std::size_t k = 0; k < frac.sets.size(); ++k)
        if (frac.set_weights[k] > 0) mu[frac.sets[k]] += frac.set_weights[k] / dd;
    const Rational target = Rational{1} / dd;
    for (std::size_t v = 0; v < g.size(); ++v) {
        Rational excess = -target;
        for (const auto& [set, m] : mu)
            if (std::binary_search(set.begin(), set.end(), v)) excess += m;
        while (excess > 0) {
            auto it = std::find_if(mu.begin(), mu.end(), [&](const auto& kv) {
                return kv.second > 0 && std::binary_search(kv.first.begin(), kv.first.end(), v);
            });
            const Rational t = std::min(it->second, excess);
            VertexSet smaller = it->first;
            smaller.erase(std::find(smaller.begin(), smaller.end(), v));
            it->second -= t;
            excess -= t;
            if (it->second == 0) mu.erase(it);
            mu[smaller] += t;
        }
    }
    Rational total = 0;
    for (const auto& kv : mu) total += kv.second;
    if (total < 1) mu[VertexSet{}] += Rational{1} - total;
    NCModelCertificate cert;
    for (const auto& [set, m] : mu) {
        if (m == 0) continue;
        cert.support.push_back(set);
        cert.mu.push_back(m);
    }
    res.model = std::move(cert);
    return res;
}

// Exact check: mu is a probability distribution over independent sets with
// every vertex marginal equal to 1/d.
inline bool verify_nc_model(const WeightedGraph& g, std::size_t d, const NCModelCertificate& c) {
    if (c.support.size() != c.mu.size()) return false;
    Rational total = 0;
    std::vector<Rational> marginal(g.size(), Rational{0});
    for (std::size_t k = 0; k < c.support.size(); ++k) {
        if (c.mu[k] < 0) return false;
        for (auto v : c.support[k])
            if (v >= g.size()) return false;
        if (!is_independent(g, c.support[k])) return false;
        total += c.mu[k];
        for (auto v : c.support[k]) marginal[v] += c.mu[k];
    }
    if (total != 1) return false;
    const Rational target = Rational{1} / Rational{static_cast<long>(d)};
    for (const auto& m : marginal)
        if (m != target) return false;
    return true;
}

// Exact check: the weighted inequality is violated by the maximally mixed
// state, i.e. sum_i w_i / d > alpha(G, w). Returns the margin, or nullopt.
inline std::optional<Rational> verify_dual_witness(const WeightedGraph& g, std::size_t d,
                                                   const std::vector<Rational>& w) {
    if (w.size() != g.size()) return std::nullopt;
    for (const auto& x : w)
        if (x < 0) return std::nullopt;
    Rational sum = 0;
    for (const auto& x : w) sum += x;
    const Rational margin = sum / Rational{static_cast<long>(d)} - alpha_value(g, w);
    if (margin > 0) return margin;
    return std::nullopt;
}

}  // namespace ctxforge
