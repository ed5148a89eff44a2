#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ctxforge/errors.hpp"
#include "ctxforge/graph.hpp"
#include "ctxforge/ks.hpp"
#include "ctxforge/linalg.hpp"
#include "ctxforge/projector_set.hpp"

namespace ctxforge {

// Orthogonality pattern of the eight-vertex bug, 0-based. Vertex 0 is the
// endpoint A and vertex 4 the endpoint B; {1,2,3} and {5,6,7} are bases.
inline const std::vector<Edge>& bug_edges() {
    static const std::vector<Edge> e{{0, 1}, {0, 7}, {1, 2}, {1, 3}, {2, 3}, {2, 6},
                                     {3, 4}, {4, 5}, {5, 6}, {5, 7}, {6, 7}};
    return e;
}

struct GadgetStage {
    std::string kind;  // "bug" or "implication"
    double overlap = 0.0;
};

struct TIFSGadget {
    ProjectorSet vectors;
    std::size_t endpoint_a = 0;
    std::size_t endpoint_b = 0;
    std::vector<std::size_t> interior;
    std::vector<GadgetStage> stages;
    KSInstance instance() const { return find_complete_bases(vectors); }
};

struct GadgetOptions {
    std::uint64_t seed = 0;  // 0 picks the best-conditioned solution
    std::size_t max_links = 8;
};

namespace detail {

using Vec3 = std::array<double, 3>;

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 unit(const Vec3& a) {
    const double n = std::sqrt(dot(a, a));
    return {a[0] / n, a[1] / n, a[2] / n};
}

// Unitary frame in which A = e1 and B = (c, s, 0) with c = |<A|B>|.
struct Frame {
    std::array<std::vector<Complex>, 3> f;
    double c = 0.0, s = 0.0;

    Frame(const Ket& a, const Ket& b) {
        if (a.dim() != 3 || b.dim() != 3) throw UnsupportedDimension("gadget construction is implemented for d = 3");
        const Complex ab = inner(a, b);
        c = std::abs(ab);
        const Complex phase = c > 0 ? ab / c : Complex(1, 0);
        f[0] = a.amplitudes();
        for (auto& x : f[0]) x *= phase;
        f[1].assign(3, Complex{});
        for (std::size_t k = 0; k < 3; ++k) f[1][k] = b[k] - c * f[0][k];
        s = norm_of(f[1]);
        for (auto& x : f[1]) x /= s;
        // f2 = conj(f0 x f1) is orthogonal to both.
        f[2] = {std::conj(f[0][1] * f[1][2] - f[0][2] * f[1][1]), std::conj(f[0][2] * f[1][0] - f[0][0] * f[1][2]),
                std::conj(f[0][0] * f[1][1] - f[0][1] * f[1][0])};
        const double n2 = norm_of(f[2]);
        for (auto& x : f[2]) x /= n2;
    }

    Ket map(const Vec3& v) const {
        std::vector<Complex> out(3, Complex{});
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) out[k] += v[j] * f[j][k];
        return Ket::normalized(out);
    }
};

// Interior vectors of the bug for parameters (theta, phi) in the frame where
// A = e1 and B = (c, s, 0). Order: v2, v3, v4, v6, v7, v8 (1-based names).
inline std::array<Vec3, 6> bug_interior(double c, double s, double theta, double phi) {
    const Vec3 b{c, s, 0.0};
    const Vec3 v2{0.0, std::cos(theta), std::sin(theta)};
    const Vec3 v8{0.0, std::cos(phi), std::sin(phi)};
    const Vec3 v4 = unit(cross(b, v2));
    const Vec3 v3 = unit(cross(v2, v4));
    const Vec3 v6 = unit(cross(b, v8));
    const Vec3 v7 = unit(cross(v8, v6));
    return {v2, v3, v4, v6, v7, v8};
}

inline double bug_residual(double c, double s, double theta, double phi) {
    const auto v = bug_interior(c, s, theta, phi);
    return dot(v[1], v[4]);
}

struct BugSolution {
    double theta, phi, conditioning;
};

// All parameter pairs on a theta grid for which the bug closes, each scored
// by the smallest overlap among pairs that must stay nonorthogonal.
inline std::vector<BugSolution> bug_solutions(double c, double s) {
    constexpr int kTheta = 180, kPhi = 720;
    const double pi = std::numbers::pi;
    std::vector<BugSolution> out;
    for (int ti = 0; ti < kTheta; ++ti) {
        const double theta = pi * (ti + 0.5) / kTheta;
        double prev_phi = 0.0, prev = bug_residual(c, s, theta, 0.0);
        for (int pj = 1; pj <= kPhi; ++pj) {
            const double phi = pi * pj / kPhi;
            const double cur = bug_residual(c, s, theta, phi);
            if ((prev < 0) != (cur < 0)) {
                double lo = prev_phi, hi = phi, flo = prev;
                for (int it = 0; it < 100 && hi - lo > 1e-16; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = bug_residual(c, s, theta, mid);
                    if ((fm < 0) == (flo < 0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                const double root = 0.5 * (lo + hi);
                const auto v = bug_interior(c, s, theta, root);
                const std::array<Vec3, 8> all{Vec3{1, 0, 0}, v[0], v[1], v[2], Vec3{c, s, 0}, v[3], v[4], v[5]};
                double worst = 1.0;
                bool ok = std::fabs(dot(v[1], v[4])) < 1e-12;
                for (std::size_t i = 0; i < 8 && ok; ++i)
                    for (std::size_t j = i + 1; j < 8; ++j) {
                        const bool edge = std::find(bug_edges().begin(), bug_edges().end(), Edge{i, j}) !=
                                          bug_edges().end();
                        const double ov = std::fabs(dot(all[i], all[j]));
                        if (edge) continue;
                        worst = std::min({worst, ov, 1.0 - ov});
                    }
                if (ok && worst > 1e-4) out.push_back({theta, root, worst});
            }
            prev_phi = phi;
            prev = cur;
        }
    }
    return out;
}

}  // namespace detail

// The eight-vector bug between A and B in d = 3, with A at vertex 0 and B at
// vertex 4. Solutions are searched numerically; if none exists for the given
// overlap, OutOfRange is thrown.
inline TIFSGadget build_bug_tifs(const Ket& a, const Ket& b, std::uint64_t seed = 0) {
    if (a.dim() != 3 || b.dim() != 3) throw UnsupportedDimension("gadget construction is implemented for d = 3");
    const double ov = overlap(a, b);
    if (ov <= 1e-9 || ov >= 1.0 - 1e-9)
        throw EndpointsParallelOrOrthogonal("endpoints with overlap " + std::to_string(ov) + " need no gadget");
    const detail::Frame frame(a, b);
    auto sols = detail::bug_solutions(frame.c, frame.s);
    if (sols.empty()) throw OutOfRange("no bug realization for endpoint overlap " + std::to_string(ov));
    std::size_t pick = 0;
    if (seed == 0) {
        for (std::size_t k = 1; k < sols.size(); ++k)
            if (sols[k].conditioning > sols[pick].conditioning) pick = k;
    } else {
        std::vector<std::size_t> good;
        for (std::size_t k = 0; k < sols.size(); ++k)
            if (sols[k].conditioning > 0.02) good.push_back(k);
        if (good.empty())
            for (std::size_t k = 0; k < sols.size(); ++k) good.push_back(k);
        std::mt19937_64 rng(seed);
        pick = good[rng() % good.size()];
    }
    const auto v = detail::bug_interior(frame.c, frame.s, sols[pick].theta, sols[pick].phi);
    TIFSGadget g;
    g.vectors.dim = 3;
    const std::array<const char*, 8> names{"A", "b2", "b3", "b4", "B", "b6", "b7", "b8"};
    const std::array<std::optional<Ket>, 8> kets{a,
                                                 frame.map(v[0]),
                                                 frame.map(v[1]),
                                                 frame.map(v[2]),
                                                 b,
                                                 frame.map(v[3]),
                                                 frame.map(v[4]),
                                                 frame.map(v[5])};
    for (std::size_t k = 0; k < 8; ++k) g.vectors.add(*kets[k], names[k]);
    g.endpoint_a = 0;
    g.endpoint_b = 4;
    g.interior = {1, 2, 3, 5, 6, 7};
    g.stages.push_back({"bug", ov});
    if (!verify_tifs(g.instance(), 0, 4)) throw ConstructionFailed("bug failed verification");
    return g;
}

namespace detail {

// Adds v unless a parallel vector is already present; returns its index.
inline std::size_t add_unique(ProjectorSet& s, const Ket& v, const std::string& label) {
    for (std::size_t k = 0; k < s.size(); ++k)
        if (overlap(s.vectors[k], v) > 1.0 - 1e-9) return k;
    s.add(v, label);
    return s.size() - 1;
}

inline void append_gadget(ProjectorSet& into, const TIFSGadget& g, const std::string& prefix) {
    for (std::size_t k = 0; k < g.vectors.size(); ++k)
        add_unique(into, g.vectors.vectors[k], prefix + g.vectors.labels[k]);
}

}  // namespace detail

// TIFS between arbitrary nonorthogonal A and B in d = 3. When a single bug is
// not realizable, A is linked through intermediate vectors P1..Pk, each forced
// to 1 by its predecessor (a basis {P_{j+1}, X, Y} with bugs P_j-X and P_j-Y),
// followed by a closing bug Pk-B. The intermediates move along the great
// circle through A and B, away from B, in equal steps.
inline TIFSGadget chain_tifs(const Ket& a, const Ket& b, const GadgetOptions& opt = {}) {
    if (a.dim() != 3 || b.dim() != 3) throw UnsupportedDimension("gadget construction is implemented for d = 3");
    const double ov = overlap(a, b);
    if (ov <= 1e-9 || ov >= 1.0 - 1e-9)
        throw EndpointsParallelOrOrthogonal("endpoints with overlap " + std::to_string(ov) + " need no gadget");
    if (opt.max_links == 0) throw BudgetExceeded("max_links must be at least 1");
    try {
        return build_bug_tifs(a, b, opt.seed);
    } catch (const OutOfRange&) {
        if (opt.max_links == 1) throw BudgetExceeded("a single bug cannot join endpoints with overlap " + std::to_string(ov));
    }

    const detail::Frame frame(a, b);
    const double beta = std::acos(std::clamp(frame.c, 0.0, 1.0));
    const double target = std::acos(0.25);  // final overlap with B
    const double max_step = 25.0 * std::numbers::pi / 180.0;
    const double travel = target - beta;
    std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(travel / max_step)));
    for (; steps + 1 <= opt.max_links; ++steps) {
        const double step = travel / static_cast<double>(steps);
        try {
            TIFSGadget g;
            g.vectors.dim = 3;
            g.vectors.add(a, "A");
            g.vectors.add(b, "B");
            std::mt19937_64 rng(opt.seed);
            auto sub_seed = [&]() -> std::uint64_t { return opt.seed == 0 ? 0 : rng() | 1U; };
            Ket prev = a;
            for (std::size_t j = 1; j <= steps; ++j) {
                const double gamma = step * static_cast<double>(j);
                const detail::Vec3 q_frame{std::cos(gamma), -std::sin(gamma), 0.0};
                const Ket q = frame.map(q_frame);
                // X, Y: orthonormal pair orthogonal to Q at 45 degrees from prev's projection.
                const double gp = gamma - step;
                const detail::Vec3 p_frame{std::cos(gp), -std::sin(gp), 0.0};
                const detail::Vec3 z{0.0, 0.0, 1.0};
                const detail::Vec3 q_perp = detail::unit(detail::cross(z, q_frame));  // in-plane, orthogonal to Q
                const double sign = detail::dot(p_frame, q_perp) >= 0 ? 1.0 : -1.0;
                const double r2 = 1.0 / std::sqrt(2.0);
                const detail::Vec3 x_frame{r2 * sign * q_perp[0], r2 * sign * q_perp[1], r2};
                const detail::Vec3 y_frame{r2 * sign * q_perp[0], r2 * sign * q_perp[1], -r2};
                const Ket x = frame.map(x_frame), y = frame.map(y_frame);
                const std::string tag = "L" + std::to_string(j) + ".";
                detail::add_unique(g.vectors, q, tag + "P");
                detail::add_unique(g.vectors, x, tag + "X");
                detail::add_unique(g.vectors, y, tag + "Y");
                detail::append_gadget(g.vectors, build_bug_tifs(prev, x, sub_seed()), tag + "x.");
                detail::append_gadget(g.vectors, build_bug_tifs(prev, y, sub_seed()), tag + "y.");
                g.stages.push_back({"implication", overlap(prev, q)});
                prev = q;
            }
            detail::append_gadget(g.vectors, build_bug_tifs(prev, b, sub_seed()), "F.");
            g.stages.push_back({"bug", overlap(prev, b)});
            g.endpoint_a = 0;
            g.endpoint_b = 1;
            for (std::size_t k = 2; k < g.vectors.size(); ++k) g.interior.push_back(k);
            if (!verify_tifs(g.instance(), 0, 1)) throw ConstructionFailed("chained gadget failed verification");
            return g;
        } catch (const OutOfRange&) {
            continue;
        } catch (const AmbiguousOverlap&) {
            continue;
        }
    }
    throw BudgetExceeded("no chain with at most " + std::to_string(opt.max_links) + " links joins endpoints with overlap " +
                         std::to_string(ov));
}

// ---------------------------------------------------------------------------
// Basis covers

struct BasisCover {
    std::size_t dim = 0;
    std::vector<std::vector<Ket>> bases;              // each of size dim
    std::vector<std::vector<long>> original;          // per basis element: input index or -1
    std::size_t size() const { return bases.size(); }
};

namespace detail {

inline Ket haar_ket(std::mt19937_64& rng, std::size_t d) {
    std::normal_distribution<double> g;
    std::vector<Complex> a(d);
    for (auto& x : a) x = Complex(g(rng), g(rng));
    return Ket::normalized(a);
}

// Completes orthonormal `partial` to a basis with random vectors.
inline std::vector<Ket> complete_basis(const std::vector<Ket>& partial, std::size_t d, std::mt19937_64& rng) {
    std::vector<Ket> out = partial;
    while (out.size() < d) {
        auto cand = haar_ket(rng, d).amplitudes();
        for (const auto& e : out) {
            const Complex p = inner(e.amplitudes(), cand);
            for (std::size_t k = 0; k < d; ++k) cand[k] -= p * e[k];
        }
        for (const auto& e : out) {  // second pass for stability
            const Complex p = inner(e.amplitudes(), cand);
            for (std::size_t k = 0; k < d; ++k) cand[k] -= p * e[k];
        }
        if (norm_of(cand) < 1e-6) continue;
        out.push_back(Ket::normalized(cand));
    }
    return out;
}

// Vectors already placed must be neither near-parallel to nor ambiguously
// close to orthogonal with the new ones.
inline bool well_separated(const std::vector<Ket>& existing, const std::vector<Ket>& added) {
    for (const auto& a : added)
        for (const auto& e : existing) {
            const double ov = overlap(a, e);
            if (ov > 1.0 - 1e-6) return false;
            if (ov > 1e-9 && ov < 1e-6) return false;
        }
    return true;
}

}  // namespace detail

inline BasisCover minimal_basis_cover(const ProjectorSet& s, std::uint64_t seed = 1) {
    const std::size_t n = s.size(), d = s.dim;
    if (d > 6 || n > 32) throw TooLarge("basis cover search supports d <= 6 and n <= 32");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (overlap(s.vectors[i], s.vectors[j]) > 1.0 - 1e-9)
                throw Uncoverable("vectors " + s.labels[i] + " and " + s.labels[j] + " are parallel");
    const auto g = orthogonality_graph(s);
    std::mt19937_64 rng(seed);

    std::vector<std::vector<std::size_t>> groups, best;
    // Try to complete a partition into bases; forced completions must not
    // coincide with any vector already in use.
    auto realize = [&](const std::vector<std::vector<std::size_t>>& part) -> std::optional<BasisCover> {
        for (int attempt = 0; attempt < 50; ++attempt) {
            BasisCover cover;
            cover.dim = d;
            std::vector<Ket> used(s.vectors.begin(), s.vectors.end());
            bool ok = true;
            for (const auto& grp : part) {
                std::vector<Ket> partial;
                for (auto v : grp) partial.push_back(s.vectors[v]);
                auto basis = detail::complete_basis(partial, d, rng);
                std::vector<Ket> added(basis.begin() + static_cast<long>(grp.size()), basis.end());
                if (!detail::well_separated(used, added)) {
                    ok = false;
                    break;
                }
                used.insert(used.end(), added.begin(), added.end());
                std::vector<long> orig;
                for (auto v : grp) orig.push_back(static_cast<long>(v));
                orig.resize(d, -1);
                cover.bases.push_back(std::move(basis));
                cover.original.push_back(std::move(orig));
            }
            if (ok) return cover;
        }
        return std::nullopt;
    };

    std::optional<BasisCover> found;
    auto search = [&](auto&& self, std::size_t v, std::size_t limit) -> bool {
        if (groups.size() > limit) return false;
        if (v == n) {
            found = realize(groups);
            return found.has_value();
        }
        const std::size_t remaining = n - v;
        std::size_t room = 0;
        for (const auto& grp : groups) room += d - grp.size();
        if (remaining > room && groups.size() + (remaining - room + d - 1) / d > limit) return false;
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            if (groups[gi].size() >= d) continue;
            bool fits = true;
            for (auto u : groups[gi])
                if (!g.adjacent(u, v)) {
                    fits = false;
                    break;
                }
            if (!fits) continue;
            groups[gi].push_back(v);
            if (self(self, v + 1, limit)) return true;
            groups[gi].pop_back();
        }
        groups.push_back({v});
        if (self(self, v + 1, limit)) return true;
        groups.pop_back();
        return false;
    };
    for (std::size_t limit = (n + d - 1) / d; limit <= n; ++limit) {
        groups.clear();
        if (search(search, 0, limit)) return *found;
    }
    throw Uncoverable("no disjoint basis cover found");
}

// ---------------------------------------------------------------------------
// Extension to a critical KS set

// One required TIFS: from element `from_element` of basis `from_basis` to
// every element of basis `to_basis`.
struct TIFSRequirement {
    std::size_t from_basis = 0, from_element = 0, to_basis = 0;
};

inline std::vector<TIFSRequirement> default_tifs_pattern(std::size_t d) {
    std::vector<TIFSRequirement> p;
    for (std::size_t i = 1; i <= d; ++i) p.push_back({0, i - 1, i});
    return p;
}

struct ExtensionOptions {
    std::uint64_t seed = 1;
    std::size_t max_links = 8;
    std::size_t retry_budget = 8;
    std::optional<std::vector<TIFSRequirement>> pattern;  // required when more than d+1 bases
};

struct GadgetRecord {
    std::string from, to;
    std::size_t links = 0;
    std::size_t vertices = 0;
    bool orthogonal = false;
};

struct ExtensionResult {
    ProjectorSet set;
    std::size_t input_size = 0;
    std::size_t cover_bases = 0;  // N
    std::size_t total_bases = 0;  // N' after padding
    std::size_t attempts = 0;
    std::vector<GadgetRecord> gadgets;
};

namespace detail {

// Adds the gadgets required by `pattern` to `out`, where index[b][e] is the
// vertex of element e of basis b, and checks that the result is critical KS.
inline bool add_pattern_gadgets(ProjectorSet& out, const std::vector<std::vector<std::size_t>>& index,
                                const std::vector<TIFSRequirement>& pattern, const ExtensionOptions& opt,
                                std::size_t attempt, std::uint64_t seed, ExtensionResult& res) {
    const std::size_t d = out.dim;
    try {
        std::mt19937_64 gadget_rng(seed ^ 0x5bd1e995ULL);
        for (const auto& req : pattern) {
            if (req.from_basis >= index.size() || req.to_basis >= index.size() || req.from_element >= d)
                throw ConstructionFailed("TIFS pattern refers to a missing basis");
            const std::size_t from = index[req.from_basis][req.from_element];
            for (std::size_t e = 0; e < d; ++e) {
                const std::size_t to = index[req.to_basis][e];
                GadgetRecord rec{out.labels[from], out.labels[to], 0, 0, false};
                if (overlap(out.vectors[from], out.vectors[to]) <= 1e-9) {
                    rec.orthogonal = true;
                    res.gadgets.push_back(rec);
                    continue;
                }
                GadgetOptions go;
                go.seed = attempt == 0 ? 0 : (gadget_rng() | 1U);
                go.max_links = opt.max_links;
                auto g = chain_tifs(out.vectors[from], out.vectors[to], go);
                rec.links = g.stages.size();
                rec.vertices = g.interior.size();
                for (auto k : g.interior)
                    add_unique(out, g.vectors.vectors[k], "T" + std::to_string(res.gadgets.size()) + "." + g.vectors.labels[k]);
                res.gadgets.push_back(rec);
            }
        }
        res.attempts = attempt + 1;
        return is_critical_ks(find_complete_bases(out));
    } catch (const AmbiguousOverlap&) {
        return false;
    } catch (const BudgetExceeded&) {
        return false;
    }
}

}  // namespace detail

inline ExtensionResult extend_to_critical_ks(const ProjectorSet& s, const ExtensionOptions& opt = {}) {
    if (!has_odd_hole_or_antihole(orthogonality_graph(s)))
        throw NotSDC("orthogonality graph has no odd hole or odd antihole");
    const std::size_t d = s.dim;
    if (d != 3) throw UnsupportedDimension("gadget construction is implemented for d = 3");

    for (std::size_t attempt = 0; attempt < opt.retry_budget; ++attempt) {
        const std::uint64_t seed = opt.seed + 0x9E3779B97F4A7C15ULL * attempt;
        std::mt19937_64 rng(seed);
        BasisCover cover = minimal_basis_cover(s, seed);
        ExtensionResult res;
        res.input_size = s.size();
        res.cover_bases = cover.size();

        std::vector<Ket> used;
        for (const auto& b : cover.bases) used.insert(used.end(), b.begin(), b.end());
        while (cover.size() < d + 1) {
            auto basis = detail::complete_basis({}, d, rng);
            if (!detail::well_separated(used, basis)) continue;
            used.insert(used.end(), basis.begin(), basis.end());
            cover.bases.push_back(basis);
            cover.original.emplace_back(d, -1);
        }
        res.total_bases = cover.size();
        std::vector<TIFSRequirement> pattern;
        if (opt.pattern) pattern = *opt.pattern;
        else if (cover.size() == d + 1) pattern = default_tifs_pattern(d);
        else
            throw ConstructionFailed("a cover with " + std::to_string(cover.size()) +
                                     " bases needs an explicit TIFS pattern");

        // Input vectors first and verbatim, then completions and padding.
        ProjectorSet out = s;
        std::vector<std::vector<std::size_t>> index(cover.size(), std::vector<std::size_t>(d));
        for (std::size_t bi = 0; bi < cover.size(); ++bi)
            for (std::size_t e = 0; e < d; ++e) {
                const long o = cover.original[bi][e];
                if (o >= 0) index[bi][e] = static_cast<std::size_t>(o);
                else
                    index[bi][e] = detail::add_unique(out, cover.bases[bi][e],
                                                      "B" + std::to_string(bi) + "." + std::to_string(e));
            }
        if (!detail::add_pattern_gadgets(out, index, pattern, opt, attempt, seed, res)) continue;
        res.set = std::move(out);
        return res;
    }
    throw ConstructionFailed("no critical KS extension within " + std::to_string(opt.retry_budget) + " attempts");
}

// Random complete bases with no parallel or orthogonal pairs across bases.
inline std::vector<std::vector<Ket>> random_bases(std::size_t count, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Ket>> out;
    std::vector<Ket> used;
    while (out.size() < count) {
        auto basis = detail::complete_basis({}, d, rng);
        if (!detail::well_separated(used, basis)) continue;
        used.insert(used.end(), basis.begin(), basis.end());
        out.push_back(std::move(basis));
    }
    return out;
}

// The construction on d + 1 given bases: TIFS gadgets following the pattern
// (default: element i-1 of the first basis against every element of basis i).
inline ExtensionResult critical_ks_from_bases(const std::vector<std::vector<Ket>>& bases, const ExtensionOptions& opt = {}) {
    if (bases.empty()) throw ConstructionFailed("no bases given");
    const std::size_t d = bases.front().size();
    if (d != 3) throw UnsupportedDimension("gadget construction is implemented for d = 3");
    std::vector<TIFSRequirement> pattern;
    if (opt.pattern) pattern = *opt.pattern;
    else if (bases.size() == d + 1) pattern = default_tifs_pattern(d);
    else throw ConstructionFailed(std::to_string(bases.size()) + " bases need an explicit TIFS pattern");
    for (std::size_t attempt = 0; attempt < opt.retry_budget; ++attempt) {
        ExtensionResult res;
        res.cover_bases = res.total_bases = bases.size();
        ProjectorSet out;
        out.dim = d;
        std::vector<std::vector<std::size_t>> index(bases.size(), std::vector<std::size_t>(d));
        for (std::size_t bi = 0; bi < bases.size(); ++bi) {
            if (bases[bi].size() != d) throw DimensionMismatch("basis size differs from dimension");
            for (std::size_t e = 0; e < d; ++e)
                index[bi][e] = detail::add_unique(out, bases[bi][e], "B" + std::to_string(bi) + "." + std::to_string(e));
        }
        res.input_size = out.size();
        const std::uint64_t seed = opt.seed + 0x9E3779B97F4A7C15ULL * attempt;
        if (!detail::add_pattern_gadgets(out, index, pattern, opt, attempt, seed, res)) continue;
        res.set = std::move(out);
        return res;
    }
    throw ConstructionFailed("no critical KS set from the given bases within " + std::to_string(opt.retry_budget) + " attempts");
}

}  // namespace ctxforge
