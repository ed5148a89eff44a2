#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctxforge/catalog.hpp"
#include "ctxforge/errors.hpp"
#include "ctxforge/expr.hpp"
#include "ctxforge/extension.hpp"
#include "ctxforge/inequality.hpp"
#include "ctxforge/invariants.hpp"
#include "ctxforge/ks.hpp"
#include "ctxforge/schema.hpp"
#include "ctxforge/theta.hpp"
#include "ctxforge/sic.hpp"

namespace ctxforge::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kProjectorSetSchema = "ctxforge.projector-set/1";

// ---------------------------------------------------------------------------
// Scalars

inline std::string render_rational(const Rational& r) { return r.str(); }

inline Json rationals(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(render_rational(x));
    return a;
}

inline std::vector<Rational> parse_rationals(const Json& a) {
    std::vector<Rational> out;
    for (const auto& x : a) out.push_back(parse_rational(x.get<std::string>()));
    return out;
}

// A real number as an expression that parses back to the same double: the
// shortest small fraction when one reproduces it exactly, otherwise the exact
// binary fraction.
inline std::string render_real(double x) {
    if (x == 0.0) return "0";
    const Rational small = rationalize(x, 1000000);
    if (to_double(small) == x) return small.str();
    Rational exact{x};
    return exact.str();
}

inline std::string render_scalar(Complex z) {
    const bool re = z.real() != 0.0, im = z.imag() != 0.0;
    if (!im) return render_real(z.real());
    std::string imag = "(" + render_real(z.imag()) + ")*i";
    if (!re) return imag;
    return render_real(z.real()) + "+" + imag;
}

// ---------------------------------------------------------------------------
// Projector sets

inline std::vector<std::string> vector_entries(const ProjectorSet& s, std::size_t i) {
    if (i < s.sources.size() && !s.sources[i].empty()) return s.sources[i];
    std::vector<std::string> out;
    for (const auto& z : s.vectors[i].amplitudes()) out.push_back(render_scalar(z));
    return out;
}

inline Json projector_set_to_json(const ProjectorSet& s, const Json& metadata = Json::object()) {
    Json j;
    j["schema"] = kProjectorSetSchema;
    j["dim"] = s.dim;
    j["normalization"] = "none";
    Json vs = Json::array();
    for (std::size_t i = 0; i < s.size(); ++i) vs.push_back({{"label", s.labels[i]}, {"entries", vector_entries(s, i)}});
    j["vectors"] = std::move(vs);
    if (!metadata.empty()) j["metadata"] = metadata;
    return j;
}

inline ProjectorSet projector_set_from_json(const Json& j) {
    schema::require_valid(j, "projector-set");
    ProjectorSet s;
    s.dim = j["dim"].get<std::size_t>();
    const bool normalize = j.value("normalization", std::string("none")) == "1/sqrt(sum)";
    for (const auto& v : j["vectors"]) {
        auto entries = v["entries"].get<std::vector<std::string>>();
        auto amp = parse_vector(entries, s.dim);
        s.vectors.push_back(normalize ? Ket::normalized(amp) : Ket(amp));
        s.labels.push_back(v["label"].get<std::string>());
        if (normalize) {
            // Integer-like entries keep an exact form e/sqrt(sum of squares).
            Rational sum = 0;
            bool exact = true;
            for (const auto& e : entries) {
                const auto x = parse_scalar(e);
                if (!x.exact) {
                    exact = false;
                    break;
                }
                sum += *x.exact * *x.exact;
            }
            std::vector<std::string> src;
            for (std::size_t k = 0; k < entries.size(); ++k)
                src.push_back(exact ? "(" + entries[k] + ")/sqrt(" + sum.str() + ")" : render_scalar(s.vectors.back()[k]));
            s.sources.push_back(std::move(src));
        } else {
            s.sources.push_back(std::move(entries));
        }
    }
    return s;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

// A catalog name or a path to a projector-set JSON file.
inline ProjectorSet load_projector_set(const std::string& source) {
    if (std::filesystem::exists(source)) return projector_set_from_json(read_json_file(source));
    return load_dataset(source);
}

// FNV-1a over the canonical serialization (labels and entry strings).
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string set_hash(const ProjectorSet& s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(projector_set_to_json(s).dump())));
    return buf;
}

// ---------------------------------------------------------------------------
// Graphs and KS instances

inline Json graph_to_json(const WeightedGraph& g) {
    Json j;
    j["schema"] = "ctxforge.graph/1";
    j["n"] = g.size();
    Json e = Json::array();
    for (auto [u, v] : g.edges()) e.push_back({u, v});
    j["edges"] = std::move(e);
    j["weights"] = rationals(g.weights());
    j["labels"] = g.labels();
    return j;
}

inline WeightedGraph graph_from_json(const Json& j) {
    schema::require_valid(j, "graph");
    const auto n = j["n"].get<std::size_t>();
    WeightedGraph g(n);
    for (const auto& e : j["edges"]) {
        const auto u = e[0].get<std::size_t>(), v = e[1].get<std::size_t>();
        if (u >= n || v >= n) throw IndexOutOfRange("edge endpoint out of range");
        g.add_edge(u, v);
    }
    if (j.contains("weights")) {
        auto w = parse_rationals(j["weights"]);
        if (w.size() != n) throw WeightArityMismatch("graph has " + std::to_string(n) + " vertices but " + std::to_string(w.size()) + " weights");
        g.set_weights(std::move(w));
    }
    if (j.contains("labels")) {
        auto l = j["labels"].get<std::vector<std::string>>();
        if (l.size() != n) throw SchemaError("label count differs from vertex count");
        g.set_labels(std::move(l));
    }
    return g;
}

// A graph from a generator name, a graph JSON file, a projector-set JSON file
// or a catalog name.
inline WeightedGraph load_any_graph(const std::string& source) {
    if (std::filesystem::exists(source)) {
        const Json j = read_json_file(source);
        if (j.contains("n")) return graph_from_json(j);
        return orthogonality_graph(projector_set_from_json(j));
    }
    return load_graph(source);
}

inline Json ks_instance_to_json(const KSInstance& inst) {
    Json j;
    j["schema"] = "ctxforge.ks-instance/1";
    j["d"] = inst.d;
    j["graph"] = graph_to_json(inst.graph);
    Json b = Json::array();
    for (const auto& basis : inst.bases) b.push_back(basis);
    j["bases"] = std::move(b);
    return j;
}

inline KSInstance ks_instance_from_json(const Json& j) {
    schema::require_valid(j, "ks-instance");
    KSInstance inst;
    inst.d = j["d"].get<std::size_t>();
    inst.graph = graph_from_json(j["graph"]);
    for (const auto& b : j["bases"]) {
        VertexSet basis = b.get<VertexSet>();
        for (auto v : basis)
            if (v >= inst.graph.size()) throw IndexOutOfRange("basis vertex out of range");
        inst.bases.push_back(std::move(basis));
    }
    inst.validate();
    return inst;
}

// ---------------------------------------------------------------------------
// Weights

// "unit", a comma-separated list of rationals, or a weights JSON file.
inline std::vector<Rational> parse_weights(const std::string& spec, std::size_t n) {
    if (spec.empty() || spec == "unit") return std::vector<Rational>(n, Rational{1});
    std::vector<Rational> w;
    if (std::filesystem::exists(spec)) {
        const Json j = read_json_file(spec);
        schema::require_valid(j, "weights");
        w = parse_rationals(j["weights"]);
    } else {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) w.push_back(parse_rational(item));
    }
    if (w.size() != n) throw WeightArityMismatch("expected " + std::to_string(n) + " weights, got " + std::to_string(w.size()));
    for (const auto& x : w)
        if (x < 0) throw Error("weights must be nonnegative");
    return w;
}

inline Json weights_to_json(const std::vector<Rational>& w) { return {{"schema", "ctxforge.weights/1"}, {"weights", rationals(w)}}; }

// Smallest positive integer vector proportional to w.
inline std::vector<Rational> primitive_integer(const std::vector<Rational>& w) {
    const BigInt l = lcm_of_denominators(w);
    BigInt g = 0;
    std::vector<BigInt> ints;
    for (const auto& x : w) {
        ints.push_back(numerator_of(x) * (l / denominator_of(x)));
        g = boost::multiprecision::gcd(g, ints.back());
    }
    if (g == 0) return w;
    std::vector<Rational> out;
    for (const auto& x : ints) out.push_back(Rational{x / g});
    return out;
}

// ---------------------------------------------------------------------------
// Results

inline Json real_with_tol(double value, double tol) { return {{"value", value}, {"tol", tol}}; }

inline Json alpha_to_json(const AlphaResult& a) { return {{"value", render_rational(a.value)}, {"witness", a.witness}}; }

inline Json coloring_to_json(const ColoringResult& c) { return {{"value", c.chi}, {"coloring", c.coloring}}; }

inline Json fractional_to_json(const FractionalResult& f) {
    Json sets = Json::array();
    for (std::size_t k = 0; k < f.sets.size(); ++k)
        if (f.set_weights[k] != 0) sets.push_back({{"set", f.sets[k]}, {"weight", render_rational(f.set_weights[k])}});
    return {{"value", render_rational(f.value)}, {"vertex_weights", rationals(f.vertex_weights)}, {"support", std::move(sets)}};
}

inline Json theta_to_json(const ThetaResult& t) {
    return {{"value", t.value}, {"tol", t.tolerance}, {"lower", t.lower}, {"upper", t.upper}, {"iterations", t.iterations}};
}

inline Json nc_model_to_json(const NCModelResult& r) {
    Json j{{"feasible", r.feasible}, {"chi_f", render_rational(r.chi_f)}};
    if (r.model) {
        Json sup = Json::array();
        for (std::size_t k = 0; k < r.model->support.size(); ++k)
            sup.push_back({{"set", r.model->support[k]}, {"mu", render_rational(r.model->mu[k])}});
        j["model"] = std::move(sup);
    }
    if (!r.dual_weights.empty()) j["dual_weights"] = rationals(r.dual_weights);
    return j;
}

inline Json sic_certificate_to_json(const SICCertificate& c) {
    return {{"weights", rationals(c.weights)},
            {"y", render_rational(c.y)},
            {"lambda_min", c.lambda_min},
            {"normalized", c.normalized},
            {"scale", render_rational(c.scale)}};
}

inline Json upper_bound_to_json(const SICUpperBound& u) {
    Json rho = Json::array();
    for (std::size_t r = 0; r < u.rho.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < u.rho.cols(); ++c) row.push_back({u.rho(r, c).real(), u.rho(r, c).imag()});
        rho.push_back(std::move(row));
    }
    Json sets = Json::array();
    for (std::size_t k = 0; k < u.sets.size(); ++k) sets.push_back({{"set", u.sets[k]}, {"y", u.y[k]}});
    return {{"bound", u.bound}, {"rho", std::move(rho)}, {"sets", std::move(sets)}};
}

inline Json gap_to_json(const GapReport& g) {
    return {{"weights", rationals(g.rational_weights)},
            {"classical", render_rational(g.classical)},
            {"quantum_floor", g.quantum_floor},
            {"ratio", g.ratio},
            {"upper_bound", g.upper_bound},
            {"iterations", g.iterations}};
}

inline Json sic_result_to_json(const SICResult& r) {
    Json j{{"verdict", to_string(r.verdict)}};
    if (r.certificate) j["certificate"] = sic_certificate_to_json(*r.certificate);
    if (r.refutation) {
        Json f{{"kind", r.refutation->kind}, {"chi_f", render_rational(r.refutation->chi_f)}};
        if (r.refutation->nc_model) {
            Json sup = Json::array();
            for (std::size_t k = 0; k < r.refutation->nc_model->support.size(); ++k)
                sup.push_back({{"set", r.refutation->nc_model->support[k]},
                               {"mu", render_rational(r.refutation->nc_model->mu[k])}});
            f["nc_model"] = std::move(sup);
        }
        if (r.refutation->upper_bound) f["upper_bound"] = upper_bound_to_json(*r.refutation->upper_bound);
        j["refutation"] = std::move(f);
    }
    if (r.gap) j["optimization"] = gap_to_json(*r.gap);
    return j;
}

inline Json extension_to_json(const ExtensionResult& e) {
    Json g = Json::array();
    for (const auto& r : e.gadgets)
        g.push_back({{"from", r.from}, {"to", r.to}, {"links", r.links}, {"vertices", r.vertices}, {"orthogonal", r.orthogonal}});
    return {{"input_size", e.input_size},
            {"cover_bases", e.cover_bases},
            {"total_bases", e.total_bases},
            {"attempts", e.attempts},
            {"gadgets", std::move(g)}};
}

inline Json catalog_match_to_json(const CatalogMatch& m) { return {{"dataset", m.dataset}, {"map", m.map}}; }

inline Json bruteforce_to_json(const BruteForceResult& r) {
    auto bits = [](const std::vector<std::uint8_t>& a) {
        std::string s;
        for (auto b : a) s += b ? '1' : '0';
        return s;
    };
    Json j{{"value", render_rational(r.value)}, {"alice", bits(r.alice)}};
    if (!r.bob.empty()) j["bob"] = bits(r.bob);
    return j;
}

inline Json provenance(const ProjectorSet& s, const std::vector<Rational>& w) {
    return {{"set_hash", set_hash(s)}, {"weights", rationals(w)}};
}

inline Json inequality_to_json(const NCInequality& q, const Json& prov) {
    Json e = Json::array();
    for (std::size_t k = 0; k < q.edges.size(); ++k)
        e.push_back({q.edges[k].first, q.edges[k].second, render_rational(q.edge_coeffs[k])});
    return {{"schema", "ctxforge.inequality/1"},
            {"kind", "nc"},
            {"n", q.graph.size()},
            {"vertex_coeffs", rationals(q.vertex_coeffs())},
            {"edge_coeffs", std::move(e)},
            {"bound", render_rational(q.bound)},
            {"provenance", prov}};
}

inline Json inequality_to_json(const BellInequality& b, const Json& prov) {
    Json t = Json::array();
    for (const auto& term : b.terms) t.push_back({term.alice, term.bob, render_rational(term.coeff)});
    return {{"schema", "ctxforge.inequality/1"},
            {"kind", "bell"},
            {"n", b.graph.size()},
            {"vertex_coeffs", rationals(b.graph.weights())},
            {"terms", std::move(t)},
            {"bound", render_rational(b.bound)},
            {"provenance", prov}};
}

inline Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json sample_to_json(const SampleEstimate& s) {
    return {{"schema", "ctxforge.sample/1"},
            {"estimate", s.estimate},
            {"stderr", finite_or_null(s.stderr_)},
            {"rounds", s.rounds},
            {"seed", s.seed}};
}

inline Json game_to_json(const GameSpec& g) {
    Json q = Json::array();
    for (const auto& x : g.questions)
        q.push_back({{"alice", x.alice}, {"bob", x.bob}, {"probability", render_rational(x.probability)},
                     {"win", x.reward_both_one ? "a=b=1" : "not(a=b=1)"}});
    Json j{{"schema", "ctxforge.game/1"},
           {"questions", std::move(q)},
           {"map", {{"scale", render_rational(g.map.scale)}, {"offset", render_rational(g.map.offset)}}},
           {"classical_value", render_rational(g.classical_value)}};
    if (g.quantum_value) j["quantum_value"] = *g.quantum_value;
    return j;
}

// ---------------------------------------------------------------------------
// Error names for reports

inline std::string error_kind(const std::exception& e) {
#define CTXFORGE_KIND(Name) \
    if (dynamic_cast<const Name*>(&e)) return #Name;
    CTXFORGE_KIND(SyntaxError)
    CTXFORGE_KIND(DivisionByZero)
    CTXFORGE_KIND(NonFiniteValue)
    CTXFORGE_KIND(DimensionMismatch)
    CTXFORGE_KIND(NotNormalized)
    CTXFORGE_KIND(NotHermitian)
    CTXFORGE_KIND(NotDensityMatrix)
    CTXFORGE_KIND(ZeroProbabilityBranch)
    CTXFORGE_KIND(AmbiguousOverlap)
    CTXFORGE_KIND(IndexOutOfRange)
    CTXFORGE_KIND(TooLarge)
    CTXFORGE_KIND(OutputBudgetExceeded)
    CTXFORGE_KIND(ConvergenceFailure)
    CTXFORGE_KIND(AdjacentEndpoints)
    CTXFORGE_KIND(OutOfRange)
    CTXFORGE_KIND(EndpointsParallelOrOrthogonal)
    CTXFORGE_KIND(BudgetExceeded)
    CTXFORGE_KIND(Uncoverable)
    CTXFORGE_KIND(NotSDC)
    CTXFORGE_KIND(ConstructionFailed)
    CTXFORGE_KIND(UnsupportedDimension)
    CTXFORGE_KIND(WeightArityMismatch)
    CTXFORGE_KIND(UnknownDataset)
    CTXFORGE_KIND(SchemaError)
    CTXFORGE_KIND(Error)
#undef CTXFORGE_KIND
    return "InternalError";
}

}  // namespace ctxforge::io
