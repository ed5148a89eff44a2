#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "ctxforge/extension.hpp"
#include "ctxforge/inequality.hpp"
#include "ctxforge/io.hpp"
#include "ctxforge/sic.hpp"

namespace ctxforge {

struct PipelineOptions {
    ExtensionOptions extension;
    std::uint64_t rounds = 0;  // 0 disables sampling
    SICOptions sic;
};

struct PipelineReport {
    io::Json json;
    bool ok() const { return json.value("status", std::string()) == "ok"; }
    bool checks_pass() const {
        for (const auto& c : json["checks"])
            if (c["pass"] == false) return false;
        return true;
    }
};

namespace detail {

inline io::Json sdc_diagnosis(const WeightedGraph& g) {
    return {{"chordal", is_chordal(g)},
            {"odd_hole", has_odd_hole(g)},
            {"odd_antihole", has_odd_hole(complement(g))}};
}

inline io::Json check(const std::string& name, std::optional<bool> pass, io::Json detail = io::Json::object()) {
    io::Json c{{"name", name}, {"pass", pass ? io::Json(*pass) : io::Json(nullptr)}};
    for (auto& [k, v] : detail.items()) c[k] = v;
    return c;
}

}  // namespace detail

inline PipelineReport run_pipeline(const ProjectorSet& input, const PipelineOptions& opt = {}) {
    using io::Json;
    PipelineReport rep;
    Json& j = rep.json;
    j["schema"] = "ctxforge.report/1";
    const auto g0 = orthogonality_graph(input);
    j["input"] = {{"dim", input.dim}, {"n", input.size()}, {"hash", io::set_hash(input)}, {"labels", input.labels},
                  {"edges", g0.edges().size()}, {"diagnosis", detail::sdc_diagnosis(g0)}};
    j["options"] = {{"seed", opt.extension.seed},
                    {"max_links", opt.extension.max_links},
                    {"retry_budget", opt.extension.retry_budget},
                    {"rounds", opt.rounds}};
    j["stages"] = Json::object();
    j["checks"] = Json::array();
    Json& stages = j["stages"];
    Json& checks = j["checks"];

    std::string stage;
    try {
        stage = "extension";
        const auto ext = extend_to_critical_sic(input, opt.extension);
        const ProjectorSet& s = ext.set;
        Json e{{"route", ext.catalog ? "catalog" : "ks"}, {"output_size", s.size()}, {"output_hash", io::set_hash(s)}};
        if (ext.catalog) e["catalog"] = io::catalog_match_to_json(*ext.catalog);
        if (ext.ks) e["ks"] = io::extension_to_json(*ext.ks);
        e["critical_sic"] = to_string(ext.verification.verdict);
        e["set"] = io::projector_set_to_json(s);
        stages["extension"] = std::move(e);
        checks.push_back(detail::check("critical_sic", ext.verification.verdict == Verdict::Yes));

        stage = "weights";
        const auto gap = optimize_sic_weights(s, opt.sic);
        const auto w = io::primitive_integer(gap.rational_weights);
        const auto cert = check_sic_certificate(s, w);
        const auto egal = is_egalitarian(s, w);
        Json wj{{"optimization", io::gap_to_json(gap)}, {"weights", io::rationals(w)}};
        if (cert.certificate) wj["certificate"] = io::sic_certificate_to_json(*cert.certificate);
        else wj["certificate_rejected"] = cert.reason;
        wj["egalitarian"] = {{"egalitarian", egal.egalitarian}, {"lambda", egal.lambda}, {"spread", egal.spread}};
        stages["weights"] = std::move(wj);
        checks.push_back(detail::check("sic_certificate", cert.accepted() && verify_sic_certificate(s, *cert.certificate)));

        stage = "inequalities";
        const auto nc = build_nc_inequality(s, w);
        const auto bell = build_bell_inequality(s, w);
        const Json prov = io::provenance(s, w);
        Json q{{"alpha", io::render_rational(nc.bound)}, {"nc", io::inequality_to_json(nc, prov)},
               {"bell", io::inequality_to_json(bell, prov)}};
        std::optional<bool> bounds_equal;
        if (s.size() <= 30) {
            const auto nchv = nchv_bound_bruteforce(nc);
            const auto lhv = lhv_bound_bruteforce(bell);
            q["nchv"] = io::bruteforce_to_json(nchv);
            q["lhv"] = io::bruteforce_to_json(lhv);
            bounds_equal = nchv.value == nc.bound && lhv.value == nc.bound;
        }
        stages["inequalities"] = std::move(q);
        checks.push_back(detail::check("bound_equality", bounds_equal,
                                       bounds_equal ? Json::object() : Json{{"skipped", "more than 30 vectors"}}));

        stage = "quantum";
        const double vnc = quantum_nc_value(s, w, DensityMatrix::maximally_mixed(s.dim));
        const auto sb = conjugate_set(s);
        const auto psi = entangled_state(s.dim);
        const double vbell = quantum_bell_value(s, sb, w, psi);
        stages["quantum"] = {{"nc_maxmixed", vnc}, {"bell_entangled", vbell}, {"violation", vbell - to_double(nc.bound)}};
        checks.push_back(detail::check("value_transfer", std::fabs(vnc - vbell) <= 1e-10, {{"delta", std::fabs(vnc - vbell)}}));
        checks.push_back(detail::check("violation", vbell > to_double(nc.bound) + 1e-9));

        stage = "game";
        const auto game = to_nonlocal_game(bell, vbell);
        stages["game"] = {{"map", {{"scale", io::render_rational(game.map.scale)}, {"offset", io::render_rational(game.map.offset)}}},
                          {"questions", game.questions.size()},
                          {"classical_value", io::render_rational(game.classical_value)},
                          {"quantum_value", *game.quantum_value}};

        if (opt.rounds > 0) {
            stage = "sampling";
            const auto sbell = sample_bell_rounds(psi, bell, s, sb, opt.rounds, opt.extension.seed);
            const auto seq = sample_sequential_rounds(s, w, psi, opt.rounds, opt.extension.seed);
            stages["sampling"] = {{"bell", io::sample_to_json(sbell)},
                                  {"sequential", {{"nc", io::sample_to_json(seq.nc)}, {"bell", io::sample_to_json(seq.bell)}}}};
            auto within = [&](const SampleEstimate& x) {
                return std::isfinite(x.stderr_) && std::fabs(x.estimate - vbell) <= 3 * x.stderr_;
            };
            checks.push_back(detail::check("sampling_3sigma", within(sbell) && within(seq.nc) && within(seq.bell)));
        }
        j["status"] = "ok";
    } catch (const std::exception& e) {
        j["status"] = "error";
        std::string msg = e.what();
        if (dynamic_cast<const NotSDC*>(&e)) {
            const auto d = detail::sdc_diagnosis(g0);
            msg += std::string("; graph is ") + (d["chordal"].get<bool>() ? "chordal" : "not chordal") +
                   ", odd hole: " + (d["odd_hole"].get<bool>() ? "yes" : "no") +
                   ", odd antihole: " + (d["odd_antihole"].get<bool>() ? "yes" : "no");
        }
        j["error"] = {{"stage", stage}, {"kind", io::error_kind(e)}, {"message", msg}};
    }
    return rep;
}

// Rows "path  value" rendered from the machine-readable report; long arrays
// and projector entries are left to the JSON.
inline std::string render_table(const io::Json& j, std::size_t max_inline = 16) {
    std::ostringstream out;
    std::function<void(const io::Json&, const std::string&)> walk = [&](const io::Json& v, const std::string& path) {
        if (v.is_object()) {
            for (const auto& [k, x] : v.items()) {
                if (k == "set" && x.is_object()) continue;
                walk(x, path.empty() ? k : path + "." + k);
            }
            return;
        }
        if (v.is_array()) {
            bool flat = v.size() <= max_inline;
            for (const auto& x : v) flat = flat && !x.is_object() && !(x.is_array() && x.size() > 3);
            if (!flat) {
                std::size_t i = 0;
                bool objects = !v.empty() && v.front().is_object() && v.size() <= max_inline;
                if (objects) {
                    for (const auto& x : v) walk(x, path + "[" + std::to_string(i++) + "]");
                    return;
                }
                out << path << "  (see JSON)\n";
                return;
            }
        }
        std::string s = v.is_string() ? v.get<std::string>() : v.dump();
        out << path << "  " << s << "\n";
    };
    walk(j, "");
    return out.str();
}

}  // namespace ctxforge
