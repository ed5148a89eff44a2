// ctxforge command-line interface.
//
// Exit codes: 0 success / holds / yes, 1 refuted / no, 2 inconclusive,
// 3 runtime error, 4 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ctxforge/ctxforge.hpp"

using namespace ctxforge;
using io::Json;

namespace {

struct Globals {
    std::uint64_t seed = 1;
    std::string format = "json";
    std::size_t jobs = 1;
    std::size_t max_links = 8;
    std::size_t retry_budget = 8;
    std::string output;
};

Globals G;

void emit(const Json& j) {
    std::string text = G.format == "table" ? render_table(j) : j.dump(2) + "\n";
    if (G.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(G.output);
    if (!out) throw Error("cannot write '" + G.output + "'");
    out << text;
}

ExtensionOptions extension_options() {
    ExtensionOptions o;
    o.seed = G.seed;
    o.max_links = G.max_links;
    o.retry_budget = G.retry_budget;
    return o;
}

// Weight spec: "unit", "optimal", a comma list or a weights JSON file.
std::vector<Rational> weights_for(const ProjectorSet& s, const std::string& spec) {
    if (spec == "optimal") return io::primitive_integer(optimize_sic_weights(s).rational_weights);
    return io::parse_weights(spec, s.size());
}

std::vector<Complex> parse_entries(const std::string& list) {
    std::vector<Complex> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_scalar(item).value);
    return out;
}

// Vertex by label, or by 1-based index when no label matches.
std::size_t vertex_of(const ProjectorSet& s, const std::string& key) {
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.labels[i] == key) return i;
    std::size_t pos = 0;
    const unsigned long k = std::stoul(key, &pos);
    if (pos != key.size() || k == 0 || k > s.size()) throw IndexOutOfRange("no vertex '" + key + "'");
    return k - 1;
}

KSInstance load_ks_instance(const std::string& source) {
    if (std::filesystem::exists(source)) {
        const Json j = io::read_json_file(source);
        if (j.contains("bases")) return io::ks_instance_from_json(j);
        return find_complete_bases(io::projector_set_from_json(j));
    }
    return find_complete_bases(load_dataset(source));
}

DensityMatrix state_for(const std::string& spec, std::size_t dim) {
    if (spec == "maxmixed") return DensityMatrix::maximally_mixed(dim);
    if (spec == "entangled") return entangled_state(dim);
    return DensityMatrix::pure(Ket::normalized(parse_entries(spec)));
}

int verdict_code(Verdict v) { return v == Verdict::Yes ? 0 : v == Verdict::No ? 1 : 2; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contextuality witnesses to Bell inequalities"};
    app.require_subcommand(1);
    app.fallthrough();
    if (const char* env = std::getenv("CTXFORGE_SEED")) G.seed = std::stoull(env);
    app.add_option("--seed", G.seed, "Random seed (default: $CTXFORGE_SEED or 1)");
    app.add_option("--format", G.format, "Output format")->check(CLI::IsMember({"json", "table"}));
    app.add_option("--jobs", G.jobs, "Maximum worker count")->check(CLI::PositiveNumber);
    app.add_option("--max-links", G.max_links, "Maximum links per TIFS chain")->check(CLI::PositiveNumber);
    app.add_option("--retry-budget", G.retry_budget, "Construction retries")->check(CLI::PositiveNumber);
    app.add_option("-o,--output", G.output, "Write output to a file");

    int code = 0;
    std::string input, weights = "unit", kind, state, mode = "exists", target = "sic", a_key, b_key;
    std::uint64_t rounds = 100000;
    std::size_t limit = 1000;
    bool critical = false;

    auto add_input = [&](CLI::App* c) { c->add_option("input", input, "Catalog name or JSON file")->required(); };
    auto add_weights = [&](CLI::App* c) {
        c->add_option("-w,--weights", weights, "unit, optimal, p/q list or weights JSON file");
    };

    auto* inspect = app.add_subcommand("inspect", "Summarize a projector set");
    add_input(inspect);
    inspect->callback([&] {
        const auto s = io::load_projector_set(input);
        const auto g = orthogonality_graph(s);
        const auto inst = find_complete_bases(s);
        Json j{{"dim", s.dim}, {"n", s.size()}, {"hash", io::set_hash(s)}, {"edges", g.edges().size()},
               {"complete_bases", inst.bases.size()}, {"chordal", is_chordal(g)}, {"odd_hole", has_odd_hole(g)},
               {"odd_antihole", has_odd_hole(complement(g))}, {"sdc", has_odd_hole_or_antihole(g)},
               {"set", io::projector_set_to_json(s)}};
        emit(j);
    });

    auto* graph = app.add_subcommand("graph", "Orthogonality graph as JSON");
    add_input(graph);
    add_weights(graph);
    graph->callback([&] {
        auto g = io::load_any_graph(input);
        if (weights != "unit") g.set_weights(io::parse_weights(weights, g.size()));
        emit(io::graph_to_json(g));
    });

    auto* invariant = app.add_subcommand("invariant", "Graph invariants");
    invariant->add_option("kind", kind)->required()->check(CLI::IsMember({"alpha", "chi", "chif", "theta", "alphastar"}));
    add_input(invariant);
    add_weights(invariant);
    invariant->callback([&] {
        auto g = io::load_any_graph(input);
        if (weights != "unit") g.set_weights(io::parse_weights(weights, g.size()));
        Json j{{"invariant", kind}, {"n", g.size()}};
        if (kind == "alpha") j["result"] = io::alpha_to_json(alpha(g));
        else if (kind == "chi") j["result"] = io::coloring_to_json(chromatic_number(g));
        else if (kind == "chif") j["result"] = io::fractional_to_json(fractional_chromatic(g));
        else if (kind == "theta") j["result"] = io::theta_to_json(lovasz_theta(g));
        else j["result"] = io::fractional_to_json(fractional_packing(g));
        emit(j);
    });

    auto* ks = app.add_subcommand("ks", "Kochen-Specker checks");
    ks->require_subcommand(1);
    ks->fallthrough();
    auto* ks_check = ks->add_subcommand("check", "Exit 0 iff no KS assignment exists");
    add_input(ks_check);
    ks_check->callback([&] {
        const auto inst = load_ks_instance(input);
        const auto r = ks_solve(inst);
        Json j{{"ks_set", !r.exists}, {"n", inst.size()}, {"bases", inst.bases.size()}, {"nodes", r.nodes}};
        if (r.first) j["assignment"] = to_bitstring(*r.first);
        emit(j);
        code = r.exists ? 1 : 0;
    });
    auto* ks_critical = ks->add_subcommand("critical", "Exit 0 iff the set is a critical KS set");
    add_input(ks_critical);
    ks_critical->callback([&] {
        const auto rep = critical_ks_report(load_ks_instance(input));
        emit({{"ks_set", rep.ks_set}, {"critical", rep.critical}, {"non_critical_vertices", rep.non_critical_vertices}});
        code = rep.critical ? 0 : 1;
    });
    auto* ks_solve_cmd = ks->add_subcommand("solve", "Find, count or enumerate KS assignments");
    add_input(ks_solve_cmd);
    ks_solve_cmd->add_option("--mode", mode)->check(CLI::IsMember({"exists", "count", "enumerate"}));
    ks_solve_cmd->add_option("--limit", limit, "Enumeration budget");
    ks_solve_cmd->callback([&] {
        const auto inst = load_ks_instance(input);
        KSOptions opt;
        opt.mode = mode == "exists" ? KSMode::Exists : mode == "count" ? KSMode::Count : KSMode::Enumerate;
        opt.enumerate_budget = limit;
        const auto r = ks_solve(inst, opt);
        Json j{{"exists", r.exists}, {"nodes", r.nodes}};
        if (r.first) j["first"] = to_bitstring(*r.first);
        if (opt.mode != KSMode::Exists) j["count"] = r.count;
        if (opt.mode == KSMode::Enumerate) {
            Json all = Json::array();
            for (const auto& x : r.all) all.push_back(to_bitstring(x));
            j["assignments"] = std::move(all);
        }
        emit(j);
        code = r.exists ? 0 : 1;
    });

    auto* tifs = app.add_subcommand("tifs", "True-implies-false gadgets");
    tifs->require_subcommand(1);
    tifs->fallthrough();
    auto* tifs_build = tifs->add_subcommand("build", "Build a gadget between two vectors (d = 3)");
    tifs_build->add_option("--a", a_key, "Comma-separated entries of the first endpoint")->required();
    tifs_build->add_option("--b", b_key, "Comma-separated entries of the second endpoint")->required();
    tifs_build->callback([&] {
        GadgetOptions opt;
        opt.seed = G.seed;
        opt.max_links = G.max_links;
        const auto t = chain_tifs(Ket::normalized(parse_entries(a_key)), Ket::normalized(parse_entries(b_key)), opt);
        Json stages = Json::array();
        for (const auto& st : t.stages) stages.push_back({{"kind", st.kind}, {"overlap", st.overlap}});
        Json meta{{"endpoint_a", t.endpoint_a}, {"endpoint_b", t.endpoint_b}, {"interior", t.interior},
                  {"stages", std::move(stages)}, {"verified", verify_tifs(t.instance(), t.endpoint_a, t.endpoint_b)}};
        emit(io::projector_set_to_json(t.vectors, meta));
    });
    auto* tifs_verify = tifs->add_subcommand("verify", "Exit 0 iff no KS assignment sets both endpoints to 1");
    add_input(tifs_verify);
    tifs_verify->add_option("--a", a_key, "Endpoint label or 1-based index")->required();
    tifs_verify->add_option("--b", b_key, "Endpoint label or 1-based index")->required();
    tifs_verify->callback([&] {
        const auto s = io::load_projector_set(input);
        const auto a = vertex_of(s, a_key), b = vertex_of(s, b_key);
        const bool ok = verify_tifs(find_complete_bases(s), a, b);
        emit({{"tifs", ok}, {"a", s.labels[a]}, {"b", s.labels[b]}});
        code = ok ? 0 : 1;
    });

    auto* extend = app.add_subcommand("extend", "Extend an SD-C set to a critical KS or critical SI-C set");
    add_input(extend);
    extend->add_option("--target", target)->check(CLI::IsMember({"ks", "sic"}));
    extend->callback([&] {
        const auto s = io::load_projector_set(input);
        Json meta{{"input_hash", io::set_hash(s)}, {"seed", G.seed}, {"target", target}};
        if (target == "ks") {
            const auto r = extend_to_critical_ks(s, extension_options());
            meta["construction"] = io::extension_to_json(r);
            emit(io::projector_set_to_json(r.set, meta));
            return;
        }
        const auto r = extend_to_critical_sic(s, extension_options());
        if (r.catalog) meta["catalog"] = io::catalog_match_to_json(*r.catalog);
        if (r.ks) meta["construction"] = io::extension_to_json(*r.ks);
        meta["critical_sic"] = to_string(r.verification.verdict);
        emit(io::projector_set_to_json(r.set, meta));
    });

    auto* certify = app.add_subcommand("certify", "SI-C certification: exit 0 yes, 1 no, 2 inconclusive");
    add_input(certify);
    certify->add_option("-w,--weights", weights, "Check a given weight vector instead of optimizing");
    certify->add_flag("--critical", critical, "Also certify every single deletion");
    certify->callback([&] {
        const auto s = io::load_projector_set(input);
        if (critical) {
            const auto r = is_critical_sic(s);
            Json dels = Json::array();
            for (const auto& d : r.deletions) dels.push_back(to_string(d.verdict));
            emit({{"critical_sic", to_string(r.verdict)}, {"whole", io::sic_result_to_json(r.whole)}, {"deletions", dels}});
            code = verdict_code(r.verdict);
            return;
        }
        if (weights != "unit" || certify->count("--weights")) {
            const auto chk = check_sic_certificate(s, weights_for(s, weights));
            Json j{{"accepted", chk.accepted()}};
            if (chk.certificate) j["certificate"] = io::sic_certificate_to_json(*chk.certificate);
            else j["reason"] = chk.reason;
            emit(j);
            code = chk.accepted() ? 0 : 1;
            return;
        }
        const auto r = is_sic(s);
        emit(io::sic_result_to_json(r));
        code = verdict_code(r.verdict);
    });

    auto* inequality = app.add_subcommand("inequality", "Noncontextuality or Bell inequality");
    inequality->add_option("kind", kind)->required()->check(CLI::IsMember({"nc", "bell"}));
    add_input(inequality);
    add_weights(inequality);
    inequality->callback([&] {
        const auto s = io::load_projector_set(input);
        const auto w = weights_for(s, weights);
        const auto prov = io::provenance(s, w);
        emit(kind == "nc" ? io::inequality_to_json(build_nc_inequality(s, w), prov)
                          : io::inequality_to_json(build_bell_inequality(s, w), prov));
    });

    auto* bound = app.add_subcommand("bound", "Classical bound by exhaustive search");
    bound->add_option("kind", kind)->required()->check(CLI::IsMember({"nchv", "lhv"}));
    add_input(bound);
    add_weights(bound);
    bound->callback([&] {
        const auto s = io::load_projector_set(input);
        const auto w = weights_for(s, weights);
        const auto r = kind == "nchv" ? nchv_bound_bruteforce(build_nc_inequality(s, w))
                                      : lhv_bound_bruteforce(build_bell_inequality(s, w));
        Json j = io::bruteforce_to_json(r);
        j["alpha"] = io::render_rational(alpha_value(orthogonality_graph(s), w));
        emit(j);
    });

    auto* value = app.add_subcommand("value", "Quantum value of an inequality");
    value->add_option("kind", kind)->required()->check(CLI::IsMember({"nc", "bell"}));
    add_input(value);
    add_weights(value);
    value->add_option("--state", state, "maxmixed, entangled or comma-separated pure-state entries");
    value->callback([&] {
        const auto s = io::load_projector_set(input);
        const auto w = weights_for(s, weights);
        const auto bound_value = alpha_value(orthogonality_graph(s), w);
        double v = 0.0;
        if (kind == "nc") {
            v = quantum_nc_value(s, w, state_for(state.empty() ? "maxmixed" : state, s.dim));
        } else {
            const std::string st = state.empty() ? "entangled" : state;
            v = quantum_bell_value(s, conjugate_set(s), w, st == "maxmixed" ? DensityMatrix::maximally_mixed(s.dim * s.dim) : state_for(st, s.dim));
        }
        emit({{"kind", kind}, {"value", v}, {"bound", io::render_rational(bound_value)}, {"violation", v - to_double(bound_value)}});
        code = v > to_double(bound_value) + 1e-9 ? 0 : 1;
    });

    auto* sample = app.add_subcommand("sample", "Simulated rounds on the maximally entangled state");
    sample->add_option("kind", kind)->required()->check(CLI::IsMember({"bell", "sequential"}));
    add_input(sample);
    add_weights(sample);
    sample->add_option("--rounds", rounds)->check(CLI::PositiveNumber);
    sample->callback([&] {
        const auto s = io::load_projector_set(input);
        const auto w = weights_for(s, weights);
        const auto psi = entangled_state(s.dim);
        if (kind == "bell") {
            emit(io::sample_to_json(sample_bell_rounds(psi, build_bell_inequality(s, w), s, conjugate_set(s), rounds, G.seed)));
        } else {
            const auto r = sample_sequential_rounds(s, w, psi, rounds, G.seed);
            emit({{"nc", io::sample_to_json(r.nc)}, {"bell", io::sample_to_json(r.bell)}});
        }
    });

    auto* game = app.add_subcommand("game", "Nonlocal game from the Bell inequality");
    add_input(game);
    add_weights(game);
    game->callback([&] {
        const auto s = io::load_projector_set(input);
        const auto w = weights_for(s, weights);
        const double q = quantum_bell_value(s, conjugate_set(s), w, entangled_state(s.dim));
        emit(io::game_to_json(to_nonlocal_game(build_bell_inequality(s, w), q)));
    });

    auto* report = app.add_subcommand("report", "Run the full pipeline");
    add_input(report);
    report->add_option("--rounds", rounds, "Sampling rounds (0 disables sampling)");
    report->callback([&] {
        PipelineOptions opt;
        opt.extension = extension_options();
        opt.rounds = rounds;
        const auto rep = run_pipeline(io::load_projector_set(input), opt);
        emit(rep.json);
        code = !rep.ok() ? 3 : rep.checks_pass() ? 0 : 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << io::error_kind(e) << ": " << e.what() << "\n";
        return 3;
    }
    return code;
}
