#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "ctxforge/io.hpp"

using namespace ctxforge;
using io::Json;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("ctxforge_test_" + name)).string();
}

}  // namespace

TEST(Scalars, RealsRoundTripBitExactly) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 2000; ++t) {
        const double x = t < 5 ? std::vector<double>{0.5, -0.25, 1.0, 1.0 / 3.0, -2.0}[t] : u(rng);
        const auto text = io::render_real(x);
        EXPECT_EQ(parse_scalar(text).value.real(), x) << text;
    }
    EXPECT_EQ(io::render_real(0.5), "1/2");
    EXPECT_EQ(io::render_real(0.0), "0");
}

TEST(Scalars, ComplexRendering) {
    const Complex z(0.25, -0.75);
    const auto text = io::render_scalar(z);
    EXPECT_EQ(parse_scalar(text).value, z) << text;
    EXPECT_EQ(parse_scalar(io::render_scalar(Complex(0, 2))).value, Complex(0, 2));
}

TEST(ProjectorSetFile, CatalogRoundTrip) {
    for (const auto& name : catalog::names()) {
        auto s = load_dataset(name);
        const auto path = temp_path(name + ".json");
        io::write_json_file(path, io::projector_set_to_json(s, {{"source", name}}));
        auto t = io::load_projector_set(path);
        ASSERT_EQ(t.size(), s.size());
        EXPECT_EQ(t.dim, s.dim);
        EXPECT_EQ(t.labels, s.labels);
        for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(t.vectors[i].amplitudes(), s.vectors[i].amplitudes()) << name << i;
        EXPECT_EQ(io::set_hash(t), io::set_hash(s));
        std::filesystem::remove(path);
    }
}

TEST(ProjectorSetFile, NumericSetRoundTrip) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    ProjectorSet s;
    for (int k = 0; k < 6; ++k) s.add(Ket::normalized({{n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}}));
    auto t = io::projector_set_from_json(Json::parse(io::projector_set_to_json(s).dump()));
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(t.vectors[i].amplitudes(), s.vectors[i].amplitudes());
}

TEST(ProjectorSetFile, NormalizationConvention) {
    Json j = {{"schema", "ctxforge.projector-set/1"},
              {"dim", 3},
              {"normalization", "1/sqrt(sum)"},
              {"vectors", {{{"label", "a"}, {"entries", {"1", "1", "-1"}}}, {{"label", "b"}, {"entries", {"0", "2", "2"}}}}}};
    auto s = io::projector_set_from_json(j);
    EXPECT_NEAR(s.vectors[0][0].real(), 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(s.vectors[1][2].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(s.sources[0][2], "(-1)/sqrt(3)");
    j["normalization"] = "none";
    EXPECT_THROW(io::projector_set_from_json(j), NotNormalized);
}

TEST(ProjectorSetFile, SchemaViolations) {
    const Json good = io::projector_set_to_json(load_dataset("kcbs5"));
    auto bad = good;
    bad.erase("dim");
    EXPECT_THROW(io::projector_set_from_json(bad), SchemaError);
    bad = good;
    bad["dim"] = "three";
    EXPECT_THROW(io::projector_set_from_json(bad), SchemaError);
    bad = good;
    bad["extra"] = 1;
    EXPECT_THROW(io::projector_set_from_json(bad), SchemaError);
    bad = good;
    bad["schema"] = "ctxforge.projector-set/9";
    EXPECT_THROW(io::projector_set_from_json(bad), SchemaError);
    bad = good;
    bad["vectors"][0]["entries"][0] = "1+";
    EXPECT_THROW(io::projector_set_from_json(bad), SyntaxError);
    bad = good;
    bad["vectors"][0]["entries"] = {"1", "0"};
    EXPECT_THROW(io::projector_set_from_json(bad), DimensionMismatch);
}

TEST(ProjectorSetFile, UnknownDataset) { EXPECT_THROW(io::load_projector_set("no-such-set"), UnknownDataset); }

TEST(GraphFile, RoundTrip) {
    auto g = load_graph("yuoh13");
    g.set_weights(catalog::yuoh_weights());
    auto h = io::graph_from_json(Json::parse(io::graph_to_json(g).dump()));
    EXPECT_EQ(h.edges(), g.edges());
    EXPECT_EQ(h.weights(), g.weights());
    EXPECT_EQ(h.labels(), g.labels());
    auto j = io::graph_to_json(g);
    j["edges"].push_back({0, 99});
    EXPECT_THROW(io::graph_from_json(j), IndexOutOfRange);
    j = io::graph_to_json(g);
    j["weights"][0] = "1/x";
    EXPECT_THROW(io::graph_from_json(j), SchemaError);
}

TEST(KSInstanceFile, RoundTrip) {
    auto inst = find_complete_bases(load_dataset("yuoh13"));
    auto back = io::ks_instance_from_json(Json::parse(io::ks_instance_to_json(inst).dump()));
    EXPECT_EQ(back.d, inst.d);
    EXPECT_EQ(back.bases, inst.bases);
    EXPECT_EQ(back.graph.edges(), inst.graph.edges());
}

TEST(Weights, Parsing) {
    EXPECT_EQ(io::parse_weights("unit", 3), std::vector<Rational>(3, Rational{1}));
    auto w = io::parse_weights("3,3/2,0", 3);
    EXPECT_EQ(w[1], make_rational(3, 2));
    EXPECT_THROW(io::parse_weights("1,2", 3), WeightArityMismatch);
    EXPECT_THROW(io::parse_weights("1,-2,1", 3), Error);
    EXPECT_EQ(io::primitive_integer({make_rational(3, 11), make_rational(2, 11), make_rational(3, 11)}),
              (std::vector<Rational>{3, 2, 3}));
    const auto path = temp_path("w.json");
    io::write_json_file(path, io::weights_to_json(catalog::yuoh_weights()));
    EXPECT_EQ(io::parse_weights(path, 13), catalog::yuoh_weights());
    std::filesystem::remove(path);
}

TEST(Hash, StableAndSensitive) {
    auto s = load_dataset("yuoh13");
    EXPECT_EQ(io::set_hash(s), io::set_hash(load_dataset("yuoh13")));
    EXPECT_NE(io::set_hash(s), io::set_hash(s.without({0})));
    EXPECT_EQ(io::fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(io::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(OutputFormats, ValidateAgainstSchemas) {
    auto s = load_dataset("yuoh13");
    auto w = catalog::yuoh_weights();
    auto prov = io::provenance(s, w);
    EXPECT_TRUE(schema::validate(io::inequality_to_json(build_nc_inequality(s, w), prov), "inequality").empty());
    auto bj = io::inequality_to_json(build_bell_inequality(s, w), prov);
    EXPECT_TRUE(schema::validate(bj, "inequality").empty());
    EXPECT_EQ(bj["bound"], "11");
    SampleEstimate e{1.5, std::numeric_limits<double>::quiet_NaN(), 1, 3};
    auto sj = io::sample_to_json(e);
    EXPECT_TRUE(sj["stderr"].is_null());
    EXPECT_TRUE(schema::validate(sj, "sample").empty());
}

TEST(Schemas, ShippedFilesMatchEmbedded) {
    for (const auto& [name, text] : schema::documents()) {
        const auto path = std::string(CTXFORGE_SOURCE_DIR) + "/schemas/" + name + ".schema.json";
        ASSERT_TRUE(std::filesystem::exists(path)) << path;
        EXPECT_EQ(io::read_json_file(path), Json::parse(text)) << name;
    }
}

TEST(Errors, KindNames) {
    EXPECT_EQ(io::error_kind(NotSDC("x")), "NotSDC");
    EXPECT_EQ(io::error_kind(Error("x")), "Error");
    EXPECT_EQ(io::error_kind(std::runtime_error("x")), "InternalError");
}
