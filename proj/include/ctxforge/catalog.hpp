#pragma once

#include <regex>
#include <string>
#include <utility>
#include <vector>

#include "ctxforge/errors.hpp"
#include "ctxforge/expr.hpp"
#include "ctxforge/graph.hpp"
#include "ctxforge/projector_set.hpp"

namespace ctxforge {

struct DatasetVector {
    std::string label;
    std::vector<std::string> entries;
};

struct DatasetSpec {
    std::string name;
    std::size_t dim;
    std::vector<DatasetVector> vectors;
    std::vector<Edge> golden_edges;  // 0-based, sorted
    std::string source;
};

inline ProjectorSet build_projector_set(std::size_t dim, const std::vector<DatasetVector>& vectors) {
    ProjectorSet s;
    s.dim = dim;
    for (const auto& v : vectors) {
        s.vectors.push_back(Ket(parse_vector(v.entries, dim)));
        s.labels.push_back(v.label);
        s.sources.push_back(v.entries);
    }
    return s;
}

namespace catalog {

inline std::vector<Edge> one_based(std::initializer_list<std::pair<int, int>> e) {
    std::vector<Edge> out;
    for (auto [a, b] : e) out.emplace_back(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
    return out;
}

inline const DatasetSpec& kcbs5() {
    static const DatasetSpec spec{
        "kcbs5",
        3,
        {
            {"1", {"1", "0", "0"}},
            {"2", {"0", "1/sqrt(2)", "1/sqrt(2)"}},
            {"3", {"1/sqrt(3)", "-1/sqrt(3)", "1/sqrt(3)"}},
            {"4", {"1/sqrt(2)", "1/sqrt(2)", "0"}},
            {"5", {"0", "0", "1"}},
        },
        one_based({{1, 2}, {1, 5}, {2, 3}, {3, 4}, {4, 5}}),
        "KCBS pentagon in d=3",
    };
    return spec;
}

inline const DatasetSpec& yuoh13() {
    static const DatasetSpec spec = [] {
        DatasetSpec s = kcbs5();
        s.name = "yuoh13";
        s.source = "Yu-Oh set in d=3";
        const std::vector<DatasetVector> extra{
            {"6", {"0", "1/sqrt(2)", "-1/sqrt(2)"}},
            {"7", {"1/sqrt(3)", "1/sqrt(3)", "1/sqrt(3)"}},
            {"8", {"1/sqrt(2)", "-1/sqrt(2)", "0"}},
            {"9", {"1/sqrt(2)", "0", "-1/sqrt(2)"}},
            {"10", {"1/sqrt(2)", "0", "1/sqrt(2)"}},
            {"11", {"0", "1", "0"}},
            {"12", {"-1/sqrt(3)", "1/sqrt(3)", "1/sqrt(3)"}},
            {"13", {"1/sqrt(3)", "1/sqrt(3)", "-1/sqrt(3)"}},
        };
        s.vectors.insert(s.vectors.end(), extra.begin(), extra.end());
        s.golden_edges = one_based({{1, 2},  {1, 5},  {1, 6},  {1, 11}, {2, 3},  {2, 6},   {2, 13},  {3, 4},
                                    {3, 9},  {4, 5},  {4, 8},  {4, 12}, {5, 8},  {5, 11},  {6, 7},   {6, 12},
                                    {7, 8},  {7, 9},  {8, 13}, {9, 10}, {9, 11}, {10, 11}, {10, 12}, {10, 13}});
        return s;
    }();
    return spec;
}

// Entries use a = exp(2*i*pi/3) and a^2 = exp(-2*i*pi/3), each divided by 2.
inline const DatasetSpec& twin10() {
    static const DatasetSpec spec{
        "twin10",
        6,
        {
            {"v0", {"1/2", "0", "exp(-2*i*pi/3)/2", "exp(2*i*pi/3)/2", "0", "1/2"}},
            {"v1", {"0", "0", "1/2", "1/2", "1/2", "1/2"}},
            {"v2", {"1", "0", "0", "0", "0", "0"}},
            {"v3", {"0", "0", "0", "0", "0", "1"}},
            {"v4", {"1/2", "1/2", "1/2", "1/2", "0", "0"}},
            {"v5", {"1/2", "0", "exp(2*i*pi/3)/2", "exp(-2*i*pi/3)/2", "1/2", "0"}},
            {"v6", {"0", "1/2", "exp(2*i*pi/3)/2", "exp(-2*i*pi/3)/2", "0", "1/2"}},
            {"v7", {"0", "0", "0", "0", "1", "0"}},
            {"v8", {"0", "1/2", "exp(-2*i*pi/3)/2", "exp(2*i*pi/3)/2", "1/2", "0"}},
            {"v9", {"0", "1", "0", "0", "0", "0"}},
        },
        {{0, 1}, {0, 4}, {0, 5}, {0, 6}, {0, 7}, {0, 9}, {1, 2}, {1, 5}, {1, 6}, {1, 8},
         {1, 9}, {2, 3}, {2, 6}, {2, 7}, {2, 8}, {2, 9}, {3, 4}, {3, 5}, {3, 7}, {3, 8},
         {3, 9}, {4, 5}, {4, 6}, {4, 7}, {4, 8}, {5, 8}, {5, 9}, {6, 7}, {6, 8}, {7, 9}},
        "twin-inequality set in d=6",
    };
    return spec;
}

inline std::vector<std::string> names() { return {"kcbs5", "yuoh13", "twin10"}; }

// Datasets known to be critical SI-C sets.
inline std::vector<std::string> critical_sic_names() { return {"yuoh13"}; }

inline const DatasetSpec& spec(const std::string& name) {
    if (name == "kcbs5") return kcbs5();
    if (name == "yuoh13") return yuoh13();
    if (name == "twin10") return twin10();
    throw UnknownDataset("unknown dataset '" + name + "'");
}

// Weights with Sum w_i Pi_i proportional to the identity on the Yu-Oh set.
inline std::vector<Rational> yuoh_weights() {
    std::vector<Rational> w(13, Rational{3});
    for (int v : {3, 7, 12, 13}) w[static_cast<std::size_t>(v - 1)] = 2;
    return w;
}

}  // namespace catalog

inline ProjectorSet load_dataset(const std::string& name) {
    const auto& s = catalog::spec(name);
    return build_projector_set(s.dim, s.vectors);
}

// Projector datasets or graph-only generators such as "johnson(7,2)".
inline WeightedGraph load_graph(const std::string& name) {
    static const std::regex johnson_re(R"(johnson\((\d+),(\d+)\))");
    std::smatch m;
    if (std::regex_match(name, m, johnson_re)) return johnson(std::stoul(m[1]), std::stoul(m[2]));
    return orthogonality_graph(load_dataset(name));
}

}  // namespace ctxforge
