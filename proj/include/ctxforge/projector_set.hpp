#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ctxforge/errors.hpp"
#include "ctxforge/linalg.hpp"

namespace ctxforge {

// Labeled rank-one projectors |v><v| in a common dimension. When the set was
// read from text, the original expression strings are kept in `sources` so the
// set can be written back out without rounding.
struct ProjectorSet {
    std::size_t dim = 0;
    std::vector<Ket> vectors;
    std::vector<std::string> labels;
    std::vector<std::vector<std::string>> sources;  // empty, or one entry list per vector

    std::size_t size() const noexcept { return vectors.size(); }

    void add(Ket v, std::string label = {}) {
        if (dim == 0) dim = v.dim();
        if (v.dim() != dim) throw DimensionMismatch("vector dimension differs from set dimension");
        if (label.empty()) label = std::to_string(vectors.size() + 1);
        vectors.push_back(std::move(v));
        labels.push_back(std::move(label));
        if (!sources.empty()) sources.emplace_back();
    }

    Projector projector(std::size_t i) const { return projector_from_ket(vectors.at(i)); }

    CMatrix weighted_sum(const std::vector<double>& w) const {
        if (w.size() != size()) throw WeightArityMismatch("weight count differs from set size");
        CMatrix m(dim, dim);
        for (std::size_t k = 0; k < size(); ++k) {
            if (w[k] == 0.0) continue;
            const auto& a = vectors[k].amplitudes();
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) m(i, j) += w[k] * a[i] * std::conj(a[j]);
        }
        return m;
    }

    ProjectorSet without(const std::vector<std::size_t>& drop) const {
        std::vector<char> gone(size(), 0);
        for (auto v : drop) {
            if (v >= size()) throw IndexOutOfRange("vertex index out of range");
            gone[v] = 1;
        }
        ProjectorSet out;
        out.dim = dim;
        for (std::size_t i = 0; i < size(); ++i) {
            if (gone[i]) continue;
            out.vectors.push_back(vectors[i]);
            out.labels.push_back(labels[i]);
            if (!sources.empty()) out.sources.push_back(sources[i]);
        }
        return out;
    }
};

inline ProjectorSet conjugate_set(const ProjectorSet& s) {
    ProjectorSet out = s;
    for (auto& v : out.vectors) v = v.conjugate();
    out.sources.clear();
    return out;
}

}  // namespace ctxforge
