#include "seqbench/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "seqbench/errors.hpp"

namespace seqbench {

double ItemVector::norm() const { return std::sqrt(static_cast<double>(support.size())); }

std::vector<double> ItemVector::dense() const {
    std::vector<double> out(dimension, 0.0);
    for (std::size_t s : support) out[s] = 1.0;
    return out;
}

std::map<std::string, ItemVector> build_item_vectors(const SequenceSet& train) {
    std::map<std::string, ItemVector> vectors;
    const std::size_t dim = train.size();
    for (std::size_t s = 0; s < dim; ++s) {
        for (const auto& step : train.sequences[s].steps) {
            auto [it, inserted] = vectors.try_emplace(step.item);
            ItemVector& v = it->second;
            if (inserted) {
                v.item = step.item;
                v.dimension = dim;
            }
            // Sequences are visited in index order, so support stays sorted.
            if (v.support.empty() || v.support.back() != s) v.support.push_back(s);
        }
    }
    return vectors;
}

double cosine(const ItemVector& u, const ItemVector& v) {
    if (u.support.empty() || v.support.empty()) throw ZeroVector();
    // sqrt(n) * sqrt(n) is not always exactly n.
    if (u.support == v.support) return 1.0;
    std::size_t dot = 0;
    auto a = u.support.begin();
    auto b = v.support.begin();
    while (a != u.support.end() && b != v.support.end()) {
        if (*a < *b) {
            ++a;
        } else if (*b < *a) {
            ++b;
        } else {
            ++dot;
            ++a;
            ++b;
        }
    }
    return static_cast<double>(dot) / std::sqrt(static_cast<double>(u.support.size() * v.support.size()));
}

}  // namespace seqbench
