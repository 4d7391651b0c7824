#pragma once

#include <map>
#include <string>
#include <vector>

#include "seqbench/sequencer.hpp"

namespace seqbench {

// Binary incidence vector of an item over the training sequences: component s
// is 1 iff the item occurs in sequence s. Stored as the sorted list of
// nonzero components.
struct ItemVector {
    std::string item;
    std::size_t dimension = 0;
    std::vector<std::size_t> support;

    double norm() const;
    std::vector<double> dense() const;
};

std::map<std::string, ItemVector> build_item_vectors(const SequenceSet& train);

// dot(u, v) / (|u| |v|); in [0, 1] for incidence vectors. Throws ZeroVector.
double cosine(const ItemVector& u, const ItemVector& v);

}  // namespace seqbench
