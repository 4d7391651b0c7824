#include "seqbench/profiler.hpp"

#include <algorithm>

namespace seqbench {

Profile profile(const SequenceSet& set, std::size_t retained_ratings) {
    Profile p;
    p.num_users = set.users.size();
    p.num_items = set.catalog.size();
    p.num_ratings = retained_ratings;
    p.num_sequences = set.size();
    if (p.num_sequences > 0) {
        p.avg_sequence_length = static_cast<double>(retained_ratings) / static_cast<double>(p.num_sequences);
    }
    const double cells = static_cast<double>(p.num_users) * static_cast<double>(p.num_items);
    if (cells > 0) {
        p.sparsity = std::clamp(1.0 - static_cast<double>(retained_ratings) / cells, 0.0, 1.0);
    }
    return p;
}

}  // namespace seqbench
