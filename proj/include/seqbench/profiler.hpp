#pragma once

#include <cstddef>

#include "seqbench/sequencer.hpp"

namespace seqbench {

struct Profile {
    std::size_t num_users = 0;
    std::size_t num_items = 0;
    std::size_t num_ratings = 0;
    std::size_t num_sequences = 0;
    double avg_sequence_length = 0.0;
    double sparsity = 0.0;  // 1 - ratings / (users * items), clamped to [0, 1]

    friend bool operator==(const Profile&, const Profile&) = default;
};

// retained_ratings is the number of steps the sequencer kept.
Profile profile(const SequenceSet& set, std::size_t retained_ratings);
inline Profile profile(const SequenceSet& set) { return profile(set, set.total_steps()); }

}  // namespace seqbench
