#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "seqbench/ingest.hpp"

namespace seqbench {

struct Step {
    std::string item;
    std::int64_t timestamp = 0;

    friend bool operator==(const Step&, const Step&) = default;
};

// Time-ordered items of one user; consecutive steps are less than the build
// threshold apart. Always at least two steps long.
struct Sequence {
    std::string user;
    std::vector<Step> steps;

    std::int64_t start() const { return steps.front().timestamp; }
    std::size_t length() const noexcept { return steps.size(); }
    std::vector<std::string> items() const;

    friend bool operator==(const Sequence&, const Sequence&) = default;
};

struct SequenceSet {
    std::vector<Sequence> sequences;
    std::set<std::string> catalog;
    std::set<std::string> users;

    SequenceSet() = default;
    // Derives catalog and users from the sequences.
    explicit SequenceSet(std::vector<Sequence> seqs);

    std::size_t size() const noexcept { return sequences.size(); }
    bool empty() const noexcept { return sequences.empty(); }
    std::size_t total_steps() const noexcept;
};

// Sorts each user's ratings by timestamp (stable) and starts a new sequence
// whenever the gap to the previous rating is >= delta_seconds. Sequences of
// length 1 are discarded. Output is ordered by (user, start).
// Throws NoSequences, or std::invalid_argument when delta_seconds <= 0.
SequenceSet build_sequences(const RatingLog& log, std::int64_t delta_seconds);

}  // namespace seqbench
