#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "seqbench/sequencer.hpp"

namespace seqbench {

enum class SplitStrategy { Random, Timestamp };

std::optional<SplitStrategy> parse_split_strategy(std::string_view name);
std::string_view split_strategy_name(SplitStrategy s);

struct Split {
    SequenceSet train;
    SequenceSet test;
    SplitStrategy strategy = SplitStrategy::Timestamp;
    double test_ratio = 0.2;
    std::uint64_t seed = 0;
};

// ceil(test_ratio * n), with products lying within rounding noise of an
// integer snapped to it (0.7 * 10 is 7, not 8).
std::size_t test_size(std::size_t n, double test_ratio);

// Random: seeded Fisher-Yates shuffle, the last test_size(n) sequences form the
// test set. Timestamp: ascending by (start, user), the latest ones form the test
// set; the seed is ignored.
// Throws std::invalid_argument on a ratio outside (0, 1), DegenerateSplit when
// either side would be empty.
Split split(const SequenceSet& set, SplitStrategy strategy, double test_ratio, std::uint64_t seed);

}  // namespace seqbench
