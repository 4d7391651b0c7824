#include "seqbench/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "seqbench/errors.hpp"
#include "seqbench/random.hpp"

namespace seqbench {

std::optional<SplitStrategy> parse_split_strategy(std::string_view name) {
    if (name == "random") return SplitStrategy::Random;
    if (name == "timestamp") return SplitStrategy::Timestamp;
    return std::nullopt;
}

std::string_view split_strategy_name(SplitStrategy s) {
    return s == SplitStrategy::Random ? "random" : "timestamp";
}

std::size_t test_size(std::size_t n, double test_ratio) {
    const double exact = test_ratio * static_cast<double>(n);
    const double nearest = std::round(exact);
    if (std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact)) return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(exact));
}

Split split(const SequenceSet& set, SplitStrategy strategy, double test_ratio, std::uint64_t seed) {
    if (!(test_ratio > 0.0 && test_ratio < 1.0)) throw std::invalid_argument("test ratio must be in (0, 1)");
    const std::size_t n = set.size();
    const std::size_t n_test = test_size(n, test_ratio);
    if (n < 2 || n_test == 0 || n_test >= n) {
        throw DegenerateSplit("cannot split " + std::to_string(n) + " sequences with test ratio " +
                              std::to_string(test_ratio) + " into two non-empty sets");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (strategy == SplitStrategy::Random) {
        RandomStream rng(seed);
        for (std::size_t i = n - 1; i > 0; --i) {
            std::swap(order[i], order[rng.next_below(i + 1)]);
        }
    } else {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& sa = set.sequences[a];
            const auto& sb = set.sequences[b];
            if (sa.start() != sb.start()) return sa.start() < sb.start();
            return sa.user < sb.user;
        });
    }

    std::vector<Sequence> train, test;
    train.reserve(n - n_test);
    test.reserve(n_test);
    for (std::size_t i = 0; i < n; ++i) {
        (i < n - n_test ? train : test).push_back(set.sequences[order[i]]);
    }
    return Split{SequenceSet(std::move(train)), SequenceSet(std::move(test)), strategy, test_ratio, seed};
}

}  // namespace seqbench
